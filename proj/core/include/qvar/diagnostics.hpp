#pragma once

#include <cstddef>
#include <vector>

#include "qvar/core.hpp"

namespace qvar::diagnostics {

/// Correlogram values at lags 0..max_lag with the +/-1.96/sqrt(N) band.
struct CorrelogramResult {
    std::vector<std::size_t> lags;
    std::vector<double> values;
    double confidence_band = 0.0;
};

struct LagSelection {
    std::vector<std::size_t> candidate_lags;
    std::vector<double> bic_values;
    std::size_t chosen_lag = 1;
    /// Outcomes scored by every candidate (N - max_p).
    std::size_t n_scored = 0;
};

/// Sample autocorrelation with the biased (1/N) autocovariance.
/// Requires N > max_lag + 1 and non-zero variance.
[[nodiscard]] CorrelogramResult acf(const Series& series, std::size_t max_lag);

/// Partial autocorrelation by the Durbin-Levinson recursion on acf().
/// Lag 0 is reported as 1.
[[nodiscard]] CorrelogramResult pacf(const Series& series, std::size_t max_lag);

/// -2 lnL + n_params ln(n_obs), with lnL the maximized asymmetric-Laplace
/// log-likelihood whose scale is the mean check loss.
/// Throws std::domain_error when the loss is zero (perfect fit).
[[nodiscard]] double bic(double total_pinball_loss, std::size_t n_params, std::size_t n_obs,
                         QuantileLevel alpha);

/// Fits QAR(p) for p = 1..max_p on the common outcome window [max_p, N) and
/// returns the BIC minimizer (smallest p on ties).
[[nodiscard]] LagSelection select_lag(const Series& series, QuantileLevel alpha, std::size_t max_p);

}  // namespace qvar::diagnostics
