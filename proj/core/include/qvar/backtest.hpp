#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "qvar/core.hpp"

namespace qvar::backtest {

enum class Decision { FailToReject, Reject };

/// "FR" or "R".
[[nodiscard]] std::string_view to_string(Decision d) noexcept;

struct ViolationRecord {
    std::size_t t = 0;
    double outcome = 0.0;
    double var_forecast = 0.0;
    bool violated = false;
};

struct CoverageTest {
    double stat = 0.0;
    double pvalue = 1.0;
    Decision decision = Decision::FailToReject;
};

struct ConditionalCoverage {
    double uc_stat = 0.0;
    double ind_stat = 0.0;
    double cc_stat = 0.0;
    double cc_pvalue = 1.0;
    Decision decision = Decision::FailToReject;
};

struct BacktestReport {
    double quantile = 0.0;
    std::size_t n_obs = 0;
    std::size_t expected_violations = 0;
    std::size_t actual_violations = 0;
    double uc_stat = 0.0;
    double uc_pvalue = 1.0;
    double cc_stat = 0.0;
    double cc_pvalue = 1.0;
    Decision uc_decision = Decision::FailToReject;
    Decision cc_decision = Decision::FailToReject;
    double significance = 0.05;
};

/// Flags outcome > forecast (ties are covered). Indices start at t_offset.
[[nodiscard]] std::vector<ViolationRecord> extract_violations(std::span<const double> outcomes,
                                                              std::span<const double> forecasts,
                                                              std::size_t t_offset = 0);

/// floor((1 - alpha) T).
[[nodiscard]] std::size_t expected_violations(std::size_t T, QuantileLevel alpha) noexcept;

/// Chi-square survival function via the regularized upper incomplete gamma.
[[nodiscard]] double chi2_sf(double x, int dof);

/// Kupiec unconditional coverage likelihood ratio (chi-square, 1 dof).
[[nodiscard]] CoverageTest kupiec(std::size_t n_violations, std::size_t T, QuantileLevel alpha,
                                  double significance = 0.05);

/// Christoffersen conditional coverage: Kupiec plus first-order Markov
/// independence (chi-square, 2 dof). Needs at least two indicators.
[[nodiscard]] ConditionalCoverage christoffersen(std::span<const bool> indicators,
                                                 QuantileLevel alpha, double significance = 0.05);
[[nodiscard]] ConditionalCoverage christoffersen(const std::vector<bool>& indicators,
                                                 QuantileLevel alpha, double significance = 0.05);

[[nodiscard]] BacktestReport run_backtest(std::span<const ViolationRecord> records,
                                          QuantileLevel alpha, double significance = 0.05);

}  // namespace qvar::backtest
