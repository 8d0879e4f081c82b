#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "qvar/core.hpp"

namespace qvar::qar {

/// The design has rank below its column count; no unique quantile fit exists.
class DegenerateFitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A fitted linear quantile autoregression. theta[0] is the intercept,
/// theta[k] multiplies y_{t-k}.
struct QarModel {
    QuantileLevel alpha{0.5};
    std::size_t lag = 1;
    std::vector<double> theta;
    /// Summed check loss of the in-sample one-step predictions.
    double train_loss = 0.0;
    /// Number of scored outcomes behind train_loss.
    std::size_t n_scored = 0;
};

/// Solution of min_theta sum_i rho_alpha(y_i - x_i' theta) for a dense
/// row-major design. `basis` holds the row indices the optimal hyperplane
/// interpolates.
struct CheckLossSolution {
    std::vector<double> theta;
    double objective = 0.0;
    std::vector<std::size_t> basis;
    std::size_t iterations = 0;
};

/// Exact linear-programming solution of the check-loss regression.
/// `design` is n x k row-major. Deterministic: identical inputs give
/// bit-identical output. Throws DegenerateFitError on rank deficiency.
[[nodiscard]] CheckLossSolution solve_check_loss(std::span<const double> design, std::size_t k,
                                                 std::span<const double> y, QuantileLevel alpha);

/// Fits QAR(p) scoring outcomes first_scored..N-1 (first_scored defaults to p
/// and must be at least p). Requires at least p+1 scored rows.
[[nodiscard]] QarModel fit(const Series& series, std::size_t p, QuantileLevel alpha);
[[nodiscard]] QarModel fit(const Series& series, std::size_t p, QuantileLevel alpha,
                           std::size_t first_scored);

/// x' theta; throws std::invalid_argument when the signal length is not lag+1.
[[nodiscard]] double predict(const QarModel& model, const Signal& x);

/// One-step-ahead predictions for t in [t_start, t_end) from realized history.
[[nodiscard]] std::vector<double> forecast_path(const QarModel& model, const Series& series,
                                                std::size_t t_start, std::size_t t_end);

struct SignCounts {
    std::size_t negative = 0;
    std::size_t zero = 0;
    std::size_t positive = 0;
    [[nodiscard]] std::size_t total() const noexcept { return negative + zero + positive; }
};

/// Residual signs y_t - prediction over the scored range [first_scored, N).
/// Residuals within 1e-9 * max(1, max|y|) of zero count as zero.
[[nodiscard]] SignCounts residual_signs(const QarModel& model, const Series& series,
                                        std::size_t first_scored);

}  // namespace qvar::qar
