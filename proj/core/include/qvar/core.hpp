#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace qvar {

/// A quantile level strictly inside (0, 1). Construction validates.
class QuantileLevel {
public:
    explicit QuantileLevel(double alpha);

    [[nodiscard]] double value() const noexcept { return alpha_; }
    [[nodiscard]] operator double() const noexcept { return alpha_; }

    friend bool operator==(QuantileLevel, QuantileLevel) = default;

private:
    double alpha_;
};

/// Ordered finite observations, optionally with non-decreasing timestamps
/// (days since epoch). Non-finite values are rejected on construction.
class Series {
public:
    Series() = default;
    explicit Series(std::vector<double> values);
    Series(std::vector<double> values, std::vector<double> timestamps);

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] const std::optional<std::vector<double>>& timestamps() const noexcept {
        return timestamps_;
    }

    /// Contiguous sub-range [first, last).
    [[nodiscard]] Series slice(std::size_t first, std::size_t last) const;

    friend bool operator==(const Series&, const Series&) = default;

private:
    std::vector<double> values_;
    std::optional<std::vector<double>> timestamps_;
};

/// The regressor vector (1, y_{t-1}, ..., y_{t-p}).
class Signal {
public:
    /// Builds from the lagged outcomes, most recent first; the leading 1 is added.
    static Signal from_lags(std::span<const double> lags);

    [[nodiscard]] std::size_t lag_order() const noexcept { return components_.size() - 1; }
    [[nodiscard]] std::size_t size() const noexcept { return components_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return components_[i]; }
    [[nodiscard]] std::span<const double> components() const noexcept { return components_; }

    /// Inner product with a coefficient vector of matching length.
    [[nodiscard]] double dot(std::span<const double> theta) const;

    friend bool operator==(const Signal&, const Signal&) = default;

private:
    explicit Signal(std::vector<double> c) : components_(std::move(c)) {}
    std::vector<double> components_;
};

struct LossLedger {
    double cumulative = 0.0;
    std::vector<double> per_step;

    void append(double loss);
    [[nodiscard]] std::size_t size() const noexcept { return per_step.size(); }
};

/// Check loss: alpha (y - gamma) when y >= gamma, (1 - alpha)(gamma - y) otherwise.
[[nodiscard]] double pinball_loss(double y, double gamma, QuantileLevel alpha) noexcept;

/// Signal for predicting series[t] from the p preceding outcomes.
/// Throws std::out_of_range when t < p or t >= series.size().
[[nodiscard]] Signal embed(const Series& series, std::size_t p, std::size_t t);

/// Left-continuous inverse of the empirical CDF: the smallest sample z with
/// #{s <= z} / n >= alpha. Always returns an element of `samples`.
[[nodiscard]] double empirical_quantile(std::span<const double> samples, QuantileLevel alpha);

[[nodiscard]] LossLedger cumulative_loss(std::span<const double> outcomes,
                                         std::span<const double> predictions,
                                         QuantileLevel alpha);

/// Throws std::invalid_argument unless every value is finite.
void require_finite(std::span<const double> values, const char* what);

}  // namespace qvar
