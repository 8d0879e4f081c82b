#include "qvar/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qvar {

QuantileLevel::QuantileLevel(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("quantile level must lie in (0, 1), got " +
                                    std::to_string(alpha));
    }
}

void require_finite(std::span<const double> values, const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw std::invalid_argument(std::string(what) + ": non-finite value at index " +
                                        std::to_string(i));
        }
    }
}

Series::Series(std::vector<double> values) : values_(std::move(values)) {
    require_finite(values_, "series");
}

Series::Series(std::vector<double> values, std::vector<double> timestamps)
    : values_(std::move(values)), timestamps_(std::move(timestamps)) {
    require_finite(values_, "series");
    require_finite(*timestamps_, "timestamps");
    if (timestamps_->size() != values_.size()) {
        throw std::invalid_argument("timestamps and values differ in length");
    }
    if (!std::is_sorted(timestamps_->begin(), timestamps_->end())) {
        throw std::invalid_argument("timestamps must be non-decreasing");
    }
}

Series Series::slice(std::size_t first, std::size_t last) const {
    if (first > last || last > values_.size()) {
        throw std::out_of_range("series slice out of range");
    }
    std::vector<double> v(values_.begin() + first, values_.begin() + last);
    if (timestamps_) {
        std::vector<double> ts(timestamps_->begin() + first, timestamps_->begin() + last);
        return Series(std::move(v), std::move(ts));
    }
    return Series(std::move(v));
}

Signal Signal::from_lags(std::span<const double> lags) {
    std::vector<double> c;
    c.reserve(lags.size() + 1);
    c.push_back(1.0);
    c.insert(c.end(), lags.begin(), lags.end());
    require_finite(c, "signal");
    return Signal(std::move(c));
}

double Signal::dot(std::span<const double> theta) const {
    if (theta.size() != components_.size()) {
        throw std::invalid_argument("signal/coefficient dimension mismatch: " +
                                    std::to_string(components_.size()) + " vs " +
                                    std::to_string(theta.size()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) acc += components_[i] * theta[i];
    return acc;
}

void LossLedger::append(double loss) {
    per_step.push_back(loss);
    cumulative += loss;
}

double pinball_loss(double y, double gamma, QuantileLevel alpha) noexcept {
    const double a = alpha.value();
    return y >= gamma ? a * (y - gamma) : (1.0 - a) * (gamma - y);
}

Signal embed(const Series& series, std::size_t p, std::size_t t) {
    if (p == 0) throw std::invalid_argument("lag order must be positive");
    if (t < p || t >= series.size()) {
        throw std::out_of_range("embed: index " + std::to_string(t) +
                                " needs " + std::to_string(p) +
                                " prior observations within a series of length " +
                                std::to_string(series.size()));
    }
    std::vector<double> lags(p);
    for (std::size_t k = 0; k < p; ++k) lags[k] = series[t - 1 - k];
    return Signal::from_lags(lags);
}

double empirical_quantile(std::span<const double> samples, QuantileLevel alpha) {
    if (samples.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    // Smallest k (1-based) with k / n >= alpha, evaluated without rounding drift.
    std::size_t k = static_cast<std::size_t>(std::ceil(alpha.value() * n));
    while (k > 1 && static_cast<double>(k - 1) / n >= alpha.value()) --k;
    while (k < sorted.size() && static_cast<double>(k) / n < alpha.value()) ++k;
    k = std::clamp<std::size_t>(k, 1, sorted.size());
    return sorted[k - 1];
}

LossLedger cumulative_loss(std::span<const double> outcomes, std::span<const double> predictions,
                           QuantileLevel alpha) {
    if (outcomes.size() != predictions.size()) {
        throw std::invalid_argument("cumulative_loss: outcome/prediction length mismatch");
    }
    LossLedger ledger;
    ledger.per_step.reserve(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        ledger.append(pinball_loss(outcomes[i], predictions[i], alpha));
    }
    return ledger;
}

}  // namespace qvar
