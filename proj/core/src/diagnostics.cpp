#include "qvar/diagnostics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qvar/qar.hpp"

namespace qvar::diagnostics {

namespace {

void check_length(const Series& series, std::size_t max_lag) {
    if (max_lag == 0) throw std::invalid_argument("max_lag must be positive");
    if (series.size() <= max_lag + 1) {
        throw std::invalid_argument("series of length " + std::to_string(series.size()) +
                                    " is too short for " + std::to_string(max_lag) + " lags");
    }
}

}  // namespace

CorrelogramResult acf(const Series& series, std::size_t max_lag) {
    check_length(series, max_lag);
    const auto y = series.values();
    const std::size_t n = y.size();
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);

    std::vector<double> centred(n);
    for (std::size_t i = 0; i < n; ++i) centred[i] = y[i] - mean;

    auto autocov = [&](std::size_t k) {
        double s = 0.0;
        for (std::size_t i = k; i < n; ++i) s += centred[i] * centred[i - k];
        return s / static_cast<double>(n);
    };
    const double c0 = autocov(0);
    if (!(c0 > 0.0)) throw std::invalid_argument("series has zero variance");

    CorrelogramResult out;
    out.confidence_band = 1.96 / std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k <= max_lag; ++k) {
        out.lags.push_back(k);
        out.values.push_back(k == 0 ? 1.0 : autocov(k) / c0);
    }
    return out;
}

CorrelogramResult pacf(const Series& series, std::size_t max_lag) {
    const CorrelogramResult r = acf(series, max_lag);
    const auto& rho = r.values;

    CorrelogramResult out;
    out.confidence_band = r.confidence_band;
    out.lags = r.lags;
    out.values.assign(max_lag + 1, 0.0);
    out.values[0] = 1.0;

    // phi[j] holds phi_{k,j} for the current order k.
    std::vector<double> phi(max_lag + 1, 0.0);
    std::vector<double> prev(max_lag + 1, 0.0);
    double v = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double num = rho[k];
        for (std::size_t j = 1; j < k; ++j) num -= prev[j] * rho[k - j];
        const double phikk = k == 1 ? rho[1] : num / v;
        phi[k] = phikk;
        for (std::size_t j = 1; j < k; ++j) phi[j] = prev[j] - phikk * prev[k - j];
        v *= (1.0 - phikk * phikk);
        out.values[k] = phikk;
        prev = phi;
    }
    return out;
}

double bic(double total_pinball_loss, std::size_t n_params, std::size_t n_obs,
           QuantileLevel alpha) {
    if (n_params == 0 || n_obs == 0) throw std::invalid_argument("bic: counts must be positive");
    if (n_obs <= n_params) throw std::invalid_argument("bic: need more observations than parameters");
    if (!(total_pinball_loss >= 0.0) || !std::isfinite(total_pinball_loss)) {
        throw std::invalid_argument("bic: loss must be finite and non-negative");
    }
    if (total_pinball_loss == 0.0) {
        throw std::domain_error("bic: zero check loss (perfect fit) makes the likelihood unbounded");
    }
    const double a = alpha.value();
    const double n = static_cast<double>(n_obs);
    const double log_lik =
        n * (std::log(a) + std::log(1.0 - a) - 1.0 - std::log(total_pinball_loss / n));
    return -2.0 * log_lik + static_cast<double>(n_params) * std::log(n);
}

LagSelection select_lag(const Series& series, QuantileLevel alpha, std::size_t max_p) {
    if (max_p == 0) throw std::invalid_argument("max_p must be positive");
    if (series.size() <= max_p + 1) {
        throw std::invalid_argument("series too short for lag selection up to " +
                                    std::to_string(max_p));
    }
    LagSelection out;
    out.n_scored = series.size() - max_p;
    for (std::size_t p = 1; p <= max_p; ++p) {
        const qar::QarModel m = qar::fit(series, p, alpha, max_p);
        if (m.n_scored != out.n_scored) throw std::logic_error("lag candidates scored unequal windows");
        out.candidate_lags.push_back(p);
        out.bic_values.push_back(bic(m.train_loss, p + 1, m.n_scored, alpha));
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < out.bic_values.size(); ++i) {
        if (out.bic_values[i] < out.bic_values[best]) best = i;
    }
    out.chosen_lag = out.candidate_lags[best];
    return out;
}

}  // namespace qvar::diagnostics
