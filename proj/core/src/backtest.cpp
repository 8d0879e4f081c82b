#include "qvar/backtest.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace qvar::backtest {

namespace {

// x ln y with 0 ln 0 = 0.
double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

double bernoulli_loglik(double hits, double misses, double p) {
    return xlogy(hits, p) + xlogy(misses, 1.0 - p);
}

void check_significance(double s) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("significance must lie in (0, 1)");
}

Decision decide(double pvalue, double significance) {
    return pvalue < significance ? Decision::Reject : Decision::FailToReject;
}

}  // namespace

std::string_view to_string(Decision d) noexcept {
    return d == Decision::Reject ? "R" : "FR";
}

std::vector<ViolationRecord> extract_violations(std::span<const double> outcomes,
                                                std::span<const double> forecasts,
                                                std::size_t t_offset) {
    if (outcomes.size() != forecasts.size()) {
        throw std::invalid_argument("extract_violations: outcome/forecast length mismatch");
    }
    require_finite(outcomes, "outcomes");
    require_finite(forecasts, "forecasts");
    std::vector<ViolationRecord> out;
    out.reserve(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        out.push_back({t_offset + i, outcomes[i], forecasts[i], outcomes[i] > forecasts[i]});
    }
    return out;
}

std::size_t expected_violations(std::size_t T, QuantileLevel alpha) noexcept {
    const double e = (1.0 - alpha.value()) * static_cast<double>(T);
    // Absorb representation error so that e.g. 0.1 * 100 counts as 10.
    return static_cast<std::size_t>(std::floor(e + 1e-9));
}

double chi2_sf(double x, int dof) {
    if (dof <= 0) throw std::invalid_argument("chi2_sf: degrees of freedom must be positive");
    if (!(x >= 0.0)) throw std::invalid_argument("chi2_sf: x must be non-negative");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

CoverageTest kupiec(std::size_t n_violations, std::size_t T, QuantileLevel alpha,
                    double significance) {
    check_significance(significance);
    if (T == 0) throw std::invalid_argument("kupiec: T must be positive");
    if (n_violations > T) throw std::invalid_argument("kupiec: more violations than observations");
    const double p0 = 1.0 - alpha.value();
    const double n = static_cast<double>(n_violations);
    const double m = static_cast<double>(T - n_violations);
    const double pihat = n / static_cast<double>(T);

    CoverageTest out;
    if (std::abs(pihat - p0) <= 1e-12) {
        out.stat = 0.0;
    } else {
        out.stat = std::max(0.0, -2.0 * (bernoulli_loglik(n, m, p0) - bernoulli_loglik(n, m, pihat)));
    }
    out.pvalue = chi2_sf(out.stat, 1);
    out.decision = decide(out.pvalue, significance);
    return out;
}

ConditionalCoverage christoffersen(std::span<const bool> indicators, QuantileLevel alpha,
                                   double significance) {
    check_significance(significance);
    if (indicators.size() < 2) throw std::invalid_argument("christoffersen: need at least 2 indicators");
    double n00 = 0, n01 = 0, n10 = 0, n11 = 0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < indicators.size(); ++i) {
        if (indicators[i]) ++hits;
        if (i == 0) continue;
        const bool prev = indicators[i - 1];
        const bool cur = indicators[i];
        if (!prev && !cur) n00 += 1;
        if (!prev && cur) n01 += 1;
        if (prev && !cur) n10 += 1;
        if (prev && cur) n11 += 1;
    }
    const double pooled = (n01 + n11) / (n00 + n01 + n10 + n11);
    const double ll_null = bernoulli_loglik(n01 + n11, n00 + n10, pooled);
    double ll_alt = 0.0;
    if (n00 + n01 > 0) ll_alt += bernoulli_loglik(n01, n00, n01 / (n00 + n01));
    if (n10 + n11 > 0) ll_alt += bernoulli_loglik(n11, n10, n11 / (n10 + n11));
    double ind = -2.0 * (ll_null - ll_alt);
    if (ind < 0.0) {
        if (ind < -1e-9) throw std::logic_error("christoffersen: negative independence statistic");
        ind = 0.0;
    }

    const CoverageTest uc = kupiec(hits, indicators.size(), alpha, significance);
    ConditionalCoverage out;
    out.uc_stat = uc.stat;
    out.ind_stat = ind;
    out.cc_stat = uc.stat + ind;
    out.cc_pvalue = chi2_sf(out.cc_stat, 2);
    out.decision = decide(out.cc_pvalue, significance);
    return out;
}

ConditionalCoverage christoffersen(const std::vector<bool>& indicators, QuantileLevel alpha,
                                   double significance) {
    const auto buf = std::make_unique<bool[]>(indicators.size());
    std::copy(indicators.begin(), indicators.end(), buf.get());
    return christoffersen(std::span<const bool>(buf.get(), indicators.size()), alpha, significance);
}

BacktestReport run_backtest(std::span<const ViolationRecord> records, QuantileLevel alpha,
                            double significance) {
    if (records.empty()) throw std::invalid_argument("run_backtest: no records");
    const auto flags = std::make_unique<bool[]>(records.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.violated != (r.outcome > r.var_forecast)) {
            throw std::invalid_argument("violation flag disagrees with outcome/forecast at t=" +
                                        std::to_string(r.t));
        }
        flags[i] = r.violated;
        hits += r.violated ? 1 : 0;
    }

    BacktestReport rep;
    rep.quantile = alpha.value();
    rep.n_obs = records.size();
    rep.expected_violations = expected_violations(records.size(), alpha);
    rep.actual_violations = hits;
    rep.significance = significance;

    const CoverageTest uc = kupiec(hits, records.size(), alpha, significance);
    rep.uc_stat = uc.stat;
    rep.uc_pvalue = uc.pvalue;
    rep.uc_decision = uc.decision;

    if (records.size() >= 2) {
        const ConditionalCoverage cc = christoffersen(
            std::span<const bool>(flags.get(), records.size()), alpha, significance);
        rep.cc_stat = cc.cc_stat;
        rep.cc_pvalue = cc.cc_pvalue;
        rep.cc_decision = cc.decision;
    } else {
        rep.cc_stat = uc.stat;
        rep.cc_pvalue = chi2_sf(uc.stat, 2);
        rep.cc_decision = decide(rep.cc_pvalue, significance);
    }
    return rep;
}

}  // namespace qvar::backtest
