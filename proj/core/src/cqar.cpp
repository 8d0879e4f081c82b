#include "qvar/cqar.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qvar::cqar {

namespace {

double l1_norm(std::span<const double> theta) {
    double s = 0.0;
    for (double v : theta) s += std::abs(v);
    return s;
}

}  // namespace

void CqarConfig::validate() const {
    if (lag == 0) throw std::invalid_argument("lag must be positive");
    if (mcmc_iters == 0) throw std::invalid_argument("MCMC iterations must be positive");
    if (burn_in >= mcmc_iters) throw std::invalid_argument("burn-in must be smaller than iterations");
    if (!(proposal_sd > 0.0) || !std::isfinite(proposal_sd)) {
        throw std::invalid_argument("proposal standard deviation must be positive");
    }
    if (!(reg_a > 0.0) || !std::isfinite(reg_a)) {
        throw std::invalid_argument("regularisation parameter must be positive");
    }
}

double log_quasi_posterior(std::span<const double> theta, const Series& history, std::size_t t,
                           const CqarConfig& config) {
    const std::size_t p = config.lag;
    if (theta.size() != p + 1) throw std::invalid_argument("theta length must be lag + 1");
    const double prior = -config.reg_a * l1_norm(theta);
    if (t == 0) return prior;
    if (history.size() < p + t) {
        throw std::invalid_argument("history holds fewer than " + std::to_string(t) +
                                    " scored outcomes");
    }
    double loss = 0.0;
    for (std::size_t s = p; s < p + t; ++s) {
        loss += pinball_loss(history[s], embed(history, p, s).dot(theta), config.alpha);
    }
    return -loss / std::sqrt(static_cast<double>(t)) + prior;
}

CqarState::CqarState(CqarConfig config, std::span<const double> context)
    : config_(config), rng_(config.seed) {
    config_.validate();
    if (context.size() != config_.lag) {
        throw std::invalid_argument("context must hold exactly " + std::to_string(config_.lag) +
                                    " outcomes");
    }
    require_finite(context, "context");
    history_.assign(context.begin(), context.end());
    theta_.assign(config_.lag + 1, 0.0);
    lo_ = *std::min_element(context.begin(), context.end());
    hi_ = *std::max_element(context.begin(), context.end());
}

Signal CqarState::next_signal() const {
    const std::size_t p = config_.lag;
    std::vector<double> lags(p);
    for (std::size_t k = 0; k < p; ++k) lags[k] = history_[history_.size() - 1 - k];
    return Signal::from_lags(lags);
}

double CqarState::scored_loss(std::span<const double> theta) const {
    const std::size_t k = config_.lag + 1;
    const double a = config_.alpha.value();
    double loss = 0.0;
    for (std::size_t s = 0; s < outcomes_.size(); ++s) {
        const double* x = rows_.data() + s * k;
        double pred = 0.0;
        for (std::size_t j = 0; j < k; ++j) pred += x[j] * theta[j];
        const double u = outcomes_[s] - pred;
        loss += u >= 0.0 ? a * u : (a - 1.0) * u;
    }
    return loss;
}

double CqarState::log_target(std::span<const double> theta) const {
    const double prior = -config_.reg_a * l1_norm(theta);
    if (outcomes_.empty()) return prior;
    return -scored_loss(theta) / std::sqrt(static_cast<double>(outcomes_.size())) + prior;
}

double CqarState::predict() {
    if (pending_) throw ProtocolError("predict called twice without an intervening observe");
    const Signal x = next_signal();
    const std::size_t k = theta_.size();

    std::vector<double> proposal(k);
    double current = log_target(theta_);
    double sum = 0.0;
    for (std::size_t m = 1; m <= config_.mcmc_iters; ++m) {
        for (std::size_t j = 0; j < k; ++j) {
            proposal[j] = theta_[j] + config_.proposal_sd * rng_.normal();
        }
        const double candidate = log_target(proposal);
        const double log_ratio = candidate - current;
        const double u = rng_.uniform();
        ++proposed_;
        if (log_ratio >= 0.0 || std::log(u) < log_ratio) {
            theta_.swap(proposal);
            current = candidate;
            ++accepted_;
        }
        if (m > config_.burn_in) sum += x.dot(theta_);
    }
    double gamma = sum / static_cast<double>(config_.mcmc_iters - config_.burn_in);
    if (config_.clamp_to_range) gamma = std::clamp(gamma, lo_, hi_);

    pending_ = true;
    pending_gamma_ = gamma;
    return gamma;
}

void CqarState::observe(double y) {
    if (!pending_) throw ProtocolError("observe called before predict");
    if (!std::isfinite(y)) throw std::invalid_argument("outcome must be finite");
    const Signal x = next_signal();
    rows_.insert(rows_.end(), x.components().begin(), x.components().end());
    outcomes_.push_back(y);
    history_.push_back(y);
    predictions_.push_back(pending_gamma_);
    ledger_.append(pinball_loss(y, pending_gamma_, config_.alpha));
    lo_ = std::min(lo_, y);
    hi_ = std::max(hi_, y);
    pending_ = false;
}

double acceptance_ratio(const CqarState& state) {
    if (state.proposed() == 0) throw std::logic_error("no proposals made yet");
    return static_cast<double>(state.accepted()) / static_cast<double>(state.proposed());
}

CqarRun run(const CqarConfig& config, const Series& series) {
    if (series.size() <= config.lag) {
        throw std::invalid_argument("series needs more than " + std::to_string(config.lag) +
                                    " outcomes");
    }
    const auto v = series.values();
    CqarRun out = run(config, v.first(config.lag), v.subspan(config.lag));
    out.skipped = config.lag;
    return out;
}

CqarRun run(const CqarConfig& config, std::span<const double> context,
            std::span<const double> scored) {
    CqarState state(config, context);
    for (double y : scored) {
        state.predict();
        state.observe(y);
    }
    CqarRun out;
    out.outcomes.assign(scored.begin(), scored.end());
    out.predictions = state.predictions();
    out.ledger = state.ledger();
    out.acceptance_ratio = state.proposed() ? acceptance_ratio(state) : 0.0;
    return out;
}

RegretReport regret_curve(const LossLedger& learner, const LossLedger& comparator) {
    if (learner.size() != comparator.size()) {
        throw std::invalid_argument("regret_curve: ledgers differ in length");
    }
    RegretReport out;
    out.learner_losses = learner.per_step;
    out.comparator_losses = comparator.per_step;
    double lsum = 0.0;
    double csum = 0.0;
    for (std::size_t t = 0; t < learner.size(); ++t) {
        lsum += learner.per_step[t];
        csum += comparator.per_step[t];
        const double r = lsum - csum;
        out.cumulative_regret.push_back(r);
        out.average_regret.push_back(r / static_cast<double>(t + 1));
    }
    out.total_regret = lsum - csum;
    return out;
}

double regret_bound(const BoundParams& params, std::size_t T) {
    if (T == 0) throw std::invalid_argument("regret_bound: T must be positive");
    if (!(params.reg_a > 0.0)) throw std::invalid_argument("regret_bound: a must be positive");
    if (!(params.lower <= params.upper)) throw std::invalid_argument("regret_bound: need A <= B");
    if (params.lag == 0) throw std::invalid_argument("regret_bound: lag must be positive");
    if (!(params.theta_l1 >= 0.0)) throw std::invalid_argument("regret_bound: ||theta||_1 < 0");
    const double root = std::sqrt(static_cast<double>(T));
    const double range = params.upper - params.lower;
    const double complexity =
        static_cast<double>(params.lag + 1) *
            std::log1p(root / params.reg_a * std::max(1.0, params.upper)) +
        range * range;
    return (params.reg_a * params.theta_l1 + complexity) / root;
}

std::vector<double> bound_curve(std::span<const double> context, std::span<const double> scored,
                                double reg_a, std::size_t lag, double theta_l1) {
    if (context.empty()) throw std::invalid_argument("bound_curve: context is empty");
    double lo = *std::min_element(context.begin(), context.end());
    double hi = *std::max_element(context.begin(), context.end());
    std::vector<double> out;
    out.reserve(scored.size());
    for (std::size_t t = 1; t <= scored.size(); ++t) {
        if (t >= 2) {
            lo = std::min(lo, scored[t - 2]);
            hi = std::max(hi, scored[t - 2]);
        }
        out.push_back(regret_bound({lo, hi, reg_a, lag, theta_l1}, t));
    }
    return out;
}

std::vector<TuningRow> tune(const CqarConfig& base, const Series& series,
                            std::span<const double> reg_grid, std::span<const double> sd_grid) {
    std::vector<TuningRow> rows;
    for (double a : reg_grid) {
        for (double sd : sd_grid) {
            CqarConfig cfg = base;
            cfg.reg_a = a;
            cfg.proposal_sd = sd;
            const CqarRun r = run(cfg, series);
            rows.push_back({a, sd, r.acceptance_ratio, r.ledger.cumulative});
        }
    }
    return rows;
}

const TuningRow& best_row(const std::vector<TuningRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("empty tuning grid");
    return *std::min_element(rows.begin(), rows.end(), [](const TuningRow& a, const TuningRow& b) {
        return a.pinball_loss < b.pinball_loss;
    });
}

}  // namespace qvar::cqar
