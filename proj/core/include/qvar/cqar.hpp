#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "qvar/core.hpp"
#include "qvar/random.hpp"

namespace qvar::cqar {

/// predict/observe called out of order.
class ProtocolError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct CqarConfig {
    QuantileLevel alpha{0.5};
    std::size_t lag = 1;
    /// Metropolis-Hastings iterations per prediction (M).
    std::size_t mcmc_iters = 1000;
    /// Leading iterations excluded from the prediction average (M0 < M).
    std::size_t burn_in = 200;
    /// Random-walk proposal standard deviation.
    double proposal_sd = 0.5;
    /// L1 prior weight a.
    double reg_a = 1.0;
    std::uint64_t seed = 0;
    /// Clamp predictions to the running [min, max] of observed outcomes.
    bool clamp_to_range = false;

    /// Throws std::invalid_argument on any violated constraint.
    void validate() const;
};

/// ln q_t(theta) = -(1/sqrt t) * sum_{s<=t} rho(y_s, x_s' theta) - a ||theta||_1,
/// unnormalized. `history` holds `lag` context outcomes followed by at least
/// t scored outcomes. t == 0 gives the prior -a ||theta||_1.
[[nodiscard]] double log_quasi_posterior(std::span<const double> theta, const Series& history,
                                         std::size_t t, const CqarConfig& config);

/// Online learner following the predict -> observe protocol.
///
/// The first `lag` outcomes are supplied up front as context; every later
/// outcome is scored. The chain starts at theta = 0 and each sweep resumes
/// from where the previous one stopped.
class CqarState {
public:
    CqarState(CqarConfig config, std::span<const double> context);

    /// Runs one sweep of M Metropolis-Hastings steps targeting q_{t-1} and
    /// returns the average of x_t' theta over the post-burn-in draws.
    double predict();

    /// Records the outcome for the pending prediction and scores it.
    void observe(double y);

    [[nodiscard]] const CqarConfig& config() const noexcept { return config_; }
    /// Number of scored outcomes observed so far.
    [[nodiscard]] std::size_t step() const noexcept { return ledger_.size(); }
    [[nodiscard]] const std::vector<double>& history() const noexcept { return history_; }
    [[nodiscard]] const std::vector<double>& chain_position() const noexcept { return theta_; }
    [[nodiscard]] std::size_t accepted() const noexcept { return accepted_; }
    [[nodiscard]] std::size_t proposed() const noexcept { return proposed_; }
    [[nodiscard]] const LossLedger& ledger() const noexcept { return ledger_; }
    [[nodiscard]] const std::vector<double>& predictions() const noexcept { return predictions_; }
    [[nodiscard]] bool awaiting_outcome() const noexcept { return pending_; }

    /// Signal for the next prediction.
    [[nodiscard]] Signal next_signal() const;

    /// Log quasi-posterior over the scored steps seen so far, from the cache.
    [[nodiscard]] double log_target(std::span<const double> theta) const;

private:
    double scored_loss(std::span<const double> theta) const;

    CqarConfig config_;
    Rng rng_;
    std::vector<double> history_;
    std::vector<double> theta_;
    // Scored signals, row-major with lag+1 entries per step, and their outcomes.
    std::vector<double> rows_;
    std::vector<double> outcomes_;
    std::vector<double> predictions_;
    LossLedger ledger_;
    std::size_t accepted_ = 0;
    std::size_t proposed_ = 0;
    bool pending_ = false;
    double pending_gamma_ = 0.0;
    double lo_ = 0.0;
    double hi_ = 0.0;
};

/// accepted / proposed; throws std::logic_error before any proposal.
[[nodiscard]] double acceptance_ratio(const CqarState& state);

struct CqarRun {
    std::vector<double> outcomes;
    std::vector<double> predictions;
    LossLedger ledger;
    double acceptance_ratio = 0.0;
    /// Leading outcomes consumed as lag context only.
    std::size_t skipped = 0;
};

/// Plays the protocol over series[lag..N) with series[0..lag) as context.
[[nodiscard]] CqarRun run(const CqarConfig& config, const Series& series);

/// Plays the protocol over `scored` with an explicit context of `lag` outcomes.
[[nodiscard]] CqarRun run(const CqarConfig& config, std::span<const double> context,
                          std::span<const double> scored);

struct RegretReport {
    std::vector<double> learner_losses;
    std::vector<double> comparator_losses;
    /// R_t for every prefix t = 1..T.
    std::vector<double> cumulative_regret;
    /// R_t / t for every prefix.
    std::vector<double> average_regret;
    /// Bound on R_t / t per prefix; empty unless filled by the caller.
    std::vector<double> bound;
    double total_regret = 0.0;
};

/// Throws std::invalid_argument on length mismatch.
[[nodiscard]] RegretReport regret_curve(const LossLedger& learner, const LossLedger& comparator);

struct BoundParams {
    double lower = 0.0;  // A
    double upper = 0.0;  // B
    double reg_a = 1.0;
    std::size_t lag = 1;
    double theta_l1 = 0.0;
};

/// Average-regret guarantee against a fixed QAR comparator after T steps:
/// (a ||theta||_1 + (p+1) ln(1 + sqrt(T) max(1, B) / a) + (B - A)^2) / sqrt(T).
[[nodiscard]] double regret_bound(const BoundParams& params, std::size_t T);

/// Bound at every prefix T = 1..scored.size(), with A and B the running
/// min and max of the context and the outcomes scored before step T.
[[nodiscard]] std::vector<double> bound_curve(std::span<const double> context,
                                              std::span<const double> scored, double reg_a,
                                              std::size_t lag, double theta_l1);

struct TuningRow {
    double reg_a = 0.0;
    double proposal_sd = 0.0;
    double acceptance_ratio = 0.0;
    double pinball_loss = 0.0;
};

/// Runs the learner over `series` for every (a, sigma) pair, a-major order.
[[nodiscard]] std::vector<TuningRow> tune(const CqarConfig& base, const Series& series,
                                          std::span<const double> reg_grid,
                                          std::span<const double> sd_grid);

/// Row with the smallest total loss (first on ties).
[[nodiscard]] const TuningRow& best_row(const std::vector<TuningRow>& rows);

}  // namespace qvar::cqar
