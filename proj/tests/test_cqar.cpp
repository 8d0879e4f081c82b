#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "qvar/cqar.hpp"
#include "qvar/ingest.hpp"

using namespace qvar;
using Catch::Approx;

namespace {

cqar::CqarConfig config(double alpha, std::size_t lag = 1) {
    cqar::CqarConfig c;
    c.alpha = QuantileLevel(alpha);
    c.lag = lag;
    c.mcmc_iters = 400;
    c.burn_in = 100;
    c.proposal_sd = 0.5;
    c.reg_a = 1.0;
    c.seed = 17;
    return c;
}

Series ar1(std::size_t n, std::uint64_t seed) {
    ingest::SyntheticSpec spec;
    spec.phi = 0.5;
    spec.n = n;
    spec.seed = seed;
    return ingest::generate(spec);
}

}  // namespace

TEST_CASE("config validation", "[cqar]") {
    auto c = config(0.9);
    CHECK_NOTHROW(c.validate());
    c.burn_in = c.mcmc_iters;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = config(0.9);
    c.proposal_sd = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = config(0.9);
    c.reg_a = -1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = config(0.9);
    CHECK_THROWS_AS(cqar::CqarState(c, std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("log quasi-posterior at theta = 0 is the scaled loss of zero predictions", "[cqar]") {
    const Series h({1.0, 2.0, -0.5, 3.0});
    const auto c = config(0.9);
    const std::vector<double> zero{0.0, 0.0};
    const double expected = -(0.9 * 2.0 + 0.1 * 0.5 + 0.9 * 3.0) / std::sqrt(3.0);
    CHECK(cqar::log_quasi_posterior(zero, h, 3, c) == Approx(expected));
    CHECK(cqar::log_quasi_posterior(zero, h, 0, c) == 0.0);
}

TEST_CASE("log quasi-posterior matches a hand-evaluated three-step sum", "[cqar]") {
    // history 1 | 2, 0.5, 3 with theta = (0.5, 0.5):
    // predictions 1.0, 1.5, 0.75 -> losses 0.9*1, 0.1*1, 0.9*2.25.
    const Series h({1.0, 2.0, 0.5, 3.0});
    const auto c = config(0.9);
    const std::vector<double> theta{0.5, 0.5};
    const double expected = -(0.9 + 0.1 + 2.025) / std::sqrt(3.0) - 1.0;
    CHECK(cqar::log_quasi_posterior(theta, h, 3, c) == Approx(expected).epsilon(1e-14));
}

TEST_CASE("doubling a at unit L1 norm lowers the log target by exactly a", "[cqar]") {
    const Series h({0.3, 1.0, -2.0, 0.7, 0.1});
    auto c = config(0.5);
    const std::vector<double> theta{0.25, -0.75};
    const double v1 = cqar::log_quasi_posterior(theta, h, 4, c);
    c.reg_a = 2.0;
    const double v2 = cqar::log_quasi_posterior(theta, h, 4, c);
    CHECK(v1 - v2 == Approx(1.0).epsilon(1e-12));
    // t = 0 prior.
    CHECK(cqar::log_quasi_posterior(theta, h, 0, c) == -2.0);
}

TEST_CASE("state cache agrees with the free log quasi-posterior", "[cqar]") {
    const Series s = ar1(30, 2);
    const auto c = config(0.8);
    cqar::CqarState st(c, s.values().first(1));
    for (std::size_t t = 1; t < s.size(); ++t) {
        st.predict();
        st.observe(s[t]);
    }
    const std::vector<double> theta{0.3, 0.2};
    CHECK(st.log_target(theta) == Approx(cqar::log_quasi_posterior(theta, s, s.size() - 1, c)));
}

TEST_CASE("chain starts at zero and the first step samples the prior", "[cqar]") {
    auto c = config(0.9);
    c.reg_a = 1e6;
    c.proposal_sd = 0.1;
    cqar::CqarState st(c, std::vector<double>{2.0});
    CHECK(st.chain_position() == std::vector<double>{0.0, 0.0});
    CHECK(st.step() == 0);
    CHECK(st.predict() == Approx(0.0).margin(1e-6));
}

TEST_CASE("a vanishing proposal scale freezes the chain", "[cqar]") {
    auto c = config(0.9);
    c.proposal_sd = 1e-12;
    cqar::CqarState st(c, std::vector<double>{2.0});
    for (double y : {1.0, 0.5, 1.2}) {
        st.predict();
        st.observe(y);
    }
    const auto theta = st.chain_position();
    const double expected = st.next_signal().dot(theta);
    CHECK(st.predict() == Approx(expected).margin(1e-9));
    CHECK(cqar::acceptance_ratio(st) > 0.99);
}

TEST_CASE("same seed and inputs give bit-identical predictions", "[cqar]") {
    const Series s = ar1(60, 5);
    const auto a = cqar::run(config(0.9), s);
    const auto b = cqar::run(config(0.9), s);
    CHECK(a.predictions == b.predictions);
    CHECK(a.acceptance_ratio == b.acceptance_ratio);
    CHECK(a.skipped == 1);
    auto other = config(0.9);
    other.seed = 18;
    CHECK(cqar::run(other, s).predictions != a.predictions);
}

TEST_CASE("predict/observe order is enforced", "[cqar]") {
    cqar::CqarState st(config(0.5), std::vector<double>{1.0});
    CHECK_THROWS_AS(st.observe(1.0), cqar::ProtocolError);
    st.predict();
    CHECK_THROWS_AS(st.predict(), cqar::ProtocolError);
    st.observe(0.5);
    CHECK_THROWS_AS(st.observe(0.5), cqar::ProtocolError);
    CHECK(st.step() == 1);
    CHECK_THROWS_AS(cqar::acceptance_ratio(cqar::CqarState(config(0.5), std::vector<double>{1.0})),
                    std::logic_error);
}

TEST_CASE("observing the prediction itself costs nothing", "[cqar]") {
    cqar::CqarState st(config(0.7), std::vector<double>{1.0});
    const double g = st.predict();
    st.observe(g);
    CHECK(st.ledger().cumulative == 0.0);
    CHECK(st.ledger().per_step == std::vector<double>{0.0});
}

TEST_CASE("ledger equals cumulative_loss of recorded pairs", "[cqar]") {
    const Series s = ar1(80, 6);
    const auto r = cqar::run(config(0.9, 2), s);
    REQUIRE(r.predictions.size() == 78);
    const auto ledger = cumulative_loss(r.outcomes, r.predictions, QuantileLevel(0.9));
    CHECK(r.ledger.cumulative == Approx(ledger.cumulative).epsilon(1e-12));
    CHECK(r.ledger.per_step == ledger.per_step);
    for (double g : r.predictions) CHECK(std::isfinite(g));
}

TEST_CASE("clamped predictions stay inside the observed range", "[cqar]") {
    auto c = config(0.95);
    c.clamp_to_range = true;
    c.reg_a = 0.01;
    c.proposal_sd = 3.0;
    const Series s = ar1(50, 7);
    const auto r = cqar::run(c, s);
    double lo = s[0];
    double hi = s[0];
    for (std::size_t i = 0; i < r.predictions.size(); ++i) {
        CHECK(r.predictions[i] >= lo);
        CHECK(r.predictions[i] <= hi);
        lo = std::min(lo, r.outcomes[i]);
        hi = std::max(hi, r.outcomes[i]);
    }
}

TEST_CASE("chain mean matches grid quadrature on a two-parameter posterior", "[cqar]") {
    const std::vector<double> hist{0.4, 1.1, -0.3, 0.9, 0.2, 0.7};
    const std::vector<double> lagged(hist.begin(), hist.end() - 1);
    const std::vector<double> outcomes(hist.begin() + 1, hist.end());
    const double grid = oracle::mixture_prediction_grid(lagged, outcomes, 0.9, 1.0, hist.back(), 20.0, 800);

    auto c = config(0.9);
    c.mcmc_iters = 60000;
    c.burn_in = 6000;
    c.proposal_sd = 1.0;
    cqar::CqarState st(c, std::span<const double>(hist.data(), 1));
    for (double y : outcomes) {
        st.predict();
        st.observe(y);
    }
    CHECK(st.predict() == Approx(grid).margin(0.05));
}

TEST_CASE("acceptance ratio falls as the proposal widens", "[cqar]") {
    const Series s = ar1(150, 9);
    double prev = 1.1;
    for (double sd : {0.5, 0.7, 1.0}) {
        auto c = config(0.9);
        c.proposal_sd = sd;
        const double r = cqar::run(c, s).acceptance_ratio;
        CHECK(r < prev);
        CHECK(r >= 0.0);
        prev = r;
    }
}

TEST_CASE("regret curves", "[cqar]") {
    LossLedger a;
    LossLedger b;
    for (double v : {0.5, 1.0, 0.25, 2.0}) {
        a.append(v);
        b.append(v);
    }
    const auto same = cqar::regret_curve(a, b);
    for (double r : same.average_regret) CHECK(r == 0.0);
    CHECK(same.total_regret == 0.0);

    LossLedger c;
    for (double v : b.per_step) c.append(v + 1.0);
    const auto plus = cqar::regret_curve(c, b);
    for (double r : plus.average_regret) CHECK(r == Approx(1.0));
    CHECK(plus.total_regret == Approx(4.0));
    CHECK(plus.cumulative_regret.back() == Approx(c.cumulative - b.cumulative).margin(1e-9));

    LossLedger shorter;
    shorter.append(1.0);
    CHECK_THROWS_AS(cqar::regret_curve(a, shorter), std::invalid_argument);
}

TEST_CASE("regret bound evaluation", "[cqar]") {
    const cqar::BoundParams base{0.0, 1.0, 1.0, 1, 0.0};
    CHECK(cqar::regret_bound(base, 1) == Approx(2.0 * std::log(2.0) + 1.0));

    // The a ||theta||_1 term scales exactly as 1/sqrt(T).
    cqar::BoundParams with_theta = base;
    with_theta.theta_l1 = 3.0;
    const double d1 = cqar::regret_bound(with_theta, 100) - cqar::regret_bound(base, 100);
    const double d4 = cqar::regret_bound(with_theta, 400) - cqar::regret_bound(base, 400);
    CHECK(d1 == Approx(3.0 / 10.0));
    CHECK(d4 == Approx(d1 / 2.0));

    // (1 + 6 ln(1 + 5e4) + 36) / 1e4 at T = 1e8; below 0.01 by T = 1e9.
    const cqar::BoundParams wide{-1.0, 5.0, 1.0, 5, 1.0};
    CHECK(cqar::regret_bound(wide, 100000000) ==
          Approx((1.0 + 6.0 * std::log(50001.0) + 36.0) / 1e4).epsilon(1e-12));
    CHECK(cqar::regret_bound(wide, 1000000000) < 0.01);
    double prev = 1e300;
    for (std::size_t T = 1; T <= 1000000000; T *= 10) {
        const double b = cqar::regret_bound(wide, T);
        CHECK(b < prev);
        prev = b;
    }

    CHECK_THROWS_AS(cqar::regret_bound({2.0, 1.0, 1.0, 1, 0.0}, 5), std::invalid_argument);
    CHECK_THROWS_AS(cqar::regret_bound({0.0, 1.0, 0.0, 1, 0.0}, 5), std::invalid_argument);
    CHECK_THROWS_AS(cqar::regret_bound(base, 0), std::invalid_argument);
}

TEST_CASE("bound curve uses outcomes seen before each step", "[cqar]") {
    const std::vector<double> context{0.0};
    const std::vector<double> scored{1.0, 10.0, -4.0};
    const auto b = cqar::bound_curve(context, scored, 1.0, 1, 0.5);
    REQUIRE(b.size() == 3);
    CHECK(b[0] == cqar::regret_bound({0.0, 0.0, 1.0, 1, 0.5}, 1));
    CHECK(b[1] == cqar::regret_bound({0.0, 1.0, 1.0, 1, 0.5}, 2));
    CHECK(b[2] == cqar::regret_bound({0.0, 10.0, 1.0, 1, 0.5}, 3));
}

TEST_CASE("tuning grid runs every pair in a-major order", "[cqar]") {
    const Series s = ar1(60, 10);
    auto c = config(0.9);
    c.mcmc_iters = 200;
    c.burn_in = 50;
    const std::vector<double> as{0.1, 1.0};
    const std::vector<double> sds{0.5, 1.0};
    const auto rows = cqar::tune(c, s, as, sds);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].reg_a == 0.1);
    CHECK(rows[0].proposal_sd == 0.5);
    CHECK(rows[1].proposal_sd == 1.0);
    CHECK(rows[2].reg_a == 1.0);
    const auto& best = cqar::best_row(rows);
    for (const auto& r : rows) CHECK(best.pinball_loss <= r.pinball_loss);
}
