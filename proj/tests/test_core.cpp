#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "qvar/core.hpp"
#include "qvar/random.hpp"

using namespace qvar;
using Catch::Approx;

TEST_CASE("pinball loss evaluates both branches", "[core]") {
    CHECK(pinball_loss(1.0, 0.0, QuantileLevel(0.9)) == Approx(0.9));
    CHECK(pinball_loss(3.7, 3.7, QuantileLevel(0.3)) == 0.0);
    CHECK(pinball_loss(3.7, 3.7, QuantileLevel(0.99)) == 0.0);
    CHECK(pinball_loss(0.0, 2.0, QuantileLevel(0.25)) == 1.5);
}

TEST_CASE("pinball loss is convex in the prediction and bounded by |y - gamma|", "[core][property]") {
    Rng rng(42);
    for (int i = 0; i < 20000; ++i) {
        const QuantileLevel alpha(rng.uniform());
        const double y = rng.normal(0.0, 5.0);
        const double g1 = rng.normal(0.0, 5.0);
        const double g2 = rng.normal(0.0, 5.0);
        const double w = rng.uniform();
        const double lhs = pinball_loss(y, w * g1 + (1 - w) * g2, alpha);
        const double rhs = w * pinball_loss(y, g1, alpha) + (1 - w) * pinball_loss(y, g2, alpha);
        REQUIRE(lhs <= rhs + 1e-12 * (1 + std::abs(rhs)));

        const double l = pinball_loss(y, g1, alpha);
        REQUIRE(l >= 0.0);
        REQUIRE(l <= std::max(alpha.value(), 1 - alpha.value()) * std::abs(y - g1) + 1e-12);
        REQUIRE((l == 0.0) == (y == g1));
    }
}

TEST_CASE("quantile level rejects values outside (0, 1)", "[core]") {
    CHECK_THROWS_AS(QuantileLevel(0.0), std::invalid_argument);
    CHECK_THROWS_AS(QuantileLevel(1.0), std::invalid_argument);
    CHECK_THROWS_AS(QuantileLevel(std::nan("")), std::invalid_argument);
    CHECK_NOTHROW(QuantileLevel(1e-9));
}

TEST_CASE("series rejects non-finite values and unsorted timestamps", "[core]") {
    CHECK_THROWS_AS(Series({1.0, std::numeric_limits<double>::infinity()}), std::invalid_argument);
    CHECK_THROWS_AS(Series({1.0, std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(Series({1.0, 2.0}, {2.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Series({1.0, 2.0}, {1.0}), std::invalid_argument);
    CHECK_NOTHROW(Series({1.0, 2.0}, {1.0, 1.0}));
}

TEST_CASE("embed returns (1, y_{t-1}, ..., y_{t-p})", "[core]") {
    const Series s({10, 20, 30, 40});
    const Signal x = embed(s, 2, 2);
    REQUIRE(x.size() == 3);
    CHECK(x[0] == 1.0);
    CHECK(x[1] == 20.0);
    CHECK(x[2] == 10.0);
    CHECK(embed(s, 2, 3) == Signal::from_lags(std::vector<double>{30, 20}));
    CHECK(embed(s, 2, 2) == embed(s, 2, 2));

    CHECK_THROWS_AS(embed(Series({5}), 1, 0), std::out_of_range);
    CHECK_THROWS_AS(embed(Series({1, 2, 3}), 3, 2), std::out_of_range);
    CHECK_THROWS_AS(embed(s, 1, 4), std::out_of_range);
}

TEST_CASE("empirical quantile is the left-continuous inverse CDF", "[core]") {
    CHECK(empirical_quantile(std::vector<double>{1, 2, 3, 4}, QuantileLevel(0.5)) == 2.0);
    CHECK(empirical_quantile(std::vector<double>{7}, QuantileLevel(0.01)) == 7.0);
    CHECK(empirical_quantile(std::vector<double>{7}, QuantileLevel(0.99)) == 7.0);
    CHECK(empirical_quantile(std::vector<double>{3, 1, 2}, QuantileLevel(0.9)) == 3.0);
    // 0.1 * 10 is exactly one sample: the first order statistic qualifies.
    std::vector<double> ten(10);
    for (int i = 0; i < 10; ++i) ten[i] = i;
    CHECK(empirical_quantile(ten, QuantileLevel(0.1)) == 0.0);
    CHECK(empirical_quantile(ten, QuantileLevel(0.3)) == 2.0);
    CHECK_THROWS_AS(empirical_quantile(std::vector<double>{}, QuantileLevel(0.5)), std::invalid_argument);
}

TEST_CASE("empirical quantile always returns a sample satisfying the coverage rule", "[core][property]") {
    Rng rng(9);
    for (int rep = 0; rep < 2000; ++rep) {
        const std::size_t n = 1 + rep % 17;
        std::vector<double> s(n);
        for (auto& v : s) v = std::round(rng.normal() * 3);  // ties on purpose
        const QuantileLevel alpha(rng.uniform());
        const double q = empirical_quantile(s, alpha);
        REQUIRE(std::find(s.begin(), s.end(), q) != s.end());
        // Brute force: smallest sample z with #(s <= z) / n >= alpha.
        double expected = std::numeric_limits<double>::infinity();
        for (double z : s) {
            const auto c = std::count_if(s.begin(), s.end(), [&](double v) { return v <= z; });
            if (static_cast<double>(c) / static_cast<double>(n) >= alpha.value()) expected = std::min(expected, z);
        }
        REQUIRE(q == expected);
    }
}

TEST_CASE("cumulative loss sums pointwise pinball losses", "[core]") {
    const QuantileLevel a(0.9);
    const LossLedger l = cumulative_loss(std::vector<double>{1, 0}, std::vector<double>{0, 1}, a);
    CHECK(l.cumulative == Approx(1.0));
    REQUIRE(l.per_step.size() == 2);
    CHECK(l.per_step[0] == Approx(0.9));
    CHECK(l.per_step[1] == Approx(0.1));

    const std::vector<double> same{1.5, -2, 3};
    CHECK(cumulative_loss(same, same, a).cumulative == 0.0);

    CHECK_THROWS_AS(cumulative_loss(std::vector<double>{1}, std::vector<double>{1, 2}, a),
                    std::invalid_argument);
}

TEST_CASE("cumulative loss of uniform outcomes at the median", "[core]") {
    // E|U - 1/2| / 2 = 1/8 per step, sd of the total ~2.3 over 1000 draws.
    Rng rng(2024);
    std::vector<double> y(1000);
    for (auto& v : y) v = rng.uniform();
    const std::vector<double> pred(1000, 0.5);
    const LossLedger l = cumulative_loss(y, pred, QuantileLevel(0.5));
    CHECK(l.cumulative == Approx(125.0).margin(10.0));
    double sum = 0.0;
    for (double v : l.per_step) sum += v;
    CHECK(l.cumulative == Approx(sum).epsilon(1e-9));
}

TEST_CASE("rng streams are reproducible and in range", "[core]") {
    Rng a(5);
    Rng b(5);
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        REQUIRE(u == b.uniform());
    }
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) == derive_seed(1, 0));
}
