#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "stirred/errors.hpp"
#include "stirred/percolation.hpp"
#include "stirred/rng.hpp"

using namespace stirred;
using namespace stirred::perc;

TEST_CASE("degenerate closure probabilities") {
    OpConfig open{0.0, 0, 1.0, 30, 0};
    CHECK(survival_frequency(open, 100, 1).frequency == 1.0);
    const auto full = simulate_op(open, 1);
    // every site of the right parity inside the window is wet
    CHECK(full.wet_count[1] == static_cast<long>(full.wet[1].size()));
    OpConfig closed{1.0, 0, 1.0, 30, 0};
    CHECK(survival_frequency(closed, 100, 1).frequency == 0.0);
}

TEST_CASE("site closures have the advertised marginals") {
    const double gamma = 0.1;
    long closed0 = 0, closed1 = 0, pair_far = 0, pair_block = 0;
    const long N = 100000;
    OpConfig m0{gamma, 0, 0.5, 10, 0}, m1{gamma, 1, 0.5, 10, 0};
    for (long k = 0; k < N; ++k) {
        const long x = 2 * (k % 1000), n = 2 * (k / 1000);
        closed0 += !site_open(m0, 7, x, n);
        const bool c = !site_open(m1, 7, x, n);
        closed1 += c;
        pair_far += c && !site_open(m1, 7, x + 2, n);
        pair_block += c && !site_open(m1, 7, x + 1, n + 1);
    }
    auto z = [&](long count, double p) { return (count - N * p) / std::sqrt(N * p * (1 - p)); };
    CHECK(std::abs(z(closed0, gamma)) < 4.0);
    const double pc = 1 - (1 - gamma / 2) * (1 - gamma / 2);
    CHECK(pc <= gamma);
    CHECK(std::abs(z(closed1, pc)) < 4.0);
    // sup-distance 2: independent
    CHECK(std::abs(z(pair_far, pc * pc)) < 4.0);
    // shared block: strongly correlated
    CHECK(pair_block > 5 * N * pc * pc);
}

TEST_CASE("wet sets are monotone in gamma and p") {
    for (int M : {0, 1})
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            OpConfig lo{0.3, M, 0.3, 20, 0}, hi{0.05, M, 0.7, 20, 0};
            const auto a = simulate_op(lo, seed), b = simulate_op(hi, seed);
            for (std::size_t n = 0; n < a.wet.size(); ++n)
                CHECK(std::includes(b.wet[n].begin(), b.wet[n].end(), a.wet[n].begin(), a.wet[n].end()));
        }
}

TEST_CASE("light-cone shortcut agrees with the full simulation") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        OpConfig c{0.35, 1, 0.5, 15, 0};
        CHECK(origin_survives(c, seed) == simulate_op(c, seed).origin_wet_at_end);
    }
}

TEST_CASE("Wilson interval") {
    const auto w = wilson(0, 10);
    CHECK(w.ci_lo == 0.0);
    const double z2 = 1.959963984540054 * 1.959963984540054;
    CHECK(w.ci_hi == doctest::Approx(z2 / (10 + z2)));
    const auto h = wilson(50, 100);
    CHECK(h.ci_lo + h.ci_hi == doctest::Approx(1.0));
}

TEST_CASE("good event closed form and simulation") {
    const double exact = std::exp(-0.3) * std::pow(1 - std::exp(-0.5), 4);
    CHECK(good_event_bound(10.0, 0.05) == doctest::Approx(exact).epsilon(1e-14));
    CHECK(exact == doctest::Approx(0.0178).epsilon(0.01));
    const auto mc = mc_good_event(10.0, 0.05, 200000, 5);
    CHECK(std::abs(mc.frequency - exact) < 3 * mc.sigma);
    for (double gamma : {0.5, 1e-2, 1e-3}) {
        const auto ch = solve_good_event(gamma);
        CHECK(ch.T == doctest::Approx(gamma / 12));
        CHECK(ch.bound >= 1 - gamma);
        CHECK(std::pow(1 - std::exp(-ch.lambda * ch.T), 4) == doctest::Approx(1 - gamma / 2).epsilon(1e-10));
    }
}

TEST_CASE("configuration checks") {
    OpConfig c;
    c.M = 2;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.p = 1.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}
