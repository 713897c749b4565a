#include <doctest.h>

#include <cmath>
#include <numeric>

#include "stirred/coupling.hpp"
#include "stirred/ctmc.hpp"
#include "stirred/errors.hpp"
#include "stirred/ips.hpp"

using namespace stirred;
using namespace stirred::ips;

namespace {

IpsParams small(int side, BirthRule rule, Stirring st, double lambda = 1.0) {
    IpsParams p;
    p.lambda = lambda;
    p.rule = rule;
    p.stirring = st;
    p.eps = 0.5;
    p.dim = 1;
    p.torus_side = side;
    return p;
}

}  // namespace

TEST_CASE("neighbourhoods include the site itself") {
    CHECK(Torus(1, 8).neighbourhood_size() == 3);
    CHECK(Torus(2, 8).neighbourhood_size() == 5);
    // On a side-2 ring x-1 and x+1 coincide.
    CHECK(Torus(1, 2).neighbourhood_size() == 2);
    const Torus t(1, 8);
    CHECK(t.neighbourhood(0)[0] == 0);
    CHECK(t.bonds().size() == 8);
    CHECK(Torus(2, 4).bonds().size() == 32);
}

TEST_CASE("site order") {
    CHECK(site_leq(kEmpty, kMale));
    CHECK(site_leq(kMale, kBoth));
    CHECK_FALSE(site_leq(kMale, kFemale));
    CHECK_FALSE(site_leq(kBoth, kFemale));
    for (std::uint8_t c = 0; c < 4; ++c) CHECK(SiteState::from_code(c).code() == c);
}

TEST_CASE("birth rates on a hand-built configuration") {
    // sites: 0 = both, 1 = male, rest empty; N_1 = {1, 0, 2}
    const Torus t(1, 5);
    Config c{kBoth, kMale, kEmpty, kEmpty, kEmpty};
    const double lambda = 0.7;
    CHECK(count_sex(t, c, 1, 1) == 2);
    CHECK(count_sex(t, c, 1, 2) == 1);
    CHECK(count_pairs(t, c, 1) == 1);
    CHECK(birth_rate_g1(t, c, 1, 2, lambda) == doctest::Approx(2.0 * lambda));
    CHECK(birth_rate_g2(t, c, 1, 2, lambda) == doctest::Approx(lambda));
    CHECK(decoupled_contact_rates(t, c, 1, 2, lambda) == doctest::Approx(3.0 * lambda));
    // occupied nest: no birth
    CHECK(birth_rate_g1(t, c, 1, 1, lambda) == 0.0);
    // site 2 sees one male and no female under G1
    CHECK(birth_rate_g1(t, c, 2, 1, lambda) == 0.0);
    // a pair at x cannot refill x under G2 because x is already full
    CHECK(birth_rate_g2(t, c, 0, 1, lambda) == 0.0);
    CHECK(birth_rate_g2(t, c, 4, 2, lambda) == doctest::Approx(lambda));
}

TEST_CASE("G2 <= G1 <= decoupled on random configurations") {
    Rng rng(11, 0);
    for (int dim : {1, 2}) {
        const Torus t(dim, 6);
        for (int trial = 0; trial < 200; ++trial) {
            Config c(t.sites());
            for (auto& s : c) s = static_cast<std::uint8_t>(rng.below(4));
            for (int x = 0; x < t.sites(); ++x)
                for (int m : {1, 2}) {
                    const double g2 = birth_rate_g2(t, c, x, m, 1.3);
                    const double g1 = birth_rate_g1(t, c, x, m, 1.3);
                    const double dc = decoupled_contact_rates(t, c, x, m, 1.3);
                    CHECK(g2 <= g1 + 1e-12);
                    CHECK(g1 <= dc + 1e-12);
                    CHECK(dc <= max_nest_rate(BirthRule::Decoupled, 1.3, t.neighbourhood_size()) + 1e-12);
                }
        }
    }
}

TEST_CASE("sum tree stays consistent with the configuration") {
    for (auto st : {Stirring::None, Stirring::LilyPad, Stirring::Individual}) {
        IpsParams p = small(12, BirthRule::G1, st, 2.0);
        Simulator sim(p, full_config(Torus(1, 12)), 5);
        for (int k = 0; k < 2000; ++k) {
            if (sim.step(1e9) != Simulator::StepResult::Event) break;
            if (k % 97 == 0) CHECK(sim.total_rate() == doctest::Approx(sim.recomputed_total_rate()).epsilon(1e-9));
        }
    }
}

TEST_CASE("replay is bit-exact") {
    IpsParams p = small(16, BirthRule::G2, Stirring::Individual, 1.5);
    Simulator a(p, full_config(Torus(1, 16)), 99, 3), b(p, full_config(Torus(1, 16)), 99, 3);
    a.run_until(2.0);
    b.run_until(2.0);
    CHECK(a.config() == b.config());
    CHECK(a.state().event_count == b.state().event_count);
}

TEST_CASE("generator rows sum to zero and pure death has a closed form") {
    const auto q = exact_generator_matrix(small(3, BirthRule::G1, Stirring::Individual));
    CHECK(q.rows() == 64);
    for (int i = 0; i < q.rows(); ++i) CHECK(std::abs(q.row(i).sum()) < 1e-12);

    // lambda = 0 on one site: each nest dies independently at rate one
    IpsParams dead = small(1, BirthRule::G1, Stirring::None, 0.0);
    const auto dist = transition_distribution(exact_generator_matrix(dead), state_index({kBoth}), 1.0);
    const double e = std::exp(-1.0);
    CHECK(dist[kEmpty] == doctest::Approx((1 - e) * (1 - e)).epsilon(1e-12));
    CHECK(dist[kMale] == doctest::Approx(e * (1 - e)).epsilon(1e-12));
    CHECK(dist[kBoth] == doctest::Approx(e * e).epsilon(1e-12));
}

TEST_CASE("zeta chain is an exact lumping under lily-pad stirring") {
    for (int side : {2, 3}) {
        const auto rep = zeta_lumpability(small(side, BirthRule::G2, Stirring::LilyPad, 1.2), 0.7);
        CHECK(rep.generator_max_diff < 1e-12);
        CHECK(rep.expm_max_diff < 1e-10);
    }
}

TEST_CASE("jump targets follow the generator row") {
    const auto jt = jump_frequency_test(small(3, BirthRule::G1, Stirring::LilyPad, 1.0),
                                        {kBoth, kMale, kEmpty}, 40000, 17);
    CHECK(jt.p_value > 1e-4);
    CHECK(jt.mean_holding == doctest::Approx(1.0 / jt.exit_rate).epsilon(0.03));
}

TEST_CASE("simulated law matches the matrix exponential on two sites") {
    const auto p = small(2, BirthRule::G2, Stirring::Individual, 1.0);
    const Config start = full_config(Torus(1, 2));
    const auto exact = transition_distribution(exact_generator_matrix(p), state_index(start), 1.0);
    const auto mc = mc_distribution(p, start, 1.0, 20000, 4);
    CHECK(total_variation(mc, exact) < 0.03);
}

TEST_CASE("occupation decays as exp(-t) without births") {
    IpsParams p = small(32, BirthRule::G2, Stirring::Individual, 0.0);
    const std::vector<double> dens(32, 0.6);
    const auto occ = mean_male_occupation(p, dens, dens, 0.5, 2000, 8);
    const double mean = std::accumulate(occ.begin(), occ.end(), 0.0) / occ.size();
    CHECK(mean == doctest::Approx(0.6 * std::exp(-0.5)).epsilon(0.03));

    const auto decay = upper_invariant_decay(p, {0.25, 1.0}, 200, 3);
    CHECK(decay[0].p_male_empty == doctest::Approx(1 - std::exp(-0.25)).epsilon(0.05));
    CHECK(decay[1].p_male_empty == doctest::Approx(1 - std::exp(-1.0)).epsilon(0.05));
}

TEST_CASE("coupled runs keep the order") {
    IpsParams lo = small(8, BirthRule::G2, Stirring::LilyPad, 1.0);
    IpsParams hi = small(8, BirthRule::G1, Stirring::LilyPad, 2.0);
    Rng rng(3, 1);
    for (int k = 0; k < 100; ++k) {
        Config a(8), b(8);
        for (int x = 0; x < 8; ++x) {
            a[x] = static_cast<std::uint8_t>(rng.below(4));
            b[x] = static_cast<std::uint8_t>(a[x] | rng.below(4));
        }
        const auto out = run_coupled({a, b, 0.0, rng.engine()(), 0}, lo, hi, 5.0);
        CHECK(ordered(out.lower, out.upper));
        CHECK(out.time == doctest::Approx(5.0));
    }
}

TEST_CASE("coupling rejects unordered or incomparable inputs") {
    IpsParams p = small(4, BirthRule::G1, Stirring::None);
    Config a{kMale, kEmpty, kEmpty, kEmpty}, b{kFemale, kEmpty, kEmpty, kEmpty};
    CHECK_THROWS_AS(run_coupled({a, b, 0.0, 1, 0}, p, 1.0), ConfigError);
    IpsParams g2 = small(4, BirthRule::G2, Stirring::None);
    CHECK_THROWS_AS(run_coupled({a, a, 0.0, 1, 0}, p, g2, 1.0), ConfigError);
}

TEST_CASE("parameter validation") {
    IpsParams p;
    p.lambda = -1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.stirring = Stirring::LilyPad;
    p.eps = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK_THROWS_AS(exact_generator_matrix(small(7, BirthRule::G1, Stirring::None)), StateSpaceTooLarge);
}
