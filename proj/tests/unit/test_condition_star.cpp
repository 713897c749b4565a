#include <doctest.h>

#include <cmath>

#include "stirred/condition_star.hpp"
#include "stirred/errors.hpp"
#include "stirred/flow_geometry.hpp"
#include "stirred/profile.hpp"

using namespace stirred;
using namespace stirred::cstar;

TEST_CASE("lily-pad field") {
    const Point e = eta(0.5, 0.25, 10.0);
    CHECK(e.u == doctest::Approx((2 * 10.0 * 0.5 + 1) * 0.25 - 0.5));
    CHECK(e.v == doctest::Approx((10.0 * 0.25 - 2) * 0.25));
}

TEST_CASE("shipped constants") {
    const FlowGeometry g;
    // 44 * 199^2 = 1742444 > 21 * 200^2 * 2 = 1680000
    CHECK(ratio_condition_holds(g));
    FlowGeometry tight = g;
    tight.K1 = 42.0;  // 42 * 39601 = 1663242 < 1680000
    CHECK_FALSE(ratio_condition_holds(tight));
    CHECK(growth_bound_margin(g) == doctest::Approx(382.5 / (2 * std::sqrt(17.0)) - 44.0).epsilon(1e-14));
    CHECK(g.s0() == std::log(12.0 / 11.0) / 75.0);
    CHECK(g.s0() < std::log(45.0 / 23.0) / 402.0 + 1e-3);
    CHECK(g.theta0() == doctest::Approx(4.0 / 51.0).epsilon(1e-12));
    CHECK(g.pi_v_A2_computed() == doctest::Approx(0.612));
    CHECK(g.pi_v_A2_computed() != doctest::Approx(g.pi_v_A2_printed));
}

TEST_CASE("region classification") {
    const FlowGeometry g;
    CHECK(classify(0.3, 0.1, g) == Region::R1);
    CHECK(classify(0.3, 0.05, g) == Region::Eta);
    CHECK(classify(0.4, 0.5, g) == Region::R2);
    CHECK(classify(1.1 * 0.5, 0.5, g) == Region::L1);
    CHECK(classify(0.8, 0.5, g) == Region::R3);
    CHECK(classify(0.95, 0.5, g) == Region::R4);
    CHECK(classify(0.95, 0.7, g) == Region::Eta);
}

TEST_CASE("xi flow in the linear regions has closed forms") {
    const FlowGeometry g;
    // R1: u' = 400 u, v' = -2 v, stays inside for s < ln(0.1/0.069)/402
    const Point a = flow_xi(5e-4, {0.3, 0.1}, 8800.0, g);
    CHECK(a.u == doctest::Approx(0.3 * std::exp(400 * 5e-4)).epsilon(1e-9));
    CHECK(a.v == doctest::Approx(0.1 * std::exp(-2 * 5e-4)).epsilon(1e-9));
    // R3: u' = 0, v' = 75 v, until v = 0.6
    const Point b = flow_xi(2e-3, {0.8, 0.5}, 8800.0, g);
    CHECK(b.u == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(b.v == doctest::Approx(0.5 * std::exp(75 * 2e-3)).epsilon(1e-9));
}

TEST_CASE("xi flow across a region boundary matches a fine RK4 oracle") {
    const FlowGeometry g;
    // R3 up to v = 0.6, then the lily-pad field above the linear regions
    const double c = 8800.0, s = 3e-3;
    const Point p{0.8, 0.5};
    std::vector<FlowSegment> trace;
    const Point got = flow_xi_traced(s, p, c, g, &trace);
    CHECK(trace.size() >= 2);
    // piecewise smooth field: small steps keep the RK4 error at the crossing small
    Point y = p;
    const int n = 200000;
    const double h = s / n;
    auto f = [&](Point q) { return xi(q.u, q.v, c, g); };
    for (int i = 0; i < n; ++i) {
        const Point k1 = f(y);
        const Point k2 = f({y.u + h / 2 * k1.u, y.v + h / 2 * k1.v});
        const Point k3 = f({y.u + h / 2 * k2.u, y.v + h / 2 * k2.v});
        const Point k4 = f({y.u + h * k3.u, y.v + h * k3.v});
        y.u += h / 6 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u);
        y.v += h / 6 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v);
    }
    CHECK(got.u == doctest::Approx(y.u).epsilon(1e-4));
    CHECK(got.v == doctest::Approx(y.v).epsilon(1e-4));
}

TEST_CASE("gamma_theta geometry") {
    const auto poly = gamma_theta(0.0);
    CHECK(point_on(poly, 0.0).u == doctest::Approx(0.51));
    CHECK(point_on(poly, 1.0).u == doctest::Approx(1.0));
    CHECK(distance_to(poly, {0.7, 0.5}) == doctest::Approx(0.0).scale(1.0));
    const Point q = ray_intersection({0.7, 0.5}, poly);
    CHECK(q.v == doctest::Approx(0.5));
    CHECK(q.u == doctest::Approx(0.7));
    CHECK_THROWS_AS(ray_intersection({0.1, 0.9}, poly), NoIntersection);
}

TEST_CASE("xi is dominated by eta at c = 8800") {
    const auto cert = verify_domination(8800.0, 200);
    CHECK(cert.pass);
    CHECK(cert.worst_margin >= -1e-12);
    for (const auto& rm : cert.per_region) CHECK(rm.evaluations > 0);
    CHECK_FALSE(verify_domination(100.0, 200).pass);
    CHECK_THROWS_AS(verify_domination(8800.0, 10), ConfigError);
}

TEST_CASE("flow condition holds below theta0 and fails at theta = 0.2") {
    const FlowGeometry g;
    const auto ok = check_flow_condition_grid(6, 24, 8800.0, g);
    CHECK(ok.pass);
    CHECK(ok.samples == 6L * 6 * 6 * 24);
    const auto bad = check_flow_condition_grid(6, 24, 8800.0, g, 0.2);
    CHECK_FALSE(bad.pass);
    CHECK(bad.worst_margin < -0.05);
}

TEST_CASE("bump profile and exact heat flow") {
    const double L = 1.0, l = 0.31;
    CHECK(bump_f0(0.0, L, l) == 1.0);
    CHECK(bump_f0(L, L, l) == doctest::Approx(0.5));
    CHECK(bump_f0(L + l, L, l) == 0.0);
    CHECK(bump_fs(L + 0.1, L, l, 0.1) == doctest::Approx(0.5));
    // Simpson oracle for the Gaussian convolution
    const double s = 1e-3, sd = std::sqrt(2 * s);
    for (double x : {0.0, 0.8, 1.0, 1.2, 1.35}) {
        const int n = 4000;
        const double a = x - 10 * sd, h = 20 * sd / n;
        double acc = 0.0;
        for (int k = 0; k <= n; ++k) {
            const double y = a + k * h;
            const double w = (k == 0 || k == n) ? 1 : (k % 2 ? 4 : 2);
            acc += w * bump_f0(y, L, l) * std::exp(-(x - y) * (x - y) / (4 * s));
        }
        acc *= h / 3 / std::sqrt(4 * M_PI * s);
        CHECK(heat_f0_exact(x, s, L, l) == doctest::Approx(acc).epsilon(1e-9));
    }
}

TEST_CASE("discrete heat convolution agrees with the exact flow") {
    const double L = 1.0, l = 0.31, dx = l / 500, s = 1e-3;
    std::vector<double> samples;
    for (double x = -2.0; x <= 2.0 + 1e-12; x += dx) samples.push_back(bump_f0(x, L, l));
    const auto out = heat_step(samples, s, dx);
    for (std::size_t i = 200; i < samples.size() - 200; i += 311) {
        const double x = -2.0 + i * dx;
        CHECK(out[i] == doctest::Approx(heat_f0_exact(x, s, L, l)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(heat_step(samples, 1e-8, dx), ConfigError);
}

TEST_CASE("profile constants") {
    const auto [lo, hi] = shoulder_width_interval(44.0, 2.0);
    CHECK(lo == doctest::Approx(std::sqrt(std::pow(200.0 / 199.0, 2) * 4.02 / 44.0)).epsilon(1e-12));
    CHECK(hi == doctest::Approx(std::sqrt(1.0 / (5.05 * 2.0))).epsilon(1e-12));
    const auto pc = derive_profile_constants(44.0, 2.0, 0.31);
    CHECK(pc.m_bound_gain == doctest::Approx(22.0 * std::pow(199.0 / 200.0, 2) - 2.01 / (0.31 * 0.31)));
    CHECK(pc.m_bound_shoulder == doctest::Approx(1.0 / (5 * 0.31 * 0.31) - 2.02));
    CHECK(pc.m == doctest::Approx(std::max(pc.m_bound_gain, pc.m_bound_shoulder)));
    CHECK(pc.delta1 == doctest::Approx(pc.m * 0.31 / 4));
    CHECK(pc.delta2 == doctest::Approx(pc.m / 2));
}

TEST_CASE("shoulder gain holds only for small s") {
    const double L = 1.0, l = 0.31, dx = l / 500;
    CHECK(check_shoulder_gain(L, l, {1e-5, 5e-5}, dx).pass);
    const auto big = check_shoulder_gain(L, l, {1e-3}, dx);
    CHECK_FALSE(big.pass);
    CHECK(big.worst_x > L);
    CHECK(check_shoulder_gain_discrete(L, l, {5e-5}, l / 5000).pass);
    const double smax = shoulder_gain_largest_s(L, l, dx, 1e-3);
    CHECK(smax > 5e-5);
    CHECK(smax < 2e-4);
}

TEST_CASE("dominance of the lifted profile") {
    const double L = 1.0, l = 0.31;
    const auto pc = derive_profile_constants(44.0, 2.0, l);
    for (double s : {1e-4, 5e-4, 1e-3}) CHECK(check_lifted_dominance(pc.m, s, L, l, pc.delta1, pc.delta2, l / 500).pass);
}

TEST_CASE("Trotter splitting without diffusion effects") {
    // constant fields: the heat part is the identity, the flow at c = 0 is linear:
    // v = v0 e^{-2t}, u = u0 e^{-t} + v0 (e^{-t} - e^{-2t})
    std::vector<double> x{0.0, 0.01, 0.02, 0.03, 0.04};
    const auto r = trotter_run_fields(x, std::vector<double>(5, 0.6), std::vector<double>(5, 0.4), 0.0, 0.5, 20);
    const double u = 0.6 * std::exp(-0.5) + 0.4 * (std::exp(-0.5) - std::exp(-1.0));
    for (int i = 0; i < 5; ++i) {
        CHECK(r.v[i] == doctest::Approx(0.4 * std::exp(-1.0)).epsilon(1e-7));
        CHECK(r.u[i] == doctest::Approx(u).epsilon(1e-7));
    }
}

TEST_CASE("condition (*) fails for a weak reaction") {
    ConditionStarParams p;
    p.c = 1.0;
    const auto cert = condition_star_check(p);
    CHECK(cert.verdict == StarVerdict::Fail);
    CHECK(cert.v_plus == 0.0);
}
