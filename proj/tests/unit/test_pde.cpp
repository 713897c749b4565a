#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stirred/errors.hpp"
#include "stirred/pde.hpp"

using namespace stirred;
using namespace stirred::pde;

TEST_CASE("Sys11 roots and the equal-area point") {
    const auto [r1, r0] = sys11_roots(4.5);
    CHECK(r1 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(r0 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(rhs_sys11(r0, 4.5) == doctest::Approx(0.0).epsilon(1e-14));
    // -r^2/2 + beta r^3/3 - beta r^4/4 vanishes at r = 2/3, beta = 9/2
    CHECK(std::abs(wave_integral_criterion(4.5)) < 1e-12);
    CHECK(wave_integral_criterion(4.4) < 0.0);
    CHECK(wave_integral_criterion(4.6) > 0.0);
    CHECK(wave_integral_root() == doctest::Approx(4.5).epsilon(1e-9));
    CHECK_THROWS_AS(sys11_roots(3.9), NoRootsError);
    CHECK(sys11_front_speed(4.5) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("Sys10 fixed points") {
    CHECK(sys10_fixed_points(3.9).empty());
    for (double c : {5.0, 8.0, 8800.0}) {
        const auto fp = sys10_fixed_points(c);
        REQUIRE(fp.size() == 2);
        CHECK(fp[0].second < fp[1].second);
        for (auto [u, v] : fp) {
            const auto [du, dv] = rhs_sys10(u, v, c);
            // residuals scale with c
            CHECK(std::abs(du) < 1e-11 * c);
            CHECK(std::abs(dv) < 1e-11 * c);
            CHECK(v <= u);
        }
    }
    // v+ -> 1 - 1/c to leading order for large c
    CHECK(sys10_fixed_points(8800.0)[1].second == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("four-state systems conserve total probability") {
    const State4 u{0.1, 0.2, 0.3, 0.4};
    for (auto r : {rhs_sys9(u, 1.3, 2), rhs_sys12_with_deaths(u, 0.3, 2)})
        CHECK(std::abs(r[0] + r[1] + r[2] + r[3]) < 1e-14);
}

TEST_CASE("contact reaction integrates to the logistic solution") {
    ReactionSpec s;
    s.system = System::Contact;
    s.lambda = 0.75;  // beta = 3 with d = 2 default coefficient 4
    s.dim_d = 2;
    const double beta = s.beta(), r = beta - 1.0, K = r / beta, u0 = 0.05, t = 2.0;
    const auto y = integrate_reaction(s, {u0}, t);
    CHECK(y[0] == doctest::Approx(K / (1.0 + (K / u0 - 1.0) * std::exp(-r * t))).epsilon(1e-8));
    CHECK(contact_root(beta) == doctest::Approx(K));
}

TEST_CASE("occupied equilibrium") {
    ReactionSpec s;
    s.system = System::Sys11;
    s.lambda = 1.5;
    s.beta_coeff = 4.0;
    const auto eq = occupied_equilibrium(s);
    REQUIRE(eq);
    CHECK((*eq)[0] == doctest::Approx(sys11_roots(6.0).second).epsilon(1e-6));
    s.lambda = 0.9;  // beta 3.6 < 4: everything dies
    CHECK_FALSE(occupied_equilibrium(s));
}

TEST_CASE("periodic heat step damps a Fourier mode by the discrete factor") {
    ReactionSpec s;
    s.system = System::Heat;
    Grid g;
    g.nx = 64;
    g.dx = 0.1;
    g.bc = Boundary::Periodic;
    auto f = make_field(s, g);
    const double k = 2.0 * std::numbers::pi / g.nx;
    for (int i = 0; i < g.nx; ++i) f.data[0][i] = 0.5 + 0.25 * std::sin(k * i);
    const double dt = stability_limit(g.dx, 1);
    RdStepper st(s, g, dt);
    const int n = 500;
    for (int j = 0; j < n; ++j) st.step(f);
    const double factor = std::pow(1.0 - dt * (2.0 - 2.0 * std::cos(k)) / (g.dx * g.dx), n);
    for (int i = 0; i < g.nx; i += 7)
        CHECK(f.data[0][i] == doctest::Approx(0.5 + 0.25 * factor * std::sin(k * i)).epsilon(1e-10));
}

TEST_CASE("radial Laplacian of r^2 is 2k") {
    for (int k : {2, 3}) {
        ReactionSpec s;
        s.system = System::Heat;
        Grid g;
        g.nx = 50;
        g.dx = 0.1;
        g.radial_dim = k;
        auto f = make_field(s, g);
        for (int i = 0; i < g.nx; ++i) f.data[0][i] = 0.01 * g.x(i) * g.x(i);
        const auto before = f.data[0];
        const double dt = stability_limit(g.dx, g.stencil_dim());
        RdStepper(s, g, dt).step(f);
        for (int i = 0; i + 1 < g.nx; ++i)
            CHECK((f.data[0][i] - before[i]) / dt == doctest::Approx(0.02 * k).epsilon(1e-9));
    }
}

TEST_CASE("grid and stepper validation") {
    ReactionSpec s;
    Grid g;
    g.nx = 10;
    g.dx = 0.1;
    CHECK_THROWS_AS(RdStepper(s, g, 1.0), ConfigError);
    g.radial_dim = 2;
    g.x0 = -1.0;
    CHECK_THROWS_AS(g.validate(), ConfigError);
    CHECK_THROWS_AS(parse_system("sys13"), ConfigError);
    CHECK(parse_system("sys12-deaths") == System::Sys12WithDeaths);
}

TEST_CASE("explicit steps that leave [0, 1] are reported, not clamped") {
    ReactionSpec s;
    s.system = System::Sys11;
    s.lambda = 2500.0;  // beta = 1e4: one step at u = 1/2 overshoots past 1
    Grid g;
    g.nx = 10;
    g.dx = 0.1;
    auto f = make_field(s, g);
    for (auto& u : f.data[0]) u = 0.5;
    RdStepper st(s, g, stability_limit(g.dx, 1));
    CHECK_THROWS_AS(st.step(f), InstabilityError);
}
