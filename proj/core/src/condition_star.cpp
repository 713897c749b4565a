#include "stirred/condition_star.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "stirred/errors.hpp"
#include "stirred/pde.hpp"
#include "stirred/profile.hpp"

namespace stirred::cstar {

namespace {

constexpr double kPassTol = -1e-12;

// Arc-length position along gamma_theta, which starts at A_theta.
Point position_on(const Polyline& poly, int k, int positions) {
    const double t = positions <= 1 ? 0.0 : static_cast<double>(k) / (positions - 1);
    return point_on(poly, t);
}

}  // namespace

FlowConditionCertificate check_flow_condition(const std::vector<double>& thetas, const std::vector<double>& alphas,
                                           const std::vector<double>& s_values, int positions, double c,
                                           const FlowGeometry& g) {
    if (positions < 1) throw ConfigError("need at least one position on gamma_theta");
    const double s0 = g.s0();
    FlowConditionCertificate cert;
    cert.worst_margin = std::numeric_limits<double>::infinity();
    for (double theta : thetas) {
        if (theta < g.theta_min || theta > g.theta_max) throw ConfigError("theta outside [theta_min, theta_max]");
        const Polyline poly = gamma_theta(theta, g);
        for (double alpha : alphas) {
            if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
            for (double s : s_values) {
                if (s < 0.0 || s > s0 * (1.0 + 1e-12)) throw ConfigError("s outside [0, s0]");
                for (int k = 0; k < positions; ++k) {
                    FlowConditionSample smp;
                    smp.theta = theta;
                    smp.alpha = alpha;
                    smp.s = s;
                    smp.start = position_on(poly, k, positions);
                    const Point scaled{alpha * smp.start.u, alpha * smp.start.v};
                    smp.flowed = flow_xi(s, scaled, c, g);
                    smp.phi = phi_theta(s, theta, smp.start, c, g);
                    smp.strong = scaled.v >= g.eps;
                    const double factor = smp.strong ? 1.0 + g.K1 * s : 1.0 - g.K2 * s;
                    smp.margin = std::min(smp.flowed.u - factor * alpha * smp.phi.u,
                                          smp.flowed.v - factor * alpha * smp.phi.v);
                    ++cert.samples;
                    if (smp.strong) ++cert.strong_samples;
                    if (smp.margin < cert.worst_margin) {
                        cert.worst_margin = smp.margin;
                        cert.witness = smp;
                    }
                }
            }
        }
    }
    if (cert.samples == 0) cert.worst_margin = 0.0;
    cert.pass = cert.worst_margin >= kPassTol;
    return cert;
}

FlowConditionCertificate check_flow_condition_grid(int n, int positions, double c, const FlowGeometry& g,
                                                double theta_hi) {
    if (n < 2) throw ConfigError("grid needs n >= 2");
    if (theta_hi <= 0.0) theta_hi = g.theta0();
    std::vector<double> thetas, alphas, s_values;
    for (int i = 0; i < n; ++i) {
        thetas.push_back(theta_hi * i / (n - 1));
        alphas.push_back(static_cast<double>(i + 1) / n);
        s_values.push_back(g.s0() * i / (n - 1));
    }
    return check_flow_condition(thetas, alphas, s_values, positions, c, g);
}

const char* to_string(StarVerdict v) {
    switch (v) {
        case StarVerdict::Pass: return "pass";
        case StarVerdict::Fail: return "fail";
        case StarVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

struct UpperRun {
    double T_upper = -1.0;  // first sampled time with v < d2, -1 if never
    std::vector<double> times;
    std::vector<double> v;
};

// Spatially constant solution from u = v = 1, sampled every h up to t_end.
UpperRun run_upper(double c, double d2, double t_end, double h) {
    namespace ode = boost::numeric::odeint;
    using State = std::vector<double>;
    auto rhs = [c](const State& y, State& dy, double) {
        const Point e = eta(y[0], y[1], c);
        dy[0] = e.u;
        dy[1] = e.v;
    };
    UpperRun run;
    State y{1.0, 1.0};
    auto stepper = ode::make_dense_output(1e-12, 1e-10, ode::runge_kutta_dopri5<State>());
    ode::integrate_const(stepper, rhs, y, 0.0, t_end, h, [&](const State& s, double t) {
        run.times.push_back(t);
        run.v.push_back(s[1]);
        if (run.T_upper < 0.0 && s[1] < d2) run.T_upper = t;
    });
    return run;
}

}  // namespace

ConditionStarCertificate condition_star_check(const ConditionStarParams& p) {
    if (!(p.c > 0.0) || !std::isfinite(p.c)) throw ConfigError("c must be positive");
    if (!(p.M > 0.0)) throw ConfigError("M must be positive");
    if (!(p.D1 > 0.0 && p.D1 < 1.0)) throw ConfigError("D1 must lie in (0, 1)");
    if (!(p.d1 > 0.0 && p.d1 < 1.0)) throw ConfigError("d1 must lie in (0, 1)");
    if (p.t_max <= 0.0 || p.upper_window <= 0.0) throw ConfigError("t_max and window must be positive");

    ConditionStarCertificate cert;
    cert.c = p.c;
    cert.M = p.M;
    cert.D1 = p.D1;
    cert.d1 = p.d1;
    cert.d2 = p.d2 > 0.0 ? p.d2 : 0.5 * ((1.0 - 1.0 / p.c) + 1.0);
    cert.D2 = p.D2 > 0.0 ? p.D2 : 0.5 * (cert.d2 + 1.0);
    if (!(cert.d2 < 1.0 && cert.D2 < 1.0 && cert.d2 < cert.D2)) throw ConfigError("need d2 < D2 < 1");
    const auto fps = pde::sys10_fixed_points(p.c);
    if (!fps.empty()) cert.v_plus = fps.back().second;

    // Lower data D1 f0 with L + l = M, l = M/10: below D1 on [-M, M] and zero outside.
    const double l = p.M / 10.0;
    const double L = p.M - l;
    cert.dx = p.dx > 0.0 ? p.dx : std::min(0.05, 0.1 / std::sqrt(p.c));
    pde::Grid grid;
    grid.dim = 1;
    grid.dx = cert.dx;
    grid.nx = static_cast<int>(std::ceil(5.0 * p.M / cert.dx)) + 1;
    grid.bc = pde::Boundary::Neumann;
    pde::ReactionSpec spec;
    spec.system = pde::System::Sys10;
    spec.dim_d = 1;
    spec.lambda = p.c / 2.0;
    pde::PdeField f = pde::make_field(spec, grid);
    for (int i = 0; i < grid.nx; ++i) {
        const double v0 = p.D1 * bump_f0(grid.x(i), L, l);
        f.data[0][i] = v0;
        f.data[1][i] = v0;
    }
    const int inner = static_cast<int>(std::floor(3.0 * p.M / cert.dx + 1e-9));
    auto min_inner = [&] {
        return *std::min_element(f.data[1].begin(), f.data[1].begin() + inner + 1);
    };
    auto sup_v = [&] { return *std::max_element(f.data[1].begin(), f.data[1].end()); };

    pde::RdStepper stepper(spec, grid, pde::stability_limit(cert.dx, 1));
    const double dt = stepper.dt();
    const double check_every = std::max(dt, 1e-3 / std::max(1.0, std::sqrt(p.c)));
    const auto steps_per_check = std::max<long>(1, std::lround(check_every / dt));
    double t = 0.0;
    bool decayed = false;
    bool reached = false;

    auto advance_to = [&](double target) {
        while (t < target - 0.5 * dt) {
            stepper.step(f);
            t += dt;
        }
    };

    if (p.T > 0.0) {
        advance_to(p.T);
        reached = min_inner() > p.d1;
        cert.T_lower = reached ? t : 0.0;
    } else {
        while (t < p.t_max) {
            for (long k = 0; k < steps_per_check; ++k) {
                stepper.step(f);
                t += dt;
            }
            if (min_inner() > p.d1) {
                reached = true;
                cert.T_lower = t;
                break;
            }
            if (sup_v() < 1e-3) {
                decayed = true;
                break;
            }
        }
    }

    if (decayed || (!reached && sup_v() < p.D1 * 1e-2)) {
        cert.T = t;
        cert.min_v_lower = min_inner();
        cert.verdict = StarVerdict::Fail;
        cert.note = "lower solution decays";
        return cert;
    }
    if (!reached) {
        cert.T = t;
        cert.min_v_lower = min_inner();
        cert.verdict = StarVerdict::Inconclusive;
        cert.note = "lower threshold not reached before t_max";
        return cert;
    }

    const double h = std::min(1e-3, 0.1 / p.c);
    const double T_guess = p.T > 0.0 ? p.T : cert.T_lower;
    const UpperRun probe = run_upper(p.c, cert.d2, std::max(T_guess, 1.0) + p.upper_window, h);
    cert.T_upper = probe.T_upper;
    cert.T = p.T > 0.0 ? p.T : std::max(cert.T_lower, std::max(cert.T_upper, 0.0));
    if (cert.T > t) {
        advance_to(cert.T);
        cert.T = t;
    }
    cert.min_v_lower = min_inner();
    cert.lower_ok = cert.min_v_lower > p.d1;

    const UpperRun upper = run_upper(p.c, cert.d2, cert.T + p.upper_window, h);
    cert.max_v_upper = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < upper.times.size(); ++i)
        if (upper.times[i] >= cert.T - 1e-12) cert.max_v_upper = std::max(cert.max_v_upper, upper.v[i]);
    cert.upper_ok = cert.max_v_upper < cert.d2;

    if (cert.lower_ok && cert.upper_ok) {
        cert.verdict = StarVerdict::Pass;
    } else {
        cert.verdict = StarVerdict::Inconclusive;
        cert.note = cert.lower_ok ? "upper bound not met on the window" : "lower bound lost at the upper time";
    }
    return cert;
}

}  // namespace stirred::cstar
