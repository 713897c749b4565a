#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "stirred/condition_star.hpp"
#include "stirred/errors.hpp"
#include "stirred/profile.hpp"

namespace stirred::cstar {

namespace {

void flow_eta_pointwise(std::vector<double>& u, std::vector<double>& v, double c, double h) {
    namespace ode = boost::numeric::odeint;
    using State = std::vector<double>;
    auto rhs = [c](const State& y, State& dy, double) {
        const Point e = eta(y[0], y[1], c);
        dy[0] = e.u;
        dy[1] = e.v;
    };
    auto stepper = ode::make_controlled(1e-12, 1e-9, ode::runge_kutta_dopri5<State>());
    State y(2);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] == 0.0 && v[i] == 0.0) continue;  // fixed point
        y[0] = u[i];
        y[1] = v[i];
        ode::integrate_adaptive(stepper, rhs, y, 0.0, h, h / 4.0);
        u[i] = y[0];
        v[i] = y[1];
    }
}

}  // namespace

TrotterResult trotter_run_fields(std::vector<double> x, std::vector<double> u0, std::vector<double> v0, double c,
                                 double t, int n) {
    if (n < 1) throw ConfigError("trotter_run needs n >= 1");
    if (x.size() < 2 || u0.size() != x.size() || v0.size() != x.size())
        throw ConfigError("trotter_run needs matching grids with at least two points");
    if (!(t > 0.0)) throw ConfigError("trotter_run needs t > 0");
    const double dx = x[1] - x[0];
    const double h = t / n;
    TrotterResult r{std::move(x), std::move(u0), std::move(v0)};
    for (int k = 0; k < n; ++k) {
        flow_eta_pointwise(r.u, r.v, c, h);
        r.u = heat_step(r.u, h, dx);
        r.v = heat_step(r.v, h, dx);
    }
    return r;
}

TrotterResult trotter_run(double a0, double b0, double L, double l, double c, double t, int n, double dx,
                          double half_width) {
    if (!(dx > 0.0) || !(half_width > L + l)) throw ConfigError("trotter grid must cover the bump");
    const auto half = static_cast<long>(std::ceil(half_width / dx));
    std::vector<double> x, u, v;
    for (long k = -half; k <= half; ++k) {
        const double xk = k * dx;
        const double f = bump_f0(xk, L, l);
        x.push_back(xk);
        u.push_back(a0 * f);
        v.push_back(b0 * f);
    }
    return trotter_run_fields(std::move(x), std::move(u), std::move(v), c, t, n);
}

}  // namespace stirred::cstar
