#include "stirred/pde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "stirred/errors.hpp"

namespace stirred::pde {

const char* to_string(System s) {
    switch (s) {
        case System::Sys9: return "sys9";
        case System::Sys10: return "sys10";
        case System::Sys11: return "sys11";
        case System::Sys12: return "sys12";
        case System::Sys12WithDeaths: return "sys12-deaths";
        case System::Contact: return "contact";
        case System::Individual2: return "individual2";
        case System::Heat: return "heat";
    }
    return "?";
}

System parse_system(const std::string& name) {
    for (System s : {System::Sys9, System::Sys10, System::Sys11, System::Sys12, System::Sys12WithDeaths,
                     System::Contact, System::Individual2, System::Heat}) {
        if (name == to_string(s)) return s;
    }
    throw ConfigError("unknown system '" + name + "'");
}

int ReactionSpec::components() const {
    switch (system) {
        case System::Sys9:
        case System::Sys12:
        case System::Sys12WithDeaths: return 4;
        case System::Sys10:
        case System::Individual2: return 2;
        case System::Sys11:
        case System::Contact:
        case System::Heat: return 1;
    }
    return 1;
}

std::vector<std::string> ReactionSpec::names() const {
    switch (system) {
        case System::Sys9:
        case System::Sys12:
        case System::Sys12WithDeaths: return {"u00", "u01", "u10", "u11"};
        case System::Sys10: return {"u", "v"};
        case System::Individual2: return {"u1", "u2"};
        default: return {"u"};
    }
}

void ReactionSpec::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be finite and >= 0");
    if (dim_d < 1) throw ConfigError("d must be >= 1");
    if (beta_coeff < 0.0) throw ConfigError("beta coefficient must be >= 0");
}

State4 rhs_sys9(const State4& u, double lambda, int d) {
    const double k = 2.0 * lambda * d;
    const auto [u00, u01, u10, u11] = u;
    return {u01 + u10 - 2.0 * k * u00 * u11,
            u11 - u01 + k * (u00 - u01) * u11,
            u11 - u10 + k * (u00 - u10) * u11,
            -2.0 * u11 + k * (u01 + u10) * u11};
}

std::pair<double, double> rhs_sys10(double u, double v, double c) {
    return {(2.0 * c * (1.0 - u) + 1.0) * v - u, (c * (u - v) - 2.0) * v};
}

double rhs_sys11(double u, double beta) { return -u + beta * (1.0 - u) * u * u; }

State4 rhs_sys12(const State4& u, double lambda, int d) {
    const double n = 2.0 * d;
    const auto [u00, u01, u10, u11] = u;
    const double pp = (u01 + u11) * (u10 + u11);
    const double a = lambda * n * n;
    const double b = lambda * n * (n + 1.0);
    return {-2.0 * a * u00 * pp,
            -b * u01 * pp + a * u00 * pp,
            -b * u10 * pp + a * u00 * pp,
            -b * (u01 + u10) * pp};
}

State4 rhs_sys12_with_deaths(const State4& u, double lambda, int d) {
    const double n = 2.0 * d;
    const auto [u00, u01, u10, u11] = u;
    const double pp = (u01 + u11) * (u10 + u11);
    const double a = lambda * n * n;
    const double b = lambda * n * (n + 1.0);
    return {u01 + u10 - 2.0 * a * u00 * pp,
            u11 - u01 + a * u00 * pp - b * u01 * pp,
            u11 - u10 + a * u00 * pp - b * u10 * pp,
            -2.0 * u11 + b * (u01 + u10) * pp};
}

double rhs_contact(double u, double beta) { return -u + beta * (1.0 - u) * u; }

std::pair<double, double> rhs_individual2(double u1, double u2, double beta) {
    return {-u1 + beta * (1.0 - u1) * u1 * u2, -u2 + beta * (1.0 - u2) * u1 * u2};
}

void reaction(const ReactionSpec& spec, const double* in, double* out) {
    switch (spec.system) {
        case System::Sys9:
        case System::Sys12:
        case System::Sys12WithDeaths: {
            const State4 s{in[0], in[1], in[2], in[3]};
            const State4 r = spec.system == System::Sys9    ? rhs_sys9(s, spec.lambda, spec.dim_d)
                             : spec.system == System::Sys12 ? rhs_sys12(s, spec.lambda, spec.dim_d)
                                                            : rhs_sys12_with_deaths(s, spec.lambda, spec.dim_d);
            std::copy(r.begin(), r.end(), out);
            return;
        }
        case System::Sys10: {
            const auto [du, dv] = rhs_sys10(in[0], in[1], spec.c());
            out[0] = du;
            out[1] = dv;
            return;
        }
        case System::Sys11: out[0] = rhs_sys11(in[0], spec.beta()); return;
        case System::Contact: out[0] = rhs_contact(in[0], spec.beta()); return;
        case System::Individual2: {
            const auto [a, b] = rhs_individual2(in[0], in[1], spec.beta());
            out[0] = a;
            out[1] = b;
            return;
        }
        case System::Heat: out[0] = 0.0; return;
    }
}

std::pair<double, double> sys11_roots(double beta) {
    if (!(beta >= 4.0)) throw NoRootsError("Sys11 has no nonzero roots for beta < 4");
    const double s = std::sqrt(std::max(0.0, 1.0 - 4.0 / beta));
    return {0.5 * (1.0 - s), 0.5 * (1.0 + s)};
}

namespace {

template <class F>
double bisect(F&& g, double a, double b, double tol = 1e-12) {
    double ga = g(a);
    for (int it = 0; it < 200 && b - a > tol; ++it) {
        const double m = a + 0.5 * (b - a);
        const double gm = g(m);
        if ((gm <= 0.0) == (ga <= 0.0)) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    return a + 0.5 * (b - a);
}

}  // namespace

std::vector<std::pair<double, double>> sys10_fixed_points(double c) {
    std::vector<std::pair<double, double>> out;
    if (!(c >= 4.0)) return out;
    // On dv = 0 with v > 0 we have v = u - 2/c; du = 0 reduces to g(u) = 0.
    auto g = [c](double u) { return (2.0 * c * (1.0 - u) + 1.0) * (u - 2.0 / c) - u; };
    const double vertex = (c + 2.0) / (2.0 * c);  // g is a downward parabola peaking here
    const double lo = 2.0 / c;
    if (g(vertex) < 0.0) return out;
    if (g(vertex) == 0.0) {
        out.emplace_back(vertex, vertex - 2.0 / c);
        return out;
    }
    if (g(lo) <= 0.0) {
        const double um = bisect(g, lo, vertex);
        out.emplace_back(um, um - 2.0 / c);
    }
    if (g(1.0) <= 0.0) {
        const double up = bisect(g, vertex, 1.0);
        out.emplace_back(up, up - 2.0 / c);
    }
    return out;
}

double contact_root(double beta) {
    if (!(beta > 1.0)) throw NoRootsError("contact reaction has no positive root for beta <= 1");
    return 1.0 - 1.0 / beta;
}

double wave_integral_criterion(double beta, int panels) {
    if (!(beta > 4.0)) throw NoRootsError("wave integral needs beta > 4");
    if (panels < 2) throw ConfigError("Simpson needs at least two panels");
    if (panels % 2) ++panels;
    const double rho0 = sys11_roots(beta).second;
    const double h = rho0 / panels;
    double s = rhs_sys11(0.0, beta) + rhs_sys11(rho0, beta);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * rhs_sys11(i * h, beta);
    return s * h / 3.0;
}

double wave_integral_root(double lo, double hi, int panels) {
    if (!(lo > 4.0 && lo < hi)) throw ConfigError("wave_integral_root needs 4 < lo < hi");
    auto g = [panels](double b) { return wave_integral_criterion(b, panels); };
    if ((g(lo) > 0.0) == (g(hi) > 0.0)) throw NoRootsError("wave integral does not change sign on the interval");
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(
        g, lo, hi, [](double a, double b) { return std::abs(b - a) < 1e-13; }, iters);
    return 0.5 * (r.first + r.second);
}

double sys11_front_speed(double beta) {
    const auto [r1, r0] = sys11_roots(beta);
    return std::sqrt(beta / 2.0) * (r0 - 2.0 * r1);
}

std::vector<double> integrate_reaction(const ReactionSpec& spec, std::vector<double> y0, double t,
                                       double rel_tol) {
    namespace ode = boost::numeric::odeint;
    if (static_cast<int>(y0.size()) != spec.components()) throw ConfigError("state size mismatch");
    if (t <= 0.0) return y0;
    auto rhs = [&spec](const std::vector<double>& y, std::vector<double>& dy, double) {
        dy.resize(y.size());
        reaction(spec, y.data(), dy.data());
    };
    auto stepper = ode::make_controlled(rel_tol * 1e-2, rel_tol, ode::runge_kutta_dopri5<std::vector<double>>());
    ode::integrate_adaptive(stepper, rhs, y0, 0.0, t, std::min(1e-3, t));
    return y0;
}

std::optional<std::vector<double>> occupied_equilibrium(const ReactionSpec& spec) {
    std::vector<double> y;
    switch (spec.system) {
        case System::Sys9:
        case System::Sys12:
        case System::Sys12WithDeaths: y = {0.0, 0.0, 0.0, 1.0}; break;
        case System::Sys10:
        case System::Individual2: y = {1.0, 1.0}; break;
        case System::Heat: return std::nullopt;
        default: y = {1.0}; break;
    }
    std::vector<double> prev = y;
    for (int round = 0; round < 200; ++round) {
        y = integrate_reaction(spec, y, 50.0);
        double diff = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            diff = std::max(diff, std::abs(y[i] - prev[i]));
        }
        const double occupied = y.back();
        if (occupied < 1e-9) return std::nullopt;
        if (diff < 1e-12) return y;
        prev = y;
    }
    return y;
}

void Grid::validate() const {
    if (dim != 1 && dim != 2) throw ConfigError("grid dimension must be 1 or 2");
    if (nx < 3 || (dim == 2 && ny < 3)) throw ConfigError("grid needs at least 3 points per axis");
    if (!(dx > 0.0)) throw ConfigError("dx must be positive");
    if (radial_dim != 0) {
        if (radial_dim < 2 || radial_dim > 3) throw ConfigError("radial dimension must be 2 or 3");
        if (dim != 1 || x0 != 0.0 || bc != Boundary::Neumann)
            throw ConfigError("radial grids are 1D, start at r = 0 and use Neumann ends");
    }
}

std::vector<double>& PdeField::operator[](const std::string& name) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return data[i];
    throw ConfigError("no component named '" + name + "'");
}

const std::vector<double>& PdeField::operator[](const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return data[i];
    throw ConfigError("no component named '" + name + "'");
}

PdeField make_field(const ReactionSpec& spec, const Grid& grid) {
    grid.validate();
    PdeField f;
    f.grid = grid;
    f.names = spec.names();
    f.data.assign(f.names.size(), std::vector<double>(grid.size(), 0.0));
    return f;
}

double stability_limit(double dx, int dim) { return 0.4 * dx * dx / (2.0 * dim); }

void laplacian_1d(const std::vector<double>& u, double dx, Boundary bc, std::vector<double>& out) {
    const std::size_t n = u.size();
    out.resize(n);
    const double k = 1.0 / (dx * dx);
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * k;
    if (bc == Boundary::Neumann) {
        out[0] = 2.0 * (u[1] - u[0]) * k;
        out[n - 1] = 2.0 * (u[n - 2] - u[n - 1]) * k;
    } else {
        out[0] = (u[n - 1] - 2.0 * u[0] + u[1]) * k;
        out[n - 1] = (u[n - 2] - 2.0 * u[n - 1] + u[0]) * k;
    }
}

RdStepper::RdStepper(ReactionSpec spec, const Grid& grid, double dt) : spec_(spec), grid_(grid), dt_(dt) {
    spec_.validate();
    grid_.validate();
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (dt > stability_limit(grid.dx, grid.stencil_dim()) * (1.0 + 1e-12))
        throw ConfigError("dt exceeds the explicit stability limit 0.4 dx^2 / (2 dim)");
    next_.assign(static_cast<std::size_t>(spec_.components()), std::vector<double>(grid_.size()));
}

namespace {

inline int wrap(int i, int n, Boundary bc) {
    if (i < 0) return bc == Boundary::Neumann ? 1 : n - 1;
    if (i >= n) return bc == Boundary::Neumann ? n - 2 : 0;
    return i;
}

}  // namespace

void RdStepper::step(PdeField& f) {
    const int nc = spec_.components();
    if (static_cast<int>(f.data.size()) != nc || f.grid.size() != grid_.size())
        throw ConfigError("field does not match the stepper");
    const double k = 1.0 / (grid_.dx * grid_.dx);
    const int nx = grid_.nx;
    const int ny = grid_.dim == 2 ? grid_.ny : 1;
    const Boundary bc = grid_.bc;
    double in[4];
    double r[4];
    for (int j = 0; j < ny; ++j) {
        const int jm = grid_.dim == 2 ? wrap(j - 1, ny, bc) : 0;
        const int jp = grid_.dim == 2 ? wrap(j + 1, ny, bc) : 0;
        for (int i = 0; i < nx; ++i) {
            const int im = wrap(i - 1, nx, bc);
            const int ip = wrap(i + 1, nx, bc);
            const std::size_t p = static_cast<std::size_t>(j) * nx + i;
            for (int c = 0; c < nc; ++c) in[c] = f.data[c][p];
            reaction(spec_, in, r);
            for (int c = 0; c < nc; ++c) {
                const auto& u = f.data[c];
                double lap = u[static_cast<std::size_t>(j) * nx + im] + u[static_cast<std::size_t>(j) * nx + ip] -
                             2.0 * u[p];
                if (grid_.dim == 2)
                    lap += u[static_cast<std::size_t>(jm) * nx + i] + u[static_cast<std::size_t>(jp) * nx + i] -
                           2.0 * u[p];
                if (grid_.radial_dim > 0) {
                    // (k-1)/r d/dr; at r = 0 the Laplacian is k u_rr.
                    if (i == 0) lap *= grid_.radial_dim;
                    else lap += (grid_.radial_dim - 1) * (u[ip] - u[im]) / (2.0 * i);
                }
                const double val = u[p] + dt_ * (lap * k + r[c]);
                if (!(val >= -kRangeTol && val <= 1.0 + kRangeTol))
                    throw InstabilityError("explicit step left [0,1] in component " + f.names[c] + ": " +
                                           std::to_string(val));
                next_[c][p] = val;
            }
        }
    }
    for (int c = 0; c < nc; ++c) f.data[c].swap(next_[c]);
}

void RdStepper::advance(PdeField& f, double t) {
    if (t <= 0.0) return;
    const double saved = dt_;
    const auto n = static_cast<long>(std::ceil(t / saved - 1e-9));
    dt_ = t / static_cast<double>(n);
    try {
        for (long s = 0; s < n; ++s) step(f);
    } catch (...) {
        dt_ = saved;
        throw;
    }
    dt_ = saved;
}

void step_rd(PdeField& f, const ReactionSpec& spec, double dt) {
    RdStepper s(spec, f.grid, dt);
    s.step(f);
}

}  // namespace stirred::pde
