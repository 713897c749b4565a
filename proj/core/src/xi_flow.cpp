#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "stirred/errors.hpp"
#include "stirred/flow_geometry.hpp"

namespace stirred::cstar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// a u + b v = g; `snap` says how to put a point exactly on the line.
struct Line {
    double a, b, g;
    enum class Snap { LowerDiagonal, Sliding, Vertical, Horizontal } snap;
};

std::vector<Line> region_lines(const FlowGeometry& g) {
    return {{-g.eps_prime, 1.0, 0.0, Line::Snap::LowerDiagonal},
            {1.0, -g.slope, 0.0, Line::Snap::Sliding},
            {1.0, 0.0, g.u_right, Line::Snap::Vertical},
            {1.0, 0.0, g.u_max, Line::Snap::Vertical},
            {0.0, 1.0, g.eps_prime, Line::Snap::Horizontal},
            {0.0, 1.0, g.v_top, Line::Snap::Horizontal}};
}

Point snap_to(const Line& l, Point p, const FlowGeometry& g) {
    switch (l.snap) {
        case Line::Snap::LowerDiagonal: p.v = g.eps_prime * p.u; break;
        case Line::Snap::Sliding: p.u = g.slope * p.v; break;
        case Line::Snap::Vertical: p.u = l.g / l.a; break;
        case Line::Snap::Horizontal: p.v = l.g / l.b; break;
    }
    return p;
}

// Exponents of the diagonal linear flow (u e^{a t}, v e^{b t}) in region r.
std::pair<double, double> rates(Region r, const FlowGeometry& g) {
    switch (r) {
        case Region::R1:
        case Region::R2: return {g.F1, -2.0};
        case Region::L1: return {g.F2, g.F2};
        case Region::R3: return {0.0, g.F2};
        case Region::R4: return {-1.0, g.F2};
        case Region::Eta: break;
    }
    return {0.0, 0.0};
}

Point evolve(Region r, const Point& p, double t, const FlowGeometry& g) {
    const auto [a, b] = rates(r, g);
    Point q{p.u * std::exp(a * t), p.v * std::exp(b * t)};
    if (r == Region::L1) q.u = g.slope * q.v;
    return q;
}

double positive_log_ratio(double ratio, double rate) {
    if (!(ratio > 0.0) || !std::isfinite(ratio) || rate == 0.0) return kInf;
    const double t = std::log(ratio) / rate;
    return t > 0.0 ? t : kInf;
}

double crossing_time(const Line& l, const Point& p, double a, double b) {
    const double g0 = l.a * p.u + l.b * p.v - l.g;
    if (std::abs(g0) <= 1e-13) return kInf;
    if (l.a == 0.0) return p.v == 0.0 ? kInf : positive_log_ratio(l.g / (l.b * p.v), b);
    if (l.b == 0.0) return p.u == 0.0 ? kInf : positive_log_ratio(l.g / (l.a * p.u), a);
    if (p.u == 0.0) return kInf;
    return positive_log_ratio(-l.b * p.v / (l.a * p.u), a - b);
}

struct Attempt {
    bool ok = false;
    Point end;
    double used = 0.0;
};

Attempt try_linear(Region r, const Point& start, double remaining, const std::vector<Line>& lines,
                   const FlowGeometry& g) {
    Point p = start;
    if (r == Region::L1) p.u = g.slope * p.v;
    const auto [a, b] = rates(r, g);
    double tc = kInf;
    const Line* hit = nullptr;
    for (const auto& l : lines) {
        const double t = crossing_time(l, p, a, b);
        if (t < tc) {
            tc = t;
            hit = &l;
        }
    }
    const double h = std::min(tc, remaining);
    const Point mid = evolve(r, p, 0.5 * h, g);
    if (classify(mid.u, mid.v, g) != r) return {};
    Point q = evolve(r, p, h, g);
    if (tc <= remaining && hit) q = snap_to(*hit, q, g);
    return {true, q, h};
}

Attempt try_eta(const Point& start, double remaining, double c, const FlowGeometry& g) {
    namespace ode = boost::numeric::odeint;
    using State = std::vector<double>;
    auto rhs = [c](const State& x, State& dx, double) {
        const Point e = eta(x[0], x[1], c);
        dx[0] = e.u;
        dx[1] = e.v;
    };
    auto stepper = ode::make_dense_output(1e-14, 1e-12, ode::runge_kutta_dopri5<State>());
    State x0{start.u, start.v};
    stepper.initialize(x0, 0.0, std::min(1e-8, remaining));
    State probe(2);
    auto outside = [&](double t) {
        stepper.calc_state(t, probe);
        return classify(probe[0], probe[1], g) != Region::Eta;
    };
    while (true) {
        const double t_prev = stepper.current_time();
        stepper.do_step(rhs);
        const double t_check = std::min(stepper.current_time(), remaining);
        if (outside(t_check)) {
            double lo = t_prev;
            double hi = t_check;
            for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
                const double mid = lo + 0.5 * (hi - lo);
                if (outside(mid)) hi = mid;
                else lo = mid;
            }
            if (hi <= 1e-15) return {};
            stepper.calc_state(hi, probe);
            return {true, {probe[0], probe[1]}, hi};
        }
        if (stepper.current_time() >= remaining) {
            stepper.calc_state(remaining, probe);
            return {true, {probe[0], probe[1]}, remaining};
        }
    }
}

}  // namespace

Point flow_xi_traced(double s, const Point& start, double c, const FlowGeometry& g, std::vector<FlowSegment>* trace) {
    if (!(s >= 0.0)) throw ConfigError("flow time must be nonnegative");
    if (!(start.v >= -1e-12 && start.v <= start.u + 1e-12 && start.u <= 1.0 + 1e-12))
        throw ConfigError("flow_xi start point outside the triangle 0 <= v <= u <= 1");
    const auto lines = region_lines(g);
    Point p = start;
    double t = 0.0;
    double remaining = s;
    for (int iter = 0; remaining > 0.0; ++iter) {
        if (iter > 100000) throw InvariantViolation("xi flow did not terminate");
        const Region here = classify(p.u, p.v, g);
        std::vector<Region> candidates{here};
        for (Region r : kLinearRegions)
            if (r != here && in_closure(r, p.u, p.v, g)) candidates.push_back(r);
        if (here != Region::Eta) candidates.push_back(Region::Eta);

        Attempt done;
        Region used = here;
        for (Region r : candidates) {
            done = r == Region::Eta ? try_eta(p, remaining, c, g) : try_linear(r, p, remaining, lines, g);
            if (done.ok) {
                used = r;
                break;
            }
        }
        if (!done.ok)
            throw InvariantViolation("xi flow has no consistent region at (" + std::to_string(p.u) + ", " +
                                     std::to_string(p.v) + ")");
        if (trace) trace->push_back({used, t, t + done.used, p, done.end});
        p = done.end;
        t += done.used;
        remaining = done.used >= remaining ? 0.0 : remaining - done.used;
    }
    return p;
}

Point flow_xi(double s, const Point& p, double c, const FlowGeometry& g) { return flow_xi_traced(s, p, c, g, nullptr); }

}  // namespace stirred::cstar
