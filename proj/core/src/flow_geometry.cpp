#include "stirred/flow_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stirred/errors.hpp"

namespace stirred::cstar {

Point eta(double u, double v, double c) { return {(2.0 * c * (1.0 - u) + 1.0) * v - u, (c * (u - v) - 2.0) * v}; }

double FlowGeometry::s0() const { return std::min(std::log(12.0 / 11.0) / F2, std::log(45.0 / 23.0) / (F1 + 2.0)); }

bool ratio_condition_holds(const FlowGeometry& g) {
    const bool integral = g.K1 == std::floor(g.K1) && g.K2 == std::floor(g.K2) && g.K1 < 1e9 && g.K2 < 1e9;
    if (integral) {
        // K1 * 199^2 > 21 * 200^2 * K2
        const long long lhs = static_cast<long long>(g.K1) * 199LL * 199LL;
        const long long rhs = 21LL * 200LL * 200LL * static_cast<long long>(g.K2);
        return lhs > rhs;
    }
    return g.K1 / g.K2 > 21.0 * (200.0 / 199.0) * (200.0 / 199.0);
}

double growth_bound_margin(const FlowGeometry& g) {
    return std::min(g.F1 - 8.0, 5.1 * g.F2) / (2.0 * std::sqrt(17.0)) - g.K1;
}

const char* to_string(Region r) {
    switch (r) {
        case Region::R1: return "R1";
        case Region::R2: return "R2";
        case Region::L1: return "L1";
        case Region::R3: return "R3";
        case Region::R4: return "R4";
        case Region::Eta: return "eta";
    }
    return "?";
}

Region classify(double u, double v, const FlowGeometry& g) {
    const double ep = g.eps_prime;
    if (ep * u < v && v <= ep && u <= g.u_right) return Region::R1;
    if (ep < v && v <= g.v_top && u < g.slope * v) return Region::R2;
    if (u == g.slope * v && v >= ep && v <= g.v_top) return Region::L1;
    if ((g.slope * v < u && u < g.u_right && ep < v && v < g.v_top) ||
        (u == g.u_right && v >= ep && v <= g.v_top))
        return Region::R3;
    if (g.u_right < u && u < g.u_max && ep < v && v < g.v_top) return Region::R4;
    return Region::Eta;
}

bool in_closure(Region r, double u, double v, const FlowGeometry& g, double tol) {
    const double ep = g.eps_prime;
    switch (r) {
        case Region::R1: return v >= ep * u - tol && v <= ep + tol && u <= g.u_right + tol;
        case Region::R2: return v >= ep - tol && v <= g.v_top + tol && u <= g.slope * v + tol;
        case Region::L1: return std::abs(u - g.slope * v) <= tol && v >= ep - tol && v <= g.v_top + tol;
        case Region::R3:
            return u >= g.slope * v - tol && u <= g.u_right + tol && v >= ep - tol && v <= g.v_top + tol;
        case Region::R4: return u >= g.u_right - tol && u <= g.u_max + tol && v >= ep - tol && v <= g.v_top + tol;
        case Region::Eta: return true;
    }
    return false;
}

Point region_field(Region r, double u, double v, double c, const FlowGeometry& g) {
    switch (r) {
        case Region::R1:
        case Region::R2: return {g.F1 * u, -2.0 * v};
        case Region::L1: return {g.slope * g.F2 * v, g.F2 * v};
        case Region::R3: return {0.0, g.F2 * v};
        case Region::R4: return {-u, g.F2 * v};
        case Region::Eta: return eta(u, v, c);
    }
    return {};
}

Point xi(double u, double v, double c, const FlowGeometry& g) { return region_field(classify(u, v, g), u, v, c, g); }

DominationCertificate verify_domination(double c, int grid_n, const FlowGeometry& g) {
    if (!(c >= 1.0)) throw ConfigError("verify_domination needs c >= 1");
    if (grid_n < 100) throw ConfigError("verify_domination needs grid_n >= 100");
    constexpr double kTol = 1e-12;
    DominationCertificate cert;
    cert.c = c;
    cert.grid_n = grid_n;
    for (Region r : kLinearRegions) {
        RegionMargin rm;
        rm.region = r;
        rm.worst_scaled_u = std::numeric_limits<double>::infinity();
        cert.per_region.push_back(rm);
    }
    bool first = true;

    auto evaluate = [&](double u, double v) {
        if (v < -kTol || v > u + kTol || u > 1.0 + kTol) return;
        const Point e = eta(u, v, c);
        for (std::size_t k = 0; k < kLinearRegions.size(); ++k) {
            const Region r = kLinearRegions[k];
            if (!in_closure(r, u, v, g)) continue;
            const Point x = region_field(r, u, v, c, g);
            const double m1 = e.u - x.u;
            const double m2 = e.v - x.v;
            auto& rm = cert.per_region[k];
            if (rm.evaluations == 0 || m1 < rm.worst_margin_u) {
                rm.worst_margin_u = m1;
                rm.witness_u = {u, v};
            }
            if (rm.evaluations == 0 || m2 < rm.worst_margin_v) {
                rm.worst_margin_v = m2;
                rm.witness_v = {u, v};
            }
            if (u > 0.0) {
                const double scaled = m1 / u;
                if (scaled < rm.worst_scaled_u) rm.worst_scaled_u = scaled;
            }
            ++rm.evaluations;
            ++cert.evaluations;
            for (int comp = 1; comp <= 2; ++comp) {
                const double m = comp == 1 ? m1 : m2;
                if (first || m < cert.worst_margin) {
                    first = false;
                    cert.worst_margin = m;
                    cert.witness = {u, v};
                    cert.witness_component = comp;
                    cert.witness_region = r;
                }
            }
        }
    };

    const double n = grid_n;
    for (int i = 0; i <= grid_n; ++i)
        for (int j = 0; j <= i; ++j) evaluate(i / n, j / n);

    // Region edges, parameterised so that points land exactly on the lines
    // used by classify().
    const double ep = g.eps_prime;
    for (int k = 0; k <= grid_n; ++k) {
        const double t = k / n;
        const double u1 = g.u_right * t;
        evaluate(u1, ep * u1);                                   // v = eps' u
        evaluate(ep + (g.u_max - ep) * t, ep);                   // v = eps'
        evaluate(g.v_top + (g.u_max - g.v_top) * t, g.v_top);    // v = 0.6
        const double v2 = ep + (g.v_top - ep) * t;
        evaluate(g.slope * v2, v2);                              // u = 1.1 v
        evaluate(g.u_right, ep * g.u_right + (g.v_top - ep * g.u_right) * t);  // u = 0.9
        evaluate(g.u_max, t);                                    // u = 1
        evaluate(t, t);                                          // u = v
    }
    const Point corners[] = {{0, 0},
                             {ep, ep},
                             {g.slope * ep, ep},
                             {g.u_right, ep * g.u_right},
                             {g.u_right, ep},
                             {g.u_max, ep},
                             {g.v_top, g.v_top},
                             {g.slope * g.v_top, g.v_top},
                             {g.u_right, g.v_top},
                             {g.u_max, g.v_top},
                             {g.u_max, g.u_max}};
    for (const auto& p : corners) evaluate(p.u, p.v);

    cert.pass = cert.worst_margin >= -kTol;
    return cert;
}

Polyline gamma_theta(double theta, const FlowGeometry& g) {
    if (!(theta >= g.theta_min - 1e-12 && theta <= g.theta_max + 1e-12))
        throw ConfigError("theta outside [" + std::to_string(g.theta_min) + ", " + std::to_string(g.theta_max) + "]");
    const double k = 1.0 + theta;
    return {{k * g.A.u, k * g.A.v}, {k * g.B.u, k * g.B.v}, {g.C.u, k * g.C.v}, {g.D.u, k * g.D.v}};
}

namespace {

double seg_len(const Point& a, const Point& b) { return std::hypot(b.u - a.u, b.v - a.v); }

}  // namespace

Point point_on(const Polyline& poly, double t) {
    const Point pts[] = {poly.A, poly.B, poly.C, poly.D};
    const double lens[] = {seg_len(pts[0], pts[1]), seg_len(pts[1], pts[2]), seg_len(pts[2], pts[3])};
    const double total = lens[0] + lens[1] + lens[2];
    double target = std::clamp(t, 0.0, 1.0) * total;
    for (int k = 0; k < 3; ++k) {
        if (target <= lens[k] || k == 2) {
            const double f = lens[k] > 0.0 ? std::min(1.0, target / lens[k]) : 0.0;
            return {pts[k].u + f * (pts[k + 1].u - pts[k].u), pts[k].v + f * (pts[k + 1].v - pts[k].v)};
        }
        target -= lens[k];
    }
    return poly.D;
}

double distance_to(const Polyline& poly, const Point& p) {
    const Point pts[] = {poly.A, poly.B, poly.C, poly.D};
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
        const Point a = pts[k];
        const Point b = pts[k + 1];
        const double du = b.u - a.u;
        const double dv = b.v - a.v;
        const double len2 = du * du + dv * dv;
        double f = len2 > 0.0 ? ((p.u - a.u) * du + (p.v - a.v) * dv) / len2 : 0.0;
        f = std::clamp(f, 0.0, 1.0);
        best = std::min(best, std::hypot(p.u - (a.u + f * du), p.v - (a.v + f * dv)));
    }
    return best;
}

Point ray_intersection(const Point& q, const Polyline& poly) {
    if (q.u == 0.0 && q.v == 0.0) throw NoIntersection("ray direction is zero");
    const Point pts[] = {poly.A, poly.B, poly.C, poly.D};
    constexpr double kTol = 1e-12;
    for (int k = 0; k < 3; ++k) {
        const Point p = pts[k];
        const double du = pts[k + 1].u - p.u;
        const double dv = pts[k + 1].v - p.v;
        // Solve t q = p + tau d.
        const double det = -q.u * dv + du * q.v;
        if (std::abs(det) < 1e-300) continue;
        const double t = (-p.u * dv + du * p.v) / det;
        const double tau = (q.u * p.v - q.v * p.u) / det;
        if (t > 0.0 && tau >= -kTol && tau <= 1.0 + kTol) {
            const double f = std::clamp(tau, 0.0, 1.0);
            return {p.u + f * du, p.v + f * dv};
        }
    }
    throw NoIntersection("ray through (" + std::to_string(q.u) + ", " + std::to_string(q.v) +
                         ") misses gamma_theta");
}

Point phi_theta(double s, double theta, const Point& p, double c, const FlowGeometry& g) {
    const Polyline poly = gamma_theta(theta, g);
    const Point q = flow_xi(s, p, c, g);
    return ray_intersection(q, poly);
}

}  // namespace stirred::cstar
