#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace stirred::cstar {

struct Point {
    double u = 0.0;
    double v = 0.0;
};

/// Reaction field of the lily-pad system,
/// eta = ((2c(1-u) + 1) v - u, (c(u - v) - 2) v).
Point eta(double u, double v, double c);

/// Constants of the comparison field xi and of the curves gamma_theta.
struct FlowGeometry {
    Point A{0.51, 0.51};
    Point B{0.55, 0.5};
    Point C{0.9, 0.5};
    Point D{1.0, 0.5};
    double theta_min = -0.54;
    double theta_max = 0.2;
    double F1 = 400.0;
    double F2 = 75.0;
    double K1 = 44.0;
    double K2 = 2.0;
    double eps = 0.24;
    double eps_prime = 0.23;
    double v_top = 0.6;     ///< upper edge of the linear regions
    double slope = 1.1;     ///< the sliding line is u = slope * v
    double u_right = 0.9;   ///< left edge of the rectangle
    double u_max = 1.0;
    /// Printed value of pi_v(A'') (inconsistent with A'' = 1.2 A).
    double pi_v_A2_printed = 0.2346;

    /// min(ln(12/11)/F2, ln(45/23)/(F1 + 2)).
    double s0() const;
    /// Point P scaled by (1 + theta) as on the curve gamma_theta.
    Point scaled(const Point& p, double theta) const { return {(1.0 + theta) * p.u, (1.0 + theta) * p.v}; }
    /// Largest theta with gamma_theta inside {v <= v_top e^{-F2 s0}}, the set
    /// from which the flow stays below v_top for times up to s0 (4/51 for
    /// the shipped constants). For larger theta the corner A_theta flows
    /// out of the linear regions before s0.
    double theta0() const { return v_top * std::exp(-F2 * s0()) / A.v - 1.0; }
    /// pi_v of A_{theta_max}.
    double pi_v_A2_computed() const { return (1.0 + theta_max) * A.v; }
};

/// K1/K2 > 21 (200/199)^2 in exact integer arithmetic, valid when K1 and K2
/// are integers (the shipped constants); otherwise evaluated in doubles.
bool ratio_condition_holds(const FlowGeometry& g);
/// (1/(2 sqrt 17)) min(F1 - 8, 5.1 F2) - K1; nonnegative when the
/// directional growth bound holds.
double growth_bound_margin(const FlowGeometry& g);

enum class Region { R1, R2, L1, R3, R4, Eta };
const char* to_string(Region r);
inline constexpr std::array<Region, 5> kLinearRegions{Region::R1, Region::R2, Region::L1, Region::R3, Region::R4};

/// Region membership with ties resolved in the order R1, R2, L1, R3, R4,
/// then Eta. Exact comparisons; points on the sliding line must satisfy
/// u == slope * v bitwise to count as L1.
Region classify(double u, double v, const FlowGeometry& g);

/// True if (u, v) lies in the closure of region r, up to `tol`.
bool in_closure(Region r, double u, double v, const FlowGeometry& g, double tol = 1e-12);

/// Field prescribed for region r, evaluated at (u, v) (Eta needs c).
Point region_field(Region r, double u, double v, double c, const FlowGeometry& g);

/// The comparison field xi at (u, v).
Point xi(double u, double v, double c, const FlowGeometry& g);

struct RegionMargin {
    Region region = Region::R1;
    long evaluations = 0;
    double worst_margin_u = 0.0;  ///< min eta_1 - xi_1
    double worst_margin_v = 0.0;  ///< min eta_2 - xi_2
    double worst_scaled_u = 0.0;  ///< min (eta_1 - xi_1)/u over points with u > 0
    Point witness_u;
    Point witness_v;
};

struct DominationCertificate {
    bool pass = true;
    double c = 0.0;
    int grid_n = 0;
    double worst_margin = 0.0;
    Point witness;
    int witness_component = 0;  ///< 1 or 2
    Region witness_region = Region::R1;
    long evaluations = 0;
    std::vector<RegionMargin> per_region;
};

/// Evaluate eta - xi on the grid (i/n, j/n) intersected with
/// {0 <= v <= u <= 1}, plus n samples along every region edge and all
/// corners. At each point every linear region whose closure contains the
/// point is tested. Passes iff every margin is >= -1e-12.
DominationCertificate verify_domination(double c, int grid_n, const FlowGeometry& g = {});

struct Polyline {
    Point A, B, C, D;
};

/// gamma_theta: A_theta -> B_theta -> C_theta -> D_theta.
Polyline gamma_theta(double theta, const FlowGeometry& g = {});

/// Point at arc-length fraction t in [0, 1] along a polyline.
Point point_on(const Polyline& poly, double t);

/// Distance from p to the polyline.
double distance_to(const Polyline& poly, const Point& p);

/// First intersection of the ray from the origin through q with the
/// polyline. Throws NoIntersection if the ray misses it.
Point ray_intersection(const Point& q, const Polyline& poly);

/// Flow of xi for time s from p (closed form in the linear regions,
/// adaptive Dormand-Prince in the Eta region).
Point flow_xi(double s, const Point& p, double c, const FlowGeometry& g = {});

/// One piece of a xi trajectory.
struct FlowSegment {
    Region region;
    double t0, t1;
    Point p0, p1;
};
/// flow_xi with the list of traversed segments.
Point flow_xi_traced(double s, const Point& p, double c, const FlowGeometry& g, std::vector<FlowSegment>* trace);

/// phi_theta(s, p): the point of gamma_theta on the ray through flow_xi(s, p).
Point phi_theta(double s, double theta, const Point& p, double c, const FlowGeometry& g = {});

}  // namespace stirred::cstar
