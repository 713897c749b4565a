#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stirred::pde {

/// Reaction systems.
///  - Sys9: four site-state probabilities u00, u01, u10, u11 (lily-pad, G2).
///  - Sys10: (u, v) = (occupied, doubly occupied), c = 2 lambda d.
///  - Sys11: scalar bistable f(u) = -u + beta (1-u) u^2.
///  - Sys12: four-state lily-pad G1 system as printed (no death flows).
///  - Sys12WithDeaths: Sys12 made conservative and given the Sys9 deaths.
///  - Contact: single-sex contact f(u) = -u + beta (1-u) u.
///  - Individual2: two-sex individual stirring (u1, u2), beta = 2 lambda d.
///  - Heat: no reaction.
enum class System { Sys9, Sys10, Sys11, Sys12, Sys12WithDeaths, Contact, Individual2, Heat };

const char* to_string(System s);
/// Parse "sys9", "sys10", "sys11", "sys12", "sys12-deaths", "contact",
/// "individual2", "heat". Throws ConfigError.
System parse_system(const std::string& name);

struct ReactionSpec {
    System system = System::Sys11;
    double lambda = 1.0;
    int dim_d = 2;  ///< lattice dimension entering the rate coefficients
    /// Multiplier turning lambda into beta for Sys11 / Contact /
    /// Individual2. Zero means the default 2d.
    double beta_coeff = 0.0;

    double c() const { return 2.0 * lambda * dim_d; }
    double beta() const { return (beta_coeff > 0.0 ? beta_coeff : 2.0 * dim_d) * lambda; }
    int components() const;
    std::vector<std::string> names() const;
    void validate() const;
};

using State4 = std::array<double, 4>;  // u00, u01, u10, u11

State4 rhs_sys9(const State4& u, double lambda, int d);
std::pair<double, double> rhs_sys10(double u, double v, double c);
double rhs_sys11(double u, double beta);
/// Printed form; the u0 factor is read as u00.
State4 rhs_sys12(const State4& u, double lambda, int d);
State4 rhs_sys12_with_deaths(const State4& u, double lambda, int d);
double rhs_contact(double u, double beta);
std::pair<double, double> rhs_individual2(double u1, double u2, double beta);

/// Reaction term for any system: `in` and `out` hold spec.components() values.
void reaction(const ReactionSpec& spec, const double* in, double* out);

/// Nonzero roots rho1 < rho0 of the Sys11 reaction. Throws NoRootsError for
/// beta < 4 (a double root at beta = 4 is returned twice).
std::pair<double, double> sys11_roots(double beta);

/// Interior fixed points (u, v) of Sys10 with v > 0, ordered P-, P+.
/// Empty when c < 4. Found by safeguarded bisection on the reduced equation.
std::vector<std::pair<double, double>> sys10_fixed_points(double c);

/// Stable positive contact root 1 - 1/beta; NoRootsError for beta <= 1.
double contact_root(double beta);

/// Integral of the Sys11 reaction over [0, rho0] by composite Simpson with
/// `panels` panels. Positive means the occupied state invades.
double wave_integral_criterion(double beta, int panels = 10000);

/// Root in (lo, hi) of wave_integral_criterion, located with TOMS 748 to
/// absolute tolerance ~1e-13. Throws NoRootsError if there is no sign change.
double wave_integral_root(double lo = 4.01, double hi = 8.0, int panels = 10000);

/// Travelling-wave speed of the Sys11 cubic, sqrt(beta/2) (rho0 - 2 rho1).
double sys11_front_speed(double beta);

/// Integrate the spatially constant system y' = reaction(y) with an
/// adaptive Runge-Kutta-Dormand-Prince scheme.
std::vector<double> integrate_reaction(const ReactionSpec& spec, std::vector<double> y0, double t,
                                       double rel_tol = 1e-10);

/// Stable occupied equilibrium of the spatially constant system reached
/// from the fully occupied state, or nullopt if that state dies out.
std::optional<std::vector<double>> occupied_equilibrium(const ReactionSpec& spec);

enum class Boundary { Neumann, Periodic };

/// Uniform vertex-centred mesh. Neumann boundaries mirror across the end
/// vertices, periodic ones wrap.
struct Grid {
    int dim = 1;
    int nx = 1;
    int ny = 1;
    double dx = 0.1;
    double x0 = 0.0;
    double y0 = 0.0;
    Boundary bc = Boundary::Neumann;
    /// 0 for Cartesian. k >= 2 on a 1D grid with x0 = 0 and Neumann ends
    /// makes x the radius of a radially symmetric field in k dimensions.
    int radial_dim = 0;

    std::size_t size() const { return static_cast<std::size_t>(nx) * (dim == 2 ? ny : 1); }
    double x(int i) const { return x0 + i * dx; }
    double y(int j) const { return y0 + j * dx; }
    /// Dimension entering the stability limit.
    int stencil_dim() const { return radial_dim > 0 ? radial_dim : dim; }
    void validate() const;
};

struct PdeField {
    Grid grid;
    std::vector<std::string> names;
    std::vector<std::vector<double>> data;

    std::vector<double>& operator[](const std::string& name);
    const std::vector<double>& operator[](const std::string& name) const;
};

PdeField make_field(const ReactionSpec& spec, const Grid& grid);

/// Largest explicit Euler step used for a mesh: 0.4 dx^2 / (2 dim).
double stability_limit(double dx, int dim);

/// Tolerance on [0, 1] before a step is reported unstable.
inline constexpr double kRangeTol = 1e-6;

/// Explicit Euler stepper with reusable scratch buffers.
class RdStepper {
public:
    RdStepper(ReactionSpec spec, const Grid& grid, double dt);

    /// One step of u += dt (Laplacian(u) + R(u)). Throws InstabilityError if
    /// a value leaves [-kRangeTol, 1 + kRangeTol]; values are never clamped.
    void step(PdeField& f);
    /// Take ceil(t / dt) equal steps covering exactly t.
    void advance(PdeField& f, double t);

    double dt() const { return dt_; }
    const ReactionSpec& spec() const { return spec_; }

private:
    ReactionSpec spec_;
    Grid grid_;
    double dt_;
    std::vector<std::vector<double>> next_;
};

/// One explicit Euler step; convenience wrapper around RdStepper.
void step_rd(PdeField& f, const ReactionSpec& spec, double dt);

/// Discrete 1D Laplacian (same stencil and boundary rules as the stepper).
void laplacian_1d(const std::vector<double>& u, double dx, Boundary bc, std::vector<double>& out);

}  // namespace stirred::pde
