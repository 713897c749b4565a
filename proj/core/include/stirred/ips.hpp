#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stirred/lattice.hpp"
#include "stirred/rng.hpp"

namespace stirred::ips {

/// Birth mechanism.
///  - G1: lambda * n1 * n2, parents anywhere in N_x.
///  - G2: lambda * n_{1+2}, both parents on one site of N_x.
///  - Decoupled: lambda * |N| * n_m, the contact-process bound that
///    dominates both G1 and G2.
enum class BirthRule { G1, G2, Decoupled };

enum class Stirring { None, LilyPad, Individual };

struct IpsParams {
    double lambda = 1.0;
    BirthRule rule = BirthRule::G1;
    Stirring stirring = Stirring::None;
    double eps = 1.0;  ///< stirring happens at rate eps^-2 per edge
    int dim = 1;
    int torus_side = 16;

    /// Death rate. Fixed to one: time is measured in mean lifetimes.
    static constexpr double delta = 1.0;

    double stir_rate() const { return stirring == Stirring::None ? 0.0 : 1.0 / (eps * eps); }

    /// Throws ConfigError on lambda < 0, eps <= 0 with stirring, bad geometry.
    void validate() const;
};

const char* to_string(BirthRule r);
const char* to_string(Stirring s);

/// Number of occupied nests of sex m (1 or 2) in N_x.
int count_sex(const Torus& torus, const Config& config, int x, int m);
/// Number of sites in N_x holding both sexes.
int count_pairs(const Torus& torus, const Config& config, int x);

/// G1 birth rate into nest (x, m): lambda * n1 * n2 when the nest is empty.
double birth_rate_g1(const Torus& torus, const Config& config, int x, int m, double lambda);
/// G2 birth rate into nest (x, m): lambda * n_{1+2} when the nest is empty.
double birth_rate_g2(const Torus& torus, const Config& config, int x, int m, double lambda);
/// Decoupled birth rate lambda * |N| * n_m; dominates both rates above.
double decoupled_contact_rates(const Torus& torus, const Config& config, int x, int m, double lambda);

double birth_rate(BirthRule rule, const Torus& torus, const Config& config, int x, int m, double lambda);

/// Supremum of the per-nest flip rate over all configurations, c* >= 1.
double max_nest_rate(BirthRule rule, double lambda, int hood_size);

/// Rates for the site-count projection zeta = xi^1 + xi^2 under lily-pad
/// stirring with G2 births. Only the transitions leaving the current value
/// of zeta(x) are non-zero.
struct ZetaRates {
    double one_to_zero = 0.0;
    double two_to_one = 0.0;
    double zero_to_one = 0.0;
    double one_to_two = 0.0;
};
ZetaRates zeta_rates(const Torus& torus, const std::vector<std::uint8_t>& zeta, int x, double lambda);

/// Per-site event bookkeeping shared by the fast engine and the exact
/// generator: every transition out of a configuration, with its rate.
struct Transition {
    enum class Kind : std::uint8_t { Death, Birth, LilyPadSwap, IndividualSwap };
    Kind kind;
    int x;
    int y;  ///< partner site for swaps, -1 otherwise
    int m;  ///< nest (1 or 2) for deaths, births and individual swaps
    double rate;
};

/// Apply a transition in place.
void apply_transition(Config& config, const Transition& t);

/// Enumerate all transitions out of `config` with positive rate. Swaps of
/// identical contents are not listed.
void enumerate_transitions(const IpsParams& params, const Torus& torus, const Config& config,
                           std::vector<Transition>& out);

struct IpsState {
    Config config;
    double time = 0.0;
    std::uint64_t rng_seed = 0;
    std::uint64_t event_count = 0;
};

struct DensitySample {
    double time;
    double density_any;
    double density_both;
};

/// Exact event-driven simulator. Per-site total rates live in a sum tree,
/// so sampling and updating cost O(log sites) per event.
class Simulator {
public:
    enum class StepResult { Event, Horizon, Absorbed };

    Simulator(IpsParams params, Config initial, std::uint64_t seed, std::uint64_t stream = 0);

    /// Restart from a new configuration and RNG stream, reusing buffers.
    void reset(Config initial, std::uint64_t seed, std::uint64_t stream = 0);

    /// Advance by one transition unless the next event falls after
    /// `horizon`, in which case time is set to `horizon` and nothing fires.
    /// With total rate zero the state is absorbing and time jumps to the
    /// horizon.
    StepResult step(double horizon);

    /// Step until time reaches t_end, sampling densities on `samples`
    /// equally spaced times in [time(), t_end].
    std::vector<DensitySample> run_until(double t_end, int samples = 64);

    double total_rate() const { return tree_.empty() ? 0.0 : tree_[1]; }
    /// Sum of per-site rates recomputed from scratch.
    double recomputed_total_rate() const;

    double site_rate(int x) const;

    const IpsState& state() const { return state_; }
    const Config& config() const { return state_.config; }
    double time() const { return state_.time; }
    const Torus& torus() const { return torus_; }
    const IpsParams& params() const { return params_; }

    /// The last transition applied by step().
    const std::optional<Transition>& last_transition() const { return last_; }

private:
    void rebuild();
    void refresh_site(int x);
    void refresh_around(int x);
    /// Descend the sum tree; `target` is left as the offset inside the leaf.
    int sample_site(double& target) const;
    Transition pick_event(int x, double target) const;

    IpsParams params_;
    Torus torus_;
    IpsState state_;
    Rng rng_;
    std::size_t leaves_ = 1;
    std::vector<double> tree_;
    std::optional<Transition> last_;
};

/// Product-measure initial condition: each nest occupied independently with
/// the given per-site probabilities.
Config random_config(const Torus& torus, const std::vector<double>& male_density,
                     const std::vector<double>& female_density, Rng& rng);

Config full_config(const Torus& torus);

struct DecayPoint {
    double time;
    double p_male_empty;  ///< estimate of P(xi_t^1(0) = 0)
    double std_error;
};

/// Start from all-(1,1), estimate P(xi^1_t(0) = 0) on `t_grid` by averaging
/// over sites and `replicas` independent runs. Replicas use disjoint RNG
/// streams and are reduced in replica order.
std::vector<DecayPoint> upper_invariant_decay(const IpsParams& params, const std::vector<double>& t_grid,
                                              int replicas, std::uint64_t seed, int threads = 1);

/// Start from the product measure with per-site densities `male` and
/// `female`; return the per-site frequency of an occupied male nest at
/// time t over `replicas` runs (replica r uses stream r).
std::vector<double> mean_male_occupation(const IpsParams& params, const std::vector<double>& male,
                                         const std::vector<double>& female, double t, int replicas,
                                         std::uint64_t seed, int threads = 1);

}  // namespace stirred::ips
