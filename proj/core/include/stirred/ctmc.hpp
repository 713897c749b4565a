#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "stirred/ips.hpp"

namespace stirred::ips {

/// Largest state space the dense generator is built for.
inline constexpr std::size_t kMaxDenseStates = 4096;

/// Base-4 index of a configuration (site 0 is the least significant digit).
std::size_t state_index(const Config& config);
Config state_from_index(std::size_t index, int sites);

/// Dense generator of the full two-sex chain on the params torus. Entry
/// (a, b) is the total rate of all transitions a -> b; rows sum to zero.
/// Throws StateSpaceTooLarge above kMaxDenseStates states.
Eigen::MatrixXd exact_generator_matrix(const IpsParams& params);

/// Generator of zeta = xi^1 + xi^2 (base-3 index) driven by zeta_rates and,
/// for lily-pad stirring, swaps of zeta along each bond. Requires G2 births
/// with lily-pad or no stirring.
Eigen::MatrixXd zeta_generator_matrix(const IpsParams& params);

/// Base-3 index of the projection of a base-4 state.
std::size_t project_zeta(std::size_t index, int sites);

/// Row `start` of exp(tQ).
Eigen::VectorXd transition_distribution(const Eigen::MatrixXd& q, std::size_t start, double t);

struct LumpabilityReport {
    double generator_max_diff = 0.0;  ///< max |sum over block of Q - Q_zeta|
    double expm_max_diff = 0.0;       ///< same for exp(tQ) against exp(tQ_zeta)
};

/// Compare the projected full chain with the zeta chain entrywise.
LumpabilityReport zeta_lumpability(const IpsParams& params, double t);

/// Empirical law of the state at time t over independent runs of the fast
/// simulator started from `initial`.
std::vector<double> mc_distribution(const IpsParams& params, const Config& initial, double t, int replicas,
                                    std::uint64_t seed, int threads = 1);

double total_variation(const std::vector<double>& p, const Eigen::VectorXd& q);

struct JumpTest {
    std::vector<std::size_t> targets;
    std::vector<double> expected_prob;
    std::vector<long> observed;
    double chi_square = 0.0;
    int dof = 0;
    double p_value = 1.0;
    double mean_holding = 0.0;  ///< empirical mean sojourn time
    double exit_rate = 0.0;     ///< -Q(s, s)
};

/// Fire `sojourns` single events out of `from` with the fast simulator and
/// compare the jump targets with the generator row by a chi-square test.
JumpTest jump_frequency_test(const IpsParams& params, const Config& from, int sojourns, std::uint64_t seed);

}  // namespace stirred::ips
