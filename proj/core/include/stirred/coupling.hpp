#pragma once

#include <cstdint>

#include "stirred/ips.hpp"

namespace stirred::ips {

/// Two configurations evolved by the same Poisson clocks and uniforms.
struct CoupledPair {
    Config lower;
    Config upper;
    double time = 0.0;
    std::uint64_t shared_clock_seed = 0;
    std::uint64_t clock_rings = 0;
};

/// True when lower(x) <= upper(x) at every site.
bool ordered(const Config& lower, const Config& upper);

/// Evolve both copies to t_end with the uniformized graphical construction:
/// every nest (x, m) carries a rate-c* clock with marks U in (0, 1]. An
/// occupied nest dies when U c* <= 1, an empty one is filled when
/// U c* > c* - birth rate, with c* = max birth rate + 1. Stirring clocks swap
/// both copies at once. The order is checked at the touched sites after every ring.
///
/// `lower_params` and `upper_params` may differ in lambda and in birth rule
/// as long as the upper rates dominate pointwise (G2 <= G1 <= Decoupled and
/// lambda_lower <= lambda_upper); geometry and stirring must agree.
///
/// Throws ConfigError if the pair is not ordered initially or the parameters
/// are not comparable, CouplingViolation if the order ever breaks.
CoupledPair run_coupled(CoupledPair pair, const IpsParams& lower_params, const IpsParams& upper_params,
                        double t_end);

inline CoupledPair run_coupled(CoupledPair pair, const IpsParams& params, double t_end) {
    return run_coupled(std::move(pair), params, params, t_end);
}

}  // namespace stirred::ips
