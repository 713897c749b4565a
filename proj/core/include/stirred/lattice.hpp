#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace stirred::ips {

/// Occupancy of the two nests at one site. Stored as a 2-bit code:
/// bit 0 is the male nest, bit 1 the female nest.
struct SiteState {
    std::uint8_t male = 0;
    std::uint8_t female = 0;

    constexpr std::uint8_t code() const { return static_cast<std::uint8_t>(male | (female << 1)); }
    static constexpr SiteState from_code(std::uint8_t c) {
        return SiteState{static_cast<std::uint8_t>(c & 1u), static_cast<std::uint8_t>((c >> 1) & 1u)};
    }
    constexpr bool operator==(const SiteState&) const = default;
};

inline constexpr std::uint8_t kEmpty = 0;
inline constexpr std::uint8_t kMale = 1;
inline constexpr std::uint8_t kFemale = 2;
inline constexpr std::uint8_t kBoth = 3;

/// Nest m in {1, 2} of a site code.
constexpr int nest(std::uint8_t code, int m) { return (code >> (m - 1)) & 1; }

/// Partial order (0,0) <= (0,1),(1,0) <= (1,1); (0,1) and (1,0) incomparable.
constexpr bool site_leq(std::uint8_t lower, std::uint8_t upper) { return (lower & ~upper & 3u) == 0; }

/// A configuration is one site code per torus site.
using Config = std::vector<std::uint8_t>;

/// Periodic d-dimensional torus of side n (d in {1, 2}).
///
/// The interaction neighbourhood N_x is the set of distinct sites within
/// L1 distance one of x, x included. Stirring acts on the n^d * d lattice
/// edges {x, x + e_k}; on a side-2 torus both edges of a pair join the same
/// two sites, on a side-1 torus they are self loops and are dropped.
class Torus {
public:
    Torus(int dim, int side);

    int dim() const { return dim_; }
    int side() const { return side_; }
    int sites() const { return sites_; }

    /// N_x as distinct sites, x first.
    std::span<const int> neighbourhood(int x) const {
        return {hood_.data() + hood_offset_[x], hood_.data() + hood_offset_[x + 1]};
    }
    /// Largest |N_x| over the torus (equal for all x).
    int neighbourhood_size() const { return max_hood_; }

    /// x + e_k with periodic wrap.
    int forward(int x, int k) const { return fwd_[static_cast<std::size_t>(x) * dim_ + k]; }

    struct Bond {
        int a;
        int b;
    };
    /// Stirring edges, excluding self loops.
    const std::vector<Bond>& bonds() const { return bonds_; }

    /// Bonds whose first endpoint is x (used by per-site rate bookkeeping).
    std::span<const int> bonds_from(int x) const {
        return {bond_from_.data() + bond_from_offset_[x], bond_from_.data() + bond_from_offset_[x + 1]};
    }

    /// Cartesian coordinate of x along axis k.
    int coord(int x, int k) const { return k == 0 ? x % side_ : x / side_; }

private:
    int dim_;
    int side_;
    int sites_;
    int max_hood_ = 0;
    std::vector<int> hood_;
    std::vector<int> hood_offset_;
    std::vector<int> fwd_;
    std::vector<Bond> bonds_;
    std::vector<int> bond_from_;
    std::vector<int> bond_from_offset_;
};

/// Fraction of sites holding at least one particle.
double density_any(const Config& config);
/// Fraction of sites holding both a male and a female.
double density_both(const Config& config);

}  // namespace stirred::ips
