#include "stirred/lattice.hpp"

#include <algorithm>

#include "stirred/errors.hpp"

namespace stirred::ips {

Torus::Torus(int dim, int side) : dim_(dim), side_(side) {
    if (dim != 1 && dim != 2) throw ConfigError("torus dimension must be 1 or 2");
    if (side < 1) throw ConfigError("torus side must be positive");
    sites_ = dim == 1 ? side : side * side;

    fwd_.resize(static_cast<std::size_t>(sites_) * dim_);
    std::vector<int> back(fwd_.size());
    for (int x = 0; x < sites_; ++x) {
        for (int k = 0; k < dim_; ++k) {
            const int c = coord(x, k);
            const int stride = k == 0 ? 1 : side_;
            const int up = (c + 1) % side_;
            const int down = (c + side_ - 1) % side_;
            fwd_[static_cast<std::size_t>(x) * dim_ + k] = x + (up - c) * stride;
            back[static_cast<std::size_t>(x) * dim_ + k] = x + (down - c) * stride;
        }
    }

    hood_offset_.push_back(0);
    for (int x = 0; x < sites_; ++x) {
        std::vector<int> h{x};
        for (int k = 0; k < dim_; ++k) {
            h.push_back(fwd_[static_cast<std::size_t>(x) * dim_ + k]);
            h.push_back(back[static_cast<std::size_t>(x) * dim_ + k]);
        }
        std::sort(h.begin() + 1, h.end());
        h.erase(std::unique(h.begin() + 1, h.end()), h.end());
        h.erase(std::remove(h.begin() + 1, h.end(), x), h.end());
        max_hood_ = std::max(max_hood_, static_cast<int>(h.size()));
        hood_.insert(hood_.end(), h.begin(), h.end());
        hood_offset_.push_back(static_cast<int>(hood_.size()));
    }

    bond_from_offset_.push_back(0);
    for (int x = 0; x < sites_; ++x) {
        for (int k = 0; k < dim_; ++k) {
            const int y = forward(x, k);
            if (y == x) continue;
            bond_from_.push_back(static_cast<int>(bonds_.size()));
            bonds_.push_back({x, y});
        }
        bond_from_offset_.push_back(static_cast<int>(bond_from_.size()));
    }
}

double density_any(const Config& config) {
    if (config.empty()) return 0.0;
    const auto n = std::count_if(config.begin(), config.end(), [](std::uint8_t c) { return c != kEmpty; });
    return static_cast<double>(n) / static_cast<double>(config.size());
}

double density_both(const Config& config) {
    if (config.empty()) return 0.0;
    const auto n = std::count(config.begin(), config.end(), kBoth);
    return static_cast<double>(n) / static_cast<double>(config.size());
}

}  // namespace stirred::ips
