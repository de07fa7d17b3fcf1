#include "continuized/rng.hpp"

#include <algorithm>

namespace continuized {

std::size_t Stream::categorical(std::span<const double> cumulative) noexcept {
    const double u = uniform() * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto idx = static_cast<std::size_t>(it - cumulative.begin());
    return std::min(idx, cumulative.size() - 1);
}

}  // namespace continuized
