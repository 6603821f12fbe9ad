#include "fraisse/rng.hpp"

#include <limits>
#include <stdexcept>

namespace fraisse {

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    if (n == 1) return 0;
    // Accept only draws below the largest multiple of n, so r % n is uniform.
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() / n * n;
    std::uint64_t r;
    do {
        r = next_u64();
    } while (r >= limit);
    return r % n;
}

}  // namespace fraisse
