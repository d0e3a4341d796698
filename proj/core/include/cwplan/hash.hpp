#pragma once

#include <cstdint>
#include <string_view>

namespace cwplan {

/// FNV-1a 64-bit hash; used for scenario fingerprints and output checksums.
constexpr std::uint64_t fnv1a64(std::string_view data,
                                std::uint64_t seed = 14695981039346656037ull) {
    std::uint64_t h = seed;
    for (char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace cwplan
