#ifndef TSCHSIM_RNG_HPP
#define TSCHSIM_RNG_HPP

#include <cstdint>

namespace tschsim {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so outcomes do not depend on the order in
// which the simulation happens to ask for them. Loss draws use
// stream = link index and counter = ASN; scenario defaults use the
// reserved streams below.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t keyed_u64(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
}

// Uniform in [0, 1) with 53 significant bits; exact and portable.
inline double keyed_unit(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>(keyed_u64(seed, stream, counter) >> 11) * 0x1.0p-53;
}

// Stream ids 0..15 are reserved for scenario parameter derivation;
// per-link loss streams start at kLossStreamBase + link index.
constexpr std::uint64_t kDefaultsStream = 1;
constexpr std::uint64_t kLossStreamBase = 16;

} // namespace tschsim

#endif
