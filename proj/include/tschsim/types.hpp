#ifndef TSCHSIM_TYPES_HPP
#define TSCHSIM_TYPES_HPP

#include <compare>
#include <cstdint>
#include <string>

namespace tschsim {

// All simulation time is integer microseconds from the start of the run.
// A decade-long run is ~3.2e14 us, far inside the int64 range.
using TimeUs = std::int64_t;
using DurUs = std::int64_t;

// Absolute slot number. Slot a covers [a*slot_us, (a+1)*slot_us).
using Asn = std::int64_t;

// Energy is integer nanojoules so the paper-style tenth-of-a-microjoule
// constants stay exact.
using EnergyNj = std::int64_t;

using NodeId = std::uint32_t;

struct Link {
    NodeId from = 0;
    NodeId to = 0;
    auto operator<=>(const Link&) const = default;
};

constexpr DurUs kUsPerSecond = 1'000'000;

inline DurUs seconds_us(std::int64_t s) { return s * kUsPerSecond; }

} // namespace tschsim

#endif
