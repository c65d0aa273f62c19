#ifndef TSCHSIM_TRAFFIC_HPP
#define TSCHSIM_TRAFFIC_HPP

#include <string>
#include <vector>

#include "tschsim/types.hpp"

namespace tschsim {

/// A periodic unidirectional packet stream with a fixed multi-hop path.
/// The generation period deviates from the nominal one by drift_ppb
/// (quartz tolerance); the n-th packet is generated at
///   phase + round(n * nominal_period * (1e9 + drift_ppb) / 1e9).
struct Flow {
    std::string name;
    NodeId source = 0;
    std::vector<NodeId> path; // source first, destination last
    DurUs nominal_period_us = 0;
    std::int64_t drift_ppb = 0; // signed; 1 ppm = 1000 ppb
    TimeUs phase_us = 0;        // in [0, nominal_period)
    int payload_bytes = 127;

    bool operator==(const Flow&) const = default;
};

/// Generation instant of packet n (n >= 0), exact 128-bit arithmetic with
/// round-half-up at microsecond resolution.
TimeUs generation_time(const Flow& flow, std::int64_t n);

/// Number of packets generated strictly before `horizon`.
std::int64_t generation_count(const Flow& flow, TimeUs horizon);

/// All generation instants strictly before `horizon`, in order.
std::vector<TimeUs> generation_times(const Flow& flow, TimeUs horizon);

/// Index of the first packet generated strictly after `after`.
std::int64_t next_generation_index(const Flow& flow, TimeUs after);

/// Smallest generation instant strictly greater than `after`.
TimeUs next_generation(const Flow& flow, TimeUs after);

} // namespace tschsim

#endif
