#ifndef TSCHSIM_ENGINE_HPP
#define TSCHSIM_ENGINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "tschsim/mac.hpp"
#include "tschsim/metrics.hpp"
#include "tschsim/pril.hpp"
#include "tschsim/schedule.hpp"
#include "tschsim/traffic.hpp"

namespace tschsim {

/// A scheduled link together with its PRIL configuration and the flows that
/// cross it (consecutive path pair from->to).
struct ScenarioLink {
    Link link;
    LinkCells cells;
    PrilLinkConfig pril;
    std::vector<int> flows_through;
    bool first_hop_for_all = false;

    bool operator==(const ScenarioLink&) const = default;
};

/// Fully resolved, validated simulation input.
struct Scenario {
    Slotframe frame;
    std::vector<std::string> node_names;
    std::vector<Cell> cells;
    std::vector<Flow> flows;
    std::vector<ScenarioLink> links; // sorted by (from, to)
    ChannelModel channel;
    std::optional<int> retry_cap;          // max retransmissions per packet
    std::optional<std::int64_t> queue_cap; // max packets per link queue
    EnergyModel energy;
    DurUs duration_us = 0;
    DurUs warmup_us = 0;
    std::uint64_t seed = 1;

    bool operator==(const Scenario&) const = default;
};

struct RunCounters {
    std::int64_t generated = 0;
    std::int64_t delivered = 0;
    std::int64_t in_queue_at_end = 0;
    std::int64_t dropped_retry_cap = 0;
    std::int64_t dropped_queue_overflow = 0;
    std::int64_t tx_attempts = 0;
    std::int64_t tx_lost = 0;
    std::int64_t commands_attached = 0;
    std::int64_t commands_applied = 0;
    std::int64_t ignored_commands = 0;

    bool operator==(const RunCounters&) const = default;
};

struct RunReport {
    std::uint64_t seed = 0;
    DurUs duration_us = 0;
    DurUs warmup_us = 0;
    std::vector<std::string> node_names;
    std::vector<EnergyAccount> node_energy; // post-warmup events only
    std::vector<std::string> flow_names;
    std::vector<LatencyStat> flow_latency;
    LatencyStat merged_latency;
    RunCounters counters;

    EnergyAccount total_energy() const;
    DurUs effective_duration_us() const { return duration_us - warmup_us; }
    bool operator==(const RunReport&) const = default;
};

/// Runs the event-driven simulation over [0, duration). Only slots with
/// scheduled activity (a pending transmission, a receiver wake-up, a packet
/// generation) are visited; idle listening across the skipped spans is
/// charged in closed form. Deterministic for a fixed (scenario, seed).
RunReport run(const Scenario& scenario);

} // namespace tschsim

#endif
