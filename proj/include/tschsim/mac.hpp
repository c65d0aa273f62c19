#ifndef TSCHSIM_MAC_HPP
#define TSCHSIM_MAC_HPP

#include <map>

#include "tschsim/rng.hpp"
#include "tschsim/types.hpp"

namespace tschsim {

/// One in-flight instance of a flow's periodic stream.
struct Packet {
    int flow = -1;
    std::int64_t seq = 0;
    TimeUs generation_time = 0;
    TimeUs ready_time = 0; // when it became transmittable on the current link
    std::size_t hop = 0;   // current transmitter is path[hop]
};

/// Bernoulli loss per transmission attempt, optionally per physical channel.
struct ChannelModel {
    double loss_probability = 0.0;
    std::map<int, double> per_channel;

    double loss_for_channel(int channel) const {
        auto it = per_channel.find(channel);
        return it != per_channel.end() ? it->second : loss_probability;
    }
    bool operator==(const ChannelModel&) const = default;
};

/// Loss draws are keyed by (seed, link index, ASN) so outcomes do not depend
/// on event processing order; the slot-by-slot oracle makes the exact same
/// draws as the event-driven engine.
inline bool transmission_delivered(std::uint64_t seed, std::uint32_t link_index, Asn asn,
                                   double loss_probability) {
    return !(keyed_unit(seed, kLossStreamBase + link_index, static_cast<std::uint64_t>(asn)) <
             loss_probability);
}

/// What a node's radio does in one slot.
enum class SlotAction { Transmit, Listen, Off, Idle };

inline SlotAction classify_slot_action(bool owns_tx_cell, bool tx_queue_ready, bool tx_link_enabled,
                                       bool owns_rx_cell, bool rx_enabled) {
    if (owns_tx_cell && tx_queue_ready && tx_link_enabled)
        return SlotAction::Transmit;
    if (owns_rx_cell)
        return rx_enabled ? SlotAction::Listen : SlotAction::Off;
    return SlotAction::Idle;
}

} // namespace tschsim

#endif
