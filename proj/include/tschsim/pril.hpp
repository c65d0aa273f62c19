#ifndef TSCHSIM_PRIL_HPP
#define TSCHSIM_PRIL_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "tschsim/schedule.hpp"
#include "tschsim/traffic.hpp"
#include "tschsim/types.hpp"

namespace tschsim {

enum class PrilTechnique { None, PrilF, PrilM, PrilMl };

/// Static per-outgoing-link PRIL parameters, derived from the scenario.
/// T_min is the minimum nominal period among the flows crossing the link;
/// its flow is tau*. PRIL-ML splits the sleep budget into r windows of
/// T_act = ceil(T_min / r) slots; PRIL-M is the r = 1 case.
struct PrilLinkConfig {
    PrilTechnique technique = PrilTechnique::None;
    int r = 1;
    DurUs t_min_us = 0;
    int tau_star_flow = -1; // index into the scenario flow list
    std::int64_t t_act_slots = 0;
    std::int64_t t_min_slots = 0;
    // Ideal wake offsets from the trigger arrival, in slots:
    // {k*T_act : k < r, k*T_act < T_min} followed by T_min itself
    // (the final window is the truncated one).
    std::vector<std::int64_t> wake_offsets_slots;

    bool active() const {
        return technique == PrilTechnique::PrilM || technique == PrilTechnique::PrilMl;
    }
    bool operator==(const PrilLinkConfig&) const = default;
};

/// Minimum nominal period over a non-empty flow set and the index of the
/// flow achieving it; ties go to the lower index (flows are kept in
/// declaration order, so this matches id order).
struct TMinResult {
    DurUs t_min_us = 0;
    int tau_star = -1;
};
TMinResult t_min(const std::vector<Flow>& flows, const std::vector<int>& through);

/// ceil(T_min / r) rounded up to whole slots.
std::int64_t t_act_slots(DurUs t_min_us, int r, DurUs slot_us);

std::vector<std::int64_t> build_wake_offsets(DurUs t_min_us, int r, DurUs slot_us);

enum class SleepCommandKind : std::uint8_t { FirstHopCount = 1, MultiHopDuration = 2 };

/// The information element carried by a data frame. For FirstHopCount,
/// `value` is a number of upcoming cell instances to disable; for
/// MultiHopDuration it is the first OFF window in slots and `r` the number
/// of windows that remain.
struct SleepCommand {
    SleepCommandKind kind = SleepCommandKind::FirstHopCount;
    std::uint32_t value = 0;
    std::uint8_t r = 0;

    bool operator==(const SleepCommand&) const = default;
};

/// Wire form for traces: kind (1 byte), value (4 bytes LE), r (1 byte).
std::array<std::uint8_t, 6> encode_sleep_command(const SleepCommand& cmd);
std::optional<SleepCommand> decode_sleep_command(std::span<const std::uint8_t> bytes);

/// PRIL-F: number of cell instances of this link strictly after the
/// delivery instance and strictly before the first instance that can carry
/// the next packet (the first one starting at or after `next_gen`). A
/// delivery delayed by retransmissions therefore yields a smaller count.
std::int64_t first_hop_sleep_count(const LinkCells& lc, const Slotframe& frame, Asn delivery_asn,
                                   TimeUs next_gen);

/// Transmitter-side trigger: armed by the arrival of a tau* packet, consumed
/// by the command attached to the frame that empties the buffer.
struct TxPrilState {
    bool armed = false;
    TimeUs trigger_arrival = 0;
};

/// Command for the frame that empties the j->k buffer, or nullopt when the
/// whole budget is already spent draining it. The wake schedule keeps the
/// ideal offsets from the trigger arrival; the first window is what is left
/// of its offset after the drain.
std::optional<SleepCommand> multi_hop_sleep_command(const PrilLinkConfig& cfg, const TxPrilState& tx,
                                                    TimeUs delivery_slot_end, DurUs slot_us);

/// Receiver side of an incoming link. Both ends of a link evolve this state
/// identically: commands are acknowledged within the slot, so the
/// transmitter always knows which ones were applied and never transmits
/// into an OFF window.
struct RxLinkState {
    enum class Mode { AlwaysOn, FirstHopOff, Cycle };

    Mode mode = Mode::AlwaysOn;
    Asn off_until_asn = 0;      // FirstHopOff: instances before this ASN are skipped
    TimeUs off_until_time = 0;  // Cycle: enabled iff slot start >= this
    std::vector<std::int64_t> window_slots; // windows after the current one
    std::size_t next_window = 0;

    bool operator==(const RxLinkState&) const = default;
};

/// Whether the receiver listens in the instance at `asn`.
bool rx_instance_enabled(const RxLinkState& rx, const Slotframe& frame, Asn asn);

/// First enabled instance of the link at or after `from`.
Asn rx_next_enabled_instance(const RxLinkState& rx, const LinkCells& lc, const Slotframe& frame,
                             Asn from);

/// Called after an enabled instance in which nothing was received: a Cycle
/// receiver starts its next OFF window from the end of this slot (or goes
/// permanently ON once the windows are spent).
void rx_after_idle_instance(RxLinkState& rx, const Slotframe& frame, Asn asn);

/// Called after an enabled instance that delivered a frame without a sleep
/// command: the receiver stays ON (the transmitter is still draining its
/// buffer), keeping any remaining windows for the next idle instance.
void rx_after_frame_without_command(RxLinkState& rx);

/// Applies a command delivered at instance `asn`. Returns false (state
/// unchanged) for malformed commands: zero value, r = 0 or more windows
/// than the link is configured for.
bool rx_apply_command(RxLinkState& rx, const SleepCommand& cmd, const PrilLinkConfig& cfg,
                      const LinkCells& lc, const Slotframe& frame, Asn asn);

} // namespace tschsim

#endif
