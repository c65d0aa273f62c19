#include "tschsim/pril.hpp"

#include <algorithm>
#include <cassert>

namespace tschsim {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    return (a + b - 1) / b;
}

} // namespace

TMinResult t_min(const std::vector<Flow>& flows, const std::vector<int>& through) {
    TMinResult res;
    for (int idx : through) {
        const Flow& f = flows[static_cast<std::size_t>(idx)];
        if (res.tau_star < 0 || f.nominal_period_us < res.t_min_us) {
            res.t_min_us = f.nominal_period_us;
            res.tau_star = idx;
        }
    }
    return res;
}

std::int64_t t_act_slots(DurUs t_min_us, int r, DurUs slot_us) {
    assert(r >= 1 && t_min_us > 0);
    return ceil_div(t_min_us, static_cast<std::int64_t>(r) * slot_us);
}

std::vector<std::int64_t> build_wake_offsets(DurUs t_min_us, int r, DurUs slot_us) {
    const std::int64_t m = t_min_us / slot_us; // floor: never OFF past T_min
    const std::int64_t a = t_act_slots(t_min_us, r, slot_us);
    std::vector<std::int64_t> offsets;
    for (int k = 1; k < r; ++k) {
        const std::int64_t o = k * a;
        if (o < m)
            offsets.push_back(o);
    }
    offsets.push_back(m);
    return offsets;
}

std::array<std::uint8_t, 6> encode_sleep_command(const SleepCommand& cmd) {
    std::array<std::uint8_t, 6> out{};
    out[0] = static_cast<std::uint8_t>(cmd.kind);
    out[1] = static_cast<std::uint8_t>(cmd.value & 0xFF);
    out[2] = static_cast<std::uint8_t>((cmd.value >> 8) & 0xFF);
    out[3] = static_cast<std::uint8_t>((cmd.value >> 16) & 0xFF);
    out[4] = static_cast<std::uint8_t>((cmd.value >> 24) & 0xFF);
    out[5] = cmd.r;
    return out;
}

std::optional<SleepCommand> decode_sleep_command(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != 6)
        return std::nullopt;
    if (bytes[0] != static_cast<std::uint8_t>(SleepCommandKind::FirstHopCount) &&
        bytes[0] != static_cast<std::uint8_t>(SleepCommandKind::MultiHopDuration))
        return std::nullopt;
    SleepCommand cmd;
    cmd.kind = static_cast<SleepCommandKind>(bytes[0]);
    cmd.value = static_cast<std::uint32_t>(bytes[1]) | (static_cast<std::uint32_t>(bytes[2]) << 8) |
                (static_cast<std::uint32_t>(bytes[3]) << 16) |
                (static_cast<std::uint32_t>(bytes[4]) << 24);
    cmd.r = bytes[5];
    return cmd;
}

std::int64_t first_hop_sleep_count(const LinkCells& lc, const Slotframe& frame, Asn delivery_asn,
                                   TimeUs next_gen) {
    const Asn earliest_tx_slot = ceil_div(next_gen, frame.slot_us);
    const Asn first_tx = next_instance_at_or_after(lc, frame, earliest_tx_slot);
    return count_instances(lc, frame, delivery_asn + 1, first_tx);
}

std::optional<SleepCommand> multi_hop_sleep_command(const PrilLinkConfig& cfg, const TxPrilState& tx,
                                                    TimeUs delivery_slot_end, DurUs slot_us) {
    if (!tx.armed)
        return std::nullopt;
    // slots already consumed draining the buffer, from the trigger arrival
    // to the end of the delivery slot (rounded up so the receiver is never
    // OFF in a slot where tau* could legally transmit again)
    const std::int64_t drained = ceil_div(delivery_slot_end - tx.trigger_arrival, slot_us);
    const auto& offsets = cfg.wake_offsets_slots;
    auto first = std::upper_bound(offsets.begin(), offsets.end(), drained);
    if (first == offsets.end())
        return std::nullopt; // budget fully spent while draining
    SleepCommand cmd;
    cmd.kind = SleepCommandKind::MultiHopDuration;
    cmd.value = static_cast<std::uint32_t>(*first - drained);
    cmd.r = static_cast<std::uint8_t>(offsets.end() - first);
    return cmd;
}

bool rx_instance_enabled(const RxLinkState& rx, const Slotframe& frame, Asn asn) {
    switch (rx.mode) {
    case RxLinkState::Mode::AlwaysOn:
        return true;
    case RxLinkState::Mode::FirstHopOff:
        return asn >= rx.off_until_asn;
    case RxLinkState::Mode::Cycle:
        return frame.slot_start(asn) >= rx.off_until_time;
    }
    return true;
}

Asn rx_next_enabled_instance(const RxLinkState& rx, const LinkCells& lc, const Slotframe& frame,
                             Asn from) {
    switch (rx.mode) {
    case RxLinkState::Mode::AlwaysOn:
        return next_instance_at_or_after(lc, frame, from);
    case RxLinkState::Mode::FirstHopOff:
        return next_instance_at_or_after(lc, frame, std::max(from, rx.off_until_asn));
    case RxLinkState::Mode::Cycle: {
        const Asn on_from = ceil_div(rx.off_until_time, frame.slot_us);
        return next_instance_at_or_after(lc, frame, std::max(from, on_from));
    }
    }
    return next_instance_at_or_after(lc, frame, from);
}

void rx_after_idle_instance(RxLinkState& rx, const Slotframe& frame, Asn asn) {
    if (rx.mode == RxLinkState::Mode::Cycle) {
        if (rx.next_window < rx.window_slots.size()) {
            rx.off_until_time = frame.slot_end(asn) + rx.window_slots[rx.next_window] * frame.slot_us;
            ++rx.next_window;
        } else {
            rx = RxLinkState{};
        }
    } else if (rx.mode == RxLinkState::Mode::FirstHopOff) {
        rx = RxLinkState{}; // skip count exhausted, permanently ON again
    }
}

void rx_after_frame_without_command(RxLinkState& rx) {
    // The wake holds while traffic keeps flowing; a Cycle keeps its pending
    // windows for the next idle instance, a spent FirstHopOff normalizes.
    if (rx.mode == RxLinkState::Mode::FirstHopOff)
        rx = RxLinkState{};
}

bool rx_apply_command(RxLinkState& rx, const SleepCommand& cmd, const PrilLinkConfig& cfg,
                      const LinkCells& lc, const Slotframe& frame, Asn asn) {
    if (cmd.kind == SleepCommandKind::FirstHopCount) {
        if (cmd.value == 0)
            return false;
        RxLinkState next;
        next.mode = RxLinkState::Mode::FirstHopOff;
        next.off_until_asn = nth_instance_after(lc, frame, asn, cmd.value) + 1;
        rx = next;
        return true;
    }

    const auto& offsets = cfg.wake_offsets_slots;
    const auto total = static_cast<std::int64_t>(offsets.size());
    if (cmd.value == 0 || cmd.r == 0 || cmd.r > total)
        return false;
    // The command carries the first window and the number of windows that
    // remain out of the configured schedule; the later windows are the
    // consecutive offset gaps, the last one truncated at T_min.
    const std::int64_t k1 = total - cmd.r;
    RxLinkState next;
    next.mode = RxLinkState::Mode::Cycle;
    next.off_until_time = frame.slot_end(asn) + static_cast<std::int64_t>(cmd.value) * frame.slot_us;
    for (std::int64_t i = k1 + 1; i < total; ++i)
        next.window_slots.push_back(offsets[static_cast<std::size_t>(i)] -
                                    offsets[static_cast<std::size_t>(i - 1)]);
    rx = next;
    return true;
}

} // namespace tschsim
