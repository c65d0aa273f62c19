#include "tschsim/schedule.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace tschsim {

namespace {

std::string cell_str(const Cell& c) {
    std::ostringstream os;
    os << "(slot " << c.slot_offset << ", choffset " << c.channel_offset << ", link " << c.link.from
       << "->" << c.link.to << ")";
    return os.str();
}

} // namespace

std::vector<ScheduleIssue> validate_schedule(std::span<const Cell> cells, const Slotframe& frame) {
    std::vector<ScheduleIssue> issues;

    std::map<std::pair<int, int>, const Cell*> by_coord;
    // node -> slot offsets it is busy in, for the half-duplex check
    std::map<std::pair<NodeId, int>, const Cell*> by_node_slot;

    for (const Cell& c : cells) {
        if (c.slot_offset < 0 || c.slot_offset >= frame.num_slots)
            issues.push_back({"slot offset out of range: " + cell_str(c)});
        if (c.channel_offset < 0 || c.channel_offset >= frame.num_channel_offsets)
            issues.push_back({"channel offset out of range: " + cell_str(c)});
        if (c.link.from == c.link.to)
            issues.push_back({"cell links a node to itself: " + cell_str(c)});

        auto [it, fresh] = by_coord.try_emplace({c.slot_offset, c.channel_offset}, &c);
        if (!fresh)
            issues.push_back({"duplicate coordinate: " + cell_str(c) + " and " + cell_str(*it->second)});

        for (NodeId n : {c.link.from, c.link.to}) {
            auto [nit, nfresh] = by_node_slot.try_emplace({n, c.slot_offset}, &c);
            if (!nfresh && nit->second != &c)
                issues.push_back({"node " + std::to_string(n) + " double-booked in slot " +
                                  std::to_string(c.slot_offset) + ": " + cell_str(c) + " and " +
                                  cell_str(*nit->second)});
        }
    }
    return issues;
}

std::vector<Cell> cells_in_slot(std::span<const Cell> cells, const Slotframe& frame, Asn asn) {
    std::vector<Cell> out;
    const int offset = frame.slot_offset_of(asn);
    for (const Cell& c : cells)
        if (c.slot_offset == offset)
            out.push_back(c);
    std::sort(out.begin(), out.end(), [](const Cell& a, const Cell& b) {
        return a.channel_offset < b.channel_offset;
    });
    return out;
}

int physical_channel(const Slotframe& frame, Asn asn, int channel_offset) {
    const auto len = static_cast<std::int64_t>(frame.hop_sequence.size());
    return frame.hop_sequence[static_cast<std::size_t>((asn + channel_offset) % len)];
}

LinkCells compile_link_cells(std::span<const Cell> cells, Link link) {
    LinkCells lc;
    lc.link = link;
    std::vector<std::pair<int, int>> pairs;
    for (const Cell& c : cells)
        if (c.link == link)
            pairs.emplace_back(c.slot_offset, c.channel_offset);
    std::sort(pairs.begin(), pairs.end());
    for (auto& [slot, choff] : pairs) {
        lc.slot_offsets.push_back(slot);
        lc.channel_offsets.push_back(choff);
    }
    return lc;
}

Asn next_instance_at_or_after(const LinkCells& lc, const Slotframe& frame, Asn from) {
    const Asn frame_base = (from / frame.num_slots) * frame.num_slots;
    const int offset = frame.slot_offset_of(from);
    auto it = std::lower_bound(lc.slot_offsets.begin(), lc.slot_offsets.end(), offset);
    if (it != lc.slot_offsets.end())
        return frame_base + *it;
    return frame_base + frame.num_slots + lc.slot_offsets.front();
}

Asn nth_instance_after(const LinkCells& lc, const Slotframe& frame, Asn after, std::int64_t n) {
    const auto m = static_cast<std::int64_t>(lc.per_frame());
    Asn a = next_instance_at_or_after(lc, frame, after + 1);
    std::int64_t remaining = n - 1;
    if (remaining == 0)
        return a;
    // position of `a` within its frame's offset list
    const Asn frame_base = (a / frame.num_slots) * frame.num_slots;
    auto it = std::lower_bound(lc.slot_offsets.begin(), lc.slot_offsets.end(), frame.slot_offset_of(a));
    std::int64_t idx = it - lc.slot_offsets.begin();
    const std::int64_t full = (idx + remaining) / m;
    const std::int64_t pos = (idx + remaining) % m;
    return frame_base + full * frame.num_slots + lc.slot_offsets[static_cast<std::size_t>(pos)];
}

std::int64_t count_instances(const LinkCells& lc, const Slotframe& frame, Asn begin, Asn end) {
    if (end <= begin || lc.empty())
        return 0;
    auto count_below = [&](Asn b) {
        // instances with asn in [0, b)
        const std::int64_t frames = b / frame.num_slots;
        const int offset = frame.slot_offset_of(b);
        auto it = std::lower_bound(lc.slot_offsets.begin(), lc.slot_offsets.end(), offset);
        return frames * static_cast<std::int64_t>(lc.per_frame()) + (it - lc.slot_offsets.begin());
    };
    return count_below(end) - count_below(begin);
}

int instance_channel_offset(const LinkCells& lc, const Slotframe& frame, Asn asn) {
    const int offset = frame.slot_offset_of(asn);
    auto it = std::lower_bound(lc.slot_offsets.begin(), lc.slot_offsets.end(), offset);
    return lc.channel_offsets[static_cast<std::size_t>(it - lc.slot_offsets.begin())];
}

} // namespace tschsim
