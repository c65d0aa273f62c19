#ifndef TSCHSIM_SCHEDULE_HPP
#define TSCHSIM_SCHEDULE_HPP

#include <span>
#include <string>
#include <vector>

#include "tschsim/types.hpp"

namespace tschsim {

/// The repeating slot/channel matrix. 101 slots of 20 ms (period 2.02 s)
/// is the usual configuration and the built-in scenarios use it.
struct Slotframe {
    int num_slots = 101;
    DurUs slot_us = 20'000;
    int num_channel_offsets = 16;
    std::vector<int> hop_sequence; // physical channels, distinct entries

    DurUs period_us() const { return static_cast<DurUs>(num_slots) * slot_us; }
    TimeUs slot_start(Asn asn) const { return asn * slot_us; }
    TimeUs slot_end(Asn asn) const { return (asn + 1) * slot_us; }
    int slot_offset_of(Asn asn) const { return static_cast<int>(asn % num_slots); }

    bool operator==(const Slotframe&) const = default;
};

/// One coordinate of the matrix, owned by a directed link.
struct Cell {
    int slot_offset = 0;
    int channel_offset = 0;
    Link link;

    bool operator==(const Cell&) const = default;
};

struct ScheduleIssue {
    std::string what;
};

/// Checks the cell invariants: coordinates unique, no node present in two
/// cells of the same slot offset, offsets inside the slotframe bounds.
/// Violations are data, not failures: all of them are returned at once.
std::vector<ScheduleIssue> validate_schedule(std::span<const Cell> cells, const Slotframe& frame);

/// Cells active in the slot `asn` (those with slot_offset == asn mod num_slots).
std::vector<Cell> cells_in_slot(std::span<const Cell> cells, const Slotframe& frame, Asn asn);

/// 802.15.4 hop rule: hop_sequence[(asn + channel_offset) mod len].
int physical_channel(const Slotframe& frame, Asn asn, int channel_offset);

/// The cells of one link, compiled for instance arithmetic. Slot offsets are
/// sorted; a link may own several cells per slotframe and its instances are
/// enumerated in ASN order.
struct LinkCells {
    Link link;
    std::vector<int> slot_offsets;    // sorted, distinct
    std::vector<int> channel_offsets; // parallel to slot_offsets

    bool empty() const { return slot_offsets.empty(); }
    std::size_t per_frame() const { return slot_offsets.size(); }
    bool operator==(const LinkCells&) const = default;
};

LinkCells compile_link_cells(std::span<const Cell> cells, Link link);

/// First instance of the link with ASN >= from. Requires a non-empty cell set.
Asn next_instance_at_or_after(const LinkCells& lc, const Slotframe& frame, Asn from);

/// ASN of the n-th instance strictly after `after` (n >= 1).
Asn nth_instance_after(const LinkCells& lc, const Slotframe& frame, Asn after, std::int64_t n);

/// Number of instances with ASN in [begin, end).
std::int64_t count_instances(const LinkCells& lc, const Slotframe& frame, Asn begin, Asn end);

/// Channel offset of the instance at `asn` (which must be an instance of lc).
int instance_channel_offset(const LinkCells& lc, const Slotframe& frame, Asn asn);

} // namespace tschsim

#endif
