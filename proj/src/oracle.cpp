#include "tschsim/oracle.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace tschsim {

namespace {

constexpr TimeUs kNever = std::numeric_limits<TimeUs>::max();

// Naive receiver bookkeeping: sleep windows are walked slot by slot.
struct OracleRx {
    enum class Mode { AlwaysOn, SkipInstances, Windows } mode = Mode::AlwaysOn;
    std::int64_t skip_left = 0;      // SkipInstances: cell instances still to skip
    bool sleeping = false;           // Windows
    std::int64_t off_slots_left = 0; // Windows: whole slots still to sleep
    std::vector<std::int64_t> window_lens;
    std::size_t next_window = 0;
};

struct OracleLink {
    const ScenarioLink* cfg = nullptr;
    std::uint32_t index = 0;
    std::deque<Packet> queue;
    OracleRx rx;
    TxPrilState tx_pril;
    int head_retries = 0;
};

} // namespace

RunReport oracle_run(const Scenario& sc, DurUs cap_us) {
    if (sc.duration_us > cap_us)
        throw std::invalid_argument("oracle_run: duration exceeds the brute-force cap");

    const Slotframe& frame = sc.frame;
    const Asn horizon_asn = sc.duration_us / frame.slot_us;

    std::vector<OracleLink> links(sc.links.size());
    for (std::size_t i = 0; i < sc.links.size(); ++i) {
        links[i].cfg = &sc.links[i];
        links[i].index = static_cast<std::uint32_t>(i);
    }
    std::vector<EnergyAccount> energy(sc.node_names.size());
    std::vector<std::vector<TimeUs>> samples(sc.flows.size());
    RunCounters counters;

    // flow -> link index per hop
    std::vector<std::vector<std::uint32_t>> hop_link(sc.flows.size());
    std::vector<std::int64_t> next_gen_index(sc.flows.size(), 0);
    std::vector<TimeUs> next_gen_time(sc.flows.size(), kNever);
    for (std::size_t f = 0; f < sc.flows.size(); ++f) {
        const Flow& flow = sc.flows[f];
        for (std::size_t h = 0; h + 1 < flow.path.size(); ++h) {
            const Link want{flow.path[h], flow.path[h + 1]};
            for (std::size_t i = 0; i < sc.links.size(); ++i)
                if (sc.links[i].link == want)
                    hop_link[f].push_back(static_cast<std::uint32_t>(i));
        }
        const TimeUs t0 = generation_time(flow, 0);
        next_gen_time[f] = t0 < sc.duration_us ? t0 : kNever;
    }

    auto enqueue = [&](std::uint32_t link_idx, Packet&& p) {
        OracleLink& L = links[link_idx];
        if (sc.queue_cap && static_cast<std::int64_t>(L.queue.size()) >= *sc.queue_cap) {
            ++counters.dropped_queue_overflow;
            return;
        }
        if (L.cfg->pril.active() && p.flow == L.cfg->pril.tau_star_flow) {
            L.tx_pril.armed = true;
            L.tx_pril.trigger_arrival = p.ready_time;
        }
        L.queue.push_back(std::move(p));
    };

    // cells active per slot offset, ordered by channel offset
    std::vector<std::vector<Cell>> slot_cells(static_cast<std::size_t>(frame.num_slots));
    for (int s = 0; s < frame.num_slots; ++s)
        slot_cells[static_cast<std::size_t>(s)] = cells_in_slot(sc.cells, frame, s);

    for (Asn asn = 0; asn < horizon_asn; ++asn) {
        const TimeUs slot_start = frame.slot_start(asn);
        const TimeUs slot_end = frame.slot_end(asn);
        const bool counted = slot_end > sc.warmup_us;

        // generations due by this slot's start, in (time, flow) order
        while (true) {
            int best = -1;
            for (std::size_t f = 0; f < sc.flows.size(); ++f)
                if (next_gen_time[f] <= slot_start &&
                    (best < 0 || next_gen_time[f] < next_gen_time[static_cast<std::size_t>(best)]))
                    best = static_cast<int>(f);
            if (best < 0)
                break;
            const auto bf = static_cast<std::size_t>(best);
            Packet p;
            p.flow = best;
            p.seq = next_gen_index[bf];
            p.generation_time = next_gen_time[bf];
            p.ready_time = next_gen_time[bf];
            p.hop = 0;
            ++counters.generated;
            enqueue(hop_link[bf][0], std::move(p));
            ++next_gen_index[bf];
            const TimeUs t = generation_time(sc.flows[bf], next_gen_index[bf]);
            next_gen_time[bf] = t < sc.duration_us ? t : kNever;
        }

        // one whole-slot tick of every sleeping window counter
        std::vector<bool> off_this_slot(links.size(), false);
        for (std::size_t i = 0; i < links.size(); ++i) {
            OracleRx& rx = links[i].rx;
            if (rx.mode == OracleRx::Mode::Windows && rx.sleeping) {
                if (rx.off_slots_left > 0) {
                    off_this_slot[i] = true;
                    --rx.off_slots_left;
                } else {
                    rx.sleeping = false;
                }
            }
        }

        for (const Cell& cell : slot_cells[static_cast<std::size_t>(frame.slot_offset_of(asn))]) {
            std::uint32_t li = 0;
            while (links[li].cfg->link != cell.link)
                ++li;
            OracleLink& L = links[li];
            const ScenarioLink& cfg = *L.cfg;

            bool enabled = true;
            if (L.rx.mode == OracleRx::Mode::SkipInstances) {
                if (L.rx.skip_left > 0) {
                    enabled = false;
                    --L.rx.skip_left;
                    if (L.rx.skip_left == 0)
                        L.rx = OracleRx{};
                } else {
                    L.rx = OracleRx{};
                }
            } else if (L.rx.mode == OracleRx::Mode::Windows) {
                enabled = !off_this_slot[li];
            }

            const bool have_tx = !L.queue.empty() && L.queue.front().ready_time <= slot_start;
            if (!have_tx || !enabled) {
                if (enabled) {
                    if (counted)
                        charge(energy[cfg.link.to], sc.energy, EnergyEvent::IdleListened, 1);
                    if (L.rx.mode == OracleRx::Mode::Windows) {
                        if (L.rx.next_window < L.rx.window_lens.size()) {
                            L.rx.off_slots_left = L.rx.window_lens[L.rx.next_window];
                            ++L.rx.next_window;
                            L.rx.sleeping = true;
                        } else {
                            L.rx = OracleRx{};
                        }
                    }
                }
                continue;
            }

            std::optional<SleepCommand> cmd;
            if (L.queue.size() == 1) {
                if (cfg.pril.technique == PrilTechnique::PrilF) {
                    TimeUs next_gen = kNever;
                    for (int fi : cfg.flows_through)
                        next_gen = std::min(
                            next_gen, next_generation(sc.flows[static_cast<std::size_t>(fi)], slot_start));
                    const std::int64_t v = first_hop_sleep_count(cfg.cells, frame, asn, next_gen);
                    if (v >= 1)
                        cmd = SleepCommand{SleepCommandKind::FirstHopCount,
                                           static_cast<std::uint32_t>(v), 0};
                } else if (cfg.pril.active()) {
                    cmd = multi_hop_sleep_command(cfg.pril, L.tx_pril, slot_end, frame.slot_us);
                }
            }
            if (cmd)
                ++counters.commands_attached;

            ++counters.tx_attempts;
            const int channel = physical_channel(frame, asn, cell.channel_offset);
            const bool delivered =
                transmission_delivered(sc.seed, L.index, asn, sc.channel.loss_for_channel(channel));
            if (counted)
                charge(energy[cfg.link.from], sc.energy,
                       cmd ? EnergyEvent::SentCommand : EnergyEvent::Sent, 1);

            if (!delivered) {
                ++counters.tx_lost;
                if (counted)
                    charge(energy[cfg.link.to], sc.energy, EnergyEvent::IdleListened, 1);
                if (L.rx.mode == OracleRx::Mode::Windows) {
                    if (L.rx.next_window < L.rx.window_lens.size()) {
                        L.rx.off_slots_left = L.rx.window_lens[L.rx.next_window];
                        ++L.rx.next_window;
                        L.rx.sleeping = true;
                    } else {
                        L.rx = OracleRx{};
                    }
                }
                ++L.head_retries;
                if (sc.retry_cap && L.head_retries > *sc.retry_cap) {
                    L.queue.pop_front();
                    L.head_retries = 0;
                    ++counters.dropped_retry_cap;
                }
                continue;
            }

            if (counted)
                charge(energy[cfg.link.to], sc.energy,
                       cmd ? EnergyEvent::ReceivedCommand : EnergyEvent::Received, 1);

            Packet p = L.queue.front();
            L.queue.pop_front();
            L.head_retries = 0;
            if (L.tx_pril.armed && L.queue.empty())
                L.tx_pril.armed = false;

            if (cmd) {
                bool ok = false;
                if (cmd->kind == SleepCommandKind::FirstHopCount) {
                    if (cmd->value >= 1) {
                        L.rx = OracleRx{};
                        L.rx.mode = OracleRx::Mode::SkipInstances;
                        L.rx.skip_left = cmd->value;
                        ok = true;
                    }
                } else {
                    const auto& offsets = cfg.pril.wake_offsets_slots;
                    const auto total = static_cast<std::int64_t>(offsets.size());
                    if (cmd->value >= 1 && cmd->r >= 1 && cmd->r <= total) {
                        const std::int64_t k1 = total - cmd->r;
                        L.rx = OracleRx{};
                        L.rx.mode = OracleRx::Mode::Windows;
                        L.rx.sleeping = true;
                        L.rx.off_slots_left = cmd->value;
                        for (std::int64_t i = k1 + 1; i < total; ++i)
                            L.rx.window_lens.push_back(offsets[static_cast<std::size_t>(i)] -
                                                       offsets[static_cast<std::size_t>(i - 1)]);
                        ok = true;
                    }
                }
                if (ok)
                    ++counters.commands_applied;
                else
                    ++counters.ignored_commands;
            }
            // a frame without a (valid) command holds the receiver awake

            const Flow& flow = sc.flows[static_cast<std::size_t>(p.flow)];
            const std::size_t next_hop = p.hop + 1;
            if (next_hop == flow.path.size() - 1) {
                ++counters.delivered;
                if (counted)
                    samples[static_cast<std::size_t>(p.flow)].push_back(slot_end - p.generation_time);
            } else {
                p.hop = next_hop;
                p.ready_time = slot_end;
                enqueue(hop_link[static_cast<std::size_t>(p.flow)][next_hop], std::move(p));
            }
        }
    }

    RunReport rep;
    rep.seed = sc.seed;
    rep.duration_us = sc.duration_us;
    rep.warmup_us = sc.warmup_us;
    rep.node_names = sc.node_names;
    rep.node_energy = energy;
    for (const Flow& f : sc.flows)
        rep.flow_names.push_back(f.name);
    std::vector<TimeUs> merged;
    for (auto& s : samples) {
        merged.insert(merged.end(), s.begin(), s.end());
        rep.flow_latency.push_back(latency_summary(s));
    }
    rep.merged_latency = latency_summary(merged);
    for (const auto& L : links)
        counters.in_queue_at_end += static_cast<std::int64_t>(L.queue.size());
    rep.counters = counters;
    return rep;
}

} // namespace tschsim
