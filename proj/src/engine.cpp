#include "tschsim/engine.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>

namespace tschsim {

namespace {

constexpr TimeUs kNever = std::numeric_limits<TimeUs>::max();

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    return (a + b - 1) / b;
}

struct LinkRuntime {
    const ScenarioLink* cfg = nullptr;
    std::uint32_t index = 0;
    std::deque<Packet> queue;
    RxLinkState rx;
    TxPrilState tx_pril;
    int head_retries = 0;
    Asn settled_upto = 0; // instances below this ASN are already accounted
};

struct FlowRuntime {
    std::int64_t next_index = 0;
    TimeUs next_time = kNever;
    // link index per hop of the path
    std::vector<std::uint32_t> hop_link;
};

class Engine {
public:
    explicit Engine(const Scenario& sc) : sc_(sc) {}

    RunReport run();

private:
    const Scenario& sc_;
    std::vector<LinkRuntime> links_;
    std::vector<FlowRuntime> flows_;
    std::vector<EnergyAccount> energy_;
    std::vector<std::vector<TimeUs>> samples_;
    RunCounters counters_;
    Asn horizon_asn_ = 0;
    Asn warmup_first_asn_ = 0;

    bool counted(Asn asn) const { return asn >= warmup_first_asn_; }

    void enqueue(std::uint32_t link_idx, Packet&& p);
    void settle_idle_span(LinkRuntime& L, Asn upto);
    Asn next_link_event(const LinkRuntime& L) const;
    void process_instance(LinkRuntime& L, Asn asn);
    RunReport finalize();
};

void Engine::enqueue(std::uint32_t link_idx, Packet&& p) {
    LinkRuntime& L = links_[link_idx];
    if (sc_.queue_cap && static_cast<std::int64_t>(L.queue.size()) >= *sc_.queue_cap) {
        ++counters_.dropped_queue_overflow;
        return;
    }
    const PrilLinkConfig& pril = L.cfg->pril;
    if (pril.active() && p.flow == pril.tau_star_flow) {
        L.tx_pril.armed = true;
        L.tx_pril.trigger_arrival = p.ready_time;
    }
    L.queue.push_back(std::move(p));
}

// Charges idle listening for every instance of L in [settled_upto, upto) in
// closed form. By construction no frame is exchanged and no receiver state
// transition happens inside the span: transmissions and Cycle wake-ups are
// always scheduled as events.
void Engine::settle_idle_span(LinkRuntime& L, Asn upto) {
    if (upto <= L.settled_upto) {
        L.settled_upto = std::max(L.settled_upto, upto);
        return;
    }
    const LinkCells& lc = L.cfg->cells;
    Asn on_from = L.settled_upto;
    switch (L.rx.mode) {
    case RxLinkState::Mode::AlwaysOn:
        break;
    case RxLinkState::Mode::FirstHopOff:
        on_from = std::max(on_from, L.rx.off_until_asn);
        break;
    case RxLinkState::Mode::Cycle:
        on_from = std::max(on_from, static_cast<Asn>(ceil_div(L.rx.off_until_time, sc_.frame.slot_us)));
        break;
    }
    const std::int64_t idle =
        count_instances(lc, sc_.frame, std::max(on_from, warmup_first_asn_), upto);
    if (idle > 0) {
        // A Cycle receiver transitions at its wake instance, which is always
        // processed as an event, so it never idles inside a settled span.
        assert(L.rx.mode != RxLinkState::Mode::Cycle);
        charge(energy_[L.cfg->link.to], sc_.energy, EnergyEvent::IdleListened, idle);
    }
    L.settled_upto = upto;
}

Asn Engine::next_link_event(const LinkRuntime& L) const {
    const LinkCells& lc = L.cfg->cells;
    if (lc.empty())
        return -1;
    if (!L.queue.empty()) {
        const Asn ready_slot = ceil_div(L.queue.front().ready_time, sc_.frame.slot_us);
        return rx_next_enabled_instance(L.rx, lc, sc_.frame, std::max(L.settled_upto, ready_slot));
    }
    if (L.rx.mode == RxLinkState::Mode::Cycle)
        return rx_next_enabled_instance(L.rx, lc, sc_.frame, L.settled_upto);
    return -1; // nothing can happen here; idle listening settles lazily
}

void Engine::process_instance(LinkRuntime& L, Asn asn) {
    settle_idle_span(L, asn);
    L.settled_upto = asn + 1;

    const Slotframe& frame = sc_.frame;
    const ScenarioLink& cfg = *L.cfg;
    const TimeUs slot_start = frame.slot_start(asn);
    const TimeUs slot_end = frame.slot_end(asn);
    [[maybe_unused]] const bool enabled = rx_instance_enabled(L.rx, frame, asn);
    const bool have_tx = !L.queue.empty() && L.queue.front().ready_time <= slot_start;

    if (!have_tx) {
        // receiver wake-up with nothing on the air
        assert(enabled);
        if (counted(asn))
            charge(energy_[cfg.link.to], sc_.energy, EnergyEvent::IdleListened, 1);
        rx_after_idle_instance(L.rx, frame, asn);
        return;
    }
    assert(enabled && "transmitter never transmits into an OFF receiver");

    // The sleep command is rebuilt on every attempt: a retransmitted frame
    // carries the count or duration that is still usable at this instance.
    std::optional<SleepCommand> cmd;
    if (L.queue.size() == 1) {
        if (cfg.pril.technique == PrilTechnique::PrilF) {
            TimeUs next_gen = kNever;
            for (int fi : cfg.flows_through)
                next_gen = std::min(next_gen,
                                    next_generation(sc_.flows[static_cast<std::size_t>(fi)], slot_start));
            const std::int64_t v = first_hop_sleep_count(cfg.cells, frame, asn, next_gen);
            if (v >= 1)
                cmd = SleepCommand{SleepCommandKind::FirstHopCount, static_cast<std::uint32_t>(v), 0};
        } else if (cfg.pril.active()) {
            cmd = multi_hop_sleep_command(cfg.pril, L.tx_pril, slot_end, frame.slot_us);
        }
    }
    if (cmd)
        ++counters_.commands_attached;

    ++counters_.tx_attempts;
    const int channel =
        physical_channel(frame, asn, instance_channel_offset(cfg.cells, frame, asn));
    const bool delivered = transmission_delivered(sc_.seed, L.index, asn,
                                                  sc_.channel.loss_for_channel(channel));
    if (counted(asn))
        charge(energy_[cfg.link.from], sc_.energy, cmd ? EnergyEvent::SentCommand : EnergyEvent::Sent,
               1);

    if (!delivered) {
        ++counters_.tx_lost;
        if (counted(asn))
            charge(energy_[cfg.link.to], sc_.energy, EnergyEvent::IdleListened, 1);
        // the receiver cannot tell a lost frame from an idle slot
        rx_after_idle_instance(L.rx, frame, asn);
        ++L.head_retries;
        if (sc_.retry_cap && L.head_retries > *sc_.retry_cap) {
            L.queue.pop_front();
            L.head_retries = 0;
            ++counters_.dropped_retry_cap;
        }
        return;
    }

    if (counted(asn))
        charge(energy_[cfg.link.to], sc_.energy,
               cmd ? EnergyEvent::ReceivedCommand : EnergyEvent::Received, 1);

    Packet p = L.queue.front();
    L.queue.pop_front();
    L.head_retries = 0;
    if (L.tx_pril.armed && L.queue.empty())
        L.tx_pril.armed = false;

    if (cmd) {
        if (rx_apply_command(L.rx, *cmd, cfg.pril, cfg.cells, frame, asn))
            ++counters_.commands_applied;
        else {
            ++counters_.ignored_commands;
            rx_after_frame_without_command(L.rx);
        }
    } else {
        rx_after_frame_without_command(L.rx);
    }

    const Flow& flow = sc_.flows[static_cast<std::size_t>(p.flow)];
    const std::size_t next_hop = p.hop + 1;
    if (next_hop == flow.path.size() - 1) {
        ++counters_.delivered;
        if (slot_end > sc_.warmup_us)
            samples_[static_cast<std::size_t>(p.flow)].push_back(slot_end - p.generation_time);
    } else {
        p.hop = next_hop;
        p.ready_time = slot_end;
        enqueue(flows_[static_cast<std::size_t>(p.flow)].hop_link[next_hop], std::move(p));
    }
}

RunReport Engine::run() {
    const Slotframe& frame = sc_.frame;
    horizon_asn_ = sc_.duration_us / frame.slot_us;
    warmup_first_asn_ = sc_.warmup_us == 0 ? 0 : (sc_.warmup_us - 1) / frame.slot_us + 1;

    links_.resize(sc_.links.size());
    for (std::size_t i = 0; i < sc_.links.size(); ++i) {
        links_[i].cfg = &sc_.links[i];
        links_[i].index = static_cast<std::uint32_t>(i);
    }
    energy_.assign(sc_.node_names.size(), EnergyAccount{});
    samples_.assign(sc_.flows.size(), {});

    flows_.resize(sc_.flows.size());
    for (std::size_t f = 0; f < sc_.flows.size(); ++f) {
        const Flow& flow = sc_.flows[f];
        flows_[f].hop_link.resize(flow.path.size() - 1);
        for (std::size_t h = 0; h + 1 < flow.path.size(); ++h) {
            const Link want{flow.path[h], flow.path[h + 1]};
            auto it = std::lower_bound(sc_.links.begin(), sc_.links.end(), want,
                                       [](const ScenarioLink& l, const Link& k) { return l.link < k; });
            assert(it != sc_.links.end() && it->link == want);
            flows_[f].hop_link[h] = static_cast<std::uint32_t>(it - sc_.links.begin());
        }
        const TimeUs t0 = generation_time(flow, 0);
        flows_[f].next_time = t0 < sc_.duration_us ? t0 : kNever;
    }

    while (true) {
        // next generation, ties broken by flow index (scan order)
        int gen_flow = -1;
        TimeUs gen_time = kNever;
        for (std::size_t f = 0; f < flows_.size(); ++f) {
            if (flows_[f].next_time < gen_time) {
                gen_time = flows_[f].next_time;
                gen_flow = static_cast<int>(f);
            }
        }
        // next link instance under the horizon, ties broken by link index
        int ev_link = -1;
        Asn ev_asn = 0;
        TimeUs ev_time = kNever;
        for (std::size_t i = 0; i < links_.size(); ++i) {
            const Asn a = next_link_event(links_[i]);
            if (a < 0 || a >= horizon_asn_)
                continue;
            const TimeUs t = frame.slot_start(a);
            if (t < ev_time) {
                ev_time = t;
                ev_asn = a;
                ev_link = static_cast<int>(i);
            }
        }

        if (gen_flow < 0 && ev_link < 0)
            break;
        if (gen_flow >= 0 && gen_time <= ev_time) {
            FlowRuntime& fr = flows_[static_cast<std::size_t>(gen_flow)];
            const Flow& flow = sc_.flows[static_cast<std::size_t>(gen_flow)];
            Packet p;
            p.flow = gen_flow;
            p.seq = fr.next_index;
            p.generation_time = gen_time;
            p.ready_time = gen_time;
            p.hop = 0;
            ++counters_.generated;
            enqueue(fr.hop_link[0], std::move(p));
            ++fr.next_index;
            const TimeUs t = generation_time(flow, fr.next_index);
            fr.next_time = t < sc_.duration_us ? t : kNever;
        } else {
            process_instance(links_[static_cast<std::size_t>(ev_link)], ev_asn);
        }
    }

    for (auto& L : links_)
        settle_idle_span(L, horizon_asn_);
    return finalize();
}

RunReport Engine::finalize() {
    RunReport rep;
    rep.seed = sc_.seed;
    rep.duration_us = sc_.duration_us;
    rep.warmup_us = sc_.warmup_us;
    rep.node_names = sc_.node_names;
    rep.node_energy = energy_;
    for (const Flow& f : sc_.flows)
        rep.flow_names.push_back(f.name);

    std::vector<TimeUs> merged;
    for (auto& s : samples_) {
        merged.insert(merged.end(), s.begin(), s.end());
        rep.flow_latency.push_back(latency_summary(s));
    }
    rep.merged_latency = latency_summary(merged);

    for (const auto& L : links_)
        counters_.in_queue_at_end += static_cast<std::int64_t>(L.queue.size());
    rep.counters = counters_;
    assert(counters_.generated == counters_.delivered + counters_.in_queue_at_end +
                                      counters_.dropped_retry_cap + counters_.dropped_queue_overflow);
    return rep;
}

} // namespace

EnergyAccount RunReport::total_energy() const {
    EnergyAccount total;
    for (const auto& e : node_energy) {
        total.send_nj += e.send_nj;
        total.rec_nj += e.rec_nj;
        total.listen_nj += e.listen_nj;
        total.send_count += e.send_count;
        total.rec_count += e.rec_count;
        total.listen_count += e.listen_count;
    }
    return total;
}

RunReport run(const Scenario& scenario) {
    return Engine(scenario).run();
}

} // namespace tschsim
