#include "tschsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

#include "tschsim/analytic.hpp"
#include "tschsim/rng.hpp"

namespace tschsim {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

struct Ctx {
    std::vector<std::string> errors;

    void err(const std::string& where, const std::string& what) {
        errors.push_back(where + ": " + what);
    }
};

bool check_keys(Ctx& ctx, const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    bool ok = true;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* k) { return it.key() == k; }) == allowed.end()) {
            ctx.err(where, "unknown key '" + it.key() + "'");
            ok = false;
        }
    }
    return ok;
}

std::optional<std::int64_t> get_int(Ctx& ctx, const json& obj, const std::string& where,
                                    const char* key, bool required) {
    if (!obj.contains(key)) {
        if (required)
            ctx.err(where, std::string("missing required key '") + key + "'");
        return std::nullopt;
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
        ctx.err(where, std::string("'") + key + "' must be an integer");
        return std::nullopt;
    }
    return v.get<std::int64_t>();
}

std::optional<std::string> get_str(Ctx& ctx, const json& obj, const std::string& where,
                                   const char* key, bool required) {
    if (!obj.contains(key)) {
        if (required)
            ctx.err(where, std::string("missing required key '") + key + "'");
        return std::nullopt;
    }
    const json& v = obj.at(key);
    if (!v.is_string()) {
        ctx.err(where, std::string("'") + key + "' must be a string");
        return std::nullopt;
    }
    return v.get<std::string>();
}

// A duration field: either a string like "10 min" / "600 s" / "200 ms", or a
// bare number in `bare_unit_us`.
std::optional<DurUs> get_duration(Ctx& ctx, const json& obj, const std::string& where,
                                  const char* key, DurUs bare_unit_us, bool required) {
    if (!obj.contains(key)) {
        if (required)
            ctx.err(where, std::string("missing required key '") + key + "'");
        return std::nullopt;
    }
    const json& v = obj.at(key);
    if (v.is_string()) {
        auto parsed = parse_duration_us(v.get<std::string>(), bare_unit_us);
        if (!parsed) {
            ctx.err(where, std::string("'") + key + "': cannot parse duration '" +
                               v.get<std::string>() + "'");
            return std::nullopt;
        }
        return parsed;
    }
    if (v.is_number()) {
        const double us = v.get<double>() * static_cast<double>(bare_unit_us);
        return static_cast<DurUs>(std::llround(us));
    }
    ctx.err(where, std::string("'") + key + "' must be a number or duration string");
    return std::nullopt;
}

const std::map<std::string, DurUs>& duration_units() {
    static const std::map<std::string, DurUs> units = {
        {"us", 1},
        {"ms", 1'000},
        {"s", kUsPerSecond},
        {"min", 60 * kUsPerSecond},
        {"h", 3'600 * kUsPerSecond},
        {"d", 86'400 * kUsPerSecond},
        {"y", 365LL * 86'400 * kUsPerSecond},
    };
    return units;
}

std::string technique_name(PrilTechnique t) {
    switch (t) {
    case PrilTechnique::None:
        return "none";
    case PrilTechnique::PrilF:
        return "pril-f";
    case PrilTechnique::PrilM:
        return "pril-m";
    case PrilTechnique::PrilMl:
        return "pril-ml";
    }
    return "none";
}

std::optional<PrilTechnique> technique_from(const std::string& s) {
    if (s == "none")
        return PrilTechnique::None;
    if (s == "pril-f")
        return PrilTechnique::PrilF;
    if (s == "pril-m")
        return PrilTechnique::PrilM;
    if (s == "pril-ml")
        return PrilTechnique::PrilMl;
    return std::nullopt;
}

} // namespace

std::optional<DurUs> parse_duration_us(const std::string& text, DurUs bare_unit_us) {
    std::string s = text;
    // trim
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
    if (s.empty())
        return std::nullopt;

    std::size_t split = s.size();
    while (split > 0 && (std::isalpha(static_cast<unsigned char>(s[split - 1]))))
        --split;
    std::string num_part = s.substr(0, split);
    std::string unit_part = s.substr(split);
    while (!num_part.empty() && std::isspace(static_cast<unsigned char>(num_part.back())))
        num_part.pop_back();

    DurUs unit_us = bare_unit_us;
    if (!unit_part.empty()) {
        auto it = duration_units().find(unit_part);
        if (it == duration_units().end())
            return std::nullopt;
        unit_us = it->second;
    }
    Ratio r;
    if (!parse_decimal(num_part, r))
        return std::nullopt;
    const __int128 scaled = r.num * unit_us;
    if (scaled % r.den != 0)
        return std::nullopt; // not a whole number of microseconds
    const __int128 us = scaled / r.den;
    if (us < 0 || us > std::numeric_limits<DurUs>::max())
        return std::nullopt;
    return static_cast<DurUs>(us);
}

LoadResult load_scenario(const std::string& text, const ScenarioOverrides& overrides) {
    Ctx ctx;
    LoadResult result;

    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        result.errors.push_back("scenario: not a valid JSON object");
        return result;
    }
    check_keys(ctx, doc, "scenario",
               {"slotframe", "nodes", "cells", "flows", "pril", "channel", "energy", "run"});

    Scenario sc;

    // ---- slotframe ----
    if (doc.contains("slotframe") && doc["slotframe"].is_object()) {
        const json& sf = doc["slotframe"];
        check_keys(ctx, sf, "slotframe",
                   {"num_slots", "slot_duration_us", "channel_offsets", "hop_sequence"});
        if (auto v = get_int(ctx, sf, "slotframe", "num_slots", true)) {
            if (*v < 1)
                ctx.err("slotframe", "num_slots must be >= 1");
            else
                sc.frame.num_slots = static_cast<int>(*v);
        }
        if (auto v = get_int(ctx, sf, "slotframe", "slot_duration_us", true)) {
            if (*v < 1)
                ctx.err("slotframe", "slot_duration_us must be positive");
            else
                sc.frame.slot_us = *v;
        }
        if (auto v = get_int(ctx, sf, "slotframe", "channel_offsets", true)) {
            if (*v < 1 || *v > 16)
                ctx.err("slotframe", "channel_offsets must be in [1, 16]");
            else
                sc.frame.num_channel_offsets = static_cast<int>(*v);
        }
        if (sf.contains("hop_sequence") && sf["hop_sequence"].is_array()) {
            for (const auto& c : sf["hop_sequence"]) {
                if (!c.is_number_integer())
                    ctx.err("slotframe", "hop_sequence entries must be integers");
                else
                    sc.frame.hop_sequence.push_back(c.get<int>());
            }
            std::set<int> uniq(sc.frame.hop_sequence.begin(), sc.frame.hop_sequence.end());
            if (uniq.size() != sc.frame.hop_sequence.size())
                ctx.err("slotframe", "hop_sequence entries must be distinct");
            if (static_cast<int>(sc.frame.hop_sequence.size()) < sc.frame.num_channel_offsets)
                ctx.err("slotframe", "hop_sequence shorter than channel_offsets");
        } else {
            ctx.err("slotframe", "missing hop_sequence array");
        }
    } else {
        ctx.err("scenario", "missing slotframe section");
    }

    // ---- nodes ----
    std::map<std::string, NodeId> node_index;
    std::vector<std::optional<std::string>> parents;
    if (doc.contains("nodes") && doc["nodes"].is_array()) {
        for (std::size_t i = 0; i < doc["nodes"].size(); ++i) {
            const json& n = doc["nodes"][i];
            const std::string where = "nodes[" + std::to_string(i) + "]";
            if (!n.is_object()) {
                ctx.err(where, "must be an object");
                continue;
            }
            check_keys(ctx, n, where, {"id", "parent"});
            auto id = get_str(ctx, n, where, "id", true);
            if (!id)
                continue;
            if (node_index.count(*id)) {
                ctx.err(where, "duplicate node id '" + *id + "'");
                continue;
            }
            node_index[*id] = static_cast<NodeId>(sc.node_names.size());
            sc.node_names.push_back(*id);
            parents.push_back(get_str(ctx, n, where, "parent", false));
        }
        for (std::size_t i = 0; i < parents.size(); ++i)
            if (parents[i] && !node_index.count(*parents[i]))
                ctx.err("nodes[" + std::to_string(i) + "]", "unknown parent '" + *parents[i] + "'");
    } else {
        ctx.err("scenario", "missing nodes section");
    }

    auto resolve_node = [&](Ctx& c, const std::string& where, const std::string& name,
                            NodeId& out) {
        auto it = node_index.find(name);
        if (it == node_index.end()) {
            c.err(where, "unknown node '" + name + "'");
            return false;
        }
        out = it->second;
        return true;
    };

    // ---- cells ----
    if (doc.contains("cells") && doc["cells"].is_array()) {
        for (std::size_t i = 0; i < doc["cells"].size(); ++i) {
            const json& c = doc["cells"][i];
            const std::string where = "cells[" + std::to_string(i) + "]";
            if (!c.is_object()) {
                ctx.err(where, "must be an object");
                continue;
            }
            check_keys(ctx, c, where, {"slot", "choffset", "from", "to"});
            Cell cell;
            bool ok = true;
            if (auto v = get_int(ctx, c, where, "slot", true))
                cell.slot_offset = static_cast<int>(*v);
            else
                ok = false;
            if (auto v = get_int(ctx, c, where, "choffset", true))
                cell.channel_offset = static_cast<int>(*v);
            else
                ok = false;
            auto from = get_str(ctx, c, where, "from", true);
            auto to = get_str(ctx, c, where, "to", true);
            ok = ok && from && to && resolve_node(ctx, where, *from, cell.link.from) &&
                 resolve_node(ctx, where, *to, cell.link.to);
            if (ok)
                sc.cells.push_back(cell);
        }
        for (const auto& issue : validate_schedule(sc.cells, sc.frame))
            ctx.err("cells", issue.what);
    } else {
        ctx.err("scenario", "missing cells section");
    }

    // ---- run (parsed before flows: the seed feeds their defaults) ----
    if (doc.contains("run") && doc["run"].is_object()) {
        const json& r = doc["run"];
        check_keys(ctx, r, "run", {"duration_s", "seed", "warmup_s"});
        if (auto v = get_duration(ctx, r, "run", "duration_s", kUsPerSecond, true)) {
            if (*v < 0)
                ctx.err("run", "duration must be >= 0");
            else
                sc.duration_us = *v;
        }
        if (auto v = get_int(ctx, r, "run", "seed", true))
            sc.seed = static_cast<std::uint64_t>(*v);
        if (auto v = get_duration(ctx, r, "run", "warmup_s", kUsPerSecond, false)) {
            if (*v < 0)
                ctx.err("run", "warmup must be >= 0");
            else
                sc.warmup_us = *v;
        }
    } else {
        ctx.err("scenario", "missing run section");
    }
    if (overrides.seed)
        sc.seed = *overrides.seed;
    if (overrides.duration_us)
        sc.duration_us = *overrides.duration_us;
    if (overrides.warmup_us)
        sc.warmup_us = *overrides.warmup_us;
    if (sc.warmup_us > sc.duration_us)
        ctx.err("run", "warmup exceeds duration");

    // ---- flows ----
    if (doc.contains("flows") && doc["flows"].is_array()) {
        std::set<std::string> flow_ids;
        for (std::size_t i = 0; i < doc["flows"].size(); ++i) {
            const json& f = doc["flows"][i];
            const std::string where = "flows[" + std::to_string(i) + "]";
            if (!f.is_object()) {
                ctx.err(where, "must be an object");
                continue;
            }
            check_keys(ctx, f, where,
                       {"id", "source", "path", "period_s", "drift_ppm", "phase_s", "payload_b"});
            Flow flow;
            bool ok = true;
            if (auto id = get_str(ctx, f, where, "id", true)) {
                flow.name = *id;
                if (!flow_ids.insert(*id).second) {
                    ctx.err(where, "duplicate flow id '" + *id + "'");
                    ok = false;
                }
            } else {
                ok = false;
            }
            auto src = get_str(ctx, f, where, "source", true);
            if (src)
                ok = resolve_node(ctx, where, *src, flow.source) && ok;
            else
                ok = false;
            if (f.contains("path") && f["path"].is_array()) {
                for (const auto& p : f["path"]) {
                    NodeId n = 0;
                    if (p.is_string() && resolve_node(ctx, where, p.get<std::string>(), n))
                        flow.path.push_back(n);
                    else
                        ok = false;
                }
            } else {
                ctx.err(where, "missing path array");
                ok = false;
            }
            if (ok && flow.path.size() < 2) {
                ctx.err(where, "path must contain at least two nodes");
                ok = false;
            }
            if (ok && flow.path.front() != flow.source) {
                ctx.err(where, "path must start at the source node");
                ok = false;
            }
            for (std::size_t h = 0; ok && h + 1 < flow.path.size(); ++h)
                if (flow.path[h] == flow.path[h + 1]) {
                    ctx.err(where, "repeated consecutive node in path");
                    ok = false;
                }
            if (auto v = get_duration(ctx, f, where, "period_s", kUsPerSecond, true)) {
                if (*v < 1) {
                    ctx.err(where, "period must be positive");
                    ok = false;
                } else {
                    flow.nominal_period_us = *v;
                }
            } else {
                ok = false;
            }

            const std::size_t idx = i;
            if (f.contains("drift_ppm")) {
                if (!f["drift_ppm"].is_number()) {
                    ctx.err(where, "'drift_ppm' must be a number");
                    ok = false;
                } else {
                    flow.drift_ppb =
                        static_cast<std::int64_t>(std::llround(f["drift_ppm"].get<double>() * 1000.0));
                }
            } else {
                // quartz tolerance default: uniform in [-40, +40] ppm from the seed
                const std::uint64_t u = keyed_u64(sc.seed, kDefaultsStream, idx * 2);
                flow.drift_ppb = static_cast<std::int64_t>(u % 80001) - 40000;
            }
            if (flow.drift_ppb <= -1'000'000'000) {
                ctx.err(where, "drift makes the effective period non-positive");
                ok = false;
            }
            if (f.contains("phase_s")) {
                if (auto v = get_duration(ctx, f, where, "phase_s", kUsPerSecond, false)) {
                    if (*v < 0 || (flow.nominal_period_us > 0 && *v >= flow.nominal_period_us)) {
                        ctx.err(where, "phase must lie in [0, period)");
                        ok = false;
                    } else {
                        flow.phase_us = *v;
                    }
                } else {
                    ok = false;
                }
            } else if (flow.nominal_period_us > 0) {
                flow.phase_us = static_cast<TimeUs>(keyed_u64(sc.seed, kDefaultsStream, idx * 2 + 1) %
                                                    static_cast<std::uint64_t>(flow.nominal_period_us));
            }
            if (auto v = get_int(ctx, f, where, "payload_b", false)) {
                if (*v < 1 || *v > 127) {
                    ctx.err(where, "payload_b must be in [1, 127]");
                    ok = false;
                } else {
                    flow.payload_bytes = static_cast<int>(*v);
                }
            }
            if (ok)
                sc.flows.push_back(flow);
        }
    } else {
        ctx.err("scenario", "missing flows section");
    }

    // ---- channel ----
    if (doc.contains("channel")) {
        const json& ch = doc["channel"];
        if (!ch.is_object()) {
            ctx.err("channel", "must be an object");
        } else {
            check_keys(ctx, ch, "channel",
                       {"loss_probability", "per_channel", "retry_cap", "queue_cap"});
            if (ch.contains("loss_probability")) {
                if (!ch["loss_probability"].is_number())
                    ctx.err("channel", "'loss_probability' must be a number");
                else
                    sc.channel.loss_probability = ch["loss_probability"].get<double>();
            }
            if (ch.contains("per_channel")) {
                if (!ch["per_channel"].is_object())
                    ctx.err("channel", "'per_channel' must map channel ids to probabilities");
                else
                    for (auto it = ch["per_channel"].begin(); it != ch["per_channel"].end(); ++it) {
                        if (!it.value().is_number()) {
                            ctx.err("channel", "per_channel['" + it.key() + "'] must be a number");
                            continue;
                        }
                        try {
                            sc.channel.per_channel[std::stoi(it.key())] = it.value().get<double>();
                        } catch (...) {
                            ctx.err("channel", "per_channel key '" + it.key() + "' is not a channel id");
                        }
                    }
            }
            if (auto v = get_int(ctx, ch, "channel", "retry_cap", false)) {
                if (*v < 0)
                    ctx.err("channel", "retry_cap must be >= 0");
                else
                    sc.retry_cap = static_cast<int>(*v);
            }
            if (auto v = get_int(ctx, ch, "channel", "queue_cap", false)) {
                if (*v < 1)
                    ctx.err("channel", "queue_cap must be >= 1");
                else
                    sc.queue_cap = *v;
            }
        }
    }
    if (overrides.loss_probability)
        sc.channel.loss_probability = *overrides.loss_probability;
    auto check_prob = [&](double p, const std::string& what) {
        if (!(p >= 0.0 && p <= 1.0))
            ctx.err("channel", what + " must lie in [0, 1]");
    };
    check_prob(sc.channel.loss_probability, "loss_probability");
    for (const auto& [chan, p] : sc.channel.per_channel)
        check_prob(p, "per_channel[" + std::to_string(chan) + "]");

    // ---- energy ----
    if (doc.contains("energy")) {
        const json& e = doc["energy"];
        if (!e.is_object()) {
            ctx.err("energy", "must be an object");
        } else {
            check_keys(ctx, e, "energy",
                       {"e_send_uj", "e_rec_uj", "e_listen_uj", "e_send_cmd_uj", "e_rec_cmd_uj"});
            auto read_uj = [&](const char* key, EnergyNj& out, bool* present = nullptr) {
                if (!e.contains(key))
                    return;
                if (!e[key].is_number()) {
                    ctx.err("energy", std::string("'") + key + "' must be a number");
                    return;
                }
                const double uj = e[key].get<double>();
                if (uj < 0) {
                    ctx.err("energy", std::string("'") + key + "' must be >= 0");
                    return;
                }
                out = static_cast<EnergyNj>(std::llround(uj * 1000.0));
                if (present)
                    *present = true;
            };
            read_uj("e_send_uj", sc.energy.e_send_nj);
            read_uj("e_rec_uj", sc.energy.e_rec_nj);
            read_uj("e_listen_uj", sc.energy.e_listen_nj);
            // command-carrying frames default to the plain frame cost
            sc.energy.e_send_cmd_nj = sc.energy.e_send_nj;
            sc.energy.e_rec_cmd_nj = sc.energy.e_rec_nj;
            read_uj("e_send_cmd_uj", sc.energy.e_send_cmd_nj);
            read_uj("e_rec_cmd_uj", sc.energy.e_rec_cmd_nj);
        }
    }

    // ---- links (from cells) + flows through them ----
    std::set<Link> link_set;
    for (const Cell& c : sc.cells)
        link_set.insert(c.link);
    for (const Link& link : link_set) {
        ScenarioLink sl;
        sl.link = link;
        sl.cells = compile_link_cells(sc.cells, link);
        for (std::size_t f = 0; f < sc.flows.size(); ++f)
            for (std::size_t h = 0; h + 1 < sc.flows[f].path.size(); ++h)
                if (sc.flows[f].path[h] == link.from && sc.flows[f].path[h + 1] == link.to) {
                    sl.flows_through.push_back(static_cast<int>(f));
                    break;
                }
        sl.first_hop_for_all = !sl.flows_through.empty();
        for (int fi : sl.flows_through)
            if (sc.flows[static_cast<std::size_t>(fi)].source != link.from)
                sl.first_hop_for_all = false;
        sc.links.push_back(std::move(sl));
    }
    for (std::size_t f = 0; f < sc.flows.size(); ++f)
        for (std::size_t h = 0; h + 1 < sc.flows[f].path.size(); ++h)
            if (!link_set.count(Link{sc.flows[f].path[h], sc.flows[f].path[h + 1]}))
                ctx.err("flows[" + std::to_string(f) + "]",
                        "hop " + std::to_string(h) + " has no scheduled cell");

    // ---- pril section or technique override ----
    struct RawPril {
        PrilTechnique technique;
        std::optional<int> r;
    };
    std::map<Link, RawPril> raw_pril;

    if (overrides.technique) {
        const std::string& t = *overrides.technique;
        if (t != "tsch" && t != "pril-m" && t != "pril-ml") {
            ctx.err("overrides", "technique must be tsch, pril-m or pril-ml");
        } else if (t != "tsch") {
            const PrilTechnique multi =
                t == "pril-m" ? PrilTechnique::PrilM : PrilTechnique::PrilMl;
            for (const auto& sl : sc.links) {
                if (sl.flows_through.empty())
                    continue;
                if (sl.first_hop_for_all)
                    raw_pril[sl.link] = {PrilTechnique::PrilF, std::nullopt};
                else
                    raw_pril[sl.link] = {multi, multi == PrilTechnique::PrilMl
                                                    ? std::optional<int>(overrides.r.value_or(4))
                                                    : std::nullopt};
            }
        }
    }

    if (!overrides.technique && doc.contains("pril")) {
        if (!doc["pril"].is_array()) {
            ctx.err("pril", "must be an array");
        } else {
            for (std::size_t i = 0; i < doc["pril"].size(); ++i) {
                const json& p = doc["pril"][i];
                const std::string where = "pril[" + std::to_string(i) + "]";
                if (!p.is_object()) {
                    ctx.err(where, "must be an object");
                    continue;
                }
                check_keys(ctx, p, where, {"link", "technique", "r"});
                Link link;
                bool ok = true;
                if (p.contains("link") && p["link"].is_array() && p["link"].size() == 2 &&
                    p["link"][0].is_string() && p["link"][1].is_string()) {
                    ok = resolve_node(ctx, where, p["link"][0].get<std::string>(), link.from) &&
                         resolve_node(ctx, where, p["link"][1].get<std::string>(), link.to);
                } else {
                    ctx.err(where, "'link' must be a [from, to] pair of node ids");
                    ok = false;
                }
                auto tech_str = get_str(ctx, p, where, "technique", true);
                std::optional<PrilTechnique> tech;
                if (tech_str) {
                    tech = technique_from(*tech_str);
                    if (!tech) {
                        ctx.err(where, "unknown technique '" + *tech_str + "'");
                        ok = false;
                    }
                } else {
                    ok = false;
                }
                std::optional<int> r;
                if (auto v = get_int(ctx, p, where, "r", false)) {
                    r = static_cast<int>(*v);
                    if (tech && *tech == PrilTechnique::PrilMl && (*r < 1 || *r > 255)) {
                        ctx.err(where, "r must be in [1, 255]");
                        ok = false;
                    }
                    if (tech && *tech == PrilTechnique::PrilM && *r != 1) {
                        ctx.err(where, "r is fixed to 1 for pril-m");
                        ok = false;
                    }
                    if (tech && (*tech == PrilTechnique::None || *tech == PrilTechnique::PrilF)) {
                        ctx.err(where, "r is only meaningful for pril-ml");
                        ok = false;
                    }
                }
                if (ok && !link_set.count(link)) {
                    ctx.err(where, "link has no scheduled cell");
                    ok = false;
                }
                if (ok && raw_pril.count(link)) {
                    ctx.err(where, "duplicate pril entry for this link");
                    ok = false;
                }
                if (ok)
                    raw_pril[link] = {*tech, r};
            }
        }
    }

    // ---- resolve per-link PRIL configuration ----
    if (ctx.errors.empty()) {
        for (ScenarioLink& sl : sc.links) {
            auto it = raw_pril.find(sl.link);
            if (it == raw_pril.end())
                continue;
            const std::string where =
                "pril(" + sc.node_names[sl.link.from] + "->" + sc.node_names[sl.link.to] + ")";
            const RawPril& raw = it->second;
            if (raw.technique == PrilTechnique::None)
                continue;
            if (sl.flows_through.empty())
                continue; // no traffic to learn from: PRIL stays disabled
            if (raw.technique == PrilTechnique::PrilF) {
                if (!sl.first_hop_for_all) {
                    ctx.err(where, "pril-f requires every flow on the link to start at its transmitter");
                    continue;
                }
                sl.pril.technique = PrilTechnique::PrilF;
                continue;
            }
            const int r = raw.technique == PrilTechnique::PrilMl ? raw.r.value_or(0) : 1;
            if (raw.technique == PrilTechnique::PrilMl && r < 1) {
                ctx.err(where, "pril-ml requires r >= 1");
                continue;
            }
            const TMinResult tm = t_min(sc.flows, sl.flows_through);
            PrilLinkConfig cfg;
            cfg.technique = raw.technique;
            cfg.r = r;
            cfg.t_min_us = tm.t_min_us;
            cfg.tau_star_flow = tm.tau_star;
            cfg.t_min_slots = tm.t_min_us / sc.frame.slot_us;
            if (cfg.t_min_slots < 1) {
                ctx.err(where, "T_min shorter than one slot");
                continue;
            }
            if (r > cfg.t_min_slots) {
                ctx.err(where, "r exceeds T_min in slots");
                continue;
            }
            cfg.t_act_slots = t_act_slots(tm.t_min_us, r, sc.frame.slot_us);
            cfg.wake_offsets_slots = build_wake_offsets(tm.t_min_us, r, sc.frame.slot_us);
            sl.pril = std::move(cfg);
        }
    }

    result.errors = std::move(ctx.errors);
    if (result.errors.empty())
        result.scenario = std::move(sc);
    return result;
}

std::string render_scenario(const Scenario& sc) {
    ojson doc;
    ojson sf;
    sf["num_slots"] = sc.frame.num_slots;
    sf["slot_duration_us"] = sc.frame.slot_us;
    sf["channel_offsets"] = sc.frame.num_channel_offsets;
    sf["hop_sequence"] = sc.frame.hop_sequence;
    doc["slotframe"] = sf;

    ojson nodes = ojson::array();
    for (const auto& n : sc.node_names) {
        ojson node;
        node["id"] = n;
        nodes.push_back(node);
    }
    doc["nodes"] = nodes;

    ojson cells = ojson::array();
    for (const Cell& c : sc.cells) {
        ojson cell;
        cell["slot"] = c.slot_offset;
        cell["choffset"] = c.channel_offset;
        cell["from"] = sc.node_names[c.link.from];
        cell["to"] = sc.node_names[c.link.to];
        cells.push_back(cell);
    }
    doc["cells"] = cells;

    auto us_string = [](DurUs us) { return std::to_string(us) + " us"; };

    ojson flows = ojson::array();
    for (const Flow& f : sc.flows) {
        ojson flow;
        flow["id"] = f.name;
        flow["source"] = sc.node_names[f.source];
        ojson path = ojson::array();
        for (NodeId n : f.path)
            path.push_back(sc.node_names[n]);
        flow["path"] = path;
        flow["period_s"] = us_string(f.nominal_period_us);
        flow["drift_ppm"] = static_cast<double>(f.drift_ppb) / 1000.0;
        flow["phase_s"] = us_string(f.phase_us);
        flow["payload_b"] = f.payload_bytes;
        flows.push_back(flow);
    }
    doc["flows"] = flows;

    ojson pril = ojson::array();
    for (const ScenarioLink& sl : sc.links) {
        if (sl.pril.technique == PrilTechnique::None)
            continue;
        ojson p;
        p["link"] = {sc.node_names[sl.link.from], sc.node_names[sl.link.to]};
        p["technique"] = technique_name(sl.pril.technique);
        if (sl.pril.technique == PrilTechnique::PrilMl)
            p["r"] = sl.pril.r;
        pril.push_back(p);
    }
    doc["pril"] = pril;

    ojson channel;
    channel["loss_probability"] = sc.channel.loss_probability;
    if (!sc.channel.per_channel.empty()) {
        ojson pc;
        for (const auto& [chan, p] : sc.channel.per_channel)
            pc[std::to_string(chan)] = p;
        channel["per_channel"] = pc;
    }
    if (sc.retry_cap)
        channel["retry_cap"] = *sc.retry_cap;
    if (sc.queue_cap)
        channel["queue_cap"] = *sc.queue_cap;
    doc["channel"] = channel;

    ojson energy;
    energy["e_send_uj"] = static_cast<double>(sc.energy.e_send_nj) / 1000.0;
    energy["e_rec_uj"] = static_cast<double>(sc.energy.e_rec_nj) / 1000.0;
    energy["e_listen_uj"] = static_cast<double>(sc.energy.e_listen_nj) / 1000.0;
    if (sc.energy.e_send_cmd_nj != sc.energy.e_send_nj)
        energy["e_send_cmd_uj"] = static_cast<double>(sc.energy.e_send_cmd_nj) / 1000.0;
    if (sc.energy.e_rec_cmd_nj != sc.energy.e_rec_nj)
        energy["e_rec_cmd_uj"] = static_cast<double>(sc.energy.e_rec_cmd_nj) / 1000.0;
    doc["energy"] = energy;

    ojson run;
    run["duration_s"] = us_string(sc.duration_us);
    run["seed"] = sc.seed;
    run["warmup_s"] = us_string(sc.warmup_us);
    doc["run"] = run;

    return doc.dump(2) + "\n";
}

namespace {

const char* kFig1Base = R"json({
  "slotframe": {
    "num_slots": 101,
    "slot_duration_us": 20000,
    "channel_offsets": 16,
    "hop_sequence": [11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26]
  },
  "nodes": [
    {"id": "N0"},
    {"id": "N1", "parent": "N0"},
    {"id": "N2", "parent": "N1"},
    {"id": "N3", "parent": "N1"}
  ],
  "cells": [
    {"slot": 0, "choffset": 0, "from": "N2", "to": "N1"},
    {"slot": 1, "choffset": 0, "from": "N3", "to": "N1"},
    {"slot": 2, "choffset": 0, "from": "N1", "to": "N0"}
  ],
  "flows": [
    {"id": "tau0", "source": "N2", "path": ["N2", "N1", "N0"],
     "period_s": 60, "drift_ppm": 30, "phase_s": 0.35},
    {"id": "tau1", "source": "N3", "path": ["N3", "N1", "N0"],
     "period_s": 600, "drift_ppm": -35, "phase_s": 123.45}
  ],
  "channel": {"loss_probability": 0.0},
  "energy": {"e_send_uj": 485.7, "e_rec_uj": 651.0, "e_listen_uj": 303.3},
  "run": {"duration_s": "1 d", "seed": 1}PRIL_SECTION
})json";

std::string fig1_with_pril(const std::string& pril) {
    std::string doc = kFig1Base;
    const std::string marker = "PRIL_SECTION";
    doc.replace(doc.find(marker), marker.size(), pril);
    return doc;
}

} // namespace

std::optional<std::string> builtin_scenario_text(const std::string& name) {
    if (name == "fig1" || name == "fig1-tsch")
        return fig1_with_pril("");
    if (name == "fig1-pril-m")
        return fig1_with_pril(R"json(,
  "pril": [
    {"link": ["N2", "N1"], "technique": "pril-f"},
    {"link": ["N3", "N1"], "technique": "pril-f"},
    {"link": ["N1", "N0"], "technique": "pril-m"}
  ])json");
    if (name == "fig1-pril-ml-r4")
        return fig1_with_pril(R"json(,
  "pril": [
    {"link": ["N2", "N1"], "technique": "pril-f"},
    {"link": ["N3", "N1"], "technique": "pril-f"},
    {"link": ["N1", "N0"], "technique": "pril-ml", "r": 4}
  ])json");
    return std::nullopt;
}

std::vector<std::string> builtin_scenario_names() {
    return {"fig1", "fig1-tsch", "fig1-pril-m", "fig1-pril-ml-r4"};
}

} // namespace tschsim
