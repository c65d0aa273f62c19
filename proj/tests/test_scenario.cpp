#include <doctest.h>

#include <algorithm>

#include "tschsim/scenario.hpp"

using namespace tschsim;

namespace {

bool has_error(const LoadResult& res, const std::string& needle) {
    return std::any_of(res.errors.begin(), res.errors.end(), [&](const std::string& e) {
        return e.find(needle) != std::string::npos;
    });
}

} // namespace

TEST_CASE("duration strings parse with unit suffixes") {
    CHECK(parse_duration_us("60") == seconds_us(60));
    CHECK(parse_duration_us("0.35") == 350'000);
    CHECK(parse_duration_us("200 ms") == 200'000);
    CHECK(parse_duration_us("10 min") == seconds_us(600));
    CHECK(parse_duration_us("2h") == seconds_us(7200));
    CHECK(parse_duration_us("30 d") == seconds_us(30LL * 86'400));
    CHECK(parse_duration_us("1 y") == seconds_us(365LL * 86'400));
    CHECK(parse_duration_us("1237 us", 1) == 1237);
    CHECK(!parse_duration_us("1 fortnight").has_value());
    CHECK(!parse_duration_us("0.0000005 s").has_value()); // below microsecond resolution
    CHECK(!parse_duration_us("").has_value());
    CHECK(!parse_duration_us("-5 s").has_value());
}

TEST_CASE("the built-in four-node scenario loads") {
    for (const auto& name : builtin_scenario_names()) {
        auto text = builtin_scenario_text(name);
        REQUIRE(text.has_value());
        const LoadResult res = load_scenario(*text);
        REQUIRE_MESSAGE(res.ok(), name);
        const Scenario& sc = *res.scenario;
        CHECK(sc.node_names.size() == 4);
        CHECK(sc.cells.size() == 3);
        CHECK(sc.flows.size() == 2);
        CHECK(sc.links.size() == 3);
        CHECK(sc.frame.period_us() == 2'020'000);
    }

    const LoadResult m = load_scenario(*builtin_scenario_text("fig1-pril-m"));
    int pril_f = 0, pril_m = 0;
    for (const auto& l : m.scenario->links) {
        pril_f += l.pril.technique == PrilTechnique::PrilF;
        pril_m += l.pril.technique == PrilTechnique::PrilM;
        if (l.pril.technique == PrilTechnique::PrilM) {
            CHECK(l.link == Link{1, 0});
            CHECK(l.pril.t_min_us == seconds_us(60));
            CHECK(l.pril.tau_star_flow == 0);
        }
    }
    CHECK(pril_f == 2);
    CHECK(pril_m == 1);
}

TEST_CASE("technique override rewrites the pril assignment") {
    ScenarioOverrides ov;
    ov.technique = "pril-ml";
    ov.r = 4;
    const LoadResult res = load_scenario(*builtin_scenario_text("fig1"), ov);
    REQUIRE(res.ok());
    const LoadResult ref = load_scenario(*builtin_scenario_text("fig1-pril-ml-r4"));
    REQUIRE(ref.ok());
    CHECK(*res.scenario == *ref.scenario);

    ov.technique = "tsch";
    const LoadResult plain = load_scenario(*builtin_scenario_text("fig1-pril-m"), ov);
    REQUIRE(plain.ok());
    for (const auto& l : plain.scenario->links)
        CHECK(l.pril.technique == PrilTechnique::None);
}

TEST_CASE("render/load round-trips the resolved scenario") {
    ScenarioOverrides ov;
    for (const auto& name : builtin_scenario_names()) {
        const LoadResult first = load_scenario(*builtin_scenario_text(name));
        REQUIRE(first.ok());
        const std::string rendered = render_scenario(*first.scenario);
        const LoadResult second = load_scenario(rendered);
        REQUIRE_MESSAGE(second.ok(), rendered);
        CHECK(*first.scenario == *second.scenario);
        CHECK(render_scenario(*second.scenario) == rendered);
    }
    // also with seed-derived defaults in play
    std::string text = *builtin_scenario_text("fig1-pril-ml-r4");
    const auto cut = [&](const std::string& key) {
        const auto pos = text.find(key);
        REQUIRE(pos != std::string::npos);
        const auto comma = text.rfind(',', pos);
        const auto end = text.find(',', pos);
        text.erase(comma, end - comma);
    };
    cut("\"drift_ppm\": 30");
    cut("\"drift_ppm\": -35");
    const LoadResult derived = load_scenario(text);
    REQUIRE(derived.ok());
    const LoadResult again = load_scenario(render_scenario(*derived.scenario));
    REQUIRE(again.ok());
    CHECK(*derived.scenario == *again.scenario);
}

TEST_CASE("seed-derived defaults are deterministic and in range") {
    const char* text = R"({
      "slotframe": {"num_slots": 101, "slot_duration_us": 20000,
                    "channel_offsets": 16,
                    "hop_sequence": [11,12,13,14,15,16,17,18,19,20,21,22,23,24,25,26]},
      "nodes": [{"id": "N0"}, {"id": "N1"}],
      "cells": [{"slot": 0, "choffset": 0, "from": "N1", "to": "N0"}],
      "flows": [{"id": "a", "source": "N1", "path": ["N1", "N0"], "period_s": 60},
                {"id": "b", "source": "N1", "path": ["N1", "N0"], "period_s": 600}],
      "run": {"duration_s": 600, "seed": 1}
    })";
    const LoadResult a = load_scenario(text);
    REQUIRE(a.ok());
    const LoadResult b = load_scenario(text);
    REQUIRE(b.ok());
    CHECK(*a.scenario == *b.scenario);
    for (const Flow& f : a.scenario->flows) {
        CHECK(f.drift_ppb >= -40'000);
        CHECK(f.drift_ppb <= 40'000);
        CHECK(f.phase_us >= 0);
        CHECK(f.phase_us < f.nominal_period_us);
    }

    ScenarioOverrides ov;
    ov.seed = 99;
    const LoadResult c = load_scenario(text, ov);
    REQUIRE(c.ok());
    CHECK(!(*a.scenario == *c.scenario)); // different seed, different defaults
}

TEST_CASE("validation reports all problems with context") {
    const char* bad = R"({
      "slotframe": {"num_slots": 101, "slot_duration_us": 20000,
                    "channel_offsets": 16,
                    "hop_sequence": [11,12,13,14,15,16,17,18,19,20,21,22,23,24,25,26]},
      "nodes": [{"id": "N0"}, {"id": "N1"}, {"id": "N2"}],
      "cells": [
        {"slot": 0, "choffset": 0, "from": "N2", "to": "N1"},
        {"slot": 0, "choffset": 0, "from": "N1", "to": "N0"},
        {"slot": 2, "choffset": 0, "from": "N1", "to": "N0"}
      ],
      "flows": [
        {"id": "a", "source": "N2", "path": ["N2", "N2"], "period_s": 60},
        {"id": "b", "source": "N9", "path": ["N9", "N0"], "period_s": 60, "phase_s": 61},
        {"id": "c", "source": "N2", "path": ["N2", "N1", "N0"], "period_s": 60}
      ],
      "pril": [
        {"link": ["N1", "N0"], "technique": "pril-ml", "r": 0},
        {"link": ["N1", "N0"], "technique": "pril-m", "bogus": 1}
      ],
      "run": {"duration_s": 600, "seed": 1}
    })";
    const LoadResult res = load_scenario(bad);
    REQUIRE(!res.ok());
    CHECK(has_error(res, "duplicate coordinate"));
    CHECK(has_error(res, "repeated consecutive node"));
    CHECK(has_error(res, "unknown node 'N9'"));
    CHECK(has_error(res, "r must be in [1, 255]"));
    CHECK(has_error(res, "unknown key 'bogus'"));
    CHECK(res.errors.size() >= 5);
}

TEST_CASE("pril-f is rejected on links that relay foreign flows") {
    const char* doc = R"({
      "slotframe": {"num_slots": 101, "slot_duration_us": 20000,
                    "channel_offsets": 16,
                    "hop_sequence": [11,12,13,14,15,16,17,18,19,20,21,22,23,24,25,26]},
      "nodes": [{"id": "N0"}, {"id": "N1"}, {"id": "N2"}],
      "cells": [
        {"slot": 0, "choffset": 0, "from": "N2", "to": "N1"},
        {"slot": 2, "choffset": 0, "from": "N1", "to": "N0"}
      ],
      "flows": [{"id": "a", "source": "N2", "path": ["N2", "N1", "N0"], "period_s": 60}],
      "pril": [{"link": ["N1", "N0"], "technique": "pril-f"}],
      "run": {"duration_s": 600, "seed": 1}
    })";
    const LoadResult res = load_scenario(doc);
    REQUIRE(!res.ok());
    CHECK(has_error(res, "pril-f requires"));
}

TEST_CASE("a flow hop without any scheduled cell is an error") {
    const char* doc = R"({
      "slotframe": {"num_slots": 101, "slot_duration_us": 20000,
                    "channel_offsets": 16,
                    "hop_sequence": [11,12,13,14,15,16,17,18,19,20,21,22,23,24,25,26]},
      "nodes": [{"id": "N0"}, {"id": "N1"}, {"id": "N2"}],
      "cells": [{"slot": 0, "choffset": 0, "from": "N2", "to": "N1"}],
      "flows": [{"id": "a", "source": "N2", "path": ["N2", "N1", "N0"], "period_s": 60}],
      "run": {"duration_s": 600, "seed": 1}
    })";
    const LoadResult res = load_scenario(doc);
    REQUIRE(!res.ok());
    CHECK(has_error(res, "has no scheduled cell"));
}

TEST_CASE("unknown top-level keys are rejected") {
    const LoadResult res = load_scenario(R"({"bogus": 1})");
    REQUIRE(!res.ok());
    CHECK(has_error(res, "unknown key 'bogus'"));
}
