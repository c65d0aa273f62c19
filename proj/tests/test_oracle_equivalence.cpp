#include <doctest.h>

#include "random_scenario.hpp"
#include "tschsim/oracle.hpp"
#include "tschsim/report_io.hpp"
#include "tschsim/scenario.hpp"

using namespace tschsim;

TEST_CASE("oracle equals the engine on the four-node network") {
    for (const char* name : {"fig1", "fig1-pril-m", "fig1-pril-ml-r4"}) {
        for (double loss : {0.0, 0.1}) {
            ScenarioOverrides ov;
            ov.duration_us = seconds_us(2 * 3600);
            ov.loss_probability = loss;
            ov.seed = 3;
            auto text = builtin_scenario_text(name);
            REQUIRE(text.has_value());
            LoadResult res = load_scenario(*text, ov);
            REQUIRE(res.ok());
            const RunReport fast = run(*res.scenario);
            const RunReport slow = oracle_run(*res.scenario);
            CHECK_MESSAGE(fast == slow, name, " loss=", loss);
            CHECK(report_json(fast) == report_json(slow));
        }
    }
}

TEST_CASE("oracle equals the engine on random small scenarios") {
    for (std::uint64_t c = 0; c < 20; ++c) {
        const std::string text = random_scenario_text(c);
        LoadResult res = load_scenario(text);
        REQUIRE_MESSAGE(res.ok(), text);
        const RunReport fast = run(*res.scenario);
        const RunReport slow = oracle_run(*res.scenario, 4LL * 3600 * 1'000'000);
        const bool equal = fast == slow;
        CHECK_MESSAGE(equal, "case ", c, "\n", text);
        if (!equal)
            break;
    }
}

TEST_CASE("oracle refuses horizons beyond its brute-force cap") {
    ScenarioOverrides ov;
    ov.duration_us = seconds_us(3 * 3600);
    LoadResult res = load_scenario(*builtin_scenario_text("fig1"), ov);
    REQUIRE(res.ok());
    CHECK_THROWS_AS((void)oracle_run(*res.scenario), std::invalid_argument);
}
