#ifndef TSCHSIM_SCENARIO_HPP
#define TSCHSIM_SCENARIO_HPP

#include <optional>
#include <string>
#include <vector>

#include "tschsim/engine.hpp"

namespace tschsim {

/// Parses "<number> <unit>" with unit us, ms, s, min, h, d or y (365 days
/// exactly), or a bare decimal number interpreted in `bare_unit_us`.
/// The value must come out as a whole number of microseconds.
std::optional<DurUs> parse_duration_us(const std::string& text, DurUs bare_unit_us = kUsPerSecond);

struct ScenarioOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<DurUs> duration_us;
    std::optional<DurUs> warmup_us;
    std::optional<double> loss_probability;
    // "tsch", "pril-m" or "pril-ml": replaces the scenario's pril section
    // with the standard assignment (PRIL-F on first-hop links, the chosen
    // multi-hop technique elsewhere; "tsch" disables everything).
    std::optional<std::string> technique;
    std::optional<int> r;
};

struct LoadResult {
    std::optional<Scenario> scenario;
    std::vector<std::string> errors;

    bool ok() const { return scenario.has_value(); }
};

/// Parses and fully validates a scenario document. Every problem found is
/// reported; `scenario` is only set when there are none.
LoadResult load_scenario(const std::string& text, const ScenarioOverrides& overrides = {});

/// Canonical document for a resolved scenario; load_scenario(render) gives
/// back an identical Scenario.
std::string render_scenario(const Scenario& scenario);

/// Built-in scenario documents ("fig1", "fig1-tsch", "fig1-pril-m",
/// "fig1-pril-ml-r4"): the four-node two-flow network used as the running
/// example, differing only in the pril section.
std::optional<std::string> builtin_scenario_text(const std::string& name);
std::vector<std::string> builtin_scenario_names();

} // namespace tschsim

#endif
