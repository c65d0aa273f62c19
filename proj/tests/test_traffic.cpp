#include <doctest.h>

#include "tschsim/traffic.hpp"

using namespace tschsim;

namespace {

Flow make_flow(DurUs period_us, std::int64_t drift_ppb = 0, TimeUs phase_us = 0) {
    Flow f;
    f.name = "f";
    f.source = 1;
    f.path = {1, 0};
    f.nominal_period_us = period_us;
    f.drift_ppb = drift_ppb;
    f.phase_us = phase_us;
    return f;
}

} // namespace

TEST_CASE("generation_times is the expected arithmetic progression") {
    const Flow f = make_flow(seconds_us(60));
    CHECK(generation_times(f, seconds_us(180)) ==
          std::vector<TimeUs>{0, seconds_us(60), seconds_us(120)});
    CHECK(generation_times(f, 0).empty());
}

TEST_CASE("drift stretches the period") {
    // +100 ppm on 60 s: the second generation lands at 60.006 s
    const Flow f = make_flow(seconds_us(60), 100'000);
    CHECK(generation_time(f, 1) == 60'006'000);
}

TEST_CASE("next_generation is strictly after the reference time") {
    const Flow f = make_flow(seconds_us(60));
    CHECK(next_generation(f, seconds_us(59)) == seconds_us(60));
    CHECK(next_generation(f, seconds_us(60)) == seconds_us(120));
}

TEST_CASE("next_generation agrees with a brute-force scan") {
    const Flow f = make_flow(seconds_us(600), -12'345, seconds_us(37));
    for (TimeUs after : {TimeUs{0}, seconds_us(36), seconds_us(37), seconds_us(1000),
                         seconds_us(12'345), seconds_us(100'000)}) {
        TimeUs expect = -1;
        for (std::int64_t n = 0;; ++n) {
            const TimeUs t = generation_time(f, n);
            if (t > after) {
                expect = t;
                break;
            }
        }
        CHECK(next_generation(f, after) == expect);
    }
    // zero drift version of the worked example: 37 + 2 * 600 = 1237
    const Flow g = make_flow(seconds_us(600), 0, seconds_us(37));
    CHECK(next_generation(g, seconds_us(1000)) == seconds_us(1237));
}

TEST_CASE("equal nominal periods with different drift de-phase linearly") {
    const Flow a = make_flow(seconds_us(60), 40'000);
    const Flow b = make_flow(seconds_us(60), -40'000);
    TimeUs prev_gap = 0;
    for (std::int64_t k = 1; k <= 1000; ++k) {
        const TimeUs gap = generation_time(a, k) - generation_time(b, k);
        CHECK(gap > prev_gap);
        // 80 ppm of 60 s per generation, to microsecond rounding
        CHECK(std::abs(gap - k * 4'800'000 / 1000) <= 1);
        prev_gap = gap;
    }
}

TEST_CASE("generation counts respect the horizon strictly") {
    const Flow f = make_flow(seconds_us(60), 0, 350'000);
    CHECK(generation_count(f, 350'000) == 0);
    CHECK(generation_count(f, 350'001) == 1);
    CHECK(generation_count(f, seconds_us(86'400)) == 1440);
}
