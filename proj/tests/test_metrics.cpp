#include <doctest.h>

#include <random>

#include "tschsim/metrics.hpp"

using namespace tschsim;

TEST_CASE("charge splits events into the right buckets") {
    EnergyModel model;
    EnergyAccount acc;
    charge(acc, model, EnergyEvent::Sent, 1);
    charge(acc, model, EnergyEvent::Received, 1);
    CHECK(acc.send_nj == 485'700);
    CHECK(acc.rec_nj == 651'000);
    charge(acc, model, EnergyEvent::IdleListened, 29);
    CHECK(acc.listen_nj == 29 * 303'300);
    CHECK(acc.total_nj() == acc.send_nj + acc.rec_nj + acc.listen_nj);
}

TEST_CASE("command frame overrides hit the send/receive buckets") {
    EnergyModel model;
    model.e_send_cmd_nj = 971'400;
    EnergyAccount acc;
    charge(acc, model, EnergyEvent::SentCommand, 2);
    CHECK(acc.send_nj == 2 * 971'400);
    CHECK(acc.send_count == 2);
}

TEST_CASE("power formatting divides exactly and rounds half up") {
    // one idle listen every 2.02 s slotframe: 303.3 uJ / 2.02 s = 150.148... uW
    CHECK(format_power_uw(303'300, 2'020'000) == "150.1");
    CHECK(format_power_uw(0, 1) == "0.0");
    // the worked delta-P: 3 * 303.3 uJ / 60 s rounds to 15.2
    CHECK(format_power_uw(3 * 303'300, seconds_us(60)) == "15.2");
}

TEST_CASE("format_fixed rounds half up at the displayed digit") {
    CHECK(format_fixed(15165, 1000, 1) == "15.2");
    CHECK(format_fixed(83765, 1000, 1) == "83.8");
    CHECK(format_fixed(15565, 1000, 1) == "15.6");
    CHECK(format_fixed(25, 10, 0) == "3");
    CHECK(format_fixed(-15, 10, 0) == "-2");
    CHECK(format_fixed(1'731'000 + 30'000'000, kUsPerSecond, 3) == "31.731");
    CHECK(format_seconds(60'000) == "0.060");
}

TEST_CASE("latency_summary of a constant sample") {
    std::vector<TimeUs> samples(100, 60'000);
    const LatencyStat s = latency_summary(samples);
    CHECK(s.n == 100);
    CHECK(s.min_us == 60'000);
    CHECK(s.max_us == 60'000);
    CHECK(s.p99_us == 60'000);
    CHECK(s.p99_99_us == 60'000);
    CHECK(s.mean_us() == doctest::Approx(60'000));
    CHECK(s.stddev_us() == doctest::Approx(0.0));
}

TEST_CASE("nearest-rank percentile on 1..1000 ms") {
    std::vector<TimeUs> samples;
    for (int i = 1; i <= 1000; ++i)
        samples.push_back(i * 1000);
    const LatencyStat s = latency_summary(samples);
    CHECK(s.p99_us == 990 * 1000);
    CHECK(s.p99_9_us == 999 * 1000);
    CHECK(s.p99_99_us == 1000 * 1000);
}

TEST_CASE("empty sample set stays empty") {
    std::vector<TimeUs> samples;
    const LatencyStat s = latency_summary(samples);
    CHECK(s.n == 0);
}

TEST_CASE("percentiles are monotone on random samples") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<TimeUs> samples(1 + rng() % 5000);
        for (auto& s : samples)
            s = static_cast<TimeUs>(rng() % 100'000'000);
        const LatencyStat st = latency_summary(samples);
        CHECK(st.min_us <= st.p99_us);
        CHECK(st.p99_us <= st.p99_9_us);
        CHECK(st.p99_9_us <= st.p99_99_us);
        CHECK(st.p99_99_us <= st.max_us);
    }
}
