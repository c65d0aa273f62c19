#ifndef TSCHSIM_METRICS_HPP
#define TSCHSIM_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tschsim/types.hpp"

namespace tschsim {

/// Per-frame energy constants (nanojoules). Defaults model a mote-class
/// 802.15.4 radio: 485.7 / 651.0 / 303.3 uJ per sent maximal-size frame,
/// received frame, and idle-listened slot. Frames carrying a sleep command
/// may cost differently; by default they cost the same.
struct EnergyModel {
    EnergyNj e_send_nj = 485'700;
    EnergyNj e_rec_nj = 651'000;
    EnergyNj e_listen_nj = 303'300;
    EnergyNj e_send_cmd_nj = 485'700;
    EnergyNj e_rec_cmd_nj = 651'000;

    bool operator==(const EnergyModel&) const = default;
};

enum class EnergyEvent { Sent, Received, IdleListened, SentCommand, ReceivedCommand };

/// Accumulated per-node joules, split by radio activity.
struct EnergyAccount {
    EnergyNj send_nj = 0;
    EnergyNj rec_nj = 0;
    EnergyNj listen_nj = 0;

    std::int64_t send_count = 0;
    std::int64_t rec_count = 0;
    std::int64_t listen_count = 0;

    EnergyNj total_nj() const { return send_nj + rec_nj + listen_nj; }
    bool operator==(const EnergyAccount&) const = default;
};

/// Adds `count` events of one kind to the account.
void charge(EnergyAccount& account, const EnergyModel& model, EnergyEvent event, std::int64_t count);

/// End-to-end latency statistics of one flow: mean and population standard
/// deviation from exact integer sums, percentiles by nearest rank
/// (index ceil(p*n) on the sorted sample, 1-based).
struct LatencyStat {
    std::int64_t n = 0;
    TimeUs min_us = 0;
    TimeUs max_us = 0;
    TimeUs p99_us = 0;
    TimeUs p99_9_us = 0;
    TimeUs p99_99_us = 0;
    __int128 sum_us = 0;
    __int128 sumsq_us2 = 0;

    double mean_us() const;
    double stddev_us() const; // population
    bool operator==(const LatencyStat&) const = default;
};

/// Summarizes a sample set. The vector is sorted in place. An empty input
/// yields n == 0 and no fabricated values.
LatencyStat latency_summary(std::vector<TimeUs>& samples);

/// Nearest-rank percentile of an already sorted sample. The level is given
/// in basis points (9900 = p99, 9999 = p99.99) so the rank ceil(p*n) is
/// computed in exact integer arithmetic.
TimeUs percentile_nearest_rank(const std::vector<TimeUs>& sorted, int basis_points);

/// Exact decimal formatting of numer/denom with round-half-up, used for all
/// displayed values so that output bytes are platform independent.
std::string format_fixed(__int128 numer, __int128 denom, int decimals);

/// Power in uW (1 decimal) from accumulated nJ over duration us.
std::string format_power_uw(EnergyNj nj, DurUs duration_us);

/// Duration in seconds (3 decimals) from integer microseconds.
std::string format_seconds(TimeUs us);

} // namespace tschsim

#endif
