#include "tschsim/traffic.hpp"

namespace tschsim {

namespace {
constexpr std::int64_t kPpbScale = 1'000'000'000;
}

TimeUs generation_time(const Flow& flow, std::int64_t n) {
    // n * period * (1e9 + ppb) can reach ~3e23 for decade runs; do it in 128 bits.
    const __int128 num = static_cast<__int128>(n) * flow.nominal_period_us * (kPpbScale + flow.drift_ppb);
    const __int128 rounded = (num + kPpbScale / 2) / kPpbScale;
    return flow.phase_us + static_cast<TimeUs>(rounded);
}

std::int64_t generation_count(const Flow& flow, TimeUs horizon) {
    if (horizon <= flow.phase_us)
        return 0;
    // generation_time is strictly increasing in n (effective period >= 1 us)
    const std::int64_t eff_floor = flow.nominal_period_us * (kPpbScale + flow.drift_ppb) / kPpbScale;
    std::int64_t lo = 0, hi = (horizon - flow.phase_us) / std::max<std::int64_t>(1, eff_floor) + 2;
    while (lo < hi) { // first n with t_n >= horizon
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (generation_time(flow, mid) < horizon)
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo;
}

std::vector<TimeUs> generation_times(const Flow& flow, TimeUs horizon) {
    std::vector<TimeUs> out;
    const std::int64_t n = generation_count(flow, horizon);
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
        out.push_back(generation_time(flow, i));
    return out;
}

std::int64_t next_generation_index(const Flow& flow, TimeUs after) {
    // first n with t_n > after  ==  count of t_n <= after  ==  count of t_n < after+1
    return generation_count(flow, after + 1);
}

TimeUs next_generation(const Flow& flow, TimeUs after) {
    return generation_time(flow, next_generation_index(flow, after));
}

} // namespace tschsim
