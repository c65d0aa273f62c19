#include "tschsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tschsim {

void charge(EnergyAccount& account, const EnergyModel& model, EnergyEvent event, std::int64_t count) {
    switch (event) {
    case EnergyEvent::Sent:
        account.send_nj += count * model.e_send_nj;
        account.send_count += count;
        break;
    case EnergyEvent::SentCommand:
        account.send_nj += count * model.e_send_cmd_nj;
        account.send_count += count;
        break;
    case EnergyEvent::Received:
        account.rec_nj += count * model.e_rec_nj;
        account.rec_count += count;
        break;
    case EnergyEvent::ReceivedCommand:
        account.rec_nj += count * model.e_rec_cmd_nj;
        account.rec_count += count;
        break;
    case EnergyEvent::IdleListened:
        account.listen_nj += count * model.e_listen_nj;
        account.listen_count += count;
        break;
    }
}

double LatencyStat::mean_us() const {
    if (n == 0)
        return 0.0;
    return static_cast<double>(sum_us) / static_cast<double>(n);
}

double LatencyStat::stddev_us() const {
    if (n == 0)
        return 0.0;
    // population variance = (n*sumsq - sum^2) / n^2, exact in 128 bits
    const __int128 num = static_cast<__int128>(n) * sumsq_us2 - sum_us * sum_us;
    const double var = static_cast<double>(num) / (static_cast<double>(n) * static_cast<double>(n));
    return var > 0.0 ? std::sqrt(var) : 0.0;
}

TimeUs percentile_nearest_rank(const std::vector<TimeUs>& sorted, int basis_points) {
    const auto n = static_cast<std::int64_t>(sorted.size());
    std::int64_t rank = (basis_points * n + 9'999) / 10'000;
    rank = std::max<std::int64_t>(1, std::min(rank, n));
    return sorted[static_cast<std::size_t>(rank - 1)];
}

LatencyStat latency_summary(std::vector<TimeUs>& samples) {
    LatencyStat s;
    s.n = static_cast<std::int64_t>(samples.size());
    if (s.n == 0)
        return s;
    std::sort(samples.begin(), samples.end());
    s.min_us = samples.front();
    s.max_us = samples.back();
    s.p99_us = percentile_nearest_rank(samples, 9'900);
    s.p99_9_us = percentile_nearest_rank(samples, 9'990);
    s.p99_99_us = percentile_nearest_rank(samples, 9'999);
    for (TimeUs x : samples) {
        s.sum_us += x;
        s.sumsq_us2 += static_cast<__int128>(x) * x;
    }
    return s;
}

std::string format_fixed(__int128 numer, __int128 denom, int decimals) {
    if (denom == 0)
        throw std::invalid_argument("format_fixed: zero denominator");
    bool neg = false;
    if (numer < 0) {
        neg = !neg;
        numer = -numer;
    }
    if (denom < 0) {
        neg = !neg;
        denom = -denom;
    }
    __int128 scale = 1;
    for (int i = 0; i < decimals; ++i)
        scale *= 10;
    // round half up at the last displayed digit
    const __int128 scaled = (numer * scale * 2 + denom) / (denom * 2);
    const __int128 whole = scaled / scale;
    __int128 frac = scaled % scale;

    auto digits = [](__int128 v) {
        if (v == 0)
            return std::string("0");
        std::string out;
        while (v > 0) {
            out.insert(out.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
            v /= 10;
        }
        return out;
    };

    std::string result = digits(whole);
    if (neg && (whole != 0 || frac != 0))
        result.insert(result.begin(), '-');
    if (decimals > 0) {
        std::string f = digits(frac);
        f.insert(f.begin(), static_cast<std::size_t>(decimals) - f.size(), '0');
        result += "." + f;
    }
    return result;
}

std::string format_power_uw(EnergyNj nj, DurUs duration_us) {
    if (duration_us <= 0)
        return "0.0";
    // uW = nJ * 1000 / us
    return format_fixed(static_cast<__int128>(nj) * 1000, duration_us, 1);
}

std::string format_seconds(TimeUs us) {
    return format_fixed(us, kUsPerSecond, 3);
}

} // namespace tschsim
