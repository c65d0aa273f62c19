#ifndef TSCHSIM_ANALYTIC_HPP
#define TSCHSIM_ANALYTIC_HPP

#include <string>

#include "tschsim/metrics.hpp"
#include "tschsim/types.hpp"

namespace tschsim {

/// Exact rational, used so the predicted values survive display rounding
/// bit for bit (e.g. 3 * 303.3 uJ / 60 s must print as 15.2 uW).
struct Ratio {
    __int128 num = 0;
    __int128 den = 1;

    static Ratio of(std::int64_t n, std::int64_t d = 1) { return {n, d}; }
    Ratio operator+(const Ratio& o) const { return {num * o.den + o.num * den, den * o.den}; }
    std::string fixed(int decimals) const { return format_fixed(num, den, decimals); }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Parses a plain decimal like "17.96" or "-1.5" exactly. Returns false on
/// anything else (exponents, junk).
bool parse_decimal(const std::string& text, Ratio& out);

struct LatencyDeltas {
    Ratio mean_us;
    Ratio max_us;
};

/// PRIL-M: a packet of a slower flow waits uniformly inside the tau* period,
/// so the mean grows by T_min/2 and the worst case by T_min.
LatencyDeltas pril_m_deltas(DurUs t_min_us);

/// PRIL-ML with r windows of T_act = ceil(T_min/r) (whole slots): the wait
/// shrinks to T_act/2 mean, T_act worst case.
LatencyDeltas pril_ml_deltas(DurUs t_min_us, int r, DurUs slot_us);

/// Worst-case power increase of PRIL-ML over PRIL-M on one link:
/// (r-1) * E_listen / T_min. An upper bound: wake-ups that carry queued
/// packets would have been paid for anyway.
Ratio delta_p_uw(int r, EnergyNj e_listen_nj, DurUs t_min_us);

/// Measured baselines the predictions compose with: the slow flow's TSCH
/// latency and the PRIL-M power of the whole network.
struct Baselines {
    Ratio tsch_mean_us;
    Ratio tsch_max_us;
    Ratio pril_m_p_uw;
    Ratio pril_m_p_listen_uw;
};

struct AnalyticPrediction {
    DurUs t_min_us = 0;
    int r = 1;
    LatencyDeltas pril_m;
    LatencyDeltas pril_ml;
    Ratio delta_p;          // uW
    Ratio mu_hat_m_us;      // TSCH mean + PRIL-M delta
    Ratio dmax_hat_m_us;
    Ratio mu_hat_ml_us;
    Ratio dmax_hat_ml_us;
    Ratio p_hat_uw;         // PRIL-M power + delta P
    Ratio p_listen_hat_uw;
};

AnalyticPrediction compose_predictions(const Baselines& base, DurUs t_min_us, int r, DurUs slot_us,
                                       EnergyNj e_listen_nj);

} // namespace tschsim

#endif
