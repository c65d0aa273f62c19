#include "tschsim/analytic.hpp"

#include <cctype>

#include "tschsim/pril.hpp"

namespace tschsim {

bool parse_decimal(const std::string& text, Ratio& out) {
    if (text.empty())
        return false;
    std::size_t i = 0;
    bool neg = false;
    if (text[i] == '+' || text[i] == '-') {
        neg = text[i] == '-';
        ++i;
    }
    __int128 num = 0;
    __int128 den = 1;
    bool any_digit = false;
    bool seen_dot = false;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '.') {
            if (seen_dot)
                return false;
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            num = num * 10 + (c - '0');
            if (seen_dot)
                den *= 10;
            any_digit = true;
        } else {
            return false;
        }
    }
    if (!any_digit)
        return false;
    out = Ratio{neg ? -num : num, den};
    return true;
}

LatencyDeltas pril_m_deltas(DurUs t_min_us) {
    return {Ratio{t_min_us, 2}, Ratio{t_min_us, 1}};
}

LatencyDeltas pril_ml_deltas(DurUs t_min_us, int r, DurUs slot_us) {
    if (t_min_us == 0)
        return {Ratio{0, 1}, Ratio{0, 1}};
    const DurUs t_act_us = t_act_slots(t_min_us, r, slot_us) * slot_us;
    return {Ratio{t_act_us, 2}, Ratio{t_act_us, 1}};
}

Ratio delta_p_uw(int r, EnergyNj e_listen_nj, DurUs t_min_us) {
    // uW = nJ * 1000 / us
    return Ratio{static_cast<__int128>(r - 1) * e_listen_nj * 1000, t_min_us};
}

AnalyticPrediction compose_predictions(const Baselines& base, DurUs t_min_us, int r, DurUs slot_us,
                                       EnergyNj e_listen_nj) {
    AnalyticPrediction p;
    p.t_min_us = t_min_us;
    p.r = r;
    p.pril_m = pril_m_deltas(t_min_us);
    p.pril_ml = pril_ml_deltas(t_min_us, r, slot_us);
    p.delta_p = delta_p_uw(r, e_listen_nj, t_min_us);
    p.mu_hat_m_us = base.tsch_mean_us + p.pril_m.mean_us;
    p.dmax_hat_m_us = base.tsch_max_us + p.pril_m.max_us;
    p.mu_hat_ml_us = base.tsch_mean_us + p.pril_ml.mean_us;
    p.dmax_hat_ml_us = base.tsch_max_us + p.pril_ml.max_us;
    p.p_hat_uw = base.pril_m_p_uw + p.delta_p;
    p.p_listen_hat_uw = base.pril_m_p_listen_uw + p.delta_p;
    return p;
}

} // namespace tschsim
