#ifndef TSCHSIM_ORACLE_HPP
#define TSCHSIM_ORACLE_HPP

#include "tschsim/engine.hpp"

namespace tschsim {

constexpr DurUs kOracleDefaultCapUs = 2LL * 3600 * 1'000'000; // 2 simulated hours

/// Reference interpreter: iterates every single slot, tracking receiver
/// sleep state with per-slot counters instead of the engine's absolute-time
/// arithmetic and closed-form idle accounting. Same RNG keying, so for any
/// scenario the report must equal run()'s exactly. Used to certify the
/// event-driven engine; refuses durations above `cap_us` (throws
/// std::invalid_argument) because it is deliberately slow.
RunReport oracle_run(const Scenario& scenario, DurUs cap_us = kOracleDefaultCapUs);

} // namespace tschsim

#endif
