#pragma once

#include "consys/synthesis.hpp"
#include "consys/system.hpp"

#include <cstdint>
#include <tuple>

namespace consys
{

struct RunStats
{
    std::uint64_t steps = 0;
    Rational prefix_mean;       // total cost / steps, 0 for an empty run
    Int max_end_cost_seen;      // largest between-reload consumption reached
    Int min_headroom;           // cap - max_end_cost_seen
    std::uint64_t accepting_visits = 0;
    std::uint64_t cap_violations = 0;
};

// One step of a counting controller: applies the positive pair when d > 0
// and the zero pair when d = 0; dec lowers d, noc keeps it, reset(n) sets
// it to n. Throws ill_formed_controller when the chosen move is not a
// transition of the system.
[[nodiscard]] std::tuple<StateId, std::uint32_t, Int> expand_step(const ConsumptionSystem& sys,
                                                                  const CountingController& kappa, StateId state,
                                                                  std::uint32_t mem, const Int& d);

// The unique length-`steps` prefix of the run the synthesized controller
// produces from s, with battery statistics. For advancing controllers the
// schedule beta^(2^i) interleaved with gamma is driven by two unbounded
// counters (the phase and a countdown of beta repetitions).
[[nodiscard]] std::pair<FinitePath, RunStats> run_controller(const ConsumptionSystem& sys,
                                                             const SynthesisResult& result, StateId s,
                                                             std::uint64_t steps, const Int& cap);

// Battery statistics of an explicit path walked from a full battery.
[[nodiscard]] RunStats path_stats(const ConsumptionSystem& sys, const FinitePath& path, const Int& cap);

} // namespace consys
