#pragma once

#include "consys/system.hpp"

#include <optional>
#include <utility>

namespace consys
{

// Limit-capacity analysis: the limit value (capacity grown without bound),
// whether some finite capacity already attains it, and the paper-exact
// convergence bound when it does not.
struct LimitReport
{
    ExtendedValue limit;
    bool achievable = false;
    std::optional<Int> achieving_cap; // 3|S|c_max, present iff achievable
    Int rate_numerator;               // 3|S|c_max
    Int rate_offset;                  // 4|S|c_max

    // Upper bound on value(cap) - limit, valid for cap > rate_offset.
    [[nodiscard]] Rational gap_bound(const Int& cap) const
    {
        if (cap <= rate_offset)
            throw std::domain_error("gap bound only valid for cap > 4|S|c_max");
        return Rational(rate_numerator, cap - rate_offset);
    }
};

// Minimal-mean safe cycle: length <= |S|, start reachable from s, and
// either zero-cost through an accepting state or inter-reachable (same
// SCC) with both a reload and an accepting state.
[[nodiscard]] std::optional<std::pair<FinitePath, Rational>> min_safe_cycle(const ConsumptionSystem& sys,
                                                                            StateId s);

// Minimal-mean strongly safe cycle: as above but iterable at some finite
// capacity - zero-cost variants, or a reload on the cycle itself with the
// start inter-reachable with an accepting state.
[[nodiscard]] std::optional<std::pair<FinitePath, Rational>> min_strongly_safe_cycle(const ConsumptionSystem& sys,
                                                                                     StateId s);

[[nodiscard]] ExtendedValue limit_value(const ConsumptionSystem& sys, StateId s);

[[nodiscard]] LimitReport limit_report(const ConsumptionSystem& sys, StateId s);

// Defining-clause checkers used by tests and asserted on every returned
// cycle.
[[nodiscard]] bool is_safe_cycle(const ConsumptionSystem& sys, StateId s, const FinitePath& cycle);
[[nodiscard]] bool is_strongly_safe_cycle(const ConsumptionSystem& sys, StateId s, const FinitePath& cycle);

} // namespace consys
