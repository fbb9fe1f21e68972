#pragma once

#include "consys/system.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace consys
{

// Which states count as "visits" for the b component of a characteristic:
// every state (the optimal-cycle search over all cycles) or accepting
// states only (the search for cycles that satisfy the acceptance
// condition).
enum class VisitMode
{
    all_states,
    accepting,
};

// Segment descriptor (r, q, t, m, n, b): a reload-to-reload path of length
// m + k*n of the shape gamma . delta^k . gamma' where gamma ends and
// gamma' starts at q, len(gamma.gamma') = m, len(delta) = n, and b records
// whether gamma.gamma' visits the mode's target set.
struct Characteristic
{
    StateId r;
    StateId q;
    StateId t;
    std::uint64_t m;
    std::uint32_t n;
    bool b;

    [[nodiscard]] bool operator==(const Characteristic&) const = default;
};

struct invalid_characteristic : std::invalid_argument
{
    explicit invalid_characteristic(const std::string& what) : std::invalid_argument(what) {}
};

// Optimal realization of a characteristic. delta is a cycle at q when n >
// 0, otherwise the single-vertex path {q}; k is maximal such that the
// assembled segment stays cap-bounded (k = 1 when n = 0). The assembled
// path gamma . delta^k . gamma' is never materialized: k is as large as
// cap allows.
struct CompactTuple
{
    FinitePath gamma;
    FinitePath gamma_prime;
    FinitePath delta;
    Int k;

    [[nodiscard]] Int path_cost(const ConsumptionSystem& sys) const;
    [[nodiscard]] Int path_length() const;
};

// Minimum-cost path of length exactly m from s1 to s2 whose interior
// vertices avoid `avoid` (endpoints exempt); ties broken lexicographically
// by vertex sequence.
[[nodiscard]] std::optional<FinitePath> min_path(const ConsumptionSystem& sys, StateId s1, StateId s2,
                                                 std::uint64_t m, const std::vector<bool>& avoid);

// As min_path, but additionally some vertex (endpoints included) lies in
// `reach`.
[[nodiscard]] std::optional<FinitePath> min_path_reach(const ConsumptionSystem& sys, StateId s1, StateId s2,
                                                       std::uint64_t m, const std::vector<bool>& avoid,
                                                       const std::vector<bool>& reach);

// Shared exact-length DP sweeps for one (system, cap, mode, max segment
// length). Built once, then queried for every characteristic.
class SegmentIndex
{
public:
    SegmentIndex(const ConsumptionSystem& sys, Int cap, VisitMode mode, std::uint64_t max_m);

    [[nodiscard]] const ConsumptionSystem& system() const { return sys_; }
    [[nodiscard]] const Int& cap() const { return cap_; }
    [[nodiscard]] VisitMode mode() const { return mode_; }
    [[nodiscard]] std::uint64_t max_m() const { return max_m_; }

    // Optimal compact tuple for the characteristic, or nullopt when no
    // compact segment realizes it. Throws invalid_characteristic when the
    // bounds (m <= 5|S|^3, n <= |S|, r and t reload states) are violated.
    [[nodiscard]] std::optional<CompactTuple> tuple(const Characteristic& chi) const;

    // Cost and length of the optimal tuple without materializing paths.
    struct SegmentLabel
    {
        Int cost;
        Int length;
    };
    [[nodiscard]] std::optional<SegmentLabel> label(const Characteristic& chi) const;

    // Invokes fn for every realizable characteristic with r and t drawn
    // from `sources` (reload states), in lexicographic (r, q, t, m, n, b)
    // order.
    void for_each_realizable(const std::vector<StateId>& sources,
                             const std::function<void(const Characteristic&, const SegmentLabel&)>& fn) const;

private:
    struct Sweep;

    struct SpliceResult
    {
        Int cost;
        std::uint64_t split;
        bool fwd_flag;
        bool bwd_flag;
        bool last_hop; // q == t answered through the final transition
    };

    [[nodiscard]] std::optional<SpliceResult> best_splice(StateId r, StateId q, StateId t, std::uint64_t m,
                                                          bool require_visit) const;
    [[nodiscard]] std::optional<std::pair<FinitePath, FinitePath>> splice_paths(StateId r, StateId q, StateId t,
                                                                                std::uint64_t m,
                                                                                bool require_visit) const;
    [[nodiscard]] const Sweep& fwd(StateId r) const;
    [[nodiscard]] const Sweep& bwd(StateId t) const;
    void check_bounds(const Characteristic& chi) const;
    [[nodiscard]] std::optional<CompactTuple> assemble(const Characteristic& chi, bool materialize,
                                                       SegmentLabel* out_label) const;

    const ConsumptionSystem& sys_;
    Int cap_;
    VisitMode mode_;
    std::uint64_t max_m_;
    std::vector<bool> avoid_;  // reload states
    std::vector<bool> visit_;  // target set of the mode
    std::map<StateId, std::unique_ptr<Sweep>> fwd_, bwd_;
    // per q: minimal cost cycle of each exact length 1..|S| avoiding
    // reloads in the interior, plain and visit-free variants
    struct DeltaEntry
    {
        std::optional<FinitePath> plain;
        std::optional<FinitePath> visit_free;
    };
    std::vector<std::vector<DeltaEntry>> delta_;
};

// Convenience wrappers over a one-off SegmentIndex.
[[nodiscard]] std::optional<CompactTuple> compact_tuple(const ConsumptionSystem& sys, const Characteristic& chi,
                                                        const Int& cap, VisitMode mode);
[[nodiscard]] std::vector<std::pair<Characteristic, CompactTuple>>
enumerate_characteristics(const ConsumptionSystem& sys, const Int& cap, VisitMode mode);

// Full 5-clause check of `chi` against an assembled tuple, including
// cap-boundedness and maximality of k. Used by tests and asserted on every
// tuple the index returns.
[[nodiscard]] bool tuple_matches_characteristic(const ConsumptionSystem& sys, const Characteristic& chi,
                                                const CompactTuple& tuple, const Int& cap, VisitMode mode);

} // namespace consys
