#pragma once

#include "consys/system.hpp"

#include <map>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace consys
{

// Minimal end cost of a cap-bounded path of each length 0..|S|^2 from a
// fixed source, per the recurrence with saturating addition: a step into a
// non-reload state adds its cost (infinite past cap), a step into a reload
// state resets to zero when the incoming sum stays within cap. Values are
// kept as two rolling rows; predecessor choices (first-found in ascending
// source order) are kept per length for path reconstruction.
class MinEndCostTable
{
public:
    MinEndCostTable(const ConsumptionSystem& sys, StateId source, Int cap);

    [[nodiscard]] StateId source() const { return source_; }
    [[nodiscard]] const Int& cap() const { return cap_; }

    // min over all lengths; nullopt == not cap-reachable
    [[nodiscard]] const std::optional<Int>& min_end_cost(StateId t) const { return best_[t]; }
    [[nodiscard]] bool reachable(StateId t) const { return best_[t].has_value(); }

    // A cap-bounded path of length <= |S|^2 realizing min_end_cost(t).
    [[nodiscard]] std::optional<FinitePath> path_to(StateId t) const;

    // Same but over lengths >= 1 (a cap-bounded cycle when t == source).
    [[nodiscard]] const std::optional<Int>& min_end_cost_nonempty(StateId t) const { return best_pos_[t]; }
    [[nodiscard]] std::optional<FinitePath> path_to_nonempty(StateId t) const;

private:
    [[nodiscard]] FinitePath reconstruct(StateId t, std::size_t len) const;

    const ConsumptionSystem& sys_;
    StateId source_;
    Int cap_;
    std::vector<std::optional<Int>> best_;
    std::vector<std::size_t> best_len_;
    std::vector<std::optional<Int>> best_pos_;
    std::vector<std::size_t> best_pos_len_;
    std::vector<std::int64_t> parent_; // (len, state) -> transition id, -1 if none
    std::size_t rows_;
};

[[nodiscard]] MinEndCostTable min_end_costs(const ConsumptionSystem& sys, StateId source, const Int& cap);

// A cap-bounded source->target path of length <= |S|^2 whose end cost is
// minimal among all cap-bounded such paths; nullopt if target is not
// cap-reachable. source == target yields the length-0 path.
[[nodiscard]] std::optional<FinitePath> cap_bounded_path(const ConsumptionSystem& sys, StateId source,
                                                         StateId target, const Int& cap);

// Without `through`: a simple zero-cost cycle at q, or nullopt. With
// `through`: a zero-cost cycle at q of length <= 2|S| containing a state of
// the set (membership given as a bitmap), or nullopt.
[[nodiscard]] std::optional<FinitePath> zero_cost_cycle_through(const ConsumptionSystem& sys, StateId q,
                                                                const std::vector<bool>* through = nullptr);

struct not_a_reload_state : std::invalid_argument
{
    explicit not_a_reload_state(const std::string& name)
        : std::invalid_argument("'" + name + "' is not a reload state") {}
};

// A cap-bounded cycle at reload r of length <= 3|S|^2 containing a state of
// `targets`, assembled from three cap-bounded legs; nullopt if none exists.
[[nodiscard]] std::optional<FinitePath> interreaching_cycle(const ConsumptionSystem& sys, StateId r,
                                                            const std::vector<bool>& targets, const Int& cap);

struct AdmissibilityWitness
{
    FinitePath prefix; // from the initial state to q, cap-bounded
    FinitePath cycle;  // cycle at q containing an accepting state, len <= 6|S|^2
};

// Shared scratch space so repeated admissibility queries against one system
// and capacity reuse their DP tables.
class ReachCache
{
public:
    ReachCache(const ConsumptionSystem& sys, Int cap);

    const MinEndCostTable& table(StateId source);
    const MinEndCostTable& table_with_cap(StateId source, const Int& cap);
    std::optional<FinitePath> interreach(StateId r, const std::vector<bool>& targets);

    const ConsumptionSystem& sys() const { return sys_; }
    const Int& cap() const { return cap_; }

private:
    const ConsumptionSystem& sys_;
    Int cap_;
    std::map<std::pair<StateId, Int>, std::unique_ptr<MinEndCostTable>> tables_;
};

// A witness that q is admissible for runs from s: a cap-bounded prefix
// alpha from s to q and a cycle gamma at q through an accepting state such
// that alpha . gamma^omega is cap-bounded. Returns nullopt iff q is not
// admissible.
[[nodiscard]] std::optional<AdmissibilityWitness> admissibility_witness(const ConsumptionSystem& sys, StateId s,
                                                                        StateId q, const Int& cap);
[[nodiscard]] std::optional<AdmissibilityWitness> admissibility_witness(ReachCache& cache, StateId s, StateId q);

// True iff Val^cap(t) is finite, i.e. some state is admissible when t is
// taken as the initial state.
[[nodiscard]] bool has_finite_value(const ConsumptionSystem& sys, StateId t, const Int& cap);

struct AllInfinite
{
};

struct PrunedSystem
{
    ConsumptionSystem system;
    std::vector<std::optional<StateId>> old_to_new;
    std::vector<StateId> new_to_old;
    StateId initial; // s in the new indexing
};

// Restricts the system to states that survive the cleaning fixpoint: every
// kept state has finite value, is cap-reachable from s, and keeps at least
// one outgoing transition, all evaluated inside the shrinking subsystem.
// AllInfinite signals Val^cap(s) = infinity.
[[nodiscard]] std::variant<PrunedSystem, AllInfinite> prune(const ConsumptionSystem& sys, StateId s, const Int& cap);

// Admissible states of a pruned system (admissibility is initial-state-free
// once every state is cap-reachable).
[[nodiscard]] std::vector<bool> admissible_states(const ConsumptionSystem& pruned, const Int& cap);

// Validity predicate used before any witness leaves this module.
[[nodiscard]] bool witness_is_valid(const ConsumptionSystem& sys, StateId s, const Int& cap,
                                    const AdmissibilityWitness& w);

} // namespace consys
