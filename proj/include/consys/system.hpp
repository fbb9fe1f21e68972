#pragma once

#include "consys/numbers.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace consys
{

// Dense state index assigned by input order. All tie-breaking in the
// library is lexicographic in these indices.
using StateId = std::uint32_t;

struct Transition
{
    StateId src;
    StateId dst;
    Int cost;
};

// A finite path is a non-empty vertex sequence; its length is the number of
// transitions, i.e. vertices.size() - 1.
using FinitePath = std::vector<StateId>;

// A weighted directed graph with reload and accepting states. The
// transition relation is expected to be total and accepting states
// non-empty; use validate() to check. Immutable after construction.
class ConsumptionSystem
{
public:
    ConsumptionSystem(std::vector<std::string> state_names, std::vector<Transition> transitions,
                      std::vector<StateId> reload, std::vector<StateId> accepting);

    [[nodiscard]] std::size_t size() const { return names_.size(); }
    [[nodiscard]] const std::string& name(StateId s) const { return names_.at(s); }
    [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
    [[nodiscard]] std::optional<StateId> find_state(const std::string& name) const;

    [[nodiscard]] bool is_reload(StateId s) const { return reload_.at(s); }
    [[nodiscard]] bool is_accepting(StateId s) const { return accepting_.at(s); }
    [[nodiscard]] const std::vector<StateId>& reload_states() const { return reload_list_; }
    [[nodiscard]] const std::vector<StateId>& accepting_states() const { return accepting_list_; }

    // Transitions sorted by (src, dst) with no duplicates enforced at
    // construction time via validate() only; out()/in() views are always
    // sorted, which keeps every search in the library deterministic.
    [[nodiscard]] const std::vector<Transition>& transitions() const { return transitions_; }
    [[nodiscard]] std::span<const std::uint32_t> out(StateId s) const;
    [[nodiscard]] std::span<const std::uint32_t> in(StateId s) const;
    [[nodiscard]] const Transition& transition(std::uint32_t index) const { return transitions_.at(index); }
    [[nodiscard]] std::optional<std::uint32_t> find_transition(StateId src, StateId dst) const;
    [[nodiscard]] bool has_transition(StateId src, StateId dst) const { return find_transition(src, dst).has_value(); }

    // Maximal transition cost; 0 for a system with all-zero costs.
    [[nodiscard]] const Int& max_cost() const { return max_cost_; }

private:
    std::vector<std::string> names_;
    std::vector<Transition> transitions_;
    std::vector<std::uint32_t> out_index_; // transition ids grouped by src
    std::vector<std::uint32_t> out_begin_;
    std::vector<std::uint32_t> in_index_; // transition ids grouped by dst
    std::vector<std::uint32_t> in_begin_;
    std::vector<bool> reload_;
    std::vector<bool> accepting_;
    std::vector<StateId> reload_list_;
    std::vector<StateId> accepting_list_;
    Int max_cost_;
};

enum class ValidationErrorKind
{
    non_total_state,
    empty_accepting,
    negative_cost,
    duplicate_transition,
};

struct ValidationError
{
    ValidationErrorKind kind;
    StateId state{0};          // offending state for non_total_state
    StateId other{0};          // dst for duplicate_transition / negative_cost
    [[nodiscard]] std::string describe(const ConsumptionSystem& sys) const;
};

// Returns every invariant violation; the system is valid iff the result is
// empty.
[[nodiscard]] std::vector<ValidationError> validate(const ConsumptionSystem& sys);

struct validation_failed : std::runtime_error
{
    explicit validation_failed(std::vector<ValidationError> errs, const ConsumptionSystem& sys);
    std::vector<ValidationError> errors;
};

// Throws validation_failed unless validate(sys) is empty.
void require_valid(const ConsumptionSystem& sys);

struct zero_length_path : std::invalid_argument
{
    zero_length_path() : std::invalid_argument("mean cost of a zero-length path") {}
};

// True iff consecutive vertices are connected by transitions of sys.
[[nodiscard]] bool is_path(const ConsumptionSystem& sys, const FinitePath& path);
[[nodiscard]] bool is_cycle(const ConsumptionSystem& sys, const FinitePath& path);

[[nodiscard]] inline std::size_t path_length(const FinitePath& path) { return path.empty() ? 0 : path.size() - 1; }

[[nodiscard]] Int total_cost(const ConsumptionSystem& sys, const FinitePath& path);

// Total cost divided by the number of transitions, reduced. Throws
// zero_length_path for paths without transitions.
[[nodiscard]] Rational mean_cost(const ConsumptionSystem& sys, const FinitePath& path);

// Total cost of the longest suffix whose states after the first are all
// non-reload; a path ending in a reload state (and a length-0 path) has end
// cost 0.
[[nodiscard]] Int end_cost(const ConsumptionSystem& sys, const FinitePath& path);

// True iff the path can be traversed starting from a full battery of the
// given capacity: every step needs (consumed since last reload) + cost <=
// cap, and arriving at a reload state refills. Equivalently, the end cost
// of every prefix, charged up to and including the transition entering a
// reload, stays within cap.
[[nodiscard]] bool is_cap_bounded(const ConsumptionSystem& sys, const FinitePath& path, const Int& cap);

// path1.back() must equal path2.front().
[[nodiscard]] FinitePath concat(const FinitePath& path1, const FinitePath& path2);

} // namespace consys
