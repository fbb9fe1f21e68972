#pragma once

#include "consys/reach.hpp"
#include "consys/segments.hpp"
#include "consys/system.hpp"

#include <optional>
#include <vector>

namespace consys
{

enum class CounterActionKind
{
    noc,
    dec,
    reset,
};

struct CounterAction
{
    CounterActionKind kind = CounterActionKind::noc;
    Int amount; // >= 1, reset only

    static CounterAction noc() { return {CounterActionKind::noc, 0}; }
    static CounterAction dec() { return {CounterActionKind::dec, 0}; }
    static CounterAction reset(Int n) { return {CounterActionKind::reset, std::move(n)}; }
    [[nodiscard]] bool operator==(const CounterAction&) const = default;
};

struct ill_formed_controller : std::runtime_error
{
    explicit ill_formed_controller(const std::string& what) : std::runtime_error(what) {}
};

// Finite control with one bounded counter. The next and update functions
// are total over (state, basic memory element); the zero update never
// decrements. The produced run applies, per step, the pair selected by the
// current counter value: next state from next_pos/next_zero, memory and
// counter action from upd_pos/upd_zero.
class CountingController
{
public:
    struct Entry
    {
        StateId next_pos;
        StateId next_zero;
        std::uint32_t mem_pos;
        std::uint32_t mem_zero;
        CounterAction act_pos;
        CounterAction act_zero;
    };

    CountingController(const ConsumptionSystem& sys, std::vector<std::string> mem_names,
                       std::vector<Entry> table, std::uint32_t init_mem);

    [[nodiscard]] std::uint32_t mem_count() const { return static_cast<std::uint32_t>(mem_names_.size()); }
    [[nodiscard]] const std::string& mem_name(std::uint32_t m) const { return mem_names_.at(m); }
    [[nodiscard]] std::uint32_t init_mem() const { return init_mem_; }
    [[nodiscard]] std::uint32_t state_count() const { return state_count_; }

    [[nodiscard]] const Entry& entry(StateId s, std::uint32_t mem) const
    {
        return table_.at(static_cast<std::size_t>(s) * mem_names_.size() + mem);
    }

    [[nodiscard]] StateId next_pos(StateId s, std::uint32_t mem) const { return entry(s, mem).next_pos; }
    [[nodiscard]] StateId next_zero(StateId s, std::uint32_t mem) const { return entry(s, mem).next_zero; }
    [[nodiscard]] std::pair<std::uint32_t, CounterAction> upd_pos(StateId s, std::uint32_t mem) const
    {
        const Entry& e = entry(s, mem);
        return {e.mem_pos, e.act_pos};
    }
    [[nodiscard]] std::pair<std::uint32_t, CounterAction> upd_zero(StateId s, std::uint32_t mem) const
    {
        const Entry& e = entry(s, mem);
        return {e.mem_zero, e.act_zero};
    }

    // largest reset amount (0 when no reset occurs)
    [[nodiscard]] const Int& k_max() const { return k_max_; }

private:
    std::vector<std::string> mem_names_;
    std::vector<Entry> table_;
    std::uint32_t init_mem_;
    std::uint32_t state_count_;
    Int k_max_;
};

// Produces alpha . beta . gamma . beta^2 . gamma . beta^4 ... where beta is
// stored either explicitly or as a counting controller replayed until it
// revisits beta's start.
struct AdvancingController
{
    FinitePath alpha;
    std::optional<FinitePath> beta_path;
    std::optional<CountingController> beta_controller;
    StateId beta_start = 0;
    Int beta_len;
    Int beta_cost;
    FinitePath gamma;
};

enum class ControllerKind
{
    infinite,
    finite_memory,
    infinite_memory,
};

struct SynthesisResult
{
    ExtendedValue value;
    ControllerKind kind = ControllerKind::infinite;
    // finite_memory: run = alpha . loop^omega, loop produced by controller
    std::optional<CountingController> controller;
    FinitePath alpha;
    StateId loop_start = 0;
    Int loop_len;
    Int loop_cost;
    // infinite_memory
    std::optional<AdvancingController> advancing;
};

enum class MemoryKind
{
    infinite,
    finite_optimal,
    infinite_memory_required,
};

struct internal_error : std::logic_error
{
    explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

// A simple zero-cost cycle at an admissible state of a pruned system
// (containing an accepting state when required), or nullopt.
[[nodiscard]] std::optional<FinitePath> find_zero_cost_cycle(const ConsumptionSystem& pruned, const Int& cap,
                                                             bool require_accepting);

struct VisitingCycle
{
    StateId reload;                        // starting admissible reload state
    CountingController controller;        // run(controller, reload) = cycle^omega
    Rational mean;
    Int length;
    Int cost;
    std::vector<Characteristic> segments; // reload-to-reload decomposition
};

// Optimal cap-bounded reload-simple cycle through an admissible reload
// state containing a state of the mode's target set, represented by a
// counting controller; nullopt when no such cycle exists. Precondition:
// pruned system without zero-cost cycles at admissible states.
[[nodiscard]] std::optional<VisitingCycle> optimal_visiting_cycle(const ConsumptionSystem& pruned, const Int& cap,
                                                                  VisitMode mode);

// Val^cap(s) together with an optimal controller per the dichotomy: a
// counting controller when an optimal finite-memory controller exists, an
// advancing controller otherwise, and kind == infinite when the value is
// infinite (every controller is optimal then).
[[nodiscard]] SynthesisResult synthesize(const ConsumptionSystem& sys, StateId s, const Int& cap);

[[nodiscard]] MemoryKind memory_kind(const ConsumptionSystem& sys, StateId s, const Int& cap);

[[nodiscard]] ExtendedValue value(const ConsumptionSystem& sys, StateId s, const Int& cap);

// Replays a counting controller from `start` until it has emitted `steps`
// transitions; checks every move against the transition relation.
[[nodiscard]] FinitePath replay(const ConsumptionSystem& sys, const CountingController& kappa, StateId start,
                                std::uint64_t steps);

} // namespace consys
