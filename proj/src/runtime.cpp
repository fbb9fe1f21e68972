#include "consys/runtime.hpp"

#include <cassert>
#include <stdexcept>

namespace consys
{

std::tuple<StateId, std::uint32_t, Int> expand_step(const ConsumptionSystem& sys, const CountingController& kappa,
                                                    StateId state, std::uint32_t mem, const Int& d)
{
    if (d < 0)
        throw std::invalid_argument("negative counter value");
    const auto& e = kappa.entry(state, mem);
    const bool positive = d > 0;
    const StateId next = positive ? e.next_pos : e.next_zero;
    if (!sys.has_transition(state, next))
        throw ill_formed_controller("next function leaves the transition relation at state '" + sys.name(state) +
                                    "'");
    const CounterAction& act = positive ? e.act_pos : e.act_zero;
    Int nd = d;
    switch (act.kind) {
    case CounterActionKind::noc:
        break;
    case CounterActionKind::dec:
        --nd;
        break;
    case CounterActionKind::reset:
        nd = act.amount;
        break;
    }
    return {next, positive ? e.mem_pos : e.mem_zero, std::move(nd)};
}

RunStats path_stats(const ConsumptionSystem& sys, const FinitePath& path, const Int& cap)
{
    RunStats stats;
    stats.steps = path_length(path);
    stats.max_end_cost_seen = 0;
    Int consumed = 0;
    Int total = 0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        auto e = sys.find_transition(path[i], path[i + 1]);
        if (!e)
            throw std::invalid_argument("not a path of the system");
        const Int& c = sys.transition(*e).cost;
        total += c;
        consumed += c;
        if (consumed > stats.max_end_cost_seen)
            stats.max_end_cost_seen = consumed;
        if (consumed > cap)
            ++stats.cap_violations;
        if (sys.is_reload(path[i + 1]))
            consumed = 0;
    }
    for (StateId v : path)
        if (sys.is_accepting(v))
            ++stats.accepting_visits;
    stats.min_headroom = cap - stats.max_end_cost_seen;
    stats.prefix_mean = stats.steps == 0 ? Rational(0) : Rational(total, Int(stats.steps));
    return stats;
}

namespace
{

// Appends the continuation of `piece` (everything after its first vertex).
void append_tail(FinitePath& path, const FinitePath& piece, std::uint64_t limit)
{
    assert(!path.empty() && path.back() == piece.front());
    for (std::size_t i = 1; i < piece.size() && path_length(path) < limit; ++i)
        path.push_back(piece[i]);
}

// One repetition of beta, either from the stored path or by simulating the
// counting controller until it revisits beta's start.
class BetaSource
{
public:
    explicit BetaSource(const ConsumptionSystem& sys, const AdvancingController& adv) : sys_{sys}, adv_{adv}
    {
        if (adv_.beta_controller) {
            state_ = adv_.beta_start;
            mem_ = adv_.beta_controller->init_mem();
            d_ = 0;
        }
    }

    void emit_once(FinitePath& path, std::uint64_t limit)
    {
        if (adv_.beta_path) {
            append_tail(path, *adv_.beta_path, limit);
            return;
        }
        Int emitted = 0;
        do {
            auto [next, mem, d] = expand_step(sys_, *adv_.beta_controller, state_, mem_, d_);
            state_ = next;
            mem_ = mem;
            d_ = std::move(d);
            ++emitted;
            if (path_length(path) < limit)
                path.push_back(next);
            if (emitted > adv_.beta_len)
                throw ill_formed_controller("beta controller does not revisit its start in time");
        } while (state_ != adv_.beta_start);
        if (emitted != adv_.beta_len)
            throw ill_formed_controller("beta controller period does not match beta_len");
    }

private:
    const ConsumptionSystem& sys_;
    const AdvancingController& adv_;
    StateId state_ = 0;
    std::uint32_t mem_ = 0;
    Int d_;
};

} // namespace

std::pair<FinitePath, RunStats> run_controller(const ConsumptionSystem& sys, const SynthesisResult& result,
                                               StateId s, std::uint64_t steps, const Int& cap)
{
    if (result.kind == ControllerKind::infinite)
        throw std::invalid_argument("no run to produce: the value is infinite");

    FinitePath path{s};
    if (result.kind == ControllerKind::finite_memory) {
        if (result.alpha.front() != s)
            throw std::invalid_argument("controller was synthesized for a different initial state");
        append_tail(path, result.alpha, steps);
        StateId state = path.back();
        std::uint32_t mem = result.controller->init_mem();
        Int d = 0;
        while (path_length(path) < steps) {
            auto [next, nmem, nd] = expand_step(sys, *result.controller, state, mem, d);
            path.push_back(next);
            state = next;
            mem = nmem;
            d = std::move(nd);
        }
        return {path, path_stats(sys, path, cap)};
    }

    const AdvancingController& adv = *result.advancing;
    if (adv.alpha.front() != s)
        throw std::invalid_argument("controller was synthesized for a different initial state");
    append_tail(path, adv.alpha, steps);
    BetaSource beta(sys, adv);
    Int reps = 1; // beta^(2^i) with i = 0, 1, ...
    while (path_length(path) < steps) {
        for (Int countdown = reps; countdown > 0 && path_length(path) < steps; --countdown)
            beta.emit_once(path, steps);
        if (path_length(path) < steps)
            append_tail(path, adv.gamma, steps);
        reps *= 2;
    }
    return {path, path_stats(sys, path, cap)};
}

} // namespace consys
