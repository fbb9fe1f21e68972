#include "consys/synthesis.hpp"

#include "consys/ratio.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <unordered_map>

namespace consys
{

CountingController::CountingController(const ConsumptionSystem& sys, std::vector<std::string> mem_names,
                                       std::vector<Entry> table, std::uint32_t init_mem)
    : mem_names_{std::move(mem_names)}, table_{std::move(table)}, init_mem_{init_mem},
      state_count_{static_cast<std::uint32_t>(sys.size())}
{
    if (table_.size() != sys.size() * mem_names_.size())
        throw ill_formed_controller("table size does not match |S| x |Mem|");
    if (init_mem_ >= mem_names_.size())
        throw ill_formed_controller("initial memory element out of range");
    k_max_ = 0;
    for (StateId s = 0; s < sys.size(); ++s) {
        for (std::uint32_t m = 0; m < mem_names_.size(); ++m) {
            const Entry& e = entry(s, m);
            if (!sys.has_transition(s, e.next_pos) || !sys.has_transition(s, e.next_zero))
                throw ill_formed_controller("next function leaves the transition relation at state '" +
                                            sys.name(s) + "'");
            if (e.mem_pos >= mem_names_.size() || e.mem_zero >= mem_names_.size())
                throw ill_formed_controller("memory update out of range");
            if (e.act_zero.kind == CounterActionKind::dec)
                throw ill_formed_controller("zero update must not decrement");
            for (const auto* act : {&e.act_pos, &e.act_zero}) {
                if (act->kind == CounterActionKind::reset) {
                    if (act->amount < 1)
                        throw ill_formed_controller("reset amount must be positive");
                    if (act->amount > k_max_)
                        k_max_ = act->amount;
                }
            }
        }
    }
}

FinitePath replay(const ConsumptionSystem& sys, const CountingController& kappa, StateId start,
                  std::uint64_t steps)
{
    FinitePath path{start};
    StateId state = start;
    std::uint32_t mem = kappa.init_mem();
    Int d = 0;
    for (std::uint64_t i = 0; i < steps; ++i) {
        const auto& e = kappa.entry(state, mem);
        const bool positive = d > 0;
        const StateId next = positive ? e.next_pos : e.next_zero;
        const CounterAction& act = positive ? e.act_pos : e.act_zero;
        mem = positive ? e.mem_pos : e.mem_zero;
        switch (act.kind) {
        case CounterActionKind::noc:
            break;
        case CounterActionKind::dec:
            assert(d > 0);
            --d;
            break;
        case CounterActionKind::reset:
            d = act.amount;
            break;
        }
        path.push_back(next);
        state = next;
    }
    return path;
}

namespace
{

std::vector<bool> accepting_bitmap(const ConsumptionSystem& sys)
{
    std::vector<bool> f(sys.size(), false);
    for (StateId a : sys.accepting_states())
        f[a] = true;
    return f;
}

// Counting controller that emits (seg_0 . seg_1 ... seg_g)^omega from the
// first vertex of seg_0, where each segment is gamma . delta^k . gamma'.
// One basic memory element per edge of gamma . delta . gamma'; the delta
// loop is driven by the counter: reset(k) on entering the loop head,
// decrement per iteration, exit to gamma' at zero.
CountingController build_cycle_controller(const ConsumptionSystem& sys, const std::vector<CompactTuple>& segs)
{
    struct SegGeom
    {
        FinitePath comp;      // gamma . delta . gamma' with shared endpoints collapsed
        std::size_t m_gamma;  // edges in gamma
        std::size_t n_delta;  // edges in delta (0 when delta is one vertex)
        std::uint32_t offset; // first memory id of the segment
    };
    std::vector<SegGeom> geom;
    std::uint32_t mem_total = 0;
    for (const auto& seg : segs) {
        SegGeom g;
        g.m_gamma = path_length(seg.gamma);
        g.n_delta = path_length(seg.delta);
        g.comp = seg.gamma;
        if (g.n_delta > 0)
            g.comp.insert(g.comp.end(), seg.delta.begin() + 1, seg.delta.end());
        g.comp.insert(g.comp.end(), seg.gamma_prime.begin() + 1, seg.gamma_prime.end());
        g.offset = mem_total;
        mem_total += static_cast<std::uint32_t>(path_length(g.comp));
        geom.push_back(std::move(g));
    }

    std::vector<std::string> names(mem_total);
    for (std::size_t i = 0; i < geom.size(); ++i)
        for (std::size_t p = 0; p < path_length(geom[i].comp); ++p)
            names[geom[i].offset + p] = "s" + std::to_string(i) + "." + std::to_string(p);

    // filler: advance along the first transition, keep memory, no change
    std::vector<CountingController::Entry> table(sys.size() * mem_total);
    for (StateId s = 0; s < sys.size(); ++s) {
        const StateId fallback = sys.transition(sys.out(s)[0]).dst;
        for (std::uint32_t m = 0; m < mem_total; ++m)
            table[static_cast<std::size_t>(s) * mem_total + m] =
                {fallback, fallback, m, m, CounterAction::noc(), CounterAction::noc()};
    }
    auto at = [&](StateId s, std::uint32_t m) -> CountingController::Entry& {
        return table[static_cast<std::size_t>(s) * mem_total + m];
    };

    for (std::size_t i = 0; i < geom.size(); ++i) {
        const auto& g = geom[i];
        const auto& seg = segs[i];
        const std::size_t L = path_length(g.comp);
        const std::uint32_t next_seg_entry = geom[(i + 1) % geom.size()].offset;
        for (std::size_t p = 0; p < L; ++p) {
            const StateId from = g.comp[p];
            const StateId to = g.comp[p + 1];
            const std::uint32_t mem = g.offset + static_cast<std::uint32_t>(p);
            CountingController::Entry e{};
            if (g.n_delta > 0 && p == g.m_gamma) {
                // loop head: iterate delta while the counter is positive,
                // exit into gamma' at zero
                e.next_pos = to;
                e.mem_pos = g.n_delta >= 2 ? mem + 1 : mem;
                e.act_pos = CounterAction::dec();
                const std::size_t exit_edge = g.m_gamma + g.n_delta;
                e.next_zero = g.comp[exit_edge + 1];
                e.mem_zero = exit_edge == L - 1 ? next_seg_entry
                                                : g.offset + static_cast<std::uint32_t>(exit_edge) + 1;
                e.act_zero = CounterAction::noc();
            } else {
                CounterAction act = CounterAction::noc();
                std::uint32_t nxt = mem + 1;
                if (p == L - 1)
                    nxt = next_seg_entry;
                else if (g.n_delta > 0 && p + 1 == g.m_gamma)
                    act = CounterAction::reset(seg.k), nxt = g.offset + static_cast<std::uint32_t>(g.m_gamma);
                else if (g.n_delta > 0 && p + 1 == g.m_gamma + g.n_delta)
                    nxt = g.offset + static_cast<std::uint32_t>(g.m_gamma);
                e.next_pos = e.next_zero = to;
                e.mem_pos = e.mem_zero = nxt;
                e.act_pos = e.act_zero = act;
            }
            at(from, mem) = e;
        }
    }
    return CountingController(sys, std::move(names), std::move(table), geom[0].offset);
}

// Simple zero-cost sub-cycle of a zero-cost cycle that still contains an
// accepting state.
std::optional<FinitePath> extract_simple_zero_accepting(const ConsumptionSystem& sys, const FinitePath& cycle)
{
    std::vector<StateId> stack;
    std::unordered_map<StateId, std::size_t> pos;
    for (StateId v : cycle) {
        auto it = pos.find(v);
        if (it == pos.end()) {
            pos.emplace(v, stack.size());
            stack.push_back(v);
            continue;
        }
        FinitePath loop(stack.begin() + static_cast<std::ptrdiff_t>(it->second), stack.end());
        loop.push_back(v);
        bool accepting = false;
        for (StateId u : loop)
            accepting = accepting || sys.is_accepting(u);
        if (accepting)
            return loop;
        while (stack.size() > it->second + 1) {
            pos.erase(stack.back());
            stack.pop_back();
        }
    }
    return std::nullopt;
}

struct LabeledSegment
{
    Characteristic chi;
    Int cost;
    Int length;
};

// Drops entries that are dominated (some other entry is no more expensive
// and no shorter); survivors keep the enumeration order restricted to the
// frontier, sorted by increasing cost.
std::vector<LabeledSegment> pareto_frontier(std::vector<LabeledSegment> entries)
{
    std::stable_sort(entries.begin(), entries.end(), [](const LabeledSegment& a, const LabeledSegment& b) {
        if (a.cost != b.cost)
            return a.cost < b.cost;
        return a.length > b.length;
    });
    std::vector<LabeledSegment> front;
    for (auto& e : entries) {
        if (!front.empty() && front.back().length >= e.length)
            continue;
        front.push_back(std::move(e));
    }
    return front;
}

struct BestCycle
{
    Rational ratio;
    StateId reload;
    std::vector<Characteristic> segments;
};

std::uint64_t effective_m_bound(const ConsumptionSystem& sys, const Int& cap)
{
    const std::uint64_t n = sys.size();
    const std::uint64_t bound5 = 5 * n * n * n;
    // segments longer than (|S|+1)(cap+1) contain a zero-cost cycle and
    // never occur on an optimal cycle once the zero-cost branch is settled
    const Int tight = Int(n + 1) * (cap + 1);
    if (tight >= bound5)
        return bound5;
    return tight.convert_to<std::uint64_t>();
}

// Minimum-ratio segment cycle over the labelled graphs G_rhat, one per
// admissible reload: vertices (reload, layer), an edge per Pareto-optimal
// segment label, cycles forced through (rhat, 0) whose outgoing segments
// carry the visit bit.
std::optional<BestCycle> best_visiting_cycle(const SegmentIndex& index, const std::vector<StateId>& reloads)
{
    if (reloads.empty())
        return std::nullopt;
    std::map<std::pair<StateId, StateId>, std::vector<LabeledSegment>> any, visiting;
    index.for_each_realizable(reloads, [&](const Characteristic& chi, const SegmentIndex::SegmentLabel& lbl) {
        auto key = std::make_pair(chi.r, chi.t);
        any[key].push_back({chi, lbl.cost, lbl.length});
        if (chi.b)
            visiting[key].push_back({chi, lbl.cost, lbl.length});
    });
    for (auto& [key, entries] : any)
        entries = pareto_frontier(std::move(entries));
    for (auto& [key, entries] : visiting)
        entries = pareto_frontier(std::move(entries));

    const std::uint32_t layer_count = static_cast<std::uint32_t>(index.system().size()) + 1;
    std::unordered_map<StateId, std::uint32_t> rindex;
    for (std::uint32_t i = 0; i < reloads.size(); ++i)
        rindex[reloads[i]] = i;
    auto vid = [&](StateId r, std::uint32_t layer) { return rindex[r] * layer_count + layer; };

    std::optional<BestCycle> best;
    for (StateId rhat : reloads) {
        RatioGraph g;
        g.vertex_count = static_cast<std::uint32_t>(reloads.size()) * layer_count;
        std::vector<const LabeledSegment*> payload;
        for (StateId r : reloads) {
            for (StateId t : reloads) {
                auto add = [&](const std::vector<LabeledSegment>& entries, std::uint32_t layer) {
                    for (const auto& e : entries) {
                        g.edges.push_back({vid(r, layer), vid(t, layer + 1), e.cost, e.length});
                        payload.push_back(&e);
                    }
                };
                if (r == rhat) {
                    auto it = visiting.find({r, t});
                    if (it != visiting.end())
                        add(it->second, 0);
                } else {
                    auto it = any.find({r, t});
                    if (it != any.end())
                        for (std::uint32_t layer = 1; layer + 1 < layer_count; ++layer)
                            add(it->second, layer);
                }
            }
        }
        for (std::uint32_t layer = 1; layer < layer_count; ++layer) {
            g.edges.push_back({vid(rhat, layer), vid(rhat, 0), Int(0), Int(0)});
            payload.push_back(nullptr);
        }

        RatioCycle cycle;
        try {
            cycle = min_ratio_cycle(g);
        } catch (const no_cycle_error&) {
            continue;
        }
        // rotate so the edge leaving (rhat, 0) comes first
        std::size_t first = cycle.edges.size();
        for (std::size_t i = 0; i < cycle.edges.size(); ++i)
            if (g.edges[cycle.edges[i]].src == vid(rhat, 0))
                first = i;
        if (first == cycle.edges.size())
            throw internal_error("segment cycle misses its root");
        std::vector<Characteristic> segs;
        for (std::size_t i = 0; i < cycle.edges.size(); ++i) {
            const auto* lbl = payload[cycle.edges[(first + i) % cycle.edges.size()]];
            if (lbl != nullptr)
                segs.push_back(lbl->chi);
        }
        if (!best || cycle.ratio < best->ratio)
            best = BestCycle{cycle.ratio, rhat, std::move(segs)};
    }
    return best;
}

// Excises sub-cycles between repeated intermediate reload occurrences; the
// first (visit-carrying) segment always survives.
void make_reload_simple(std::vector<Characteristic>& segs)
{
    for (;;) {
        std::vector<StateId> ends{segs.front().r};
        for (const auto& chi : segs)
            ends.push_back(chi.t);
        bool changed = false;
        for (std::size_t i = 0; i < ends.size() && !changed; ++i) {
            for (std::size_t j = i + 1; j < ends.size() && !changed; ++j) {
                if (ends[i] != ends[j] || (i == 0 && j + 1 == ends.size()))
                    continue;
                segs.erase(segs.begin() + static_cast<std::ptrdiff_t>(i),
                           segs.begin() + static_cast<std::ptrdiff_t>(j));
                changed = true;
            }
        }
        if (!changed)
            return;
    }
}

struct AssembledCycle
{
    StateId reload;
    Rational mean;
    Int cost;
    Int length;
    std::vector<Characteristic> segments;
    std::vector<CompactTuple> tuples;
};

AssembledCycle assemble_cycle(const SegmentIndex& index, BestCycle best)
{
    make_reload_simple(best.segments);
    AssembledCycle out;
    out.reload = best.reload;
    out.segments = best.segments;
    out.cost = 0;
    out.length = 0;
    for (const auto& chi : best.segments) {
        auto lbl = index.label(chi);
        auto tup = index.tuple(chi);
        if (!lbl || !tup)
            throw internal_error("segment of the optimal cycle became unrealizable");
        out.cost += lbl->cost;
        out.length += lbl->length;
        out.tuples.push_back(std::move(*tup));
    }
    if (out.length <= 0)
        throw internal_error("optimal cycle with no transitions");
    out.mean = Rational(out.cost, out.length);

    // paper bounds, checked on every synthesized cycle
    const auto& sys = index.system();
    const Int len_bound = Int(sys.reload_states().size()) * Int(sys.size() + 1) * (index.cap() + 1);
    if (out.length > len_bound)
        throw internal_error("optimal cycle exceeds its length bound");
    std::vector<bool> seen(sys.size(), false);
    std::vector<StateId> ends{out.segments.front().r};
    for (const auto& chi : out.segments)
        ends.push_back(chi.t);
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
        if (seen[ends[i]])
            throw internal_error("optimal cycle is not reload-simple");
        seen[ends[i]] = true;
    }
    return out;
}

struct Analysis
{
    ExtendedValue val;
    ControllerKind kind = ControllerKind::infinite;
    std::optional<CountingController> controller;
    FinitePath alpha;
    StateId loop_start = 0;
    Int loop_len;
    Int loop_cost;
    std::optional<AdvancingController> advancing;
};

FinitePath remap_path(const FinitePath& path, const std::vector<StateId>& new_to_old)
{
    FinitePath out;
    out.reserve(path.size());
    for (StateId v : path)
        out.push_back(new_to_old[v]);
    return out;
}

CountingController remap_controller(const ConsumptionSystem& orig, const ConsumptionSystem& pruned,
                                    const std::vector<StateId>& new_to_old, const CountingController& kappa)
{
    const std::uint32_t mem = kappa.mem_count();
    std::vector<CountingController::Entry> table(orig.size() * mem);
    for (StateId s = 0; s < orig.size(); ++s) {
        const StateId fallback = orig.transition(orig.out(s)[0]).dst;
        for (std::uint32_t m = 0; m < mem; ++m)
            table[static_cast<std::size_t>(s) * mem + m] =
                {fallback, fallback, m, m, CounterAction::noc(), CounterAction::noc()};
    }
    std::vector<std::string> names;
    for (std::uint32_t m = 0; m < mem; ++m)
        names.push_back(kappa.mem_name(m));
    for (StateId ps = 0; ps < pruned.size(); ++ps) {
        for (std::uint32_t m = 0; m < mem; ++m) {
            CountingController::Entry e = kappa.entry(ps, m);
            e.next_pos = new_to_old[e.next_pos];
            e.next_zero = new_to_old[e.next_zero];
            table[static_cast<std::size_t>(new_to_old[ps]) * mem + m] = e;
        }
    }
    return CountingController(orig, std::move(names), std::move(table), kappa.init_mem());
}

Analysis analyze(const ConsumptionSystem& sys, StateId s, const Int& cap, bool build)
{
    require_valid(sys);
    if (s >= sys.size())
        throw std::out_of_range("initial state out of range");
    if (cap < 0)
        throw std::invalid_argument("negative capacity");

    auto pruned_or = prune(sys, s, cap);
    if (std::holds_alternative<AllInfinite>(pruned_or)) {
        Analysis a;
        a.val = ExtendedValue::infinity();
        a.kind = ControllerKind::infinite;
        return a;
    }
    auto& pr = std::get<PrunedSystem>(pruned_or);
    const ConsumptionSystem& P = pr.system;
    const StateId sp = pr.initial;
    const auto adm = admissible_states(P, cap);
    const auto acc = accepting_bitmap(P);

    Analysis a;

    // zero-cost dispatch: an accepting zero-cost cycle gives an optimal
    // finite-memory controller, any other zero-cost cycle forces infinite
    // memory
    for (StateId q = 0; q < P.size(); ++q) {
        if (!adm[q])
            continue;
        auto zc = zero_cost_cycle_through(P, q, &acc);
        if (!zc)
            continue;
        auto theta = extract_simple_zero_accepting(P, *zc);
        if (!theta)
            throw internal_error("accepting zero-cost cycle lost its accepting state");
        a.val = ExtendedValue::finite(Rational(0));
        a.kind = ControllerKind::finite_memory;
        if (build) {
            MinEndCostTable tbl(P, sp, cap);
            auto alpha = tbl.path_to(theta->front());
            if (!alpha)
                throw internal_error("pruned state lost cap-reachability");
            a.alpha = remap_path(*alpha, pr.new_to_old);
            a.loop_start = pr.new_to_old[theta->front()];
            a.loop_len = Int(path_length(*theta));
            a.loop_cost = 0;
            CompactTuple loop{*theta, FinitePath{theta->front()}, FinitePath{theta->front()}, 1};
            a.controller = remap_controller(sys, P, pr.new_to_old, build_cycle_controller(P, {loop}));
        }
        return a;
    }
    for (StateId q = 0; q < P.size(); ++q) {
        if (!adm[q])
            continue;
        auto beta = zero_cost_cycle_through(P, q, nullptr);
        if (!beta)
            continue;
        a.val = ExtendedValue::finite(Rational(0));
        a.kind = ControllerKind::infinite_memory;
        if (build) {
            ReachCache cache(P, cap);
            auto w = admissibility_witness(cache, sp, q);
            if (!w)
                throw internal_error("zero-cost cycle at a non-admissible state");
            AdvancingController adv;
            adv.alpha = remap_path(w->prefix, pr.new_to_old);
            adv.gamma = remap_path(w->cycle, pr.new_to_old);
            adv.beta_path = remap_path(*beta, pr.new_to_old);
            adv.beta_start = pr.new_to_old[q];
            adv.beta_len = Int(path_length(*beta));
            adv.beta_cost = 0;
            a.advancing = std::move(adv);
        }
        return a;
    }

    // no zero-cost cycle: the value is the minimum mean over segment
    // cycles; an optimal finite-memory controller exists iff the
    // accepting-visiting optimum matches
    std::vector<StateId> reloads;
    for (StateId r : P.reload_states())
        if (adm[r])
            reloads.push_back(r);
    if (reloads.empty())
        throw internal_error("finite value without an admissible reload state");

    const std::uint64_t m_bound = effective_m_bound(P, cap);
    SegmentIndex index_s(P, cap, VisitMode::all_states, m_bound);
    auto best_s = best_visiting_cycle(index_s, reloads);
    if (!best_s)
        throw internal_error("finite value but no segment cycle found");
    a.val = ExtendedValue::finite(best_s->ratio);

    SegmentIndex index_f(P, cap, VisitMode::accepting, m_bound);
    auto best_f = best_visiting_cycle(index_f, reloads);
    if (!best_f)
        throw internal_error("finite value but no accepting segment cycle found");

    if (best_f->ratio == best_s->ratio) {
        a.kind = ControllerKind::finite_memory;
        if (build) {
            auto cyc = assemble_cycle(index_f, *best_f);
            if (cyc.mean != best_s->ratio)
                throw internal_error("reload-simple repair changed the optimal mean");
            MinEndCostTable tbl(P, sp, cap);
            auto alpha = tbl.path_to(cyc.reload);
            if (!alpha)
                throw internal_error("pruned state lost cap-reachability");
            a.alpha = remap_path(*alpha, pr.new_to_old);
            a.loop_start = pr.new_to_old[cyc.reload];
            a.loop_len = cyc.length;
            a.loop_cost = cyc.cost;
            a.controller = remap_controller(sys, P, pr.new_to_old, build_cycle_controller(P, cyc.tuples));
        }
    } else {
        if (best_f->ratio < best_s->ratio)
            throw internal_error("accepting optimum below the unconstrained optimum");
        a.kind = ControllerKind::infinite_memory;
        if (build) {
            auto cyc = assemble_cycle(index_s, *best_s);
            if (cyc.mean != best_s->ratio)
                throw internal_error("reload-simple repair changed the optimal mean");
            ReachCache cache(P, cap);
            auto w = admissibility_witness(cache, sp, cyc.reload);
            if (!w)
                throw internal_error("optimal cycle at a non-admissible reload");
            AdvancingController adv;
            adv.alpha = remap_path(w->prefix, pr.new_to_old);
            adv.gamma = remap_path(w->cycle, pr.new_to_old);
            adv.beta_controller = remap_controller(sys, P, pr.new_to_old, build_cycle_controller(P, cyc.tuples));
            adv.beta_start = pr.new_to_old[cyc.reload];
            adv.beta_len = cyc.length;
            adv.beta_cost = cyc.cost;
            a.advancing = std::move(adv);
        }
    }
    return a;
}

} // namespace

std::optional<FinitePath> find_zero_cost_cycle(const ConsumptionSystem& pruned, const Int& cap,
                                               bool require_accepting)
{
    require_valid(pruned);
    const auto adm = admissible_states(pruned, cap);
    const auto acc = accepting_bitmap(pruned);
    for (StateId q = 0; q < pruned.size(); ++q) {
        if (!adm[q])
            continue;
        if (require_accepting) {
            if (auto zc = zero_cost_cycle_through(pruned, q, &acc))
                if (auto theta = extract_simple_zero_accepting(pruned, *zc))
                    return theta;
        } else {
            if (auto zc = zero_cost_cycle_through(pruned, q, nullptr))
                return zc;
        }
    }
    return std::nullopt;
}

std::optional<VisitingCycle> optimal_visiting_cycle(const ConsumptionSystem& pruned, const Int& cap,
                                                    VisitMode mode)
{
    require_valid(pruned);
    const auto adm = admissible_states(pruned, cap);
    std::vector<StateId> reloads;
    for (StateId r : pruned.reload_states())
        if (adm[r])
            reloads.push_back(r);
    if (reloads.empty())
        return std::nullopt;
    SegmentIndex index(pruned, cap, mode, effective_m_bound(pruned, cap));
    auto best = best_visiting_cycle(index, reloads);
    if (!best)
        return std::nullopt;
    auto cyc = assemble_cycle(index, *best);
    return VisitingCycle{cyc.reload, build_cycle_controller(pruned, cyc.tuples), cyc.mean, cyc.length, cyc.cost,
                         cyc.segments};
}

SynthesisResult synthesize(const ConsumptionSystem& sys, StateId s, const Int& cap)
{
    Analysis a = analyze(sys, s, cap, true);
    SynthesisResult res;
    res.value = a.val;
    res.kind = a.kind;
    res.controller = std::move(a.controller);
    res.alpha = std::move(a.alpha);
    res.loop_start = a.loop_start;
    res.loop_len = std::move(a.loop_len);
    res.loop_cost = std::move(a.loop_cost);
    res.advancing = std::move(a.advancing);
    return res;
}

MemoryKind memory_kind(const ConsumptionSystem& sys, StateId s, const Int& cap)
{
    switch (analyze(sys, s, cap, false).kind) {
    case ControllerKind::infinite:
        return MemoryKind::infinite;
    case ControllerKind::finite_memory:
        return MemoryKind::finite_optimal;
    case ControllerKind::infinite_memory:
        return MemoryKind::infinite_memory_required;
    }
    return MemoryKind::infinite;
}

ExtendedValue value(const ConsumptionSystem& sys, StateId s, const Int& cap)
{
    return analyze(sys, s, cap, false).val;
}

} // namespace consys
