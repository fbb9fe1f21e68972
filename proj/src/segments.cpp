#include "consys/segments.hpp"

#include <algorithm>
#include <cassert>

namespace consys
{

Int CompactTuple::path_cost(const ConsumptionSystem& sys) const
{
    Int cost = total_cost(sys, gamma) + total_cost(sys, gamma_prime);
    if (consys::path_length(delta) > 0)
        cost += k * total_cost(sys, delta);
    return cost;
}

Int CompactTuple::path_length() const
{
    Int len = Int(consys::path_length(gamma)) + Int(consys::path_length(gamma_prime));
    len += k * Int(consys::path_length(delta));
    return len;
}

// Exact-length minimum-cost DP over layers 0..layers. Forward sweeps grow
// paths from the root and enforce the avoid set on every vertex past layer
// 0; backward sweeps grow suffixes ending at the root and enforce the
// avoid set on every vertex except the suffix head and the root. The
// optional visit flag tracks whether the piece touches the visit set
// (head/root included). Ranks order equal-cost pieces lexicographically by
// vertex sequence.
struct SegmentIndex::Sweep
{
    struct Cell
    {
        std::optional<Int> cost;
        std::int64_t parent = -1; // transition id
        std::uint8_t parent_flag = 0;
        std::uint32_t rank = 0;
    };

    const ConsumptionSystem& sys;
    bool forward;
    bool flagged;
    StateId root;
    std::uint64_t layers;
    std::vector<bool> avoid;
    std::vector<bool> visit;
    std::uint64_t max_finite = 0;
    std::vector<std::vector<Cell>> rows;

    Sweep(const ConsumptionSystem& sys_in, bool forward_in, bool flagged_in, StateId root_in,
          std::uint64_t layers_in, std::vector<bool> avoid_in, std::vector<bool> visit_in)
        : sys{sys_in}, forward{forward_in}, flagged{flagged_in}, root{root_in}, layers{layers_in},
          avoid{std::move(avoid_in)}, visit{std::move(visit_in)}
    {
        const std::size_t n = sys.size();
        if (visit.empty())
            visit.assign(n, false);
        rows.assign(layers + 1, std::vector<Cell>(n * 2));
        const std::uint8_t flag0 = (flagged && visit[root]) ? 1 : 0;
        rows[0][root * 2 + flag0].cost = 0;

        for (std::uint64_t i = 1; i <= layers; ++i) {
            bool any = false;
            auto& row = rows[i];
            const auto& prev = rows[i - 1];
            auto parent_rank_of = [&](const Cell& c) {
                const auto& ptr = sys.transition(static_cast<std::uint32_t>(c.parent));
                const StateId pu = forward ? ptr.src : ptr.dst;
                return prev[pu * 2 + c.parent_flag].rank;
            };
            for (StateId v = 0; v < n; ++v) {
                if (forward && avoid[v])
                    continue;
                const auto edges = forward ? sys.in(v) : sys.out(v);
                for (std::uint32_t e : edges) {
                    const auto& tr = sys.transition(e);
                    const StateId u = forward ? tr.src : tr.dst;
                    if (!forward && i >= 2 && avoid[u])
                        continue;
                    for (std::uint8_t pf = 0; pf < 2; ++pf) {
                        const Cell& pc = prev[u * 2 + pf];
                        if (!pc.cost)
                            continue;
                        const std::uint8_t nf =
                            flagged ? static_cast<std::uint8_t>(pf | (visit[v] ? 1 : 0)) : 0;
                        Cell& cell = row[v * 2 + nf];
                        Int cand = *pc.cost + tr.cost;
                        const bool better = !cell.cost || cand < *cell.cost ||
                                            (cand == *cell.cost && pc.rank < parent_rank_of(cell));
                        if (better) {
                            cell.cost = std::move(cand);
                            cell.parent = static_cast<std::int64_t>(e);
                            cell.parent_flag = pf;
                        }
                    }
                }
                for (std::uint8_t nf = 0; nf < 2; ++nf)
                    if (row[v * 2 + nf].cost)
                        any = true;
            }
            if (!any) {
                rows.resize(i);
                break;
            }
            max_finite = i;
            assign_ranks(i);
        }
    }

    void assign_ranks(std::uint64_t i)
    {
        auto& row = rows[i];
        const auto& prev = rows[i - 1];
        std::vector<std::size_t> alive;
        for (std::size_t idx = 0; idx < row.size(); ++idx)
            if (row[idx].cost)
                alive.push_back(idx);
        auto key = [&](std::size_t idx) {
            const Cell& c = row[idx];
            const auto& tr = sys.transition(static_cast<std::uint32_t>(c.parent));
            const StateId u = forward ? tr.src : tr.dst;
            const std::uint32_t prank = prev[u * 2 + c.parent_flag].rank;
            const StateId v = static_cast<StateId>(idx / 2);
            // forward: (prefix order, v); backward: (v, suffix order)
            return forward ? std::make_pair(prank, static_cast<std::uint32_t>(v))
                           : std::make_pair(static_cast<std::uint32_t>(v), prank);
        };
        std::sort(alive.begin(), alive.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
        std::uint32_t r = 0;
        for (std::size_t idx : alive)
            row[idx].rank = r++;
    }

    [[nodiscard]] const Cell& cell(std::uint64_t i, StateId v, std::uint8_t flag) const
    {
        static const Cell empty{};
        if (i >= rows.size())
            return empty;
        return rows[i][v * 2 + flag];
    }

    // forward only: minimum cost of a length-m path root -> target whose
    // interior avoids the avoid set (target exempt); the final visit flag
    // is cell flag | visit[target].
    struct Hop
    {
        Int cost;
        std::int64_t edge;    // -1 for the length-0 answer
        std::uint8_t pflag;
        std::uint32_t prank;
        bool final_flag;
    };

    [[nodiscard]] std::optional<Hop> answer(std::uint64_t m, StateId target, bool require_flag) const
    {
        assert(forward);
        if (m == 0) {
            if (target != root)
                return std::nullopt;
            const bool f = flagged && visit[root];
            if (require_flag && !f)
                return std::nullopt;
            return Hop{Int(0), -1, 0, 0, f};
        }
        if (m - 1 >= rows.size())
            return std::nullopt;
        std::optional<Hop> best;
        for (std::uint32_t e : sys.in(target)) {
            const auto& tr = sys.transition(e);
            for (std::uint8_t pf = 0; pf < 2; ++pf) {
                const Cell& pc = rows[m - 1][tr.src * 2 + pf];
                if (!pc.cost)
                    continue;
                const bool f = flagged && (pf || visit[target]);
                if (require_flag && !f)
                    continue;
                Int cand = *pc.cost + tr.cost;
                if (!best || cand < best->cost || (cand == best->cost && pc.rank < best->prank))
                    best = Hop{std::move(cand), static_cast<std::int64_t>(e), pf, pc.rank, f};
            }
        }
        return best;
    }

    // forward: root..v; backward: v..root.
    [[nodiscard]] FinitePath piece(std::uint64_t i, StateId v, std::uint8_t flag) const
    {
        FinitePath path{v};
        std::uint8_t f = flag;
        StateId cur = v;
        for (std::uint64_t layer = i; layer > 0; --layer) {
            const Cell& c = rows[layer][cur * 2 + f];
            assert(c.cost);
            const auto& tr = sys.transition(static_cast<std::uint32_t>(c.parent));
            const StateId u = forward ? tr.src : tr.dst;
            f = c.parent_flag;
            cur = u;
            path.push_back(cur);
        }
        if (forward)
            std::reverse(path.begin(), path.end());
        return path;
    }

    [[nodiscard]] FinitePath hop_path(std::uint64_t m, StateId target, const Hop& hop) const
    {
        if (hop.edge < 0)
            return FinitePath{root};
        const auto& tr = sys.transition(static_cast<std::uint32_t>(hop.edge));
        FinitePath path = piece(m - 1, tr.src, hop.pflag);
        path.push_back(target);
        return path;
    }
};

namespace
{

std::uint64_t characteristic_m_bound(const ConsumptionSystem& sys)
{
    const std::uint64_t n = sys.size();
    return 5 * n * n * n;
}

} // namespace

SegmentIndex::SegmentIndex(const ConsumptionSystem& sys, Int cap, VisitMode mode, std::uint64_t max_m)
    : sys_{sys}, cap_{std::move(cap)}, mode_{mode}, max_m_{std::min(max_m, characteristic_m_bound(sys))}
{
    const std::size_t n = sys.size();
    avoid_.assign(n, false);
    for (StateId r : sys.reload_states())
        avoid_[r] = true;
    visit_.assign(n, mode == VisitMode::all_states);
    if (mode == VisitMode::accepting)
        for (StateId f : sys.accepting_states())
            visit_[f] = true;

    // per-q exact-length cycles avoiding reloads (and, for clause 5 of the
    // characteristic definition, also the visit set) in the interior
    delta_.assign(n, {});
    std::vector<bool> avoid_visit = avoid_;
    if (mode == VisitMode::accepting)
        for (StateId v = 0; v < n; ++v)
            if (visit_[v])
                avoid_visit[v] = true;
    for (StateId q = 0; q < n; ++q) {
        if (avoid_[q])
            continue; // iterated cycles sit strictly between reloads
        delta_[q].assign(n + 1, DeltaEntry{});
        Sweep plain(sys_, true, false, q, n, avoid_, {});
        Sweep vfree(sys_, true, false, q, n, avoid_visit, {});
        for (std::uint32_t len = 1; len <= n; ++len) {
            if (auto hop = plain.answer(len, q, false))
                delta_[q][len].plain = plain.hop_path(len, q, *hop);
            if (auto hop = vfree.answer(len, q, false))
                delta_[q][len].visit_free = vfree.hop_path(len, q, *hop);
        }
    }
}

const SegmentIndex::Sweep& SegmentIndex::fwd(StateId r) const
{
    auto& slot = const_cast<SegmentIndex*>(this)->fwd_[r];
    if (!slot)
        slot = std::make_unique<Sweep>(sys_, true, mode_ == VisitMode::accepting, r, max_m_, avoid_, visit_);
    return *slot;
}

const SegmentIndex::Sweep& SegmentIndex::bwd(StateId t) const
{
    auto& slot = const_cast<SegmentIndex*>(this)->bwd_[t];
    if (!slot)
        slot = std::make_unique<Sweep>(sys_, false, mode_ == VisitMode::accepting, t, max_m_, avoid_, visit_);
    return *slot;
}

std::optional<SegmentIndex::SpliceResult> SegmentIndex::best_splice(StateId r, StateId q, StateId t,
                                                                    std::uint64_t m, bool require_visit) const
{
    if (mode_ == VisitMode::all_states)
        require_visit = false;
    const Sweep& F = fwd(r);
    const Sweep& B = bwd(t);
    std::optional<SpliceResult> best;
    std::optional<std::pair<std::uint32_t, std::uint32_t>> best_ranks;
    auto consider = [&](const Int& cost, std::uint64_t split, bool ff, bool bf, bool last_hop,
                        std::uint32_t frank, std::uint32_t brank) {
        if (!best || cost < best->cost ||
            (cost == best->cost && std::make_tuple(split, frank, brank) <
                                       std::make_tuple(best->split, best_ranks->first, best_ranks->second))) {
            best = SpliceResult{cost, split, ff, bf, last_hop};
            best_ranks = std::make_pair(frank, brank);
        }
    };

    for (std::uint64_t i = 0; i <= m; ++i) {
        const std::uint64_t j = m - i;
        if (i == m) {
            if (q != t)
                continue;
            if (auto hop = F.answer(m, t, require_visit))
                consider(hop->cost, i, hop->final_flag, false, true, hop->prank, 0);
            continue;
        }
        if (i == 0 && q != r)
            continue;
        if (i > 0 && avoid_[q])
            continue; // q would be an interior reload
        for (std::uint8_t ff = 0; ff < 2; ++ff) {
            const auto& fc = F.cell(i, q, ff);
            if (!fc.cost)
                continue;
            for (std::uint8_t bf = 0; bf < 2; ++bf) {
                const auto& bc = B.cell(j, q, bf);
                if (!bc.cost)
                    continue;
                const bool visits = mode_ == VisitMode::all_states || (ff | bf) != 0;
                if (require_visit && !visits)
                    continue;
                consider(*fc.cost + *bc.cost, i, ff, bf, false, fc.rank, bc.rank);
            }
        }
    }
    return best;
}

std::optional<std::pair<FinitePath, FinitePath>> SegmentIndex::splice_paths(StateId r, StateId q, StateId t,
                                                                            std::uint64_t m,
                                                                            bool require_visit) const
{
    if (mode_ == VisitMode::all_states)
        require_visit = false;
    auto sp = best_splice(r, q, t, m, require_visit);
    if (!sp)
        return std::nullopt;
    const Sweep& F = fwd(r);
    const Sweep& B = bwd(t);
    if (sp->last_hop) {
        auto hop = F.answer(m, t, require_visit);
        FinitePath gamma = F.hop_path(m, t, *hop);
        return std::make_pair(std::move(gamma), FinitePath{t});
    }
    FinitePath gamma = F.piece(sp->split, q, sp->fwd_flag ? 1 : 0);
    FinitePath gamma_prime = B.piece(m - sp->split, q, sp->bwd_flag ? 1 : 0);
    return std::make_pair(std::move(gamma), std::move(gamma_prime));
}

void SegmentIndex::check_bounds(const Characteristic& chi) const
{
    const std::uint64_t n = sys_.size();
    if (chi.q >= n || chi.r >= n || chi.t >= n)
        throw invalid_characteristic("state out of range");
    if (!sys_.is_reload(chi.r) || !sys_.is_reload(chi.t))
        throw invalid_characteristic("characteristic endpoints must be reload states");
    if (chi.m > characteristic_m_bound(sys_))
        throw invalid_characteristic("m exceeds 5|S|^3");
    if (chi.n > n)
        throw invalid_characteristic("n exceeds |S|");
}

std::optional<CompactTuple> SegmentIndex::assemble(const Characteristic& chi, bool materialize,
                                                   SegmentLabel* out_label) const
{
    check_bounds(chi);
    if (chi.m == 0 || chi.m > max_m_)
        return std::nullopt; // no segment is a single state; m=0 realizations are never segments
    if (chi.n > 0 && avoid_[chi.q])
        return std::nullopt; // iterated cycle would put a reload inside a segment

    auto sp = best_splice(chi.r, chi.q, chi.t, chi.m, chi.b);
    if (!sp)
        return std::nullopt;
    const bool gg_visits =
        mode_ == VisitMode::all_states || sp->fwd_flag || sp->bwd_flag;

    const FinitePath* delta_path = nullptr;
    Int delta_cost = 0;
    if (chi.n > 0) {
        const auto& entry = delta_[chi.q][chi.n];
        const FinitePath* candidate = entry.plain ? &*entry.plain : nullptr;
        if (candidate && mode_ == VisitMode::accepting && !gg_visits) {
            bool delta_visits = false;
            for (StateId v : *candidate)
                delta_visits = delta_visits || visit_[v];
            if (delta_visits)
                candidate = entry.visit_free ? &*entry.visit_free : nullptr;
        }
        if (!candidate)
            return std::nullopt;
        delta_cost = total_cost(sys_, *candidate);
        if (delta_cost == 0)
            return std::nullopt; // contradicts the zero-cost-cycle-free precondition
        delta_path = candidate;
    }

    Int k = 1;
    Int total = sp->cost;
    if (chi.n > 0) {
        if (sp->cost + delta_cost > cap_)
            return std::nullopt;
        k = (cap_ - sp->cost) / delta_cost;
        total = sp->cost + k * delta_cost;
    } else if (sp->cost > cap_) {
        return std::nullopt;
    }

    if (out_label) {
        out_label->cost = total;
        out_label->length = Int(chi.m) + k * Int(chi.n);
    }
    if (!materialize)
        return CompactTuple{}; // caller only wanted the label

    auto paths = splice_paths(chi.r, chi.q, chi.t, chi.m, chi.b);
    assert(paths);
    CompactTuple tuple{std::move(paths->first), std::move(paths->second),
                       chi.n > 0 ? *delta_path : FinitePath{chi.q}, k};
    assert(tuple_matches_characteristic(sys_, chi, tuple, cap_, mode_));
    return tuple;
}

std::optional<CompactTuple> SegmentIndex::tuple(const Characteristic& chi) const
{
    return assemble(chi, true, nullptr);
}

std::optional<SegmentIndex::SegmentLabel> SegmentIndex::label(const Characteristic& chi) const
{
    SegmentLabel lbl;
    if (!assemble(chi, false, &lbl))
        return std::nullopt;
    return lbl;
}

void SegmentIndex::for_each_realizable(
    const std::vector<StateId>& sources,
    const std::function<void(const Characteristic&, const SegmentLabel&)>& fn) const
{
    const std::uint32_t n = static_cast<std::uint32_t>(sys_.size());
    for (StateId r : sources) {
        for (StateId q = 0; q < n; ++q) {
            for (StateId t : sources) {
                const std::uint64_t m_hi =
                    std::min<std::uint64_t>(max_m_, fwd(r).max_finite + bwd(t).max_finite + 1);
                for (std::uint64_t m = 1; m <= m_hi; ++m) {
                    for (std::uint32_t nn = 0; nn <= n; ++nn) {
                        for (int b = 0; b <= 1; ++b) {
                            Characteristic chi{r, q, t, m, nn, b == 1};
                            SegmentLabel lbl;
                            if (assemble(chi, false, &lbl))
                                fn(chi, lbl);
                        }
                    }
                }
            }
        }
    }
}

std::optional<FinitePath> min_path(const ConsumptionSystem& sys, StateId s1, StateId s2, std::uint64_t m,
                                   const std::vector<bool>& avoid)
{
    if (m == 0)
        return s1 == s2 ? std::optional<FinitePath>(FinitePath{s1}) : std::nullopt;
    SegmentIndex::Sweep sweep(sys, true, false, s1, m, avoid, {});
    auto hop = sweep.answer(m, s2, false);
    if (!hop)
        return std::nullopt;
    return sweep.hop_path(m, s2, *hop);
}

std::optional<FinitePath> min_path_reach(const ConsumptionSystem& sys, StateId s1, StateId s2, std::uint64_t m,
                                         const std::vector<bool>& avoid, const std::vector<bool>& reach)
{
    if (reach[s1] || reach[s2])
        return min_path(sys, s1, s2, m, avoid);
    if (m == 0)
        return std::nullopt; // the single vertex would have to be in reach
    SegmentIndex::Sweep sweep(sys, true, true, s1, m, avoid, reach);
    auto hop = sweep.answer(m, s2, true);
    if (!hop)
        return std::nullopt;
    return sweep.hop_path(m, s2, *hop);
}

std::optional<CompactTuple> compact_tuple(const ConsumptionSystem& sys, const Characteristic& chi, const Int& cap,
                                          VisitMode mode)
{
    SegmentIndex index(sys, cap, mode, chi.m);
    return index.tuple(chi);
}

std::vector<std::pair<Characteristic, CompactTuple>> enumerate_characteristics(const ConsumptionSystem& sys,
                                                                               const Int& cap, VisitMode mode)
{
    SegmentIndex index(sys, cap, mode, characteristic_m_bound(sys));
    std::vector<std::pair<Characteristic, CompactTuple>> out;
    index.for_each_realizable(sys.reload_states(), [&](const Characteristic& chi, const SegmentIndex::SegmentLabel&) {
        auto tup = index.tuple(chi);
        assert(tup);
        out.emplace_back(chi, std::move(*tup));
    });
    return out;
}

bool tuple_matches_characteristic(const ConsumptionSystem& sys, const Characteristic& chi,
                                  const CompactTuple& tuple, const Int& cap, VisitMode mode)
{
    std::vector<bool> visit(sys.size(), mode == VisitMode::all_states);
    if (mode == VisitMode::accepting)
        for (StateId f : sys.accepting_states())
            visit[f] = true;

    const auto& g = tuple.gamma;
    const auto& gp = tuple.gamma_prime;
    const auto& d = tuple.delta;
    if (g.empty() || gp.empty() || d.empty())
        return false;
    if (g.front() != chi.r || g.back() != chi.q || gp.front() != chi.q || gp.back() != chi.t)
        return false;
    if (path_length(g) + path_length(gp) != chi.m)
        return false;
    if (!is_path(sys, g) || !is_path(sys, gp))
        return false;
    if (path_length(d) != chi.n)
        return false;

    // Interiors of the assembled segment never pass a reload state. q is
    // interior unless it coincides with the segment start (empty gamma) or
    // end (n = 0 and empty gamma').
    if (sys.is_reload(chi.q)) {
        const bool q_is_start = path_length(g) == 0;
        const bool q_is_end = chi.n == 0 && path_length(gp) == 0;
        if (chi.n > 0 || !(q_is_start || q_is_end))
            return false;
    }
    for (std::size_t i = 1; i + 1 < g.size(); ++i)
        if (sys.is_reload(g[i]))
            return false;
    for (std::size_t i = 1; i + 1 < gp.size(); ++i)
        if (sys.is_reload(gp[i]))
            return false;

    bool gg_visits = false;
    for (StateId v : g)
        gg_visits = gg_visits || visit[v];
    for (StateId v : gp)
        gg_visits = gg_visits || visit[v];
    if (chi.b && !gg_visits)
        return false;

    Int total;
    if (chi.n == 0) {
        if (tuple.k != 1 || d != FinitePath{chi.q})
            return false;
        total = total_cost(sys, g) + total_cost(sys, gp);
    } else {
        if (!is_cycle(sys, d) || d.front() != chi.q)
            return false;
        for (std::size_t i = 0; i + 1 < d.size(); ++i)
            if (sys.is_reload(d[i]))
                return false;
        const Int dc = total_cost(sys, d);
        if (dc <= 0 || tuple.k < 1)
            return false;
        bool d_visits = false;
        for (StateId v : d)
            d_visits = d_visits || visit[v];
        if (d_visits && !gg_visits)
            return false;
        total = total_cost(sys, g) + total_cost(sys, gp) + tuple.k * dc;
        if (total + dc <= cap)
            return false; // k not maximal
    }
    return total <= cap;
}

} // namespace consys
