#include "consys/limits.hpp"

#include "consys/reach.hpp"
#include "scc_util.hpp"

#include <algorithm>
#include <cassert>
#include <deque>

namespace consys
{

namespace
{

std::vector<bool> reachable_from(const ConsumptionSystem& sys, StateId s)
{
    std::vector<bool> seen(sys.size(), false);
    std::deque<StateId> queue{s};
    seen[s] = true;
    while (!queue.empty()) {
        StateId v = queue.front();
        queue.pop_front();
        for (std::uint32_t e : sys.out(v)) {
            StateId w = sys.transition(e).dst;
            if (!seen[w]) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    return seen;
}

std::vector<std::uint32_t> system_scc(const ConsumptionSystem& sys, std::uint32_t& count)
{
    std::vector<std::vector<std::uint32_t>> adj(sys.size());
    for (StateId v = 0; v < sys.size(); ++v)
        for (std::uint32_t e : sys.out(v))
            adj[v].push_back(sys.transition(e).dst);
    return detail::scc_ids(adj, count);
}

// Minimum-mean cycle inside one strongly connected component, with a
// witness of length <= |component|: Karp for the value, then a cycle in
// the subgraph of edges that are tight after reweighting.
std::optional<std::pair<FinitePath, Rational>> min_mean_cycle_in_component(const ConsumptionSystem& sys,
                                                                           const std::vector<StateId>& nodes)
{
    const std::size_t n = nodes.size();
    std::vector<std::int64_t> local(sys.size(), -1);
    for (std::size_t i = 0; i < n; ++i)
        local[nodes[i]] = static_cast<std::int64_t>(i);
    struct E
    {
        std::uint32_t src, dst;
        const Int* cost;
    };
    std::vector<E> edges;
    for (StateId v : nodes)
        for (std::uint32_t e : sys.out(v)) {
            const auto& tr = sys.transition(e);
            if (local[tr.dst] >= 0)
                edges.push_back({static_cast<std::uint32_t>(local[v]),
                                 static_cast<std::uint32_t>(local[tr.dst]), &tr.cost});
        }
    if (edges.empty())
        return std::nullopt;

    // Karp over the component
    std::vector<std::optional<Int>> cur(n), next(n), dn(n);
    auto sweep = [&](const auto& per_level) {
        for (auto& x : cur)
            x.reset();
        cur[0] = 0;
        per_level(std::size_t{0}, cur);
        for (std::size_t k = 1; k <= n; ++k) {
            for (auto& x : next)
                x.reset();
            for (const auto& e : edges) {
                if (!cur[e.src])
                    continue;
                Int cand = *cur[e.src] + *e.cost;
                if (!next[e.dst] || cand < *next[e.dst])
                    next[e.dst] = std::move(cand);
            }
            std::swap(cur, next);
            per_level(k, cur);
        }
    };
    sweep([&](std::size_t k, const std::vector<std::optional<Int>>& row) {
        if (k == n)
            dn = row;
    });
    std::vector<std::optional<Rational>> worst(n);
    sweep([&](std::size_t k, const std::vector<std::optional<Int>>& row) {
        if (k == n)
            return;
        for (std::size_t v = 0; v < n; ++v) {
            if (!dn[v] || !row[v])
                continue;
            Rational ratio(*dn[v] - *row[v], Int(n - k));
            if (!worst[v] || ratio > *worst[v])
                worst[v] = std::move(ratio);
        }
    });
    std::optional<Rational> mean;
    for (std::size_t v = 0; v < n; ++v)
        if (dn[v] && worst[v] && (!mean || *worst[v] < *mean))
            mean = worst[v];
    if (!mean)
        return std::nullopt;

    // extract a tight simple cycle
    const Int p = rational_num(*mean);
    const Int q = rational_den(*mean);
    std::vector<Int> weight;
    weight.reserve(edges.size());
    for (const auto& e : edges)
        weight.push_back(q * *e.cost - p);
    std::vector<Int> dist(n, Int(0));
    for (std::size_t round = 0; round + 1 < n; ++round) {
        bool improved = false;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            Int cand = dist[edges[i].src] + weight[i];
            if (cand < dist[edges[i].dst]) {
                dist[edges[i].dst] = std::move(cand);
                improved = true;
            }
        }
        if (!improved)
            break;
    }
    std::vector<std::vector<std::uint32_t>> tight(n);
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (weight[i] + dist[edges[i].src] - dist[edges[i].dst] == 0)
            tight[edges[i].src].push_back(edges[i].dst);
    for (auto& t : tight)
        std::sort(t.begin(), t.end());

    enum class Color : std::uint8_t
    {
        white,
        gray,
        black
    };
    std::vector<Color> color(n, Color::white);
    std::vector<std::uint32_t> stack, nexti(n, 0);
    for (std::uint32_t start = 0; start < n; ++start) {
        if (color[start] != Color::white)
            continue;
        stack = {start};
        color[start] = Color::gray;
        while (!stack.empty()) {
            std::uint32_t v = stack.back();
            if (nexti[v] == tight[v].size()) {
                color[v] = Color::black;
                stack.pop_back();
                continue;
            }
            std::uint32_t w = tight[v][nexti[v]++];
            if (color[w] == Color::gray) {
                FinitePath cycle;
                auto it = std::find(stack.begin(), stack.end(), w);
                for (; it != stack.end(); ++it)
                    cycle.push_back(nodes[*it]);
                cycle.push_back(nodes[w]);
                return std::make_pair(std::move(cycle), *mean);
            }
            if (color[w] == Color::white) {
                color[w] = Color::gray;
                stack.push_back(w);
            }
        }
    }
    return std::nullopt; // unreachable: a tight cycle exists at the optimum
}

struct SccInfo
{
    std::vector<std::uint32_t> ids;
    std::uint32_t count = 0;
    std::vector<bool> has_reload, has_accepting, reachable;
    std::vector<std::vector<StateId>> members;
};

SccInfo component_info(const ConsumptionSystem& sys, StateId s)
{
    SccInfo info;
    info.ids = system_scc(sys, info.count);
    info.has_reload.assign(info.count, false);
    info.has_accepting.assign(info.count, false);
    info.reachable.assign(info.count, false);
    info.members.assign(info.count, {});
    auto reach = reachable_from(sys, s);
    for (StateId v = 0; v < sys.size(); ++v) {
        info.members[info.ids[v]].push_back(v);
        if (sys.is_reload(v))
            info.has_reload[info.ids[v]] = true;
        if (sys.is_accepting(v))
            info.has_accepting[info.ids[v]] = true;
        if (reach[v])
            info.reachable[info.ids[v]] = true;
    }
    return info;
}

// Cheapest closed walk at r of each exact length 1..|S| inside one
// component; returns the walk minimizing mean cost.
std::optional<std::pair<FinitePath, Rational>> best_reload_walk(const ConsumptionSystem& sys,
                                                                const std::vector<StateId>& nodes, StateId r)
{
    const std::size_t max_len = sys.size();
    std::vector<bool> inside(sys.size(), false);
    for (StateId v : nodes)
        inside[v] = true;
    std::vector<std::vector<std::optional<Int>>> dist(max_len + 1,
                                                      std::vector<std::optional<Int>>(sys.size()));
    std::vector<std::vector<std::int64_t>> parent(max_len + 1, std::vector<std::int64_t>(sys.size(), -1));
    dist[0][r] = 0;
    std::optional<std::pair<Rational, std::size_t>> best;
    for (std::size_t k = 1; k <= max_len; ++k) {
        for (StateId v = 0; v < sys.size(); ++v) {
            if (!inside[v] || !dist[k - 1][v])
                continue;
            for (std::uint32_t e : sys.out(v)) {
                const auto& tr = sys.transition(e);
                if (!inside[tr.dst])
                    continue;
                Int cand = *dist[k - 1][v] + tr.cost;
                if (!dist[k][tr.dst] || cand < *dist[k][tr.dst]) {
                    dist[k][tr.dst] = std::move(cand);
                    parent[k][tr.dst] = static_cast<std::int64_t>(e);
                }
            }
        }
        if (dist[k][r]) {
            Rational mean(*dist[k][r], Int(k));
            if (!best || mean < best->first)
                best = std::make_pair(std::move(mean), k);
        }
    }
    if (!best)
        return std::nullopt;
    FinitePath walk{r};
    StateId v = r;
    for (std::size_t k = best->second; k > 0; --k) {
        const auto& tr = sys.transition(static_cast<std::uint32_t>(parent[k][v]));
        v = tr.src;
        walk.push_back(v);
    }
    std::reverse(walk.begin(), walk.end());
    return std::make_pair(std::move(walk), best->first);
}

} // namespace

bool is_safe_cycle(const ConsumptionSystem& sys, StateId s, const FinitePath& cycle)
{
    if (!is_cycle(sys, cycle) || path_length(cycle) > sys.size())
        return false;
    if (!reachable_from(sys, s)[cycle.front()])
        return false;
    bool accepting = false;
    for (StateId v : cycle)
        accepting = accepting || sys.is_accepting(v);
    if (total_cost(sys, cycle) == 0 && accepting)
        return true;
    std::uint32_t count = 0;
    auto ids = system_scc(sys, count);
    bool rel = false, acc = false;
    for (StateId v = 0; v < sys.size(); ++v) {
        if (ids[v] != ids[cycle.front()])
            continue;
        rel = rel || sys.is_reload(v);
        acc = acc || sys.is_accepting(v);
    }
    return rel && acc;
}

bool is_strongly_safe_cycle(const ConsumptionSystem& sys, StateId s, const FinitePath& cycle)
{
    if (!is_cycle(sys, cycle) || path_length(cycle) > sys.size())
        return false;
    if (!reachable_from(sys, s)[cycle.front()])
        return false;
    bool on_accepting = false, on_reload = false;
    for (StateId v : cycle) {
        on_accepting = on_accepting || sys.is_accepting(v);
        on_reload = on_reload || sys.is_reload(v);
    }
    const bool zero = total_cost(sys, cycle) == 0;
    if (zero && on_accepting)
        return true;
    std::uint32_t count = 0;
    auto ids = system_scc(sys, count);
    bool rel = false, acc = false;
    for (StateId v = 0; v < sys.size(); ++v) {
        if (ids[v] != ids[cycle.front()])
            continue;
        rel = rel || sys.is_reload(v);
        acc = acc || sys.is_accepting(v);
    }
    if (zero && rel && acc)
        return true;
    return on_reload && acc;
}

std::optional<std::pair<FinitePath, Rational>> min_safe_cycle(const ConsumptionSystem& sys, StateId s)
{
    require_valid(sys);
    const auto reach = reachable_from(sys, s);
    for (StateId f : sys.accepting_states()) {
        if (!reach[f])
            continue;
        if (auto zc = zero_cost_cycle_through(sys, f, nullptr)) {
            assert(is_safe_cycle(sys, s, *zc));
            return std::make_pair(std::move(*zc), Rational(0));
        }
    }
    auto info = component_info(sys, s);
    std::optional<std::pair<FinitePath, Rational>> best;
    for (std::uint32_t c = 0; c < info.count; ++c) {
        if (!info.reachable[c] || !info.has_reload[c] || !info.has_accepting[c])
            continue;
        auto cand = min_mean_cycle_in_component(sys, info.members[c]);
        if (cand && (!best || cand->second < best->second))
            best = std::move(cand);
    }
    if (best)
        assert(is_safe_cycle(sys, s, best->first));
    return best;
}

std::optional<std::pair<FinitePath, Rational>> min_strongly_safe_cycle(const ConsumptionSystem& sys, StateId s)
{
    require_valid(sys);
    const auto reach = reachable_from(sys, s);
    for (StateId f : sys.accepting_states()) {
        if (!reach[f])
            continue;
        if (auto zc = zero_cost_cycle_through(sys, f, nullptr)) {
            assert(is_strongly_safe_cycle(sys, s, *zc));
            return std::make_pair(std::move(*zc), Rational(0));
        }
    }
    auto info = component_info(sys, s);
    for (std::uint32_t c = 0; c < info.count; ++c) {
        if (!info.reachable[c] || !info.has_reload[c] || !info.has_accepting[c])
            continue;
        for (StateId q : info.members[c]) {
            if (auto zc = zero_cost_cycle_through(sys, q, nullptr)) {
                assert(is_strongly_safe_cycle(sys, s, *zc));
                return std::make_pair(std::move(*zc), Rational(0));
            }
        }
    }
    std::optional<std::pair<FinitePath, Rational>> best;
    for (std::uint32_t c = 0; c < info.count; ++c) {
        if (!info.reachable[c] || !info.has_reload[c] || !info.has_accepting[c])
            continue;
        for (StateId r : info.members[c]) {
            if (!sys.is_reload(r))
                continue;
            auto cand = best_reload_walk(sys, info.members[c], r);
            if (cand && (!best || cand->second < best->second))
                best = std::move(cand);
        }
    }
    if (best)
        assert(is_strongly_safe_cycle(sys, s, best->first));
    return best;
}

ExtendedValue limit_value(const ConsumptionSystem& sys, StateId s)
{
    auto safe = min_safe_cycle(sys, s);
    return safe ? ExtendedValue::finite(safe->second) : ExtendedValue::infinity();
}

LimitReport limit_report(const ConsumptionSystem& sys, StateId s)
{
    LimitReport report;
    report.limit = limit_value(sys, s);
    const Int bound3 = Int(3) * Int(sys.size()) * sys.max_cost();
    const Int bound4 = Int(4) * Int(sys.size()) * sys.max_cost();
    report.rate_numerator = bound3;
    report.rate_offset = bound4;
    if (report.limit.is_infinite()) {
        report.achievable = true; // vacuously: the limit holds at every capacity
        report.achieving_cap = bound3;
        return report;
    }
    auto strong = min_strongly_safe_cycle(sys, s);
    report.achievable = strong && strong->second == report.limit.value();
    if (report.achievable)
        report.achieving_cap = bound3;
    return report;
}

} // namespace consys
