#include "consys/oracle.hpp"

#include "scc_util.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <unordered_map>

namespace consys
{

UnfoldingGraph::UnfoldingGraph(const ConsumptionSystem& sys, StateId s, const Int& cap, std::uint64_t max_nodes)
    : sys_{sys}
{
    if (cap < 0)
        throw std::invalid_argument("negative capacity");
    candidate_count_ = Int(sys.size()) * (cap + 1);
    if (candidate_count_ > max_nodes)
        throw too_large_error("unfolding would need " + candidate_count_.str() + " nodes (limit " +
                              std::to_string(max_nodes) + ")");
    const std::int64_t cap64 = static_cast<std::int64_t>(cap.convert_to<long long>());

    std::unordered_map<std::uint64_t, std::uint32_t> ids;
    auto key = [&](StateId v, std::int64_t b) {
        return static_cast<std::uint64_t>(v) * static_cast<std::uint64_t>(cap64 + 1) +
               static_cast<std::uint64_t>(b);
    };
    auto intern = [&](StateId v, std::int64_t b) {
        auto [it, fresh] = ids.emplace(key(v, b), static_cast<std::uint32_t>(nodes_.size()));
        if (fresh) {
            nodes_.push_back({v, b});
            adj_.emplace_back();
        }
        return it->second;
    };

    std::deque<std::uint32_t> queue{intern(s, cap64)};
    std::vector<bool> expanded;
    while (!queue.empty()) {
        const std::uint32_t id = queue.front();
        queue.pop_front();
        if (id < expanded.size() && expanded[id])
            continue;
        if (id >= expanded.size())
            expanded.resize(nodes_.size(), false);
        if (expanded[id])
            continue;
        expanded[id] = true;
        const Node node = nodes_[id];
        for (std::uint32_t e : sys.out(node.state)) {
            const auto& tr = sys.transition(e);
            if (tr.cost > node.battery)
                continue;
            const std::int64_t c = static_cast<std::int64_t>(tr.cost.convert_to<long long>());
            const std::int64_t next_b = sys.is_reload(tr.dst) ? cap64 : node.battery - c;
            const std::uint32_t next_id = intern(tr.dst, next_b);
            if (next_id >= expanded.size())
                expanded.resize(nodes_.size(), false);
            adj_[id].push_back({next_id, e});
            if (!expanded[next_id])
                queue.push_back(next_id);
        }
    }
}

UnfoldingGraph unfold(const ConsumptionSystem& sys, StateId s, const Int& cap, std::uint64_t max_nodes)
{
    return UnfoldingGraph(sys, s, cap, max_nodes);
}

namespace
{

struct LocalEdge
{
    std::uint32_t src;
    std::uint32_t dst;
    const Int* cost;
};

struct Component
{
    std::vector<std::uint32_t> nodes;  // global node ids
    std::vector<LocalEdge> edges;      // local indices
    bool has_accepting = false;
};

std::vector<Component> reachable_components(const UnfoldingGraph& g)
{
    std::vector<std::vector<std::uint32_t>> adj(g.node_count());
    for (std::uint32_t v = 0; v < g.node_count(); ++v)
        for (const auto& e : g.adjacency()[v])
            adj[v].push_back(e.dst);
    std::uint32_t count = 0;
    auto comp = detail::scc_ids(adj, count);

    std::vector<Component> comps(count);
    std::vector<std::uint32_t> local(g.node_count());
    for (std::uint32_t v = 0; v < g.node_count(); ++v) {
        local[v] = static_cast<std::uint32_t>(comps[comp[v]].nodes.size());
        comps[comp[v]].nodes.push_back(v);
        if (g.accepting(v))
            comps[comp[v]].has_accepting = true;
    }
    for (std::uint32_t v = 0; v < g.node_count(); ++v)
        for (const auto& e : g.adjacency()[v])
            if (comp[e.dst] == comp[v])
                comps[comp[v]].edges.push_back({local[v], local[e.dst], &g.edge_cost(e)});
    return comps;
}

// Karp: lambda* = min_v max_k (D_n(v) - D_k(v)) / (n - k) over finite
// entries, with D_k the cheapest k-edge walk from a fixed source. Memory
// stays linear: one pass pins D_n, a second pass replays D_k.
std::optional<Rational> min_mean_cycle_value(const Component& c)
{
    const std::size_t n = c.nodes.size();
    if (c.edges.empty())
        return std::nullopt;
    std::vector<std::optional<Int>> cur(n), next(n);

    auto sweep = [&](const auto& per_level) {
        for (auto& x : cur)
            x.reset();
        cur[0] = 0;
        per_level(0, cur);
        for (std::size_t k = 1; k <= n; ++k) {
            for (auto& x : next)
                x.reset();
            for (const auto& e : c.edges) {
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

    std::vector<std::optional<Int>> dn(n);
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

    std::optional<Rational> best;
    for (std::size_t v = 0; v < n; ++v)
        if (dn[v] && worst[v] && (!best || *worst[v] < *best))
            best = worst[v];
    return best;
}

// Whether some accepting node of the component lies on a cycle of mean
// exactly `mean`: reweight, take Bellman-Ford potentials, and look for the
// node inside a nontrivial strongly connected piece of the tight subgraph.
bool mean_attained_at_accepting(const UnfoldingGraph& g, const Component& c, const Rational& mean)
{
    const Int p = rational_num(mean);
    const Int q = rational_den(mean);
    const std::size_t n = c.nodes.size();
    std::vector<Int> weight;
    weight.reserve(c.edges.size());
    for (const auto& e : c.edges)
        weight.push_back(q * *e.cost - p);

    std::vector<Int> dist(n, Int(0));
    for (std::size_t round = 0; round + 1 < n; ++round) {
        bool improved = false;
        for (std::size_t i = 0; i < c.edges.size(); ++i) {
            Int cand = dist[c.edges[i].src] + weight[i];
            if (cand < dist[c.edges[i].dst]) {
                dist[c.edges[i].dst] = std::move(cand);
                improved = true;
            }
        }
        if (!improved)
            break;
    }

    std::vector<std::vector<std::uint32_t>> tight(n);
    std::vector<bool> has_tight_self(n, false);
    for (std::size_t i = 0; i < c.edges.size(); ++i) {
        const auto& e = c.edges[i];
        if (weight[i] + dist[e.src] - dist[e.dst] != 0)
            continue;
        tight[e.src].push_back(e.dst);
        if (e.src == e.dst)
            has_tight_self[e.src] = true;
    }
    std::uint32_t count = 0;
    auto comp = detail::scc_ids(tight, count);
    std::vector<std::uint32_t> size(count, 0);
    for (std::size_t v = 0; v < n; ++v)
        ++size[comp[v]];
    for (std::size_t v = 0; v < n; ++v) {
        if (!g.accepting(c.nodes[v]))
            continue;
        if (size[comp[v]] > 1 || has_tight_self[v])
            return true;
    }
    return false;
}

} // namespace

ExtendedValue oracle_value(const ConsumptionSystem& sys, StateId s, const Int& cap, std::uint64_t max_nodes)
{
    UnfoldingGraph g(sys, s, cap, max_nodes);
    std::optional<Rational> best;
    for (const auto& c : reachable_components(g)) {
        if (!c.has_accepting)
            continue;
        auto mean = min_mean_cycle_value(c);
        if (mean && (!best || *mean < *best))
            best = mean;
    }
    return best ? ExtendedValue::finite(*best) : ExtendedValue::infinity();
}

ExtendedValue oracle_lasso_value(const ConsumptionSystem& sys, StateId s, const Int& cap, std::uint64_t max_nodes)
{
    UnfoldingGraph g(sys, s, cap, max_nodes);
    std::optional<Rational> best;
    for (const auto& c : reachable_components(g)) {
        if (!c.has_accepting)
            continue;
        auto mean = min_mean_cycle_value(c);
        if (!mean)
            continue;
        if (!mean_attained_at_accepting(g, c, *mean))
            continue;
        if (!best || *mean < *best)
            best = mean;
    }
    return best ? ExtendedValue::finite(*best) : ExtendedValue::infinity();
}

} // namespace consys
