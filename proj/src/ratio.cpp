#include "consys/ratio.hpp"

#include <algorithm>
#include <cassert>

namespace consys
{

namespace
{

Int floor_div(const Int& a, const Int& b)
{
    assert(b > 0);
    Int q = a / b;
    if (a % b != 0 && a < 0)
        --q;
    return q;
}

Int floor_rational(const Rational& r) { return floor_div(rational_num(r), rational_den(r)); }

Int ceil_rational(const Rational& r)
{
    Int f = floor_rational(r);
    if (Rational(f) != r)
        ++f;
    return f;
}

struct Weighted
{
    const RatioGraph& g;
    std::vector<Int> weight;

    Weighted(const RatioGraph& graph, const Rational& lambda) : g{graph}
    {
        const Int p = rational_num(lambda);
        const Int q = rational_den(lambda);
        weight.reserve(g.edges.size());
        for (const auto& e : g.edges)
            weight.push_back(q * e.cost - p * e.length);
    }

    // Bellman-Ford from a virtual source connected to every vertex.
    // Returns the stabilized potentials, or nullopt if a negative cycle
    // exists.
    [[nodiscard]] std::optional<std::vector<Int>> potentials() const
    {
        std::vector<Int> dist(g.vertex_count, Int(0));
        for (std::uint32_t round = 0; round < g.vertex_count; ++round) {
            bool improved = false;
            for (std::size_t i = 0; i < g.edges.size(); ++i) {
                const auto& e = g.edges[i];
                Int cand = dist[e.src] + weight[i];
                if (cand < dist[e.dst]) {
                    dist[e.dst] = std::move(cand);
                    improved = true;
                }
            }
            if (!improved)
                return dist;
        }
        // one more pass distinguishes convergence from a negative cycle
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            const auto& e = g.edges[i];
            if (dist[e.src] + weight[i] < dist[e.dst])
                return std::nullopt;
        }
        return dist;
    }
};

bool has_any_cycle(const RatioGraph& g)
{
    // Kahn's peeling: a cycle exists iff some vertex survives.
    std::vector<std::uint32_t> indeg(g.vertex_count, 0);
    for (const auto& e : g.edges)
        ++indeg[e.dst];
    std::vector<std::uint32_t> stack;
    for (std::uint32_t v = 0; v < g.vertex_count; ++v)
        if (indeg[v] == 0)
            stack.push_back(v);
    std::vector<std::vector<std::uint32_t>> out(g.vertex_count);
    for (std::uint32_t i = 0; i < g.edges.size(); ++i)
        out[g.edges[i].src].push_back(i);
    std::uint32_t removed = 0;
    while (!stack.empty()) {
        std::uint32_t v = stack.back();
        stack.pop_back();
        ++removed;
        for (std::uint32_t e : out[v])
            if (--indeg[g.edges[e].dst] == 0)
                stack.push_back(g.edges[e].dst);
    }
    return removed < g.vertex_count;
}

// A simple cycle made of tight edges (reduced weight zero), if one exists.
std::optional<std::vector<std::uint32_t>> tight_cycle(const RatioGraph& g, const std::vector<Int>& weight,
                                                      const std::vector<Int>& pot)
{
    std::vector<std::vector<std::uint32_t>> tight(g.vertex_count);
    for (std::uint32_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        if (weight[i] + pot[e.src] - pot[e.dst] == 0)
            tight[e.src].push_back(i);
    }
    enum class Color : std::uint8_t
    {
        white,
        gray,
        black
    };
    std::vector<Color> color(g.vertex_count, Color::white);
    std::vector<std::uint32_t> stack_vertex, stack_edge;
    std::vector<std::uint32_t> next(g.vertex_count, 0);
    for (std::uint32_t start = 0; start < g.vertex_count; ++start) {
        if (color[start] != Color::white)
            continue;
        stack_vertex = {start};
        color[start] = Color::gray;
        while (!stack_vertex.empty()) {
            std::uint32_t v = stack_vertex.back();
            if (next[v] == tight[v].size()) {
                color[v] = Color::black;
                stack_vertex.pop_back();
                if (!stack_edge.empty())
                    stack_edge.pop_back();
                continue;
            }
            std::uint32_t e = tight[v][next[v]++];
            std::uint32_t w = g.edges[e].dst;
            if (color[w] == Color::gray) {
                // close the cycle along the DFS stack
                std::vector<std::uint32_t> cycle{e};
                for (std::size_t i = stack_vertex.size(); i-- > 0;) {
                    if (stack_vertex[i] == w)
                        break;
                    cycle.push_back(stack_edge[i - 1]);
                }
                std::reverse(cycle.begin(), cycle.end());
                return cycle;
            }
            if (color[w] == Color::white) {
                color[w] = Color::gray;
                stack_vertex.push_back(w);
                stack_edge.push_back(e);
            }
        }
    }
    return std::nullopt;
}

} // namespace

Rational simplest_rational_between(const Rational& lo, const Rational& hi)
{
    assert(lo <= hi);
    const Int c = ceil_rational(lo);
    if (Rational(c) <= hi)
        return Rational(c);
    const Int z = floor_rational(lo);
    // both bounds live strictly inside (z, z+1)
    const Rational inner = simplest_rational_between(Rational(1) / (hi - Rational(z)), Rational(1) / (lo - Rational(z)));
    return Rational(z) + Rational(1) / inner;
}

RatioCycle min_ratio_cycle(const RatioGraph& graph)
{
    if (!has_any_cycle(graph))
        throw no_cycle_error{};
    for (const auto& e : graph.edges)
        if (e.cost < 0 || e.length < 0)
            throw std::domain_error("min_ratio_cycle requires non-negative labels");

    Int cost_sum = 1;
    Int len_sum = 1;
    for (const auto& e : graph.edges) {
        cost_sum += e.cost;
        len_sum += e.length;
    }
    const Int d2 = len_sum * len_sum;

    Rational lo(0);
    Rational hi(cost_sum); // strictly above every cycle ratio
    // invariant: no cycle ratio below lo, some cycle ratio below hi
    while ((hi - lo) * Rational(d2) >= 1) {
        Rational mid = (lo + hi) / 2;
        Weighted w(graph, mid);
        if (w.potentials())
            lo = mid;
        else
            hi = mid;
    }

    const Rational lambda = simplest_rational_between(lo, hi);
    Weighted w(graph, lambda);
    auto pot = w.potentials();
    assert(pot); // lambda equals the optimum, so no strictly negative cycle
    auto cycle = tight_cycle(graph, w.weight, *pot);
    assert(cycle); // and some cycle is tight at the optimum
    Int clen = 0;
    for (std::uint32_t e : *cycle)
        clen += graph.edges[e].length;
    if (clen <= 0)
        throw std::domain_error("cycle with non-positive total length");
    return RatioCycle{std::move(*cycle), lambda};
}

} // namespace consys
