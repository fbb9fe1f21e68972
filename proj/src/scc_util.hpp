#pragma once

#include <cstdint>
#include <vector>

namespace consys::detail
{

// Iterative Tarjan. Returns component ids in reverse topological order of
// discovery (ids are arbitrary but deterministic); out[v] = component of v.
inline std::vector<std::uint32_t> scc_ids(const std::vector<std::vector<std::uint32_t>>& adj,
                                          std::uint32_t& component_count)
{
    const std::uint32_t n = static_cast<std::uint32_t>(adj.size());
    constexpr std::uint32_t undef = 0xffffffffu;
    std::vector<std::uint32_t> index(n, undef), low(n, 0), comp(n, undef);
    std::vector<bool> on_stack(n, false);
    std::vector<std::uint32_t> stack;
    std::uint32_t next_index = 0;
    component_count = 0;

    struct Frame
    {
        std::uint32_t v;
        std::uint32_t child;
    };
    std::vector<Frame> call;

    for (std::uint32_t root = 0; root < n; ++root) {
        if (index[root] != undef)
            continue;
        call.push_back({root, 0});
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.child < adj[f.v].size()) {
                std::uint32_t w = adj[f.v][f.child++];
                if (index[w] == undef) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    for (;;) {
                        std::uint32_t w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = component_count;
                        if (w == f.v)
                            break;
                    }
                    ++component_count;
                }
                std::uint32_t v = f.v;
                call.pop_back();
                if (!call.empty())
                    low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
        }
    }
    return comp;
}

} // namespace consys::detail
