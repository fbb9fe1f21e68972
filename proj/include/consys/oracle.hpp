#pragma once

#include "consys/system.hpp"

#include <cstdint>
#include <vector>

namespace consys
{

struct too_large_error : std::runtime_error
{
    explicit too_large_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr std::uint64_t default_unfolding_node_limit = 1'000'000;

// Explicit product of states with battery levels, restricted to the part
// reachable from (s, cap). An edge (v,b) -> (w,b') exists for every
// transition v -> w of cost c with c <= b, where b' = cap on entering a
// reload state and b - c otherwise. Ground truth for small instances only.
class UnfoldingGraph
{
public:
    struct Node
    {
        StateId state;
        std::int64_t battery;
    };

    UnfoldingGraph(const ConsumptionSystem& sys, StateId s, const Int& cap,
                   std::uint64_t max_nodes = default_unfolding_node_limit);

    [[nodiscard]] const ConsumptionSystem& system() const { return sys_; }
    [[nodiscard]] const std::vector<Node>& nodes() const { return nodes_; }
    [[nodiscard]] std::size_t node_count() const { return nodes_.size(); }
    [[nodiscard]] Int candidate_count() const { return candidate_count_; }
    [[nodiscard]] std::uint32_t initial() const { return 0; }
    [[nodiscard]] bool accepting(std::uint32_t node) const { return sys_.is_accepting(nodes_[node].state); }

    struct Edge
    {
        std::uint32_t dst;
        std::uint32_t transition;
    };
    [[nodiscard]] const std::vector<std::vector<Edge>>& adjacency() const { return adj_; }
    [[nodiscard]] const Int& edge_cost(const Edge& e) const { return sys_.transition(e.transition).cost; }

private:
    const ConsumptionSystem& sys_;
    std::vector<Node> nodes_;
    std::vector<std::vector<Edge>> adj_;
    Int candidate_count_;
};

[[nodiscard]] UnfoldingGraph unfold(const ConsumptionSystem& sys, StateId s, const Int& cap,
                                    std::uint64_t max_nodes = default_unfolding_node_limit);

// Minimum, over reachable strongly connected components of the unfolding
// that contain an accepting node and a cycle, of the minimum mean cycle
// inside the component; infinity when no such component exists.
[[nodiscard]] ExtendedValue oracle_value(const ConsumptionSystem& sys, StateId s, const Int& cap,
                                         std::uint64_t max_nodes = default_unfolding_node_limit);

// Minimum mean over unfolding cycles that themselves pass through an
// accepting node, restricted to means that are actually attained by a
// cycle through an accepting node (a component whose accepting nodes all
// lie off its minimum-mean cycles contributes nothing).
[[nodiscard]] ExtendedValue oracle_lasso_value(const ConsumptionSystem& sys, StateId s, const Int& cap,
                                               std::uint64_t max_nodes = default_unfolding_node_limit);

} // namespace consys
