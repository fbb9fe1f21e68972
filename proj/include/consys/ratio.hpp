#pragma once

#include "consys/numbers.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace consys
{

// Doubly-labelled graph for minimum cycle ratio queries. Costs are
// non-negative; every cycle must have positive total length (individual
// edges may carry length 0).
struct RatioEdge
{
    std::uint32_t src;
    std::uint32_t dst;
    Int cost;
    Int length;
};

struct RatioGraph
{
    std::uint32_t vertex_count = 0;
    std::vector<RatioEdge> edges;
};

struct no_cycle_error : std::runtime_error
{
    no_cycle_error() : std::runtime_error("graph contains no cycle") {}
};

struct RatioCycle
{
    std::vector<std::uint32_t> edges; // edge ids, in traversal order, forming a simple cycle
    Rational ratio;
};

// A simple cycle minimizing total cost / total length, with the exact
// rational optimum. The optimum is located by parametric search: a guess
// lambda = p/q is tested by Bellman-Ford negative-cycle detection on
// integer weights q*cost - p*length, the bisection interval is narrowed
// below 1/D^2 (D bounds any simple cycle's total length), and the optimum
// is pinned as the unique simplest rational in the interval. Throws
// no_cycle_error on acyclic graphs.
[[nodiscard]] RatioCycle min_ratio_cycle(const RatioGraph& graph);

// Minimal-denominator (then minimal-numerator) rational in [lo, hi].
[[nodiscard]] Rational simplest_rational_between(const Rational& lo, const Rational& hi);

} // namespace consys
