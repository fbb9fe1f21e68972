#pragma once

#include "consys/synthesis.hpp"
#include "consys/system.hpp"

#include <string>
#include <vector>

namespace consys
{

struct parse_error : std::runtime_error
{
    parse_error(int line_in, const std::string& msg)
        : std::runtime_error("parse error (line " + std::to_string(line_in) + "): " + msg), line{line_in}
    {
    }
    int line;
};

// Canonical textual system format: a JSON document with name, states,
// transitions as [src, dst, cost], reload and accepting as name lists.
// Costs beyond 2^53-1 are written as decimal strings and accepted either
// way. Throws parse_error on malformed input and validation_failed when
// the parsed system violates an invariant.
[[nodiscard]] ConsumptionSystem parse_system(const std::string& text);
[[nodiscard]] std::string serialize_system(const ConsumptionSystem& sys, const std::string& name = "");

// Nondeterministic Buchi automaton over an alphabet of base-graph state
// names.
struct BuchiAutomaton
{
    std::vector<std::string> states;
    std::vector<std::string> alphabet;
    struct Transition
    {
        std::uint32_t src;
        std::uint32_t letter; // index into alphabet
        std::uint32_t dst;
    };
    std::vector<Transition> transitions;
    std::vector<std::uint32_t> accepting;
    std::uint32_t initial = 0;
};

[[nodiscard]] BuchiAutomaton parse_buchi(const std::string& text);

struct alphabet_mismatch : std::runtime_error
{
    explicit alphabet_mismatch(const std::string& what) : std::runtime_error(what) {}
};

struct ProductResult
{
    ConsumptionSystem system;
    bool sink_added = false;
    // product states are named "<state>|<automaton state>"
};

// Synchronized product: state (s, q) means the automaton reached q after
// reading the run up to and including s. Costs are copied from the base
// system, reload states are those with a reload base component, accepting
// states those with an accepting automaton component. A rejecting sink is
// added only when some product state would otherwise have no successor.
[[nodiscard]] ProductResult product(const ConsumptionSystem& sys, const BuchiAutomaton& buchi);

// Product states matching an initial base state s: (s, q) for every q the
// automaton can reach from its initial state by reading s.
[[nodiscard]] std::vector<StateId> product_initial_states(const ProductResult& prod, const ConsumptionSystem& sys,
                                                          const BuchiAutomaton& buchi, StateId s);

// GraphViz export: reload states double-circled, accepting states filled.
[[nodiscard]] std::string export_dot(const ConsumptionSystem& sys, const std::string& name = "consumption_system");

// Controller document: value, kind, and the controller tables / advancing
// paths, all state references by name.
[[nodiscard]] std::string serialize_result(const ConsumptionSystem& sys, const SynthesisResult& result);
[[nodiscard]] SynthesisResult parse_result(const ConsumptionSystem& sys, const std::string& text);

} // namespace consys
