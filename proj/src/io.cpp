#include "consys/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace consys
{

namespace
{

using nlohmann::json;

int line_of_offset(const std::string& text, std::size_t offset)
{
    int line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i)
        if (text[i] == '\n')
            ++line;
    return line;
}

json parse_json(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw parse_error(line_of_offset(text, e.byte), e.what());
    }
}

Int cost_from_json(const json& j)
{
    if (j.is_number_unsigned())
        return Int(j.get<std::uint64_t>());
    if (j.is_number_integer())
        return Int(j.get<std::int64_t>());
    if (j.is_string()) {
        auto v = parse_int(j.get<std::string>());
        if (!v)
            throw parse_error(0, "not an integer: '" + j.get<std::string>() + "'");
        return *v;
    }
    throw parse_error(0, "cost must be an integer or a decimal string");
}

json cost_to_json(const Int& v)
{
    static const Int json_safe = (Int(1) << 53) - 1;
    if (v >= 0 && v <= json_safe)
        return json(v.convert_to<std::uint64_t>());
    return json(v.str());
}

StateId state_by_name(const std::vector<std::string>& names, const std::string& name)
{
    for (StateId i = 0; i < names.size(); ++i)
        if (names[i] == name)
            return i;
    throw parse_error(0, "unknown state name: '" + name + "'");
}

const json& field(const json& j, const char* key)
{
    auto it = j.find(key);
    if (it == j.end())
        throw parse_error(0, std::string("missing field '") + key + "'");
    return *it;
}

} // namespace

ConsumptionSystem parse_system(const std::string& text)
{
    const json j = parse_json(text);
    if (!j.is_object())
        throw parse_error(0, "expected a JSON object");

    std::vector<std::string> names;
    for (const auto& s : field(j, "states")) {
        if (!s.is_string())
            throw parse_error(0, "state names must be strings");
        names.push_back(s.get<std::string>());
    }
    if (names.empty())
        throw parse_error(0, "no states");
    std::set<std::string> unique(names.begin(), names.end());
    if (unique.size() != names.size())
        throw parse_error(0, "duplicate state name");

    std::vector<Transition> transitions;
    for (const auto& t : field(j, "transitions")) {
        if (!t.is_array() || t.size() != 3)
            throw parse_error(0, "transitions must be [src, dst, cost] triples");
        if (!t[0].is_string() || !t[1].is_string())
            throw parse_error(0, "transition endpoints must be state names");
        transitions.push_back({state_by_name(names, t[0].get<std::string>()),
                               state_by_name(names, t[1].get<std::string>()), cost_from_json(t[2])});
    }
    std::vector<StateId> reload, accepting;
    for (const auto& r : field(j, "reload"))
        reload.push_back(state_by_name(names, r.get<std::string>()));
    for (const auto& f : field(j, "accepting"))
        accepting.push_back(state_by_name(names, f.get<std::string>()));

    ConsumptionSystem sys(std::move(names), std::move(transitions), std::move(reload), std::move(accepting));
    require_valid(sys);
    return sys;
}

std::string serialize_system(const ConsumptionSystem& sys, const std::string& name)
{
    json j;
    j["format"] = 1;
    j["name"] = name;
    j["states"] = sys.names();
    json trans = json::array();
    for (const auto& t : sys.transitions())
        trans.push_back(json::array({sys.name(t.src), sys.name(t.dst), cost_to_json(t.cost)}));
    j["transitions"] = std::move(trans);
    json reload = json::array();
    for (StateId r : sys.reload_states())
        reload.push_back(sys.name(r));
    j["reload"] = std::move(reload);
    json accepting = json::array();
    for (StateId f : sys.accepting_states())
        accepting.push_back(sys.name(f));
    j["accepting"] = std::move(accepting);
    return j.dump(2) + "\n";
}

BuchiAutomaton parse_buchi(const std::string& text)
{
    const json j = parse_json(text);
    BuchiAutomaton aut;
    for (const auto& s : field(j, "states"))
        aut.states.push_back(s.get<std::string>());
    for (const auto& a : field(j, "alphabet"))
        aut.alphabet.push_back(a.get<std::string>());
    for (const auto& t : field(j, "transitions")) {
        if (!t.is_array() || t.size() != 3)
            throw parse_error(0, "automaton transitions must be [src, letter, dst] triples");
        aut.transitions.push_back({state_by_name(aut.states, t[0].get<std::string>()),
                                   state_by_name(aut.alphabet, t[1].get<std::string>()),
                                   state_by_name(aut.states, t[2].get<std::string>())});
    }
    for (const auto& f : field(j, "accepting"))
        aut.accepting.push_back(state_by_name(aut.states, f.get<std::string>()));
    aut.initial = state_by_name(aut.states, field(j, "initial").get<std::string>());
    return aut;
}

ProductResult product(const ConsumptionSystem& sys, const BuchiAutomaton& buchi)
{
    std::set<std::string> sys_names(sys.names().begin(), sys.names().end());
    std::set<std::string> alphabet(buchi.alphabet.begin(), buchi.alphabet.end());
    if (sys_names != alphabet)
        throw alphabet_mismatch("automaton alphabet differs from the system's state names");

    // letter index -> base state id
    std::vector<StateId> letter_state(buchi.alphabet.size());
    for (std::uint32_t l = 0; l < buchi.alphabet.size(); ++l)
        letter_state[l] = *sys.find_state(buchi.alphabet[l]);
    // delta[q][base state] -> successor automaton states
    std::vector<std::vector<std::vector<std::uint32_t>>> delta(
        buchi.states.size(), std::vector<std::vector<std::uint32_t>>(sys.size()));
    for (const auto& t : buchi.transitions)
        delta[t.src][letter_state[t.letter]].push_back(t.dst);

    const std::size_t nq = buchi.states.size();
    auto pid = [&](StateId v, std::uint32_t q) { return static_cast<StateId>(v * nq + q); };
    std::vector<std::string> names;
    names.reserve(sys.size() * nq);
    for (StateId v = 0; v < sys.size(); ++v)
        for (std::uint32_t q = 0; q < nq; ++q)
            names.push_back(sys.name(v) + "|" + buchi.states[q]);

    std::vector<Transition> transitions;
    std::vector<bool> total(sys.size() * nq, false);
    for (StateId v = 0; v < sys.size(); ++v) {
        for (std::uint32_t q = 0; q < nq; ++q) {
            for (std::uint32_t e : sys.out(v)) {
                const auto& tr = sys.transition(e);
                for (std::uint32_t q2 : delta[q][tr.dst]) {
                    transitions.push_back({pid(v, q), pid(tr.dst, q2), tr.cost});
                    total[pid(v, q)] = true;
                }
            }
        }
    }

    bool sink_added = false;
    if (std::find(total.begin(), total.end(), false) != total.end()) {
        sink_added = true;
        std::string sink_name = "@sink";
        while (std::find(names.begin(), names.end(), sink_name) != names.end())
            sink_name += "_";
        const StateId sink = static_cast<StateId>(names.size());
        names.push_back(sink_name);
        for (StateId v = 0; v < total.size(); ++v)
            if (!total[v])
                transitions.push_back({v, sink, Int(0)});
        transitions.push_back({sink, sink, Int(0)});
    }

    std::vector<StateId> reload, accepting;
    std::vector<bool> buchi_accepting(nq, false);
    for (std::uint32_t f : buchi.accepting)
        buchi_accepting[f] = true;
    for (StateId v = 0; v < sys.size(); ++v) {
        for (std::uint32_t q = 0; q < nq; ++q) {
            if (sys.is_reload(v))
                reload.push_back(pid(v, q));
            if (buchi_accepting[q])
                accepting.push_back(pid(v, q));
        }
    }
    ConsumptionSystem prod(std::move(names), std::move(transitions), std::move(reload), std::move(accepting));
    return ProductResult{std::move(prod), sink_added};
}

std::vector<StateId> product_initial_states(const ProductResult& prod, const ConsumptionSystem& sys,
                                            const BuchiAutomaton& buchi, StateId s)
{
    std::vector<StateId> out;
    for (const auto& t : buchi.transitions) {
        if (t.src != buchi.initial)
            continue;
        if (buchi.alphabet[t.letter] != sys.name(s))
            continue;
        auto id = prod.system.find_state(sys.name(s) + "|" + buchi.states[t.dst]);
        if (id)
            out.push_back(*id);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace
{

std::string dot_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

} // namespace

std::string export_dot(const ConsumptionSystem& sys, const std::string& name)
{
    std::ostringstream os;
    os << "digraph \"" << dot_escape(name) << "\" {\n";
    os << "  rankdir=LR;\n";
    os << "  node [shape=circle];\n";
    for (StateId v = 0; v < sys.size(); ++v) {
        os << "  \"" << dot_escape(sys.name(v)) << "\" [";
        os << "peripheries=" << (sys.is_reload(v) ? 2 : 1);
        if (sys.is_accepting(v))
            os << ", style=filled, fillcolor=lightgrey";
        os << "];\n";
    }
    for (const auto& t : sys.transitions())
        os << "  \"" << dot_escape(sys.name(t.src)) << "\" -> \"" << dot_escape(sys.name(t.dst))
           << "\" [label=\"" << t.cost.str() << "\"];\n";
    os << "}\n";
    return os.str();
}

namespace
{

json action_to_json(const CounterAction& act)
{
    switch (act.kind) {
    case CounterActionKind::noc:
        return json{{"op", "noc"}};
    case CounterActionKind::dec:
        return json{{"op", "dec"}};
    case CounterActionKind::reset:
        return json{{"op", "reset"}, {"n", act.amount.str()}};
    }
    return {};
}

CounterAction action_from_json(const json& j)
{
    const std::string op = field(j, "op").get<std::string>();
    if (op == "noc")
        return CounterAction::noc();
    if (op == "dec")
        return CounterAction::dec();
    if (op == "reset") {
        auto n = parse_int(field(j, "n").get<std::string>());
        if (!n)
            throw parse_error(0, "bad reset amount");
        return CounterAction::reset(*n);
    }
    throw parse_error(0, "unknown counter action '" + op + "'");
}

json controller_to_json(const ConsumptionSystem& sys, const CountingController& kappa)
{
    json j;
    json mem = json::array();
    for (std::uint32_t m = 0; m < kappa.mem_count(); ++m)
        mem.push_back(kappa.mem_name(m));
    j["mem"] = std::move(mem);
    j["init"] = kappa.init_mem();
    json table = json::array();
    for (StateId s = 0; s < sys.size(); ++s) {
        json row = json::array();
        for (std::uint32_t m = 0; m < kappa.mem_count(); ++m) {
            const auto& e = kappa.entry(s, m);
            row.push_back(json{{"np", sys.name(e.next_pos)},
                               {"nz", sys.name(e.next_zero)},
                               {"mp", e.mem_pos},
                               {"mz", e.mem_zero},
                               {"ap", action_to_json(e.act_pos)},
                               {"az", action_to_json(e.act_zero)}});
        }
        table.push_back(std::move(row));
    }
    j["table"] = std::move(table);
    return j;
}

CountingController controller_from_json(const ConsumptionSystem& sys, const json& j)
{
    std::vector<std::string> mem;
    for (const auto& m : field(j, "mem"))
        mem.push_back(m.get<std::string>());
    const auto& table = field(j, "table");
    if (table.size() != sys.size())
        throw parse_error(0, "controller table has the wrong number of states");
    std::vector<CountingController::Entry> entries;
    entries.reserve(sys.size() * mem.size());
    for (StateId s = 0; s < sys.size(); ++s) {
        const auto& row = table[s];
        if (row.size() != mem.size())
            throw parse_error(0, "controller table row has the wrong width");
        for (const auto& cell : row) {
            CountingController::Entry e;
            e.next_pos = state_by_name(sys.names(), field(cell, "np").get<std::string>());
            e.next_zero = state_by_name(sys.names(), field(cell, "nz").get<std::string>());
            e.mem_pos = field(cell, "mp").get<std::uint32_t>();
            e.mem_zero = field(cell, "mz").get<std::uint32_t>();
            e.act_pos = action_from_json(field(cell, "ap"));
            e.act_zero = action_from_json(field(cell, "az"));
            entries.push_back(std::move(e));
        }
    }
    return CountingController(sys, std::move(mem), std::move(entries), field(j, "init").get<std::uint32_t>());
}

json path_to_json(const ConsumptionSystem& sys, const FinitePath& path)
{
    json out = json::array();
    for (StateId v : path)
        out.push_back(sys.name(v));
    return out;
}

FinitePath path_from_json(const ConsumptionSystem& sys, const json& j)
{
    FinitePath path;
    for (const auto& v : j)
        path.push_back(state_by_name(sys.names(), v.get<std::string>()));
    if (!is_path(sys, path))
        throw parse_error(0, "stored path is not a path of the system");
    return path;
}

Int int_from_json(const json& j)
{
    auto v = parse_int(j.get<std::string>());
    if (!v)
        throw parse_error(0, "bad integer '" + j.get<std::string>() + "'");
    return *v;
}

} // namespace

std::string serialize_result(const ConsumptionSystem& sys, const SynthesisResult& result)
{
    json j;
    j["format"] = 1;
    j["value"] = result.value.to_string();
    switch (result.kind) {
    case ControllerKind::infinite:
        j["kind"] = "infinite";
        break;
    case ControllerKind::finite_memory: {
        j["kind"] = "finite_memory";
        j["alpha"] = path_to_json(sys, result.alpha);
        j["loop_start"] = sys.name(result.loop_start);
        j["loop_len"] = result.loop_len.str();
        j["loop_cost"] = result.loop_cost.str();
        j["controller"] = controller_to_json(sys, *result.controller);
        break;
    }
    case ControllerKind::infinite_memory: {
        j["kind"] = "infinite_memory";
        const auto& adv = *result.advancing;
        j["alpha"] = path_to_json(sys, adv.alpha);
        j["gamma"] = path_to_json(sys, adv.gamma);
        j["beta_start"] = sys.name(adv.beta_start);
        j["beta_len"] = adv.beta_len.str();
        j["beta_cost"] = adv.beta_cost.str();
        if (adv.beta_path)
            j["beta"] = json{{"path", path_to_json(sys, *adv.beta_path)}};
        else
            j["beta"] = json{{"controller", controller_to_json(sys, *adv.beta_controller)}};
        break;
    }
    }
    return j.dump(2) + "\n";
}

SynthesisResult parse_result(const ConsumptionSystem& sys, const std::string& text)
{
    const json j = parse_json(text);
    SynthesisResult result;
    auto val = parse_extended(field(j, "value").get<std::string>());
    if (!val)
        throw parse_error(0, "bad value");
    result.value = *val;
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "infinite") {
        result.kind = ControllerKind::infinite;
        return result;
    }
    if (kind == "finite_memory") {
        result.kind = ControllerKind::finite_memory;
        result.alpha = path_from_json(sys, field(j, "alpha"));
        result.loop_start = state_by_name(sys.names(), field(j, "loop_start").get<std::string>());
        result.loop_len = int_from_json(field(j, "loop_len"));
        result.loop_cost = int_from_json(field(j, "loop_cost"));
        result.controller = controller_from_json(sys, field(j, "controller"));
        return result;
    }
    if (kind == "infinite_memory") {
        result.kind = ControllerKind::infinite_memory;
        AdvancingController adv;
        adv.alpha = path_from_json(sys, field(j, "alpha"));
        adv.gamma = path_from_json(sys, field(j, "gamma"));
        adv.beta_start = state_by_name(sys.names(), field(j, "beta_start").get<std::string>());
        adv.beta_len = int_from_json(field(j, "beta_len"));
        adv.beta_cost = int_from_json(field(j, "beta_cost"));
        const auto& beta = field(j, "beta");
        if (beta.contains("path"))
            adv.beta_path = path_from_json(sys, beta["path"]);
        else
            adv.beta_controller = controller_from_json(sys, field(beta, "controller"));
        result.advancing = std::move(adv);
        return result;
    }
    throw parse_error(0, "unknown controller kind '" + kind + "'");
}

} // namespace consys
