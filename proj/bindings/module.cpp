#include "consys/io.hpp"
#include "consys/limits.hpp"
#include "consys/oracle.hpp"
#include "consys/runtime.hpp"
#include "consys/synthesis.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace consys;

namespace
{

StateId state_of(const ConsumptionSystem& sys, const std::string& name)
{
    auto s = sys.find_state(name);
    if (!s)
        throw py::value_error("no state named '" + name + "'");
    return *s;
}

Int cap_of(const std::string& text)
{
    auto v = parse_int(text);
    if (!v || *v < 0)
        throw py::value_error("capacity must be a non-negative decimal integer");
    return *v;
}

std::string kind_name(ControllerKind kind)
{
    switch (kind) {
    case ControllerKind::infinite:
        return "infinite";
    case ControllerKind::finite_memory:
        return "finite_memory";
    case ControllerKind::infinite_memory:
        return "infinite_memory";
    }
    return "?";
}

} // namespace

PYBIND11_MODULE(consys, m)
{
    m.doc() = "Cap-bounded mean-payoff analysis and controller synthesis for consumption systems";

    py::class_<ConsumptionSystem>(m, "ConsumptionSystem")
        .def_property_readonly("states", &ConsumptionSystem::names)
        .def("__len__", &ConsumptionSystem::size)
        .def("is_reload", [](const ConsumptionSystem& sys, const std::string& s) {
            return sys.is_reload(state_of(sys, s));
        })
        .def("is_accepting", [](const ConsumptionSystem& sys, const std::string& s) {
            return sys.is_accepting(state_of(sys, s));
        });

    m.def("parse_system", &parse_system, py::arg("text"));
    m.def(
        "serialize_system",
        [](const ConsumptionSystem& sys, const std::string& name) { return serialize_system(sys, name); },
        py::arg("system"), py::arg("name") = "");
    m.def("validate", [](const ConsumptionSystem& sys) {
        std::vector<std::string> out;
        for (const auto& e : validate(sys))
            out.push_back(e.describe(sys));
        return out;
    });
    m.def(
        "value",
        [](const ConsumptionSystem& sys, const std::string& s, const std::string& cap) {
            return value(sys, state_of(sys, s), cap_of(cap)).to_string();
        },
        py::arg("system"), py::arg("initial"), py::arg("cap"));
    m.def(
        "memory_kind",
        [](const ConsumptionSystem& sys, const std::string& s, const std::string& cap) {
            switch (memory_kind(sys, state_of(sys, s), cap_of(cap))) {
            case MemoryKind::infinite:
                return std::string("infinite");
            case MemoryKind::finite_optimal:
                return std::string("finite_optimal");
            case MemoryKind::infinite_memory_required:
                return std::string("infinite_memory_required");
            }
            return std::string("?");
        },
        py::arg("system"), py::arg("initial"), py::arg("cap"));
    m.def(
        "synthesize",
        [](const ConsumptionSystem& sys, const std::string& s, const std::string& cap) {
            auto result = synthesize(sys, state_of(sys, s), cap_of(cap));
            py::dict out;
            out["value"] = result.value.to_string();
            out["kind"] = kind_name(result.kind);
            out["document"] = serialize_result(sys, result);
            return out;
        },
        py::arg("system"), py::arg("initial"), py::arg("cap"));
    m.def(
        "simulate",
        [](const ConsumptionSystem& sys, const std::string& controller_doc, const std::string& s,
           std::uint64_t steps, const std::string& cap) {
            auto result = parse_result(sys, controller_doc);
            auto [path, stats] = run_controller(sys, result, state_of(sys, s), steps, cap_of(cap));
            py::dict out;
            out["steps"] = stats.steps;
            out["prefix_mean"] = rational_to_string(stats.prefix_mean);
            out["max_end_cost"] = stats.max_end_cost_seen.str();
            out["min_headroom"] = stats.min_headroom.str();
            out["accepting_visits"] = stats.accepting_visits;
            out["cap_violations"] = stats.cap_violations;
            std::vector<std::string> names;
            for (StateId v : path)
                names.push_back(sys.name(v));
            out["path"] = names;
            return out;
        },
        py::arg("system"), py::arg("controller"), py::arg("initial"), py::arg("steps"), py::arg("cap"));
    m.def(
        "limit_report",
        [](const ConsumptionSystem& sys, const std::string& s) {
            auto report = limit_report(sys, state_of(sys, s));
            py::dict out;
            out["limit"] = report.limit.to_string();
            out["achievable"] = report.achievable;
            if (report.achieving_cap)
                out["achieving_cap"] = report.achieving_cap->str();
            out["rate_numerator"] = report.rate_numerator.str();
            out["rate_offset"] = report.rate_offset.str();
            return out;
        },
        py::arg("system"), py::arg("initial"));
    m.def(
        "oracle_value",
        [](const ConsumptionSystem& sys, const std::string& s, const std::string& cap, std::uint64_t max_nodes) {
            return oracle_value(sys, state_of(sys, s), cap_of(cap), max_nodes).to_string();
        },
        py::arg("system"), py::arg("initial"), py::arg("cap"),
        py::arg("max_nodes") = default_unfolding_node_limit);
    m.def(
        "product",
        [](const ConsumptionSystem& sys, const std::string& buchi_doc) {
            auto prod = product(sys, parse_buchi(buchi_doc));
            py::dict out;
            out["document"] = serialize_system(prod.system, "product");
            out["sink_added"] = prod.sink_added;
            return out;
        },
        py::arg("system"), py::arg("buchi"));
    m.def(
        "export_dot",
        [](const ConsumptionSystem& sys, const std::string& name) { return export_dot(sys, name); },
        py::arg("system"), py::arg("name") = "consumption_system");
}
