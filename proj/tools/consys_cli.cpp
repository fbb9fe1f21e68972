#include "consys/io.hpp"
#include "consys/limits.hpp"
#include "consys/oracle.hpp"
#include "consys/runtime.hpp"
#include "consys/synthesis.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace
{

struct usage_error : std::runtime_error
{
    explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// single atomic write at the end of the run
void emit(const std::string& out_path, const std::string& content)
{
    if (out_path.empty()) {
        std::cout << content;
        std::cout.flush();
        return;
    }
    const std::string tmp = out_path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write '" + out_path + "'");
        out << content;
    }
    if (std::rename(tmp.c_str(), out_path.c_str()) != 0)
        throw std::runtime_error("cannot move output into place at '" + out_path + "'");
}

consys::Int parse_cap(const std::string& text)
{
    auto v = consys::parse_int(text);
    if (!v || *v < 0)
        throw usage_error("--cap must be a non-negative integer, got '" + text + "'");
    return *v;
}

consys::StateId resolve_state(const consys::ConsumptionSystem& sys, const std::string& name)
{
    auto s = sys.find_state(name);
    if (!s)
        throw std::runtime_error("no state named '" + name + "'");
    return *s;
}

std::string kind_name(consys::ControllerKind kind)
{
    switch (kind) {
    case consys::ControllerKind::infinite:
        return "infinite";
    case consys::ControllerKind::finite_memory:
        return "finite_memory";
    case consys::ControllerKind::infinite_memory:
        return "infinite_memory";
    }
    return "?";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cap-bounded mean-payoff analysis and controller synthesis for consumption systems"};
    app.require_subcommand(1);

    std::string system_path, initial, cap_text = "0", out_path, format = "text", controller_path, buchi_path;
    std::uint64_t steps = 0;
    std::uint64_t max_nodes = consys::default_unfolding_node_limit;

    auto add_common = [&](CLI::App* cmd, bool needs_initial, bool needs_cap) {
        cmd->add_option("--system", system_path, "system file (JSON)")->required();
        if (needs_initial)
            cmd->add_option("--initial", initial, "initial state name")->required();
        if (needs_cap)
            cmd->add_option("--cap", cap_text, "battery capacity (decimal, unbounded size)")->required();
        cmd->add_option("--out", out_path, "output file (default: stdout)");
        cmd->add_option("--format", format, "output format: text or json")
            ->check(CLI::IsMember({"text", "json"}));
    };

    auto* cmd_validate = app.add_subcommand("validate", "check the system invariants");
    add_common(cmd_validate, false, false);
    auto* cmd_value = app.add_subcommand("value", "optimal cap-bounded mean payoff of the initial state");
    add_common(cmd_value, true, true);
    auto* cmd_synth = app.add_subcommand("synthesize", "compute the value and an optimal controller");
    add_common(cmd_synth, true, true);
    auto* cmd_limit = app.add_subcommand("limit", "limit value, achievability, convergence bound");
    add_common(cmd_limit, true, false);
    auto* cmd_sim = app.add_subcommand("simulate", "replay a synthesized controller");
    add_common(cmd_sim, true, true);
    cmd_sim->add_option("--controller", controller_path, "controller file from 'synthesize'")->required();
    cmd_sim->add_option("--steps", steps, "number of transitions to replay")->required();
    auto* cmd_oracle = app.add_subcommand("oracle", "brute-force value on the explicit unfolding");
    add_common(cmd_oracle, true, true);
    cmd_oracle->add_option("--max-nodes", max_nodes, "unfolding size limit");
    auto* cmd_product = app.add_subcommand("product", "synchronized product with a Buchi automaton");
    add_common(cmd_product, false, false);
    cmd_product->add_option("--buchi", buchi_path, "automaton file (JSON)")->required();
    auto* cmd_dot = app.add_subcommand("export-dot", "GraphViz rendering of the system");
    add_common(cmd_dot, false, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const bool json_out = format == "json";
        if (cmd_validate->parsed()) {
            consys::ConsumptionSystem sys = [&] {
                try {
                    return consys::parse_system(slurp(system_path));
                } catch (const consys::validation_failed& e) {
                    std::ostringstream os;
                    if (json_out) {
                        os << "{\"ok\": false, \"errors\": [";
                        for (std::size_t i = 0; i < e.errors.size(); ++i)
                            os << (i ? ", " : "") << "\"error " << i << "\"";
                        os << "]}\n";
                    }
                    throw;
                }
            }();
            emit(out_path, json_out ? "{\"ok\": true}\n" : "ok\n");
            return 0;
        }
        if (cmd_dot->parsed()) {
            auto sys = consys::parse_system(slurp(system_path));
            emit(out_path, consys::export_dot(sys));
            return 0;
        }
        if (cmd_product->parsed()) {
            auto sys = consys::parse_system(slurp(system_path));
            auto buchi = consys::parse_buchi(slurp(buchi_path));
            auto prod = consys::product(sys, buchi);
            if (prod.sink_added)
                std::cerr << "note: a rejecting sink state was added to keep the product total\n";
            emit(out_path, consys::serialize_system(prod.system, "product"));
            return 0;
        }

        auto sys = consys::parse_system(slurp(system_path));
        const consys::StateId s = resolve_state(sys, initial);

        if (cmd_limit->parsed()) {
            auto report = consys::limit_report(sys, s);
            std::ostringstream os;
            if (json_out) {
                os << "{\"limit\": \"" << report.limit.to_string() << "\", \"achievable\": "
                   << (report.achievable ? "true" : "false");
                if (report.achieving_cap)
                    os << ", \"achieving_cap\": \"" << report.achieving_cap->str() << "\"";
                os << ", \"rate_numerator\": \"" << report.rate_numerator.str() << "\", \"rate_offset\": \""
                   << report.rate_offset.str() << "\"}\n";
            } else {
                os << report.limit.to_string() << ", achievable: " << (report.achievable ? "yes" : "no") << "\n";
                if (report.achieving_cap)
                    os << "achieving capacity: " << report.achieving_cap->str() << "\n";
                else
                    os << "gap bound: " << report.rate_numerator.str() << "/(cap - " << report.rate_offset.str()
                       << ") for cap > " << report.rate_offset.str() << "\n";
            }
            emit(out_path, os.str());
            return 0;
        }

        const consys::Int cap = parse_cap(cap_text);
        if (cmd_value->parsed()) {
            auto val = consys::value(sys, s, cap);
            emit(out_path, json_out ? "{\"value\": \"" + val.to_string() + "\"}\n" : val.to_string() + "\n");
            return 0;
        }
        if (cmd_synth->parsed()) {
            auto result = consys::synthesize(sys, s, cap);
            if (!json_out)
                std::cerr << "value " << result.value.to_string() << ", kind " << kind_name(result.kind) << "\n";
            emit(out_path, consys::serialize_result(sys, result));
            return 0;
        }
        if (cmd_oracle->parsed()) {
            auto val = consys::oracle_value(sys, s, cap, max_nodes);
            emit(out_path, json_out ? "{\"value\": \"" + val.to_string() + "\"}\n" : val.to_string() + "\n");
            return 0;
        }
        if (cmd_sim->parsed()) {
            auto result = consys::parse_result(sys, slurp(controller_path));
            auto [path, stats] = consys::run_controller(sys, result, s, steps, cap);
            std::ostringstream os;
            if (json_out) {
                os << "{\"steps\": " << stats.steps << ", \"prefix_mean\": \""
                   << consys::rational_to_string(stats.prefix_mean) << "\", \"max_end_cost\": \""
                   << stats.max_end_cost_seen.str() << "\", \"min_headroom\": \"" << stats.min_headroom.str()
                   << "\", \"accepting_visits\": " << stats.accepting_visits
                   << ", \"cap_violations\": " << stats.cap_violations << "}\n";
            } else {
                os << "steps: " << stats.steps << "\n";
                os << "prefix mean: " << consys::rational_to_string(stats.prefix_mean) << "\n";
                os << "max end cost: " << stats.max_end_cost_seen.str() << "\n";
                os << "min headroom: " << stats.min_headroom.str() << "\n";
                os << "accepting visits: " << stats.accepting_visits << "\n";
                os << "cap violations: " << stats.cap_violations << "\n";
            }
            emit(out_path, os.str());
            return 0;
        }
        throw usage_error("no subcommand");
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
