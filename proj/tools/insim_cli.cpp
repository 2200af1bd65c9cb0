// Command-line front end over the insim C API.

#include <insim/insim.h>

#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <string>

namespace {

int fail(insim_status status) {
    std::fprintf(stderr, "error: %s: %s\n", insim_status_name(status),
                 insim_last_error());
    return 1;
}

void print_metrics(const insim_metrics& m) {
    std::printf("targets_reached         %d\n", m.targets_reached);
    std::printf("time_taken              %.6g s\n", m.time_taken);
    std::printf("distance_traveled       %.6g m\n", m.distance_traveled);
    std::printf("straight_line_distance  %.6g m\n", m.straight_line_distance);
    std::printf("delta_v                 %.6g m/s\n", m.delta_v);
}

using ConfigPtr = std::unique_ptr<insim_config, decltype(&insim_config_free)>;

ConfigPtr make_config(const std::string& config_path, insim_status& status) {
    insim_config* raw = nullptr;
    status = config_path.empty() ? insim_config_default(&raw)
                                 : insim_config_load(config_path.c_str(), &raw);
    return ConfigPtr(raw, &insim_config_free);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-agent satellite inspection simulator"};
    app.require_subcommand(1);

    // simulate
    std::string sim_config, sim_out, sim_fidelity, sim_preset, sim_rta;
    std::uint64_t sim_seed = 0;
    bool sim_seed_set = false;
    auto* simulate = app.add_subcommand("simulate", "run a mission and export logs");
    simulate->add_option("--config", sim_config, "mission config file (JSON)");
    simulate->add_option("--out", sim_out, "output directory")->required();
    simulate->add_option("--seed", sim_seed, "mission seed")
        ->each([&](const std::string&) { sim_seed_set = true; });
    simulate->add_option("--fidelity", sim_fidelity, "hill|twobody-j2");
    simulate->add_option("--rta", sim_rta, "on|off");
    simulate->add_option("--preset", sim_preset, "exp1|exp2|cp-proxy");

    // graph
    std::string graph_out, graph_config;
    auto* graph = app.add_subcommand("graph", "emit the inspection-point CSV");
    graph->add_option("--emit", graph_out, "output CSV path")->required();
    graph->add_option("--config", graph_config, "mission config file (JSON)");

    // plan
    int plan_points = 7;
    int plan_agents = 3;
    std::uint64_t plan_seed = 0;
    bool plan_oracle = false;
    auto* plan = app.add_subcommand("plan", "greedy routing vs brute-force optimum");
    plan->add_option("--points", plan_points, "number of inspection points")->required();
    plan->add_option("--agents", plan_agents, "number of agents")->required();
    plan->add_option("--seed", plan_seed, "instance seed");
    plan->add_flag("--oracle", plan_oracle, "also run the exhaustive router");

    // rta-demo
    std::string demo_scenario;
    auto* demo = app.add_subcommand("rta-demo", "print a safety-filter activation trace");
    demo->add_option("--scenario", demo_scenario, "headon|speeding")->required();

    // metrics
    std::string metrics_log;
    double metrics_mass = 1.0;
    auto* metrics = app.add_subcommand("metrics", "recompute metrics from a trajectory CSV");
    metrics->add_option("--log", metrics_log, "trajectory CSV path")->required();
    metrics->add_option("--mass", metrics_mass, "agent mass, kg (default 1)");

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed()) {
        insim_status status;
        ConfigPtr config = make_config(sim_config, status);
        if (status != INSIM_OK) return fail(status);
        if (!sim_preset.empty() &&
            (status = insim_config_preset(config.get(), sim_preset.c_str())) != INSIM_OK) {
            return fail(status);
        }
        if (!sim_fidelity.empty() &&
            (status = insim_config_set_fidelity(config.get(), sim_fidelity.c_str())) !=
                INSIM_OK) {
            return fail(status);
        }
        if (!sim_rta.empty()) {
            if (sim_rta != "on" && sim_rta != "off") {
                std::fprintf(stderr, "error: --rta expects on|off\n");
                return 1;
            }
            insim_config_set_rta(config.get(), sim_rta == "on" ? 1 : 0);
        }
        if (sim_seed_set) {
            insim_config_set_seed(config.get(), sim_seed);
        }
        insim_mission* mission = nullptr;
        if ((status = insim_mission_run(config.get(), &mission)) != INSIM_OK) {
            return fail(status);
        }
        std::unique_ptr<insim_mission, decltype(&insim_mission_free)> guard(
            mission, &insim_mission_free);
        if ((status = insim_mission_export(mission, sim_out.c_str())) != INSIM_OK) {
            return fail(status);
        }
        insim_metrics m;
        insim_mission_metrics(mission, &m);
        print_metrics(m);
        std::printf("exported to %s\n", sim_out.c_str());
        return 0;
    }

    if (graph->parsed()) {
        insim_status status;
        ConfigPtr config = make_config(graph_config, status);
        if (status != INSIM_OK) return fail(status);
        if ((status = insim_graph_export(config.get(), graph_out.c_str())) != INSIM_OK) {
            return fail(status);
        }
        std::printf("graph written to %s\n", graph_out.c_str());
        return 0;
    }

    if (plan->parsed()) {
        insim_plan_report report;
        const insim_status status = insim_plan_compare(
            plan_points, plan_agents, plan_seed, plan_oracle ? 1 : 0, &report);
        if (status != INSIM_OK) return fail(status);
        std::printf("greedy_cost   %.6g m\n", report.greedy_cost);
        if (plan_oracle) {
            std::printf("optimal_cost  %.6g m\n", report.optimal_cost);
            std::printf("ratio         %.4f\n",
                        report.optimal_cost > 0.0
                            ? report.greedy_cost / report.optimal_cost
                            : 1.0);
            std::printf("covered       %s\n", report.covered ? "yes" : "no");
        }
        return 0;
    }

    if (demo->parsed()) {
        char* trace = nullptr;
        const insim_status status = insim_rta_demo(demo_scenario.c_str(), &trace);
        if (status != INSIM_OK) return fail(status);
        std::fputs(trace, stdout);
        insim_string_free(trace);
        return 0;
    }

    if (metrics->parsed()) {
        insim_metrics m;
        const insim_status status =
            insim_metrics_from_csv(metrics_log.c_str(), metrics_mass, &m);
        if (status != INSIM_OK) return fail(status);
        print_metrics(m);
        return 0;
    }

    return 1;
}
