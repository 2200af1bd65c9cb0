#include "insim/insim.h"

#include "insim/config.hpp"
#include "insim/dynamics.hpp"
#include "insim/export.hpp"
#include "insim/guidance_env.hpp"
#include "insim/mission.hpp"
#include "insim/rng.hpp"
#include "insim/rta.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

namespace {

thread_local std::string g_last_error;

insim_status map_code(insim::ErrorCode code) {
    using insim::ErrorCode;
    switch (code) {
        case ErrorCode::invalid_argument: return INSIM_ERR_INVALID_ARG;
        case ErrorCode::domain: return INSIM_ERR_DOMAIN;
        case ErrorCode::parse: return INSIM_ERR_PARSE;
        case ErrorCode::io: return INSIM_ERR_IO;
        case ErrorCode::state: return INSIM_ERR_STATE;
        case ErrorCode::solver: return INSIM_ERR_SOLVER;
        case ErrorCode::size: return INSIM_ERR_SIZE;
    }
    return INSIM_ERR_INTERNAL;
}

template <typename Fn>
insim_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const insim::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return INSIM_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return INSIM_ERR_INTERNAL;
    }
}

insim_status fail_arg(const char* message) {
    g_last_error = message;
    return INSIM_ERR_INVALID_ARG;
}

insim_metrics to_c(const insim::Metrics& m) {
    insim_metrics out;
    out.targets_reached = m.targets_reached;
    out.time_taken = m.time_taken;
    out.distance_traveled = m.distance_traveled;
    out.straight_line_distance = m.straight_line_distance;
    out.delta_v = m.delta_v;
    return out;
}

std::string rta_demo_trace(const std::string& scenario) {
    using namespace insim;
    RtaParams params;
    const double n = default_mean_motion();
    const double dt = 1.0;
    std::ostringstream out;

    auto flag = [](bool b) { return b ? '*' : '.'; };

    if (scenario == "headon") {
        std::vector<RelativeState> agents(2);
        agents[0].pos = Vec3(225.0, 0.0, 0.0);
        agents[1].pos = Vec3(375.0, 0.0, 0.0);
        std::vector<Vec3> accels(2, Vec3::Zero());
        out << "two agents closing head-on, columns: "
               "t separation speed0 speed1 pos vel acc thr slack\n";
        for (int step = 0; step <= 240; ++step) {
            WorldSnapshot snap{agents, accels};
            std::vector<Vec3> thrust(2);
            ActivationReport merged;
            for (int i = 0; i < 2; ++i) {
                const Vec3 toward = (agents[1 - i].pos - agents[i].pos);
                Vec3 nominal;
                for (int k = 0; k < 3; ++k) {
                    nominal(k) = toward(k) == 0.0
                                     ? 0.0
                                     : std::copysign(params.u_c(k), toward(k));
                }
                const FilterResult res = rta_filter(i, nominal, snap, params, n);
                thrust[i] = res.safe_thrust;
                merged.position |= res.report.position;
                merged.velocity |= res.report.velocity;
                merged.acceleration |= res.report.acceleration;
                merged.thrust |= res.report.thrust;
                merged.slack_norm = std::max(merged.slack_norm, res.report.slack_norm);
            }
            if (step % 10 == 0) {
                char line[160];
                std::snprintf(line, sizeof(line),
                              "%5.0f  %8.2f  %6.3f  %6.3f   %c %c %c %c  %.3g\n",
                              step * dt, (agents[0].pos - agents[1].pos).norm(),
                              agents[0].vel.norm(), agents[1].vel.norm(),
                              flag(merged.position), flag(merged.velocity),
                              flag(merged.acceleration), flag(merged.thrust),
                              merged.slack_norm);
                out << line;
            }
            for (int i = 0; i < 2; ++i) {
                const Vec3 prev_vel = agents[i].vel;
                auto deriv = [&](double, const Vec6& x) {
                    return cw_derivative(RelativeState::from_vec6(x), thrust[i], n,
                                         params.mass);
                };
                agents[i] = RelativeState::from_vec6(
                    rk4_step(deriv, agents[i].as_vec6(), step * dt, dt));
                accels[i] = (agents[i].vel - prev_vel) / dt;
            }
        }
        return out.str();
    }
    if (scenario == "speeding") {
        RelativeState agent;
        agent.pos = Vec3(300.0, 0.0, 0.0);
        Vec3 accel = Vec3::Zero();
        out << "single agent under full +y thrust, columns: "
               "t speed vel_active u_y slack\n";
        for (int step = 0; step <= 120; ++step) {
            WorldSnapshot snap{{agent}, {accel}};
            const Vec3 nominal(0.0, params.u_c(1), 0.0);
            const FilterResult res = rta_filter(0, nominal, snap, params, n);
            if (step % 5 == 0) {
                char line[120];
                std::snprintf(line, sizeof(line), "%5.0f  %6.3f  %c  %7.4f  %.3g\n",
                              step * dt, agent.vel.norm(),
                              flag(res.report.velocity), res.safe_thrust.y(),
                              res.report.slack_norm);
                out << line;
            }
            const Vec3 prev_vel = agent.vel;
            auto deriv = [&](double, const Vec6& x) {
                return cw_derivative(RelativeState::from_vec6(x), res.safe_thrust,
                                     n, params.mass);
            };
            agent = RelativeState::from_vec6(
                rk4_step(deriv, agent.as_vec6(), step * dt, dt));
            accel = (agent.vel - prev_vel) / dt;
        }
        return out.str();
    }
    throw Error(ErrorCode::invalid_argument,
                "rta-demo: unknown scenario '" + scenario + "' (headon|speeding)");
}

}  // namespace

struct insim_config_s {
    insim::MissionConfig config;
};

struct insim_mission_s {
    insim::MissionResult result;
};

extern "C" {

const char* insim_status_name(insim_status status) {
    switch (status) {
        case INSIM_OK: return "ok";
        case INSIM_ERR_INVALID_ARG: return "invalid argument";
        case INSIM_ERR_PARSE: return "parse error";
        case INSIM_ERR_IO: return "io error";
        case INSIM_ERR_DOMAIN: return "domain error";
        case INSIM_ERR_STATE: return "state error";
        case INSIM_ERR_SOLVER: return "solver error";
        case INSIM_ERR_SIZE: return "instance too large";
        case INSIM_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* insim_last_error(void) { return g_last_error.c_str(); }

insim_status insim_config_default(insim_config** out) {
    if (!out) return fail_arg("insim_config_default: null output");
    return guarded([&] {
        *out = new insim_config_s{insim::MissionConfig::defaults()};
        return INSIM_OK;
    });
}

insim_status insim_config_load(const char* path, insim_config** out) {
    if (!path || !out) return fail_arg("insim_config_load: null argument");
    return guarded([&] {
        *out = new insim_config_s{insim::load_config(path)};
        return INSIM_OK;
    });
}

insim_status insim_config_preset(insim_config* config, const char* name) {
    if (!config || !name) return fail_arg("insim_config_preset: null argument");
    return guarded([&] {
        insim::apply_preset(config->config, name);
        return INSIM_OK;
    });
}

insim_status insim_config_set_seed(insim_config* config, uint64_t seed) {
    if (!config) return fail_arg("insim_config_set_seed: null config");
    config->config.seed = seed;
    return INSIM_OK;
}

insim_status insim_config_set_fidelity(insim_config* config, const char* fidelity) {
    if (!config || !fidelity) return fail_arg("insim_config_set_fidelity: null argument");
    const std::string name(fidelity);
    if (name == "hill") {
        config->config.fidelity = insim::Fidelity::hill;
        return INSIM_OK;
    }
    if (name == "twobody-j2" || name == "twobody_j2") {
        config->config.fidelity = insim::Fidelity::twobody_j2;
        return INSIM_OK;
    }
    return fail_arg("insim_config_set_fidelity: expected hill or twobody-j2");
}

insim_status insim_config_set_rta(insim_config* config, int enabled) {
    if (!config) return fail_arg("insim_config_set_rta: null config");
    config->config.rta_enabled = enabled != 0;
    return INSIM_OK;
}

void insim_config_free(insim_config* config) { delete config; }

insim_status insim_mission_run(const insim_config* config, insim_mission** out) {
    if (!config || !out) return fail_arg("insim_mission_run: null argument");
    return guarded([&] {
        auto result = insim::run_mission_from_config(config->config);
        *out = new insim_mission_s{std::move(result)};
        return INSIM_OK;
    });
}

insim_status insim_mission_metrics(const insim_mission* mission, insim_metrics* out) {
    if (!mission || !out) return fail_arg("insim_mission_metrics: null argument");
    *out = to_c(mission->result.metrics);
    return INSIM_OK;
}

insim_status insim_mission_export(const insim_mission* mission, const char* out_dir) {
    if (!mission || !out_dir) return fail_arg("insim_mission_export: null argument");
    return guarded([&] {
        insim::export_mission(mission->result.log, mission->result.metrics, out_dir);
        return INSIM_OK;
    });
}

void insim_mission_free(insim_mission* mission) { delete mission; }

insim_status insim_graph_export(const insim_config* config, const char* path) {
    if (!config || !path) return fail_arg("insim_graph_export: null argument");
    return guarded([&] {
        insim::GraphParams params = config->config.graph;
        if (config->config.graph_seed_from_mission) {
            params.seed = insim::substream_seed(config->config.seed, 1);
        }
        insim::write_graph_csv(insim::build_graph(params), path);
        return INSIM_OK;
    });
}

insim_status insim_plan_compare(int n_points, int n_agents, uint64_t seed,
                                int run_oracle, insim_plan_report* out) {
    if (!out) return fail_arg("insim_plan_compare: null output");
    return guarded([&] {
        using namespace insim;
        if (n_points < 1 || n_agents < 1) {
            throw Error(ErrorCode::invalid_argument,
                        "plan: points and agents must be >= 1");
        }
        Rng rng(seed);
        std::vector<Vec3> points;
        const Vec3 semi_axes(351.0, 750.0, 300.0);
        for (int p = 0; p < n_points; ++p) {
            // Random direction on the unit sphere, scaled onto the ellipsoid.
            Vec3 dir;
            do {
                for (int k = 0; k < 3; ++k) {
                    dir(k) = rng.normal();
                }
            } while (dir.norm() < 1e-9);
            dir.normalize();
            points.push_back(semi_axes.cwiseProduct(dir));
        }
        std::vector<int> starts(n_agents);
        for (int a = 0; a < n_agents; ++a) {
            starts[a] = static_cast<int>(rng.below(n_points));
        }
        const RoutePlan greedy = greedy_route(points, n_agents, starts);
        out->greedy_cost = greedy.cost;
        out->optimal_cost = -1.0;
        out->covered = 0;
        if (run_oracle) {
            const RoutePlan oracle = brute_force_router(points, n_agents, starts);
            out->optimal_cost = oracle.cost;
            std::vector<char> seen(n_points, 0);
            for (int a = 0; a < n_agents; ++a) {
                for (int idx : oracle.sequences[a]) {
                    seen[idx] = 1;
                }
            }
            out->covered = 1;
            for (int p = 0; p < n_points; ++p) {
                if (!seen[p]) {
                    out->covered = 0;
                    break;
                }
            }
        }
        return INSIM_OK;
    });
}

insim_status insim_rta_demo(const char* scenario, char** text_out) {
    if (!scenario || !text_out) return fail_arg("insim_rta_demo: null argument");
    return guarded([&] {
        const std::string trace = rta_demo_trace(scenario);
        char* buffer = static_cast<char*>(std::malloc(trace.size() + 1));
        if (!buffer) {
            throw insim::Error(insim::ErrorCode::io, "rta-demo: allocation failed");
        }
        std::memcpy(buffer, trace.c_str(), trace.size() + 1);
        *text_out = buffer;
        return INSIM_OK;
    });
}

void insim_string_free(char* text) { std::free(text); }

insim_status insim_metrics_from_csv(const char* trajectory_csv, double mass,
                                    insim_metrics* out) {
    if (!trajectory_csv || !out) return fail_arg("insim_metrics_from_csv: null argument");
    return guarded([&] {
        *out = to_c(insim::metrics_from_csv(trajectory_csv, mass));
        return INSIM_OK;
    });
}

}  // extern "C"
