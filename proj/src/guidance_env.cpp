#include "insim/guidance_env.hpp"

#include "insim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace insim {

bool InspectionGraph::all_visited() const {
    return std::all_of(visited.begin(), visited.end(),
                       [](std::uint8_t v) { return v != 0; });
}

int InspectionGraph::visited_count() const {
    return static_cast<int>(
        std::count_if(visited.begin(), visited.end(),
                      [](std::uint8_t v) { return v != 0; }));
}

InspectionGraph build_graph(const GraphParams& params) {
    if (params.count < 1) {
        throw Error(ErrorCode::invalid_argument, "build_graph: count must be >= 1");
    }
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    const double phase = Rng(params.seed).uniform(0.0, 2.0 * std::numbers::pi);
    const Vec3 semi_axes = params.nominal_radius * params.scale;

    InspectionGraph graph;
    graph.points.reserve(params.count);
    for (int i = 0; i < params.count; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / params.count;
        const double ring = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double az = golden_angle * i + phase;
        const Vec3 dir(ring * std::cos(az), ring * std::sin(az), z);
        graph.points.push_back(semi_axes.cwiseProduct(dir));
    }
    graph.visited.assign(params.count, 0);
    return graph;
}

double hl_reward(const InspectionGraph& graph,
                 const std::vector<int>& joint_action,
                 const std::vector<std::uint8_t>& prev_visited,
                 const std::vector<int>& prev_actions,
                 const HlRewardWeights& w) {
    const int n_agents = static_cast<int>(joint_action.size());
    if (prev_actions.size() != joint_action.size()) {
        throw Error(ErrorCode::invalid_argument, "hl_reward: agent count mismatch");
    }
    double penalty = 0.0;
    for (int i = 0; i < n_agents; ++i) {
        const int target = joint_action[i];
        const int prev = prev_actions[i];
        if (target < 0 || target >= graph.size() || prev < 0 ||
            prev >= graph.size()) {
            throw Error(ErrorCode::invalid_argument, "hl_reward: index out of range");
        }
        penalty += w.alpha * (graph.points[target] - graph.points[prev]).norm();
        if (prev_visited[target]) {
            penalty += w.beta;
        }
        for (int k = 0; k < n_agents; ++k) {
            if (k != i && joint_action[k] == target) {
                penalty += w.nu;
                break;
            }
        }
    }
    return -penalty;
}

HlStepResult hl_step(InspectionGraph& graph, std::vector<int>& agent_indices,
                     const std::vector<int>& joint_action,
                     const HlRewardWeights& w) {
    const double reward =
        hl_reward(graph, joint_action, graph.visited, agent_indices, w);
    agent_indices = joint_action;
    for (int target : joint_action) {
        graph.visited[target] = 1;
    }
    HlStepResult result;
    result.obs = HlObservation{agent_indices, graph.visited};
    result.reward = reward;
    result.done = graph.all_visited();
    return result;
}

std::vector<int> greedy_planner(const HlObservation& obs,
                                const InspectionGraph& graph) {
    std::vector<std::uint8_t> claimed(graph.size(), 0);
    std::vector<int> action;
    action.reserve(obs.agent_point_indices.size());
    for (int agent_pos : obs.agent_point_indices) {
        if (agent_pos < 0 || agent_pos >= graph.size()) {
            throw Error(ErrorCode::invalid_argument,
                        "greedy_planner: agent index out of range");
        }
        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (int p = 0; p < graph.size(); ++p) {
            if (obs.visited[p] || claimed[p]) {
                continue;
            }
            const double dist =
                (graph.points[p] - graph.points[agent_pos]).norm();
            if (dist < best_dist) {
                best_dist = dist;
                best = p;
            }
        }
        if (best < 0) {
            action.push_back(agent_pos);  // nothing left: hold position
        } else {
            claimed[best] = 1;
            action.push_back(best);
        }
    }
    return action;
}

double tour_cost(const std::vector<std::vector<Vec3>>& sequences) {
    double cost = 0.0;
    for (const auto& seq : sequences) {
        for (std::size_t j = 1; j < seq.size(); ++j) {
            cost += (seq[j] - seq[j - 1]).norm();
        }
    }
    return cost;
}

std::vector<std::vector<Vec3>> route_polylines(
    const std::vector<Vec3>& points, const std::vector<int>& start_indices,
    const std::vector<std::vector<int>>& sequences) {
    std::vector<std::vector<Vec3>> lines;
    lines.reserve(sequences.size());
    for (std::size_t i = 0; i < sequences.size(); ++i) {
        std::vector<Vec3> line;
        line.push_back(points.at(start_indices.at(i)));
        for (int idx : sequences[i]) {
            line.push_back(points.at(idx));
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

namespace {

// Cheapest visiting order over one agent's assigned points, all permutations.
// Candidates start sorted so ties resolve to the lexicographically smallest.
std::pair<double, std::vector<int>> best_path(const std::vector<Vec3>& points,
                                              int start,
                                              std::vector<int> assigned) {
    std::sort(assigned.begin(), assigned.end());
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<int> best_order;
    do {
        double cost = 0.0;
        Vec3 at = points[start];
        for (int idx : assigned) {
            cost += (points[idx] - at).norm();
            at = points[idx];
        }
        if (cost < best_cost - 1e-12) {
            best_cost = cost;
            best_order = assigned;
        }
    } while (std::next_permutation(assigned.begin(), assigned.end()));
    return {best_cost, best_order};
}

}  // namespace

RoutePlan brute_force_router(const std::vector<Vec3>& points, int n_agents,
                             const std::vector<int>& start_indices) {
    const int m = static_cast<int>(points.size());
    if (m > 8 || n_agents > 3) {
        throw Error(ErrorCode::size, "brute_force_router: instance too large");
    }
    if (m < 1 || n_agents < 1 ||
        static_cast<int>(start_indices.size()) != n_agents) {
        throw Error(ErrorCode::invalid_argument, "brute_force_router: bad instance");
    }

    RoutePlan best;
    best.cost = std::numeric_limits<double>::infinity();

    std::vector<int> owner(m, 0);
    const std::uint64_t total = [&] {
        std::uint64_t t = 1;
        for (int i = 0; i < m; ++i) {
            t *= static_cast<std::uint64_t>(n_agents);
        }
        return t;
    }();
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        for (int p = 0; p < m; ++p) {
            owner[p] = static_cast<int>(c % n_agents);
            c /= n_agents;
        }
        double cost = 0.0;
        std::vector<std::vector<int>> sequences(n_agents);
        for (int a = 0; a < n_agents; ++a) {
            std::vector<int> assigned;
            for (int p = 0; p < m; ++p) {
                if (owner[p] == a) {
                    assigned.push_back(p);
                }
            }
            if (assigned.empty()) {
                continue;
            }
            auto [path_cost, order] =
                best_path(points, start_indices[a], std::move(assigned));
            cost += path_cost;
            sequences[a] = std::move(order);
        }
        if (cost < best.cost - 1e-9 ||
            (cost <= best.cost + 1e-9 && sequences < best.sequences)) {
            best.cost = cost;
            best.sequences = std::move(sequences);
        }
    }
    return best;
}

RoutePlan greedy_route(const std::vector<Vec3>& points, int n_agents,
                       const std::vector<int>& start_indices) {
    InspectionGraph graph;
    graph.points = points;
    graph.visited.assign(points.size(), 0);
    std::vector<int> agents = start_indices;

    RoutePlan plan;
    plan.sequences.assign(n_agents, {});
    HlRewardWeights w;
    int guard = graph.size() + 2;
    while (!graph.all_visited() && guard-- > 0) {
        const auto action = greedy_planner(HlObservation{agents, graph.visited}, graph);
        for (int a = 0; a < n_agents; ++a) {
            if (action[a] != agents[a] || !graph.visited[action[a]]) {
                plan.sequences[a].push_back(action[a]);
            }
        }
        hl_step(graph, agents, action, w);
    }
    plan.cost = tour_cost(route_polylines(points, start_indices, plan.sequences));
    return plan;
}

}  // namespace insim
