#pragma once

#include "insim/types.hpp"

#include <cstdint>
#include <vector>

namespace insim {

/// Inspection points in Hill coordinates plus the shared visited mask.
struct InspectionGraph {
    std::vector<Vec3> points;
    std::vector<std::uint8_t> visited;

    int size() const { return static_cast<int>(points.size()); }
    bool all_visited() const;
    int visited_count() const;
};

struct GraphParams {
    int count{20};
    double nominal_radius{300.0};  ///< m
    Vec3 scale{1.17, 2.5, 1.0};
    std::uint64_t seed{0};
};

/// Evenly spaced points on the ellipsoid with semi-axes
/// nominal_radius * scale: Fibonacci-sphere directions with a seeded
/// azimuthal phase, scaled componentwise. All visited flags start false.
InspectionGraph build_graph(const GraphParams& params = {});

struct HlObservation {
    std::vector<int> agent_point_indices;  ///< one graph index per agent
    std::vector<std::uint8_t> visited;
};

struct HlRewardWeights {
    double alpha{1.0 / 300.0};  ///< 1/m, travel-distance penalty
    double beta{1.0};           ///< revisit penalty
    double nu{1.0};             ///< same-target conflict penalty
};

/// Shared team reward: minus the sum over agents of travel distance, revisit
/// indicator (against the pre-step mask) and same-target conflict indicator.
/// Every agent involved in a conflict is penalized. Always <= 0.
double hl_reward(const InspectionGraph& graph,
                 const std::vector<int>& joint_action,
                 const std::vector<std::uint8_t>& prev_visited,
                 const std::vector<int>& prev_actions,
                 const HlRewardWeights& w);

struct HlStepResult {
    HlObservation obs;
    double reward{0.0};
    bool done{false};
};

/// Agents relocate to the chosen points (the routing environment moves them
/// synchronously and instantly), the points are marked visited, and the
/// episode ends when the mask is full.
HlStepResult hl_step(InspectionGraph& graph, std::vector<int>& agent_indices,
                     const std::vector<int>& joint_action,
                     const HlRewardWeights& w);

/// Deterministic baseline: agents in id order claim the nearest unvisited
/// point not taken this step (ties to the lowest index); surplus agents hold.
std::vector<int> greedy_planner(const HlObservation& obs,
                                const InspectionGraph& graph);

struct RoutePlan {
    std::vector<std::vector<int>> sequences;  ///< per agent, visiting order
    double cost{0.0};
};

/// Exhaustive minimum-travel routing over point-to-agent assignments and
/// per-agent orderings; every point is covered. Costs include the leg from
/// each agent's start point to its first assignment. Only small instances
/// (<= 8 points, <= 3 agents) are accepted. Ties break lexicographically.
RoutePlan brute_force_router(const std::vector<Vec3>& points, int n_agents,
                             const std::vector<int>& start_indices);

/// Greedy rollout over the same instance, for cost comparison against the
/// brute-force plan.
RoutePlan greedy_route(const std::vector<Vec3>& points, int n_agents,
                       const std::vector<int>& start_indices);

/// Total polyline length over all agents.
double tour_cost(const std::vector<std::vector<Vec3>>& sequences);

/// Expands index sequences (prefixed by each agent's start point) into
/// polylines over the instance's points.
std::vector<std::vector<Vec3>> route_polylines(
    const std::vector<Vec3>& points, const std::vector<int>& start_indices,
    const std::vector<std::vector<int>>& sequences);

}  // namespace insim
