#pragma once

#include "insim/mission.hpp"

#include <string>

namespace insim {

/// Writes trajectory.csv, guidance.csv, metrics.json and graph.csv under
/// out_dir (created if missing). I/O failures carry the offending path.
void export_mission(const MissionLog& log, const Metrics& metrics,
                    const std::string& out_dir);

void write_trajectory_csv(const MissionLog& log, const std::string& path);
void write_guidance_csv(const MissionLog& log, const std::string& path);
void write_metrics_json(const Metrics& metrics, const std::string& path);
void write_graph_csv(const InspectionGraph& graph, const std::string& path);

/// Rebuilds a partial mission log (samples, starts, timing) from an exported
/// trajectory CSV. Guidance sequences and the graph stay empty.
MissionLog read_trajectory_csv(const std::string& path);

InspectionGraph read_graph_csv(const std::string& path);

/// Recomputes metrics from an exported trajectory CSV. Distance, delta-v and
/// time come from the samples alone; targets reached and straight-line
/// distance additionally need the sibling graph.csv (same directory) and are
/// left zero without it.
Metrics metrics_from_csv(const std::string& trajectory_csv, double mass);

}  // namespace insim
