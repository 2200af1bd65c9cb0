#include "insim/export.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace insim {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::io, "cannot write '" + path + "'");
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) {
        fields.push_back(field);
    }
    return fields;
}

constexpr const char* kTrajectoryHeader =
    "t,agent_id,x,y,z,vx,vy,vz,ux,uy,uz,rta_active_pos,rta_active_vel,"
    "rta_active_acc,rta_active_thrust,slack_norm,target_index";

}  // namespace

void write_trajectory_csv(const MissionLog& log, const std::string& path) {
    auto out = open_out(path);
    out << kTrajectoryHeader << "\n";
    for (const auto& r : log.steps) {
        out << fmt(r.t) << ',' << r.agent_id << ',' << fmt(r.pos.x()) << ','
            << fmt(r.pos.y()) << ',' << fmt(r.pos.z()) << ',' << fmt(r.vel.x())
            << ',' << fmt(r.vel.y()) << ',' << fmt(r.vel.z()) << ','
            << fmt(r.u_applied.x()) << ',' << fmt(r.u_applied.y()) << ','
            << fmt(r.u_applied.z()) << ',' << (r.rta_pos ? 1 : 0) << ','
            << (r.rta_vel ? 1 : 0) << ',' << (r.rta_acc ? 1 : 0) << ','
            << (r.rta_thrust ? 1 : 0) << ',' << fmt(r.slack_norm) << ','
            << r.target_index << "\n";
    }
    if (!out) {
        throw Error(ErrorCode::io, "write failed for '" + path + "'");
    }
}

void write_guidance_csv(const MissionLog& log, const std::string& path) {
    auto out = open_out(path);
    out << "t,agent_id,point_index\n";
    for (const auto& e : log.events) {
        out << fmt(e.t) << ',' << e.agent_id << ',' << e.point_index << "\n";
    }
}

void write_metrics_json(const Metrics& metrics, const std::string& path) {
    nlohmann::json doc;
    doc["targets_reached"] = metrics.targets_reached;
    doc["time_taken"] = metrics.time_taken;
    doc["distance_traveled"] = metrics.distance_traveled;
    doc["straight_line_distance"] = metrics.straight_line_distance;
    doc["delta_v"] = metrics.delta_v;
    auto out = open_out(path);
    out << doc.dump(2) << "\n";
}

void write_graph_csv(const InspectionGraph& graph, const std::string& path) {
    auto out = open_out(path);
    out << "index,x,y,z\n";
    for (int p = 0; p < graph.size(); ++p) {
        out << p << ',' << fmt(graph.points[p].x()) << ','
            << fmt(graph.points[p].y()) << ',' << fmt(graph.points[p].z()) << "\n";
    }
}

void export_mission(const MissionLog& log, const Metrics& metrics,
                    const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw Error(ErrorCode::io, "cannot create directory '" + out_dir + "'");
    }
    const fs::path dir(out_dir);
    write_trajectory_csv(log, (dir / "trajectory.csv").string());
    write_guidance_csv(log, (dir / "guidance.csv").string());
    write_metrics_json(metrics, (dir / "metrics.json").string());
    write_graph_csv(log.graph, (dir / "graph.csv").string());
}

MissionLog read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::io, "cannot open '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line) || line != kTrajectoryHeader) {
        throw Error(ErrorCode::parse, "'" + path + "': bad trajectory header");
    }
    MissionLog log;
    int max_agent = -1;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 17) {
            throw Error(ErrorCode::parse, "'" + path + "': bad trajectory row");
        }
        StepRecord r;
        try {
            r.t = std::stod(fields[0]);
            r.agent_id = std::stoi(fields[1]);
            r.pos = Vec3(std::stod(fields[2]), std::stod(fields[3]), std::stod(fields[4]));
            r.vel = Vec3(std::stod(fields[5]), std::stod(fields[6]), std::stod(fields[7]));
            r.u_applied =
                Vec3(std::stod(fields[8]), std::stod(fields[9]), std::stod(fields[10]));
            r.rta_pos = std::stoi(fields[11]) != 0;
            r.rta_vel = std::stoi(fields[12]) != 0;
            r.rta_acc = std::stoi(fields[13]) != 0;
            r.rta_thrust = std::stoi(fields[14]) != 0;
            r.slack_norm = std::stod(fields[15]);
            r.target_index = std::stoi(fields[16]);
        } catch (const std::exception&) {
            throw Error(ErrorCode::parse, "'" + path + "': unparsable trajectory row");
        }
        max_agent = std::max(max_agent, r.agent_id);
        log.steps.push_back(r);
    }
    log.n_agents = max_agent + 1;
    if (!log.steps.empty() && log.n_agents > 0) {
        log.final_time = log.steps.back().t;
        const int samples = log.samples();
        if (samples >= 2) {
            log.dt = log.at(1, 0).t - log.at(0, 0).t;
        }
        for (int a = 0; a < log.n_agents; ++a) {
            log.start_positions.push_back(log.at(0, a).pos);
        }
        log.reached_sequence.assign(log.n_agents, {});
    }
    return log;
}

InspectionGraph read_graph_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::io, "cannot open '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line) || line != "index,x,y,z") {
        throw Error(ErrorCode::parse, "'" + path + "': bad graph header");
    }
    InspectionGraph graph;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 4) {
            throw Error(ErrorCode::parse, "'" + path + "': bad graph row");
        }
        graph.points.emplace_back(std::stod(fields[1]), std::stod(fields[2]),
                                  std::stod(fields[3]));
    }
    graph.visited.assign(graph.points.size(), 0);
    return graph;
}

Metrics metrics_from_csv(const std::string& trajectory_csv, double mass) {
    MissionLog log = read_trajectory_csv(trajectory_csv);
    if (log.steps.empty()) {
        return Metrics{};
    }

    // The sibling graph export, when present, lets us recover visitation.
    const fs::path sibling =
        fs::path(trajectory_csv).parent_path() / "graph.csv";
    if (fs::exists(sibling)) {
        log.graph = read_graph_csv(sibling.string());
        const int samples = log.samples();
        for (int p = 0; p < log.graph.size(); ++p) {
            for (const auto& r : log.steps) {
                if ((r.pos - log.graph.points[p]).norm() < kReachRadius) {
                    log.graph.visited[p] = 1;
                    break;
                }
            }
        }
        // An agent replans only on arrival, so a target change means the
        // previous target was reached; the last target counts if the agent
        // ended within the visit radius.
        for (int a = 0; a < log.n_agents; ++a) {
            auto& seq = log.reached_sequence[a];
            for (int k = 1; k < samples; ++k) {
                const int prev = log.at(k - 1, a).target_index;
                const int cur = log.at(k, a).target_index;
                if (prev >= 0 && prev != cur && (seq.empty() || seq.back() != prev)) {
                    seq.push_back(prev);
                }
            }
            const auto& last = log.at(samples - 1, a);
            if (last.target_index >= 0 && last.target_index < log.graph.size() &&
                (last.pos - log.graph.points[last.target_index]).norm() <
                    kReachRadius &&
                (seq.empty() || seq.back() != last.target_index)) {
                seq.push_back(last.target_index);
            }
        }
    }
    return compute_metrics(log, log.dt, mass);
}

}  // namespace insim
