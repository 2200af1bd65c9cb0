#include "insim/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace insim {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& section,
                         std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw Error(ErrorCode::parse,
                        "config: unknown key '" + item.key() + "' in " + section);
        }
    }
}

Vec3 parse_vec3(const json& arr, const std::string& what) {
    if (!arr.is_array() || arr.size() != 3) {
        throw Error(ErrorCode::parse, "config: " + what + " must be a 3-array");
    }
    return Vec3(arr.at(0).get<double>(), arr.at(1).get<double>(),
                arr.at(2).get<double>());
}

template <typename T>
void read_if(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) {
        out = obj.at(key).get<T>();
    }
}

Fidelity parse_fidelity(const std::string& name) {
    if (name == "hill") return Fidelity::hill;
    if (name == "twobody_j2" || name == "twobody-j2") return Fidelity::twobody_j2;
    throw Error(ErrorCode::parse, "config: unknown fidelity '" + name + "'");
}

}  // namespace

MissionConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, std::string("config: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw Error(ErrorCode::parse, "config: top level must be an object");
    }
    reject_unknown_keys(doc, "top level",
                        {"n_agents", "fidelity", "rta_enabled", "noise", "dt",
                         "time_cap", "seed", "mass", "radial_outward", "rta",
                         "ll_weights", "hl_weights", "controller", "graph",
                         "orbit", "initial_positions", "hl_policy", "ll_policy"});

    MissionConfig config = MissionConfig::defaults();
    try {
        read_if(doc, "n_agents", config.n_agents);
        if (doc.contains("fidelity")) {
            config.fidelity = parse_fidelity(doc.at("fidelity").get<std::string>());
        }
        read_if(doc, "rta_enabled", config.rta_enabled);
        read_if(doc, "dt", config.dt);
        read_if(doc, "time_cap", config.time_cap);
        read_if(doc, "seed", config.seed);
        read_if(doc, "mass", config.mass);
        read_if(doc, "radial_outward", config.radial_outward);

        if (doc.contains("noise")) {
            const json& noise = doc.at("noise");
            reject_unknown_keys(noise, "noise",
                                {"pos_noise_sigma", "accel_noise_sigma",
                                 "actuation_latency_steps"});
            read_if(noise, "pos_noise_sigma", config.noise.pos_noise_sigma);
            read_if(noise, "accel_noise_sigma", config.noise.accel_noise_sigma);
            read_if(noise, "actuation_latency_steps",
                    config.noise.actuation_latency_steps);
        }
        if (doc.contains("rta")) {
            const json& rta = doc.at("rta");
            reject_unknown_keys(rta, "rta",
                                {"r_c", "v_c", "a_c", "u_c", "gamma0", "gamma1",
                                 "gamma2", "gamma3"});
            read_if(rta, "r_c", config.rta.r_c);
            read_if(rta, "v_c", config.rta.v_c);
            read_if(rta, "a_c", config.rta.a_c);
            if (rta.contains("u_c")) {
                if (rta.at("u_c").is_number()) {
                    config.rta.u_c = Vec3::Constant(rta.at("u_c").get<double>());
                } else {
                    config.rta.u_c = parse_vec3(rta.at("u_c"), "rta.u_c");
                }
            }
            read_if(rta, "gamma0", config.rta.gamma0);
            read_if(rta, "gamma1", config.rta.gamma1);
            read_if(rta, "gamma2", config.rta.gamma2);
            read_if(rta, "gamma3", config.rta.gamma3);
        }
        if (doc.contains("ll_weights")) {
            const json& w = doc.at("ll_weights");
            reject_unknown_keys(w, "ll_weights", {"alpha", "beta", "nu", "speed_coeff"});
            read_if(w, "alpha", config.ll_weights.alpha);
            read_if(w, "beta", config.ll_weights.beta);
            read_if(w, "nu", config.ll_weights.nu);
            read_if(w, "speed_coeff", config.ll_weights.speed_coeff);
        }
        if (doc.contains("hl_weights")) {
            const json& w = doc.at("hl_weights");
            reject_unknown_keys(w, "hl_weights", {"alpha", "beta", "nu"});
            read_if(w, "alpha", config.hl_weights.alpha);
            read_if(w, "beta", config.hl_weights.beta);
            read_if(w, "nu", config.hl_weights.nu);
        }
        if (doc.contains("controller")) {
            const json& c = doc.at("controller");
            reject_unknown_keys(c, "controller", {"k_p", "k_d"});
            read_if(c, "k_p", config.controller.k_p);
            read_if(c, "k_d", config.controller.k_d);
        }
        if (doc.contains("graph")) {
            const json& g = doc.at("graph");
            reject_unknown_keys(g, "graph", {"count", "nominal_radius", "scale", "seed"});
            read_if(g, "count", config.graph.count);
            read_if(g, "nominal_radius", config.graph.nominal_radius);
            if (g.contains("scale")) {
                config.graph.scale = parse_vec3(g.at("scale"), "graph.scale");
            }
            if (g.contains("seed")) {
                config.graph.seed = g.at("seed").get<std::uint64_t>();
                config.graph_seed_from_mission = false;
            }
        }
        if (doc.contains("orbit")) {
            const json& o = doc.at("orbit");
            reject_unknown_keys(o, "orbit", {"mu", "r0", "j2", "earth_radius"});
            double mu = config.orbit.mu;
            double r0 = config.orbit.r0_mag;
            double j2 = config.orbit.j2;
            double re = config.orbit.earth_radius;
            read_if(o, "mu", mu);
            read_if(o, "r0", r0);
            read_if(o, "j2", j2);
            read_if(o, "earth_radius", re);
            config.orbit = OrbitParams::circular(mu, r0, j2, re);
        }
        if (doc.contains("initial_positions")) {
            const json& starts = doc.at("initial_positions");
            if (!starts.is_array()) {
                throw Error(ErrorCode::parse, "config: initial_positions must be an array");
            }
            config.initial_positions.clear();
            for (const auto& entry : starts) {
                if (entry.is_number_integer()) {
                    config.initial_positions.push_back(
                        StartSpec::graph_point(entry.get<int>()));
                } else {
                    config.initial_positions.push_back(
                        StartSpec::at(parse_vec3(entry, "initial_positions entry")));
                }
            }
        }
        if (doc.contains("hl_policy") && !doc.at("hl_policy").is_null()) {
            config.hl_policy_path = doc.at("hl_policy").get<std::string>();
        }
        if (doc.contains("ll_policy") && !doc.at("ll_policy").is_null()) {
            config.ll_policy_path = doc.at("ll_policy").get<std::string>();
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, std::string("config: bad value: ") + e.what());
    }
    config.validate();
    return config;
}

MissionConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::io, "config: cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const MissionConfig& config) {
    json doc;
    doc["n_agents"] = config.n_agents;
    doc["fidelity"] = config.fidelity == Fidelity::hill ? "hill" : "twobody_j2";
    doc["rta_enabled"] = config.rta_enabled;
    doc["dt"] = config.dt;
    doc["time_cap"] = config.time_cap;
    doc["seed"] = config.seed;
    doc["mass"] = config.mass;
    doc["radial_outward"] = config.radial_outward;
    doc["noise"] = {{"pos_noise_sigma", config.noise.pos_noise_sigma},
                    {"accel_noise_sigma", config.noise.accel_noise_sigma},
                    {"actuation_latency_steps", config.noise.actuation_latency_steps}};
    doc["rta"] = {{"r_c", config.rta.r_c},
                  {"v_c", config.rta.v_c},
                  {"a_c", config.rta.a_c},
                  {"u_c", {config.rta.u_c.x(), config.rta.u_c.y(), config.rta.u_c.z()}},
                  {"gamma0", config.rta.gamma0},
                  {"gamma1", config.rta.gamma1},
                  {"gamma2", config.rta.gamma2},
                  {"gamma3", config.rta.gamma3}};
    doc["ll_weights"] = {{"alpha", config.ll_weights.alpha},
                         {"beta", config.ll_weights.beta},
                         {"nu", config.ll_weights.nu},
                         {"speed_coeff", config.ll_weights.speed_coeff}};
    doc["hl_weights"] = {{"alpha", config.hl_weights.alpha},
                         {"beta", config.hl_weights.beta},
                         {"nu", config.hl_weights.nu}};
    doc["controller"] = {{"k_p", config.controller.k_p}, {"k_d", config.controller.k_d}};
    doc["graph"] = {{"count", config.graph.count},
                    {"nominal_radius", config.graph.nominal_radius},
                    {"scale",
                     {config.graph.scale.x(), config.graph.scale.y(),
                      config.graph.scale.z()}}};
    if (!config.graph_seed_from_mission) {
        doc["graph"]["seed"] = config.graph.seed;
    }
    doc["orbit"] = {{"mu", config.orbit.mu},
                    {"r0", config.orbit.r0_mag},
                    {"j2", config.orbit.j2},
                    {"earth_radius", config.orbit.earth_radius}};
    json starts = json::array();
    for (const auto& s : config.initial_positions) {
        if (s.from_graph) {
            starts.push_back(s.index);
        } else {
            starts.push_back({s.position.x(), s.position.y(), s.position.z()});
        }
    }
    doc["initial_positions"] = std::move(starts);
    if (!config.hl_policy_path.empty()) {
        doc["hl_policy"] = config.hl_policy_path;
    }
    if (!config.ll_policy_path.empty()) {
        doc["ll_policy"] = config.ll_policy_path;
    }
    return doc.dump(2);
}

void save_config(const MissionConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::io, "config: cannot write '" + path + "'");
    }
    out << serialize_config(config) << "\n";
}

}  // namespace insim
