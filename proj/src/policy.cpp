#include "insim/policy.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace insim {

namespace {

using nlohmann::json;

Activation activation_from_name(const std::string& name) {
    if (name == "tanh") return Activation::tanh;
    if (name == "relu") return Activation::relu;
    if (name == "linear") return Activation::linear;
    throw Error(ErrorCode::parse, "policy: unknown activation '" + name + "'");
}

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::tanh: return "tanh";
        case Activation::relu: return "relu";
        case Activation::linear: return "linear";
    }
    return "linear";
}

}  // namespace

void MlpPolicy::validate() const {
    if (layer_dims.size() < 2) {
        throw Error(ErrorCode::invalid_argument, "policy: need at least one layer");
    }
    for (int dim : layer_dims) {
        if (dim < 1) {
            throw Error(ErrorCode::invalid_argument, "policy: non-positive layer dim");
        }
    }
    const std::size_t n_layers = layer_dims.size() - 1;
    if (weights.size() != n_layers || biases.size() != n_layers) {
        throw Error(ErrorCode::invalid_argument, "policy: layer count mismatch");
    }
    if (activations.size() != n_layers - 1) {
        throw Error(ErrorCode::invalid_argument,
                    "policy: expected one activation per hidden layer");
    }
    for (std::size_t l = 0; l < n_layers; ++l) {
        if (weights[l].rows() != layer_dims[l + 1] ||
            weights[l].cols() != layer_dims[l]) {
            throw Error(ErrorCode::invalid_argument,
                        "policy: weight shape mismatch in layer " + std::to_string(l));
        }
        if (biases[l].size() != layer_dims[l + 1]) {
            throw Error(ErrorCode::invalid_argument,
                        "policy: bias shape mismatch in layer " + std::to_string(l));
        }
    }
    if (head == PolicyHead::continuous_clip) {
        if (layer_dims.back() != 3) {
            throw Error(ErrorCode::invalid_argument,
                        "policy: continuous head needs output dim 3");
        }
    } else {
        if (head_agents < 1 || head_points < 1 ||
            layer_dims.back() != head_agents * head_points) {
            throw Error(ErrorCode::invalid_argument,
                        "policy: discrete head dims inconsistent with output");
        }
    }
}

MlpPolicy parse_policy(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, std::string("policy: malformed JSON: ") + e.what());
    }
    MlpPolicy policy;
    try {
        policy.layer_dims = doc.at("layer_dims").get<std::vector<int>>();
        for (const auto& mat : doc.at("weights")) {
            const std::size_t rows = mat.size();
            const std::size_t cols = rows > 0 ? mat.at(0).size() : 0;
            Eigen::MatrixXd w(rows, cols);
            for (std::size_t r = 0; r < rows; ++r) {
                const auto& row = mat.at(r);
                if (row.size() != cols) {
                    throw Error(ErrorCode::invalid_argument, "policy: ragged weight matrix");
                }
                for (std::size_t c = 0; c < cols; ++c) {
                    w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                        row.at(c).get<double>();
                }
            }
            policy.weights.push_back(std::move(w));
        }
        for (const auto& vec : doc.at("biases")) {
            Eigen::VectorXd b(vec.size());
            for (std::size_t i = 0; i < vec.size(); ++i) {
                b(static_cast<Eigen::Index>(i)) = vec.at(i).get<double>();
            }
            policy.biases.push_back(std::move(b));
        }
        for (const auto& name : doc.at("activations")) {
            policy.activations.push_back(activation_from_name(name.get<std::string>()));
        }
        const auto& head = doc.at("head");
        const std::string head_type = head.at("type").get<std::string>();
        if (head_type == "continuous_clip") {
            policy.head = PolicyHead::continuous_clip;
        } else if (head_type == "discrete_argmax_per_agent") {
            policy.head = PolicyHead::discrete_argmax_per_agent;
            policy.head_agents = head.at("n_agents").get<int>();
            policy.head_points = head.at("n_points").get<int>();
        } else {
            throw Error(ErrorCode::parse, "policy: unknown head '" + head_type + "'");
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, std::string("policy: bad schema: ") + e.what());
    }
    policy.validate();
    return policy;
}

MlpPolicy load_policy(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::io, "policy: cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_policy(buf.str());
}

std::string serialize_policy(const MlpPolicy& policy) {
    policy.validate();
    json doc;
    doc["layer_dims"] = policy.layer_dims;
    json weights = json::array();
    for (const auto& w : policy.weights) {
        json mat = json::array();
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                row.push_back(w(r, c));
            }
            mat.push_back(std::move(row));
        }
        weights.push_back(std::move(mat));
    }
    doc["weights"] = std::move(weights);
    json biases = json::array();
    for (const auto& b : policy.biases) {
        json vec = json::array();
        for (Eigen::Index i = 0; i < b.size(); ++i) {
            vec.push_back(b(i));
        }
        biases.push_back(std::move(vec));
    }
    doc["biases"] = std::move(biases);
    json activations = json::array();
    for (Activation a : policy.activations) {
        activations.push_back(activation_name(a));
    }
    doc["activations"] = std::move(activations);
    if (policy.head == PolicyHead::continuous_clip) {
        doc["head"] = {{"type", "continuous_clip"}};
    } else {
        doc["head"] = {{"type", "discrete_argmax_per_agent"},
                       {"n_agents", policy.head_agents},
                       {"n_points", policy.head_points}};
    }
    return doc.dump(2);
}

void save_policy(const MlpPolicy& policy, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::io, "policy: cannot write '" + path + "'");
    }
    out << serialize_policy(policy) << "\n";
}

Eigen::VectorXd policy_forward(const MlpPolicy& policy,
                               const Eigen::VectorXd& observation) {
    if (observation.size() != policy.input_dim()) {
        throw Error(ErrorCode::invalid_argument,
                    "policy: observation dim " + std::to_string(observation.size()) +
                        " != input dim " + std::to_string(policy.input_dim()));
    }
    Eigen::VectorXd x = observation;
    for (std::size_t l = 0; l < policy.weights.size(); ++l) {
        x = policy.weights[l] * x + policy.biases[l];
        if (l + 1 < policy.weights.size()) {
            switch (policy.activations[l]) {
                case Activation::tanh:
                    x = x.array().tanh().matrix();
                    break;
                case Activation::relu:
                    x = x.cwiseMax(0.0);
                    break;
                case Activation::linear:
                    break;
            }
        }
    }
    return x;
}

Vec3 policy_act_continuous(const MlpPolicy& policy,
                           const Eigen::VectorXd& observation) {
    if (policy.head != PolicyHead::continuous_clip) {
        throw Error(ErrorCode::invalid_argument, "policy: not a continuous head");
    }
    const Eigen::VectorXd out = policy_forward(policy, observation);
    return Vec3(out(0), out(1), out(2)).cwiseMax(-1.0).cwiseMin(1.0);
}

std::vector<int> policy_act_discrete(const MlpPolicy& policy,
                                     const Eigen::VectorXd& observation) {
    if (policy.head != PolicyHead::discrete_argmax_per_agent) {
        throw Error(ErrorCode::invalid_argument, "policy: not a discrete head");
    }
    const Eigen::VectorXd out = policy_forward(policy, observation);
    std::vector<int> actions(policy.head_agents);
    for (int a = 0; a < policy.head_agents; ++a) {
        int best = 0;
        double best_logit = out(a * policy.head_points);
        for (int p = 1; p < policy.head_points; ++p) {
            const double logit = out(a * policy.head_points + p);
            if (logit > best_logit) {
                best_logit = logit;
                best = p;
            }
        }
        actions[a] = best;
    }
    return actions;
}

}  // namespace insim
