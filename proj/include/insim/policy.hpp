#pragma once

#include "insim/types.hpp"

#include <string>
#include <vector>

namespace insim {

enum class Activation { tanh, relu, linear };

enum class PolicyHead { continuous_clip, discrete_argmax_per_agent };

/// Feed-forward network with a task head, loaded from a JSON document so
/// externally trained weights can be evaluated in the harness. Immutable
/// after load; safe to share across threads.
struct MlpPolicy {
    std::vector<int> layer_dims;                ///< input, hidden..., output
    std::vector<Eigen::MatrixXd> weights;       ///< weights[l]: dims[l+1] x dims[l]
    std::vector<Eigen::VectorXd> biases;
    std::vector<Activation> activations;        ///< one per hidden layer
    PolicyHead head{PolicyHead::continuous_clip};
    int head_agents{0};  ///< discrete head only
    int head_points{0};  ///< discrete head only

    int input_dim() const { return layer_dims.front(); }
    int output_dim() const { return layer_dims.back(); }
    void validate() const;
};

MlpPolicy load_policy(const std::string& path);
void save_policy(const MlpPolicy& policy, const std::string& path);

MlpPolicy parse_policy(const std::string& json_text);
std::string serialize_policy(const MlpPolicy& policy);

/// Raw forward pass (head not applied). Hidden activations elementwise; the
/// final layer stays linear.
Eigen::VectorXd policy_forward(const MlpPolicy& policy,
                               const Eigen::VectorXd& observation);

/// Continuous head: forward pass clipped to [-1, 1]^3.
Vec3 policy_act_continuous(const MlpPolicy& policy,
                           const Eigen::VectorXd& observation);

/// Discrete head: per-agent argmax over that agent's block of logits, ties
/// to the lowest index.
std::vector<int> policy_act_discrete(const MlpPolicy& policy,
                                     const Eigen::VectorXd& observation);

}  // namespace insim
