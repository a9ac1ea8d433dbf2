#pragma once

#include <span>
#include <string>
#include <vector>

#include "qprobe/observation.hpp"
#include "qprobe/rng.hpp"

namespace qprobe {

enum class Activation { kRelu, kIdentity };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

// Fully connected layer. Weights are row-major: rows = outputs, cols = inputs.
struct DenseLayer {
    int rows = 0;
    int cols = 0;
    Activation activation = Activation::kIdentity;
    std::vector<double> weights;
    std::vector<double> bias;

    double weight(int r, int c) const {
        return weights[static_cast<std::size_t>(r) * cols + c];
    }
    double& weight(int r, int c) {
        return weights[static_cast<std::size_t>(r) * cols + c];
    }
};

// Small dense Q-network over a flattened pixel observation. Hidden layers use
// ReLU, the output layer is linear with one unit per action.
struct QNetwork {
    int input_height = 0;
    int input_width = 0;
    int action_count = 0;
    std::vector<DenseLayer> layers;

    int input_size() const { return input_height * input_width; }
};

// Throws std::invalid_argument when layer shapes do not chain from the input
// size to action_count, or a layer's storage does not match its shape.
void validate_network(const QNetwork& net);

// Fresh network with weights drawn uniformly from
// [-1/sqrt(fan_in), +1/sqrt(fan_in)] and zero biases, consuming rng in a
// fixed order so a seed pins the initialization exactly.
QNetwork make_network(int input_height, int input_width,
                      const std::vector<int>& hidden_sizes, int action_count,
                      Rng& rng);

// One Q-value per action for the given observation.
std::vector<double> forward(const QNetwork& net, const Observation& obs);

// Scalar objective over the Q-vector whose input gradient the attacks and the
// trainer need. Either the cross-entropy of softmax(Q) against a target
// action, or a plain difference Q(a) - Q(b).
struct LossSpec {
    enum class Kind { kCrossEntropy, kQDifference };
    Kind kind = Kind::kCrossEntropy;
    int target = 0;
    int action_a = 0;
    int action_b = 0;

    static LossSpec cross_entropy(int target_action);
    static LossSpec q_difference(int a, int b);
};

double loss_value(std::span<const double> q, const LossSpec& loss);
std::vector<double> loss_gradient_wrt_q(std::span<const double> q, const LossSpec& loss);

// d(loss)/d(pixel) for every input pixel, via backpropagation through the
// dense layers. Shape matches the observation.
Field input_gradient(const QNetwork& net, const Observation& obs, const LossSpec& loss);

struct PolicyDistribution {
    std::vector<double> probabilities;
    double temperature = 1.0;
};

// softmax(q / temperature) with max subtraction, so adding a constant to all
// Q-values leaves the probabilities unchanged.
PolicyDistribution softmax_policy(std::span<const double> q, double temperature);

// Index of the largest Q-value; ties resolve to the smallest index.
int argmax_action(std::span<const double> q);

// ---- training support ------------------------------------------------------

// Intermediate results of one forward pass, kept so a backward pass can reuse
// them. activations[0] is the flattened input, activations[k] the output of
// layer k-1; pre_activations[k] is layer k's affine output before ReLU.
struct ForwardTrace {
    std::vector<std::vector<double>> activations;
    std::vector<std::vector<double>> pre_activations;
};

ForwardTrace forward_trace(const QNetwork& net, const Observation& obs);

// Parameter gradients shaped like the network they were computed for.
struct ParamGradients {
    struct LayerGrad {
        std::vector<double> weights;
        std::vector<double> bias;
    };
    std::vector<LayerGrad> layers;
};

ParamGradients zero_gradients(const QNetwork& net);

// Backpropagates dloss_dq through the trace and adds the parameter gradients
// into accum. Accumulation order is fixed, keeping training deterministic.
void accumulate_param_gradients(const QNetwork& net, const ForwardTrace& trace,
                                std::span<const double> dloss_dq,
                                ParamGradients& accum);

void apply_sgd_update(QNetwork& net, const ParamGradients& grads, double learning_rate);

}  // namespace qprobe
