#include "qprobe/qnetwork.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace qprobe {

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::kRelu: return "relu";
        case Activation::kIdentity: return "identity";
    }
    throw std::invalid_argument("unknown activation");
}

Activation activation_from_name(const std::string& name) {
    if (name == "relu") return Activation::kRelu;
    if (name == "identity") return Activation::kIdentity;
    throw std::invalid_argument("unknown activation name: " + name);
}

void validate_network(const QNetwork& net) {
    if (net.input_height <= 0 || net.input_width <= 0)
        throw std::invalid_argument("network input shape must be positive");
    if (net.action_count < 2)
        throw std::invalid_argument("network needs at least two actions");
    if (net.layers.empty())
        throw std::invalid_argument("network has no layers");

    int expect_in = net.input_size();
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const DenseLayer& layer = net.layers[l];
        if (layer.rows <= 0 || layer.cols <= 0)
            throw std::invalid_argument("layer has empty shape");
        if (layer.cols != expect_in)
            throw std::invalid_argument("layer input size does not chain from previous layer");
        if (layer.weights.size() !=
            static_cast<std::size_t>(layer.rows) * static_cast<std::size_t>(layer.cols))
            throw std::invalid_argument("layer weight storage does not match its shape");
        if (layer.bias.size() != static_cast<std::size_t>(layer.rows))
            throw std::invalid_argument("layer bias storage does not match its shape");
        expect_in = layer.rows;
    }
    if (expect_in != net.action_count)
        throw std::invalid_argument("output layer size does not equal action count");
    if (net.layers.back().activation != Activation::kIdentity)
        throw std::invalid_argument("output layer must be linear");
}

QNetwork make_network(int input_height, int input_width,
                      const std::vector<int>& hidden_sizes, int action_count,
                      Rng& rng) {
    QNetwork net;
    net.input_height = input_height;
    net.input_width = input_width;
    net.action_count = action_count;

    std::vector<int> sizes;
    sizes.push_back(input_height * input_width);
    for (int h : hidden_sizes) sizes.push_back(h);
    sizes.push_back(action_count);

    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        DenseLayer layer;
        layer.cols = sizes[l];
        layer.rows = sizes[l + 1];
        layer.activation =
            (l + 2 == sizes.size()) ? Activation::kIdentity : Activation::kRelu;
        double bound = 1.0 / std::sqrt(static_cast<double>(layer.cols));
        layer.weights.resize(static_cast<std::size_t>(layer.rows) * layer.cols);
        for (double& w : layer.weights) w = rng.uniform(-bound, bound);
        layer.bias.assign(static_cast<std::size_t>(layer.rows), 0.0);
        net.layers.push_back(std::move(layer));
    }
    validate_network(net);
    return net;
}

static void check_input(const QNetwork& net, const Observation& obs) {
    check_observation_shape(obs);
    if (obs.height != net.input_height || obs.width != net.input_width)
        throw std::invalid_argument("observation shape does not match network input");
}

static void affine(const DenseLayer& layer, const std::vector<double>& in,
                   std::vector<double>& out) {
    out.assign(static_cast<std::size_t>(layer.rows), 0.0);
    for (int r = 0; r < layer.rows; ++r) {
        const double* w = &layer.weights[static_cast<std::size_t>(r) * layer.cols];
        double acc = layer.bias[r];
        for (int c = 0; c < layer.cols; ++c) acc += w[c] * in[c];
        out[r] = acc;
    }
}

ForwardTrace forward_trace(const QNetwork& net, const Observation& obs) {
    validate_network(net);
    check_input(net, obs);

    ForwardTrace trace;
    trace.activations.push_back(obs.pixels);
    for (const DenseLayer& layer : net.layers) {
        std::vector<double> z;
        affine(layer, trace.activations.back(), z);
        trace.pre_activations.push_back(z);
        if (layer.activation == Activation::kRelu)
            for (double& v : z) v = v > 0.0 ? v : 0.0;
        trace.activations.push_back(std::move(z));
    }
    return trace;
}

std::vector<double> forward(const QNetwork& net, const Observation& obs) {
    return forward_trace(net, obs).activations.back();
}

LossSpec LossSpec::cross_entropy(int target_action) {
    LossSpec spec;
    spec.kind = Kind::kCrossEntropy;
    spec.target = target_action;
    return spec;
}

LossSpec LossSpec::q_difference(int a, int b) {
    LossSpec spec;
    spec.kind = Kind::kQDifference;
    spec.action_a = a;
    spec.action_b = b;
    return spec;
}

static void check_action_index(std::span<const double> q, int action) {
    if (action < 0 || static_cast<std::size_t>(action) >= q.size())
        throw std::out_of_range("action index out of range for Q-vector");
}

double loss_value(std::span<const double> q, const LossSpec& loss) {
    if (loss.kind == LossSpec::Kind::kQDifference) {
        check_action_index(q, loss.action_a);
        check_action_index(q, loss.action_b);
        return q[loss.action_a] - q[loss.action_b];
    }
    check_action_index(q, loss.target);
    // -log softmax(q)[target], computed against the max-shifted logits.
    double m = q[0];
    for (double v : q) m = v > m ? v : m;
    double sum = 0.0;
    for (double v : q) sum += std::exp(v - m);
    return std::log(sum) - (q[loss.target] - m);
}

std::vector<double> loss_gradient_wrt_q(std::span<const double> q, const LossSpec& loss) {
    std::vector<double> grad(q.size(), 0.0);
    if (loss.kind == LossSpec::Kind::kQDifference) {
        check_action_index(q, loss.action_a);
        check_action_index(q, loss.action_b);
        grad[loss.action_a] += 1.0;
        grad[loss.action_b] -= 1.0;
        return grad;
    }
    check_action_index(q, loss.target);
    PolicyDistribution pi = softmax_policy(q, 1.0);
    for (std::size_t i = 0; i < q.size(); ++i) grad[i] = pi.probabilities[i];
    grad[loss.target] -= 1.0;
    return grad;
}

// Backward pass shared by input_gradient and accumulate_param_gradients.
// Walks layers from the output down, turning d(loss)/d(activation) into
// d(loss)/d(pre-activation) via the ReLU mask, and optionally writes the
// parameter gradients on the way.
static std::vector<double> backward(const QNetwork& net, const ForwardTrace& trace,
                                    std::span<const double> dloss_dq,
                                    ParamGradients* accum) {
    if (dloss_dq.size() != static_cast<std::size_t>(net.action_count))
        throw std::invalid_argument("loss gradient size does not match action count");

    std::vector<double> delta(dloss_dq.begin(), dloss_dq.end());
    for (int l = static_cast<int>(net.layers.size()) - 1; l >= 0; --l) {
        const DenseLayer& layer = net.layers[l];
        const std::vector<double>& z = trace.pre_activations[l];
        if (layer.activation == Activation::kRelu)
            for (int r = 0; r < layer.rows; ++r)
                if (z[r] <= 0.0) delta[r] = 0.0;

        if (accum != nullptr) {
            const std::vector<double>& a_prev = trace.activations[l];
            ParamGradients::LayerGrad& g = accum->layers[l];
            for (int r = 0; r < layer.rows; ++r) {
                double* gw = &g.weights[static_cast<std::size_t>(r) * layer.cols];
                double d = delta[r];
                for (int c = 0; c < layer.cols; ++c) gw[c] += d * a_prev[c];
                g.bias[r] += d;
            }
        }

        std::vector<double> prev(static_cast<std::size_t>(layer.cols), 0.0);
        for (int r = 0; r < layer.rows; ++r) {
            const double* w = &layer.weights[static_cast<std::size_t>(r) * layer.cols];
            double d = delta[r];
            if (d == 0.0) continue;
            for (int c = 0; c < layer.cols; ++c) prev[c] += w[c] * d;
        }
        delta = std::move(prev);
    }
    return delta;
}

Field input_gradient(const QNetwork& net, const Observation& obs, const LossSpec& loss) {
    ForwardTrace trace = forward_trace(net, obs);
    std::vector<double> dq = loss_gradient_wrt_q(trace.activations.back(), loss);
    std::vector<double> dinput = backward(net, trace, dq, nullptr);

    Field grad(obs.height, obs.width);
    grad.values = std::move(dinput);
    return grad;
}

PolicyDistribution softmax_policy(std::span<const double> q, double temperature) {
    if (q.empty())
        throw std::invalid_argument("softmax over empty Q-vector");
    if (!(temperature > 0.0))
        throw std::invalid_argument("softmax temperature must be positive");

    double m = q[0];
    for (double v : q) m = v > m ? v : m;

    PolicyDistribution dist;
    dist.temperature = temperature;
    dist.probabilities.resize(q.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        double e = std::exp((q[i] - m) / temperature);
        dist.probabilities[i] = e;
        sum += e;
    }
    for (double& p : dist.probabilities) p /= sum;
    return dist;
}

int argmax_action(std::span<const double> q) {
    if (q.empty())
        throw std::invalid_argument("argmax over empty Q-vector");
    int best = 0;
    for (std::size_t i = 1; i < q.size(); ++i)
        if (q[i] > q[best]) best = static_cast<int>(i);
    return best;
}

ParamGradients zero_gradients(const QNetwork& net) {
    ParamGradients grads;
    grads.layers.resize(net.layers.size());
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        grads.layers[l].weights.assign(net.layers[l].weights.size(), 0.0);
        grads.layers[l].bias.assign(net.layers[l].bias.size(), 0.0);
    }
    return grads;
}

void accumulate_param_gradients(const QNetwork& net, const ForwardTrace& trace,
                                std::span<const double> dloss_dq,
                                ParamGradients& accum) {
    if (accum.layers.size() != net.layers.size())
        throw std::invalid_argument("gradient accumulator does not match network");
    backward(net, trace, dloss_dq, &accum);
}

void apply_sgd_update(QNetwork& net, const ParamGradients& grads, double learning_rate) {
    if (grads.layers.size() != net.layers.size())
        throw std::invalid_argument("gradient shapes do not match network");
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        DenseLayer& layer = net.layers[l];
        const ParamGradients::LayerGrad& g = grads.layers[l];
        for (std::size_t i = 0; i < layer.weights.size(); ++i)
            layer.weights[i] -= learning_rate * g.weights[i];
        for (std::size_t i = 0; i < layer.bias.size(); ++i)
            layer.bias[i] -= learning_rate * g.bias[i];
    }
}

}  // namespace qprobe
