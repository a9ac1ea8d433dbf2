#include "qprobe/sensitivity.hpp"

#include <cmath>
#include <stdexcept>

namespace qprobe {

Observation zero_pixel(const Observation& obs, int i, int j) {
    check_observation_shape(obs);
    if (i < 0 || i >= obs.height || j < 0 || j >= obs.width)
        throw std::out_of_range("pixel coordinates outside the observation");
    Observation out = obs;
    out.at(i, j) = 0.0;
    return out;
}

static void check_states(const QNetwork& net, const std::vector<Observation>& states) {
    validate_network(net);
    if (states.empty())
        throw std::invalid_argument("sensitivity map needs at least one state");
    for (const Observation& s : states)
        if (s.height != net.input_height || s.width != net.input_width)
            throw std::invalid_argument("state shape does not match network input");
}

SensitivityMap kmap(const QNetwork& net, const std::vector<Observation>& states) {
    check_states(net, states);

    SensitivityMap map;
    map.kind = SensitivityMap::Kind::kK;
    map.values = Field(net.input_height, net.input_width, 0.0);
    map.states_aggregated = static_cast<int>(states.size());

    for (const Observation& s : states) {
        std::vector<double> q = forward(net, s);
        int a_star = argmax_action(q);
        for (int i = 0; i < s.height; ++i) {
            for (int j = 0; j < s.width; ++j) {
                std::vector<double> q_aug = forward(net, zero_pixel(s, i, j));
                int a_aug = argmax_action(q_aug);
                map.values.at(i, j) += q[a_star] - q[a_aug];
            }
        }
    }
    for (double& v : map.values.values) v /= static_cast<double>(states.size());
    return map;
}

SensitivityMap hmap(const QNetwork& net, const std::vector<Observation>& states,
                    double temperature) {
    check_states(net, states);
    if (!(temperature > 0.0))
        throw std::invalid_argument("hmap temperature must be positive");

    SensitivityMap map;
    map.kind = SensitivityMap::Kind::kH;
    map.values = Field(net.input_height, net.input_width, 0.0);
    map.states_aggregated = static_cast<int>(states.size());
    map.temperature = temperature;

    for (const Observation& s : states) {
        PolicyDistribution pi = softmax_policy(forward(net, s), temperature);
        for (int i = 0; i < s.height; ++i) {
            for (int j = 0; j < s.width; ++j) {
                PolicyDistribution pi_aug =
                    softmax_policy(forward(net, zero_pixel(s, i, j)), temperature);
                double cross = 0.0;
                for (std::size_t a = 0; a < pi.probabilities.size(); ++a)
                    cross -= pi.probabilities[a] * std::log(pi_aug.probabilities[a]);
                map.values.at(i, j) += cross;
            }
        }
    }
    for (double& v : map.values.values) v /= static_cast<double>(states.size());
    return map;
}

double sparsity(const SensitivityMap& map) {
    double l1 = 0.0;
    double l2sq = 0.0;
    for (double v : map.values.values) {
        l1 += std::fabs(v);
        l2sq += v * v;
    }
    if (!(l2sq > 0.0))
        throw std::invalid_argument("sparsity of an all-zero map is undefined");
    return l1 / std::sqrt(l2sq);
}

double map_entropy(const SensitivityMap& map) {
    if (map.values.values.empty())
        throw std::invalid_argument("entropy of an empty map");

    double m = map.values.values[0];
    for (double v : map.values.values) m = v > m ? v : m;
    double sum = 0.0;
    for (double v : map.values.values) sum += std::exp(v - m);

    double entropy = 0.0;
    for (double v : map.values.values) {
        double p = std::exp(v - m) / sum;
        if (p > 0.0) entropy -= p * std::log(p);
    }
    return entropy;
}

}  // namespace qprobe
