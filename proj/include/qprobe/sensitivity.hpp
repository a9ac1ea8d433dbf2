#pragma once

#include <vector>

#include "qprobe/observation.hpp"
#include "qprobe/qnetwork.hpp"

namespace qprobe {

// Copy of the observation with pixel (i, j) set to zero.
Observation zero_pixel(const Observation& obs, int i, int j);

// Per-pixel saliency aggregated over a set of states (arithmetic mean).
//
// kind K: Q(s, a*) - Q(s, argmax_a Q(zeroed s, a)), the value the greedy
//   action loses when the zeroed pixel changes the decision; never negative.
// kind H: cross-entropy between the softmax policy at s and at the zeroed s.
struct SensitivityMap {
    enum class Kind { kK, kH };
    Kind kind = Kind::kK;
    Field values;
    int states_aggregated = 0;
    double temperature = 1.0;
};

SensitivityMap kmap(const QNetwork& net, const std::vector<Observation>& states);

SensitivityMap hmap(const QNetwork& net, const std::vector<Observation>& states,
                    double temperature);

// l1/l2 norm ratio, in [1, sqrt(H*W)] for a nonzero map. An all-zero map has
// no defined sparsity and is rejected.
double sparsity(const SensitivityMap& map);

// Shannon entropy (nats) of the softmax over all map cells, in [0, ln(H*W)].
// An all-zero map softmaxes to the uniform distribution, giving ln(H*W).
double map_entropy(const SensitivityMap& map);

}  // namespace qprobe
