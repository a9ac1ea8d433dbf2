#pragma once

#include <optional>

#include "qprobe/observation.hpp"
#include "qprobe/qnetwork.hpp"

namespace qprobe {

// Budget and schedule of an l-infinity attack. Untargeted attacks push the
// policy away from its current argmax action; setting target instead pulls
// it toward that action.
struct AttackConfig {
    double epsilon = 1.0 / 255.0;
    double alpha = 1.0 / 2550.0;
    int steps = 50;
    std::optional<int> target;
};

// epsilon in [0, 1], steps >= 1, and (for epsilon > 0) 0 < alpha <= epsilon.
// epsilon == 0 is the degenerate no-op budget.
void validate_attack_config(const AttackConfig& config);

struct PerturbationResult {
    Observation adversarial;   // perturbed observation, clipped to [0, 1]
    Field eta;                 // adversarial - original
    double linf_norm = 0.0;
    double l2_norm = 0.0;
    int original_action = 0;
    int perturbed_action = 0;
    bool success = false;      // argmax changed
    double epsilon_used = 0.0;
};

// Single step: adv = clip_[0,1](s + epsilon * sign(grad J)), with the loss J
// the cross-entropy of softmax(Q) against the original argmax action (or the
// target action, descending, when one is set). sign(0) is 0.
PerturbationResult fgsm(const QNetwork& net, const Observation& obs,
                        const AttackConfig& config);

// Iterated FGSM with step size alpha, each iterate clipped to [0, 1] and
// projected back into the epsilon-ball around the original observation. The
// returned iterate is the one with the most adversarial loss value.
PerturbationResult pgd(const QNetwork& net, const Observation& obs,
                       const AttackConfig& config);

// Smallest flipping perturbation by bisection over the budget: probes
// epsilon_max first, then halves the bracket bisection_iters times, running
// the inner PGD at each probe with alpha scaled to keep the template's
// alpha/epsilon ratio. On total failure the result has success = false and a
// zero eta.
PerturbationResult minimal_perturbation(const QNetwork& net, const Observation& obs,
                                        double epsilon_max, const AttackConfig& inner,
                                        int bisection_iters);

}  // namespace qprobe
