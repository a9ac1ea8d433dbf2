#include "qprobe/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qprobe {

void validate_attack_config(const AttackConfig& config) {
    if (config.epsilon < 0.0 || config.epsilon > 1.0)
        throw std::invalid_argument("attack epsilon must lie in [0, 1]");
    if (config.steps < 1)
        throw std::invalid_argument("attack needs at least one step");
    if (config.epsilon > 0.0) {
        if (!(config.alpha > 0.0) || config.alpha > config.epsilon)
            throw std::invalid_argument("attack alpha must lie in (0, epsilon]");
    }
}

static double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

static void check_target(const QNetwork& net, const AttackConfig& config) {
    if (config.target && (*config.target < 0 || *config.target >= net.action_count))
        throw std::out_of_range("attack target action out of range");
}

// Fills in eta, norms, actions and the success flag for a finished iterate.
static PerturbationResult finish(const QNetwork& net, const Observation& obs,
                                 Observation adversarial, int original_action,
                                 double epsilon_used) {
    PerturbationResult result;
    result.eta = Field(obs.height, obs.width);
    double linf = 0.0;
    double l2sq = 0.0;
    for (int i = 0; i < obs.size(); ++i) {
        double d = adversarial.pixels[i] - obs.pixels[i];
        result.eta.values[i] = d;
        linf = std::max(linf, std::fabs(d));
        l2sq += d * d;
    }
    result.linf_norm = linf;
    result.l2_norm = std::sqrt(l2sq);
    result.original_action = original_action;
    result.perturbed_action = argmax_action(forward(net, adversarial));
    result.success = result.perturbed_action != original_action;
    result.epsilon_used = epsilon_used;
    result.adversarial = std::move(adversarial);
    return result;
}

PerturbationResult fgsm(const QNetwork& net, const Observation& obs,
                        const AttackConfig& config) {
    validate_attack_config(config);
    check_target(net, config);

    int original_action = argmax_action(forward(net, obs));
    if (config.epsilon == 0.0)
        return finish(net, obs, obs, original_action, 0.0);

    int label = config.target.value_or(original_action);
    double direction = config.target ? -1.0 : 1.0;
    Field grad = input_gradient(net, obs, LossSpec::cross_entropy(label));

    Observation adv = obs;
    for (int i = 0; i < obs.size(); ++i) {
        double v = obs.pixels[i] + direction * config.epsilon * sign(grad.values[i]);
        adv.pixels[i] = std::clamp(v, 0.0, 1.0);
    }
    return finish(net, obs, std::move(adv), original_action, config.epsilon);
}

PerturbationResult pgd(const QNetwork& net, const Observation& obs,
                       const AttackConfig& config) {
    validate_attack_config(config);
    check_target(net, config);

    int original_action = argmax_action(forward(net, obs));
    if (config.epsilon == 0.0)
        return finish(net, obs, obs, original_action, 0.0);

    int label = config.target.value_or(original_action);
    double direction = config.target ? -1.0 : 1.0;
    LossSpec loss = LossSpec::cross_entropy(label);

    Observation x = obs;
    Observation best = obs;
    bool have_best = false;
    double best_loss = 0.0;

    for (int k = 0; k < config.steps; ++k) {
        Field grad = input_gradient(net, x, loss);
        for (int i = 0; i < obs.size(); ++i) {
            double v = x.pixels[i] + direction * config.alpha * sign(grad.values[i]);
            v = std::clamp(v, 0.0, 1.0);
            v = std::clamp(v, obs.pixels[i] - config.epsilon,
                           obs.pixels[i] + config.epsilon);
            x.pixels[i] = v;
        }
        double j = loss_value(forward(net, x), loss);
        // Most adversarial so far: highest loss when ascending, lowest when
        // descending toward a target.
        if (!have_best || (config.target ? j < best_loss : j > best_loss)) {
            best = x;
            best_loss = j;
            have_best = true;
        }
    }
    return finish(net, obs, std::move(best), original_action, config.epsilon);
}

PerturbationResult minimal_perturbation(const QNetwork& net, const Observation& obs,
                                        double epsilon_max, const AttackConfig& inner,
                                        int bisection_iters) {
    if (!(epsilon_max > 0.0) || epsilon_max > 1.0)
        throw std::invalid_argument("epsilon_max must lie in (0, 1]");
    if (bisection_iters < 1)
        throw std::invalid_argument("bisection needs at least one iteration");
    if (!(inner.epsilon > 0.0))
        throw std::invalid_argument("inner attack template needs a positive epsilon");
    validate_attack_config(inner);
    check_target(net, inner);

    double alpha_ratio = inner.alpha / inner.epsilon;
    auto probe = [&](double eps) {
        AttackConfig cfg = inner;
        cfg.epsilon = eps;
        cfg.alpha = eps * alpha_ratio;
        return pgd(net, obs, cfg);
    };

    PerturbationResult at_max = probe(epsilon_max);
    if (!at_max.success) {
        int original_action = argmax_action(forward(net, obs));
        PerturbationResult failure = finish(net, obs, obs, original_action, epsilon_max);
        failure.success = false;
        return failure;
    }

    PerturbationResult best = std::move(at_max);
    double lo = 0.0;
    double hi = epsilon_max;
    for (int i = 0; i < bisection_iters; ++i) {
        double mid = 0.5 * (lo + hi);
        PerturbationResult r = probe(mid);
        if (r.success) {
            best = std::move(r);
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return best;
}

}  // namespace qprobe
