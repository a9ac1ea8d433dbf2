#include "qprobe/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace qprobe {

void validate_train_config(const TrainConfig& config) {
    if (config.total_steps < 0)
        throw std::invalid_argument("total_steps must be non-negative");
    if (config.replay_capacity < 1)
        throw std::invalid_argument("replay_capacity must be positive");
    if (config.batch_size < 1)
        throw std::invalid_argument("batch_size must be positive");
    if (!(config.learning_rate > 0.0))
        throw std::invalid_argument("learning_rate must be positive");
    if (config.target_sync_interval < 1)
        throw std::invalid_argument("target_sync_interval must be positive");
    if (config.eps_start < 0.0 || config.eps_start > 1.0 ||
        config.eps_end < 0.0 || config.eps_end > 1.0)
        throw std::invalid_argument("exploration rates must lie in [0, 1]");
    if (config.eps_decay_steps < 1)
        throw std::invalid_argument("eps_decay_steps must be positive");
    for (int h : config.hidden_sizes)
        if (h < 1) throw std::invalid_argument("hidden layer sizes must be positive");
    if (config.adversarial) {
        validate_attack_config(config.attack);
        if (config.attack.target)
            throw std::invalid_argument("adversarial training uses untargeted attacks");
    }
}

ReplayBuffer::ReplayBuffer(int capacity) : capacity_(capacity) {
    if (capacity < 1)
        throw std::invalid_argument("replay capacity must be positive");
    items_.reserve(static_cast<std::size_t>(capacity));
}

void ReplayBuffer::push(Transition t) {
    if (size() < capacity_) {
        items_.push_back(std::move(t));
    } else {
        items_[next_] = std::move(t);
    }
    next_ = (next_ + 1) % capacity_;
}

void sgd_td_step(QNetwork& online, const QNetwork& target,
                 std::span<const Transition> batch, double learning_rate,
                 double discount) {
    if (batch.empty())
        throw std::invalid_argument("TD update on an empty batch");

    ParamGradients grads = zero_gradients(online);
    const double inv_batch = 1.0 / static_cast<double>(batch.size());
    for (const Transition& t : batch) {
        ForwardTrace trace = forward_trace(online, t.state);
        const std::vector<double>& q = trace.activations.back();
        if (t.action < 0 || t.action >= online.action_count)
            throw std::out_of_range("transition action out of range");

        double y = t.reward;
        if (!t.terminal) {
            int a_star = argmax_action(forward(online, t.next_state));
            y += discount * forward(target, t.next_state)[a_star];
        }

        std::vector<double> dq(static_cast<std::size_t>(online.action_count), 0.0);
        dq[t.action] = 2.0 * (q[t.action] - y) * inv_batch;
        accumulate_param_gradients(online, trace, dq, grads);
    }
    apply_sgd_update(online, grads, learning_rate);
}

DqnTrainer::DqnTrainer(GridSpec spec, TrainConfig config)
    : spec_(std::move(spec)),
      config_(std::move(config)),
      rng_(config_.seed),
      online_(make_network(spec_.obs_height(), spec_.obs_width(),
                           config_.hidden_sizes, kActionCount, rng_)),
      target_(online_),
      replay_(config_.replay_capacity) {
    validate_grid(spec_);
    validate_train_config(config_);
    begin_episode();
}

double DqnTrainer::epsilon_at(int step_index) const {
    double frac = static_cast<double>(step_index) /
                  static_cast<double>(config_.eps_decay_steps);
    frac = std::min(frac, 1.0);
    return config_.eps_start + frac * (config_.eps_end - config_.eps_start);
}

Observation DqnTrainer::prepare(const Observation& clean) {
    if (!config_.adversarial) return clean;
    PerturbationResult r = pgd(online_, clean, config_.attack);
    max_perturbation_ = std::max(max_perturbation_, r.linf_norm);
    return std::move(r.adversarial);
}

void DqnTrainer::begin_episode() {
    auto [state, obs] = reset(spec_);
    env_state_ = state;
    current_ = prepare(obs);
    episode_return_ = 0.0;
    episode_steps_ = 0;
}

void DqnTrainer::step() {
    if (done()) return;

    double eps = epsilon_at(steps_done_);
    int action;
    if (rng_.uniform() < eps) {
        action = rng_.uniform_int(kActionCount);
    } else {
        action = argmax_action(forward(online_, current_));
    }

    StepResult result = qprobe::step(spec_, env_state_, static_cast<Action>(action));
    Observation next = prepare(result.obs);
    replay_.push({current_, action, result.reward, next, result.terminal});

    episode_return_ += result.reward;
    episode_steps_ += 1;

    if (replay_.size() >= config_.batch_size) {
        std::vector<Transition> batch;
        batch.reserve(static_cast<std::size_t>(config_.batch_size));
        for (int i = 0; i < config_.batch_size; ++i)
            batch.push_back(replay_.at(rng_.uniform_int(replay_.size())));
        sgd_td_step(online_, target_, batch, config_.learning_rate, spec_.discount);
    }

    steps_done_ += 1;
    if (steps_done_ % config_.target_sync_interval == 0) target_ = online_;

    if (result.terminal) {
        episodes_.push_back({episode_index_, episode_return_, episode_steps_, eps});
        episode_index_ += 1;
        begin_episode();
    } else {
        env_state_ = result.state;
        current_ = std::move(next);
    }
}

void DqnTrainer::run() {
    while (!done()) step();
}

TrainResult train(const GridSpec& spec, const TrainConfig& config) {
    DqnTrainer trainer(spec, config);
    trainer.run();
    return {trainer.online(), trainer.episode_log()};
}

EvalReport evaluate(const QNetwork& net, const GridSpec& spec, int episodes,
                    const std::optional<AttackConfig>& attack) {
    validate_network(net);
    validate_grid(spec);
    if (episodes < 1)
        throw std::invalid_argument("evaluation needs at least one episode");
    if (attack) validate_attack_config(*attack);

    EvalReport report;
    report.episodes = episodes;
    for (int ep = 0; ep < episodes; ++ep) {
        auto [state, obs] = reset(spec);
        double ret = 0.0;
        bool terminal = false;
        while (!terminal) {
            Observation seen = attack ? pgd(net, obs, *attack).adversarial : obs;
            int action = argmax_action(forward(net, seen));
            StepResult result = step(spec, state, static_cast<Action>(action));
            ret += result.reward;
            terminal = result.terminal;
            state = result.state;
            obs = std::move(result.obs);
        }
        report.episode_returns.push_back(ret);
    }
    double sum = 0.0;
    for (double r : report.episode_returns) sum += r;
    report.mean_return = sum / static_cast<double>(episodes);
    return report;
}

std::vector<Observation> greedy_rollout_states(const QNetwork& net,
                                               const GridSpec& spec,
                                               int max_states) {
    validate_network(net);
    validate_grid(spec);
    if (max_states < 1)
        throw std::invalid_argument("rollout needs room for at least one state");

    std::vector<Observation> states;
    auto seen = [&](const Observation& obs) {
        for (const Observation& s : states)
            if (s.pixels == obs.pixels) return true;
        return false;
    };

    auto [state, obs] = reset(spec);
    states.push_back(obs);
    bool terminal = false;
    while (!terminal && static_cast<int>(states.size()) < max_states) {
        int action = argmax_action(forward(net, obs));
        StepResult result = step(spec, state, static_cast<Action>(action));
        terminal = result.terminal;
        state = result.state;
        obs = std::move(result.obs);
        if (!seen(obs)) states.push_back(obs);
    }
    return states;
}

}  // namespace qprobe
