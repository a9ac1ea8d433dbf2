#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qprobe/attacks.hpp"
#include "qprobe/gridworld.hpp"
#include "qprobe/qnetwork.hpp"
#include "qprobe/rng.hpp"

namespace qprobe {

struct TrainConfig {
    int total_steps = 20000;
    int replay_capacity = 20000;
    int batch_size = 16;
    double learning_rate = 0.05;
    int target_sync_interval = 250;
    double eps_start = 1.0;
    double eps_end = 0.05;
    int eps_decay_steps = 8000;
    std::vector<int> hidden_sizes = {64};
    bool adversarial = false;
    AttackConfig attack = {8.0 / 255.0, 2.0 / 255.0, 5, std::nullopt};
    std::uint64_t seed = 1;
};

void validate_train_config(const TrainConfig& config);

struct Transition {
    Observation state;
    int action = 0;
    double reward = 0.0;
    Observation next_state;
    bool terminal = false;
};

// Fixed-capacity ring buffer; once full, each push evicts the oldest entry.
class ReplayBuffer {
public:
    explicit ReplayBuffer(int capacity);
    void push(Transition t);
    const Transition& at(int i) const { return items_[i]; }
    int size() const { return static_cast<int>(items_.size()); }
    int capacity() const { return capacity_; }

private:
    int capacity_;
    int next_ = 0;
    std::vector<Transition> items_;
};

struct EpisodeLog {
    int episode = 0;
    double episode_return = 0.0;  // undiscounted reward sum
    int steps = 0;
    double epsilon = 0.0;         // exploration rate when the episode ended
};

// One SGD step on the mean squared TD error of the batch, with double-Q
// targets: y = r + discount * Q_target(s', argmax_a Q_online(s', a)), or
// y = r on terminal transitions.
void sgd_td_step(QNetwork& online, const QNetwork& target,
                 std::span<const Transition> batch, double learning_rate,
                 double discount);

// Q-learning driver. All randomness (weight init, exploration, replay
// sampling) comes from one seeded stream, so a fixed seed reproduces the
// trained weights bit for bit. In adversarial mode every observation is
// PGD-perturbed against the current online network before it is used for
// action selection or stored in the replay buffer.
class DqnTrainer {
public:
    DqnTrainer(GridSpec spec, TrainConfig config);

    bool done() const { return steps_done_ >= config_.total_steps; }
    void step();
    void run();

    const QNetwork& online() const { return online_; }
    const QNetwork& target() const { return target_; }
    const ReplayBuffer& replay() const { return replay_; }
    const std::vector<EpisodeLog>& episode_log() const { return episodes_; }
    int steps_done() const { return steps_done_; }
    double epsilon_at(int step_index) const;

    // Largest ||perturbed - clean||_inf seen while producing training states.
    double max_training_perturbation() const { return max_perturbation_; }

private:
    Observation prepare(const Observation& clean);
    void begin_episode();

    GridSpec spec_;
    TrainConfig config_;
    Rng rng_;
    QNetwork online_;
    QNetwork target_;
    ReplayBuffer replay_;
    EnvState env_state_;
    Observation current_;          // possibly perturbed observation
    std::vector<EpisodeLog> episodes_;
    int steps_done_ = 0;
    int episode_index_ = 0;
    double episode_return_ = 0.0;
    int episode_steps_ = 0;
    double max_perturbation_ = 0.0;
};

struct TrainResult {
    QNetwork net;
    std::vector<EpisodeLog> log;
};

TrainResult train(const GridSpec& spec, const TrainConfig& config);

struct EvalReport {
    std::vector<double> episode_returns;
    double mean_return = 0.0;
    int episodes = 0;
};

// Greedy (argmax) rollouts; returns are undiscounted sums. When an attack
// budget is given, each observation is PGD-perturbed before action selection.
EvalReport evaluate(const QNetwork& net, const GridSpec& spec, int episodes,
                    const std::optional<AttackConfig>& attack = std::nullopt);

// Distinct observations visited by the greedy policy in one episode from
// reset, in first-visit order, truncated at max_states or episode end.
std::vector<Observation> greedy_rollout_states(const QNetwork& net,
                                               const GridSpec& spec,
                                               int max_states);

}  // namespace qprobe
