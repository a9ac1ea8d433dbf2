#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qprobe/sensitivity.hpp"
#include "qprobe/trainer.hpp"

namespace qprobe {

// Attack schedule shared by the analysis pipeline. alpha, when unset,
// defaults to epsilon / 10.
struct AttackParams {
    double epsilon = 1.0 / 255.0;
    std::optional<double> alpha;
    int steps = 50;
    int bisection_iters = 12;

    AttackConfig config() const {
        return {epsilon, alpha.value_or(epsilon / 10.0), steps, std::nullopt};
    }
};

struct TrainJob {
    std::string env_path;
    std::string out_dir;
    std::uint64_t seed = 1;
    int total_steps = 20000;
    bool adversarial = false;
    std::optional<double> train_epsilon;  // defaults to 8/255
};

// Writes <out>/models/<label>.model and <out>/models/<label>_train_log.csv,
// label "vanilla" or "adversarial". Returns the model path.
std::string run_train(const TrainJob& job);

struct EvalJob {
    std::string env_path;
    std::string model_path;
    std::string out_dir;
    int episodes = 10;
    std::optional<double> attack_epsilon;  // attack disabled when unset
    std::optional<double> alpha;
    int attack_steps = 50;
};

// Writes <out>/eval.csv (per-episode returns plus a mean row).
EvalReport run_eval(const EvalJob& job);

struct AnalyzeJob {
    std::string env_path;
    std::vector<std::string> model_paths;  // one or two: vanilla, adversarial
    std::string out_dir;
    AttackParams attack;
    int rollout = 30;
    double temperature = 1.0;
    std::string map_override_path;  // test hook: metrics on a loaded map
};

struct AnalyzeSummary {
    struct PerModel {
        std::string label;
        int states = 0;
        int successes = 0;
        std::optional<double> centroid;
        double kmap_sparsity = 0.0;
        double kmap_entropy = 0.0;
        double hmap_sparsity = 0.0;
        double hmap_entropy = 0.0;
    };
    std::vector<PerModel> models;
};

// Full pipeline per model: greedy rollout -> minimal perturbations ->
// spectra and averaged E(f) -> KMAP/HMAP -> metrics. Report layout under
// out_dir: models/, attacks/, spectra/, maps/, metrics.csv, comparison.csv
// (the latter with two models). Zero successful perturbations skip the
// spectra outputs and leave a SKIPPED marker instead.
AnalyzeSummary run_analyze(const AnalyzeJob& job);

}  // namespace qprobe
