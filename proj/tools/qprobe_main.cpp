#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qprobe/report.hpp"

namespace {

int run(int argc, char** argv) {
    CLI::App app{"Train, evaluate and probe small grid-world Q-policies"};
    app.require_subcommand(1);

    qprobe::TrainJob train_job;
    std::optional<double> train_eps;
    CLI::App* train = app.add_subcommand("train", "Train a policy and write the model");
    train->add_option("--env", train_job.env_path, "grid config file")->required();
    train->add_option("--out", train_job.out_dir, "output directory")->required();
    train->add_option("--seed", train_job.seed, "RNG seed");
    train->add_option("--steps", train_job.total_steps, "training steps");
    train->add_flag("--adversarial", train_job.adversarial,
                    "train against PGD-perturbed observations");
    train->add_option("--eps", train_eps, "training attack budget (default 8/255)");

    qprobe::EvalJob eval_job;
    std::optional<double> attack_eps;
    std::optional<double> eval_alpha;
    std::uint64_t unused_seed = 1;
    CLI::App* eval = app.add_subcommand("eval", "Greedy evaluation of a trained model");
    eval->add_option("--env", eval_job.env_path, "grid config file")->required();
    eval->add_option("--model", eval_job.model_path, "model file")->required();
    eval->add_option("--out", eval_job.out_dir, "output directory")->required();
    eval->add_option("--episodes", eval_job.episodes, "evaluation episodes");
    eval->add_option("--attack-eps", attack_eps, "evaluate under PGD with this budget");
    eval->add_option("--alpha", eval_alpha, "PGD step size (default eps/10)");
    eval->add_option("--attack-steps", eval_job.attack_steps, "PGD iterations");
    eval->add_option("--seed", unused_seed, "accepted everywhere; eval itself is greedy");

    qprobe::AnalyzeJob analyze_job;
    std::optional<double> analyze_alpha;
    CLI::App* analyze =
        app.add_subcommand("analyze", "Minimal perturbations, spectra and saliency maps");
    analyze->add_option("--env", analyze_job.env_path, "grid config file")->required();
    analyze
        ->add_option("--model", analyze_job.model_paths,
                     "model file; twice for a vanilla/adversarial pair")
        ->required()
        ->expected(1, 2);
    analyze->add_option("--out", analyze_job.out_dir, "report directory")->required();
    analyze->add_option("--eps", analyze_job.attack.epsilon, "perturbation budget");
    analyze->add_option("--alpha", analyze_alpha, "PGD step size (default eps/10)");
    analyze->add_option("--attack-steps", analyze_job.attack.steps, "PGD iterations");
    analyze->add_option("--bisect", analyze_job.attack.bisection_iters,
                        "bisection iterations");
    analyze->add_option("--rollout", analyze_job.rollout, "rollout states per model");
    analyze->add_option("--temperature", analyze_job.temperature, "HMAP softmax temperature");
    analyze->add_option("--seed", unused_seed, "accepted everywhere; analysis is deterministic");
    analyze->add_option("--map-override", analyze_job.map_override_path,
                        "compute metrics on this map CSV instead (test hook)");

    CLI11_PARSE(app, argc, argv);

    if (train->parsed()) {
        train_job.train_epsilon = train_eps;
        std::string model_path = qprobe::run_train(train_job);
        std::printf("wrote %s\n", model_path.c_str());
        return 0;
    }
    if (eval->parsed()) {
        eval_job.attack_epsilon = attack_eps;
        eval_job.alpha = eval_alpha;
        qprobe::EvalReport report = qprobe::run_eval(eval_job);
        std::printf("mean return over %d episodes: %.6f\n", report.episodes,
                    report.mean_return);
        return 0;
    }
    analyze_job.attack.alpha = analyze_alpha;
    qprobe::AnalyzeSummary summary = qprobe::run_analyze(analyze_job);
    for (const auto& per : summary.models) {
        std::printf("%s: %d states, %d flipped", per.label.c_str(), per.states,
                    per.successes);
        if (per.centroid)
            std::printf(", spectral centroid %.4f", *per.centroid);
        std::printf("\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
