#include "qprobe/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "qprobe/model_io.hpp"
#include "qprobe/spectrum.hpp"

namespace qprobe {

namespace fs = std::filesystem;

namespace {

std::ofstream open_csv(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    return out;
}

void finish_csv(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

std::string padded(int n) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%03d", n);
    return buf;
}

std::vector<std::string> model_labels(std::size_t count) {
    if (count == 1) return {"vanilla"};
    return {"vanilla", "adversarial"};
}

}  // namespace

std::string run_train(const TrainJob& job) {
    GridSpec spec = load_grid_spec(job.env_path);

    TrainConfig config;
    config.total_steps = job.total_steps;
    config.seed = job.seed;
    config.adversarial = job.adversarial;
    if (job.train_epsilon) {
        double eps = *job.train_epsilon;
        config.attack = {eps, eps / 4.0, 5, std::nullopt};
    }
    validate_train_config(config);

    TrainResult result = train(spec, config);

    const std::string label = job.adversarial ? "adversarial" : "vanilla";
    fs::path models_dir = fs::path(job.out_dir) / "models";
    fs::create_directories(models_dir);

    fs::path model_path = models_dir / (label + ".model");
    save_model(model_path.string(), result.net);

    fs::path log_path = models_dir / (label + "_train_log.csv");
    std::ofstream log = open_csv(log_path);
    log << "episode_index,return,steps,epsilon\n";
    for (const EpisodeLog& e : result.log)
        log << e.episode << "," << format_real(e.episode_return) << "," << e.steps
            << "," << format_real(e.epsilon) << "\n";
    finish_csv(log, log_path);

    return model_path.string();
}

EvalReport run_eval(const EvalJob& job) {
    GridSpec spec = load_grid_spec(job.env_path);
    QNetwork net = load_model(job.model_path);

    std::optional<AttackConfig> attack;
    if (job.attack_epsilon) {
        double eps = *job.attack_epsilon;
        attack = AttackConfig{eps, job.alpha.value_or(eps / 10.0), job.attack_steps,
                              std::nullopt};
    }

    EvalReport report = evaluate(net, spec, job.episodes, attack);

    fs::create_directories(job.out_dir);
    fs::path eval_path = fs::path(job.out_dir) / "eval.csv";
    std::ofstream out = open_csv(eval_path);
    out << "episode,return\n";
    for (std::size_t i = 0; i < report.episode_returns.size(); ++i)
        out << i << "," << format_real(report.episode_returns[i]) << "\n";
    out << "mean," << format_real(report.mean_return) << "\n";
    finish_csv(out, eval_path);
    return report;
}

AnalyzeSummary run_analyze(const AnalyzeJob& job) {
    if (job.model_paths.empty() || job.model_paths.size() > 2)
        throw std::invalid_argument("analyze takes one or two model files");
    if (job.rollout < 1)
        throw std::invalid_argument("rollout must be positive");
    if (!(job.temperature > 0.0))
        throw std::invalid_argument("temperature must be positive");
    if (!(job.attack.epsilon > 0.0))
        throw std::invalid_argument("analysis epsilon must be positive");

    GridSpec spec = load_grid_spec(job.env_path);
    std::vector<QNetwork> nets;
    for (const std::string& p : job.model_paths) nets.push_back(load_model(p));

    std::optional<Field> override_map;
    if (!job.map_override_path.empty())
        override_map = read_field_csv(job.map_override_path);

    const fs::path out(job.out_dir);
    fs::create_directories(out / "models");
    fs::create_directories(out / "attacks");
    fs::create_directories(out / "spectra");
    fs::create_directories(out / "maps");

    const std::vector<std::string> labels = model_labels(nets.size());
    const AttackConfig inner = job.attack.config();

    AnalyzeSummary summary;
    std::ofstream metrics = open_csv(out / "metrics.csv");
    metrics << "map_kind,policy_label,sparsity,entropy\n";

    for (std::size_t m = 0; m < nets.size(); ++m) {
        const QNetwork& net = nets[m];
        const std::string& label = labels[m];
        AnalyzeSummary::PerModel per;
        per.label = label;

        fs::copy_file(job.model_paths[m], out / "models" / (label + ".model"),
                      fs::copy_options::overwrite_existing);

        std::vector<Observation> states = greedy_rollout_states(net, spec, job.rollout);
        per.states = static_cast<int>(states.size());

        std::vector<PerturbationResult> attacks;
        attacks.reserve(states.size());
        for (const Observation& s : states)
            attacks.push_back(minimal_perturbation(net, s, job.attack.epsilon, inner,
                                                   job.attack.bisection_iters));

        fs::path attacks_csv = out / "attacks" / (label + "_attacks.csv");
        std::ofstream acsv = open_csv(attacks_csv);
        acsv << "state_index,success,epsilon_used,linf,l2,original_action,"
                "perturbed_action\n";
        for (std::size_t i = 0; i < attacks.size(); ++i) {
            const PerturbationResult& r = attacks[i];
            acsv << i << "," << (r.success ? 1 : 0) << ","
                 << format_real(r.epsilon_used) << "," << format_real(r.linf_norm)
                 << "," << format_real(r.l2_norm) << "," << r.original_action << ","
                 << r.perturbed_action << "\n";
            write_field_csv(
                (out / "attacks" / (label + "_eta_" + padded(static_cast<int>(i)) + ".csv"))
                    .string(),
                r.eta);
        }
        finish_csv(acsv, attacks_csv);

        std::vector<SpectrumProfile> profiles;
        for (std::size_t i = 0; i < attacks.size(); ++i) {
            if (!attacks[i].success) continue;
            Spectrum spectrum = dft2(attacks[i].eta);
            profiles.push_back(energy_by_max_frequency(spectrum));

            Field power(spectrum.height, spectrum.width);
            for (int k = 0; k < power.size(); ++k)
                power.values[k] = std::log1p(std::norm(spectrum.coefficients[k]));
            std::string stem = label + "_state_" + padded(static_cast<int>(i)) + "_power";
            write_field_csv((out / "spectra" / (stem + ".csv")).string(), power);
            write_field_pgm((out / "spectra" / (stem + ".pgm")).string(), power);
        }
        per.successes = static_cast<int>(profiles.size());

        if (profiles.empty()) {
            fs::path marker = out / "spectra" / (label + "_SKIPPED.txt");
            std::ofstream skip = open_csv(marker);
            skip << "no successful perturbations at epsilon_max "
                 << format_real(job.attack.epsilon) << "\n";
            finish_csv(skip, marker);
        } else {
            SpectrumProfile mean = average_profiles(profiles);
            fs::path ef_path = out / "spectra" / (label + "_ef.csv");
            std::ofstream ef = open_csv(ef_path);
            ef << "f,energy\n";
            for (std::size_t f = 0; f < mean.energies.size(); ++f)
                ef << f << "," << format_real(mean.energies[f]) << "\n";
            finish_csv(ef, ef_path);
            per.centroid = spectral_centroid(mean);
        }

        SensitivityMap k_map;
        SensitivityMap h_map;
        if (override_map) {
            k_map = {SensitivityMap::Kind::kK, *override_map, 1, 1.0};
            h_map = {SensitivityMap::Kind::kH, *override_map, 1, job.temperature};
        } else {
            k_map = kmap(net, states);
            h_map = hmap(net, states, job.temperature);
        }
        write_field_csv((out / "maps" / (label + "_kmap.csv")).string(), k_map.values);
        write_field_pgm((out / "maps" / (label + "_kmap.pgm")).string(), k_map.values);
        write_field_csv((out / "maps" / (label + "_hmap.csv")).string(), h_map.values);
        write_field_pgm((out / "maps" / (label + "_hmap.pgm")).string(), h_map.values);

        auto sparsity_or_nan = [](const SensitivityMap& map) {
            try {
                return sparsity(map);
            } catch (const std::invalid_argument&) {
                return std::numeric_limits<double>::quiet_NaN();
            }
        };
        per.kmap_sparsity = sparsity_or_nan(k_map);
        per.kmap_entropy = map_entropy(k_map);
        per.hmap_sparsity = sparsity_or_nan(h_map);
        per.hmap_entropy = map_entropy(h_map);

        metrics << "K," << label << "," << format_real(per.kmap_sparsity) << ","
                << format_real(per.kmap_entropy) << "\n";
        metrics << "H," << label << "," << format_real(per.hmap_sparsity) << ","
                << format_real(per.hmap_entropy) << "\n";

        summary.models.push_back(std::move(per));
    }
    finish_csv(metrics, out / "metrics.csv");

    if (nets.size() == 2) {
        fs::path cmp_path = out / "comparison.csv";
        std::ofstream cmp = open_csv(cmp_path);
        cmp << "policy_label,spectral_centroid,successful_perturbations,"
               "states_analyzed\n";
        for (const AnalyzeSummary::PerModel& per : summary.models) {
            double centroid =
                per.centroid.value_or(std::numeric_limits<double>::quiet_NaN());
            cmp << per.label << "," << format_real(centroid) << "," << per.successes
                << "," << per.states << "\n";
        }
        finish_csv(cmp, cmp_path);
    }
    return summary;
}

}  // namespace qprobe
