// Copyright 2026 The qhybrid Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// qhybrid command line front end.
//
//   qhybrid run <config>          one training run with the config's base seed
//   qhybrid bootstrap <config>    bootstrap_count runs plus aggregate statistics
//   qhybrid shotnoise <config>    shot-count bound experiment on the config's circuit
//   qhybrid summarize <dir>       recompute and print the aggregate of a results dir
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "qhybrid/errors.hpp"
#include "qhybrid/runner/config.hpp"
#include "qhybrid/runner/experiment.hpp"
#include "qhybrid/runner/results_io.hpp"
#include "qhybrid/runner/shot_noise.hpp"

namespace {

struct Overrides {
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> epochs;
};

qhybrid::RunConfig load(const std::string &path, const Overrides &o) {
    qhybrid::RunConfig cfg = qhybrid::load_config(path);
    if (o.out) {
        cfg.run.out_dir = *o.out;
    }
    if (o.seed) {
        cfg.run.base_seed = *o.seed;
    }
    if (o.epochs) {
        cfg.train.epochs = *o.epochs;
    }
    return cfg;
}

void print_progress(const qhybrid::RunRecord &r, const qhybrid::EpochMetrics &m) {
    std::fprintf(stderr, "run %zu epoch %zu loss %.6f train %.4f val %.4f\n", r.index,
                 m.epoch, m.train_loss, m.train_accuracy, m.val_accuracy);
}

void print_summary(const qhybrid::BootstrapSummary &s) {
    std::cout << qhybrid::summary_document(s).to_string();
}

int cmd_run(const std::string &path, const Overrides &o, bool quiet) {
    const auto cfg = load(path, o);
    const auto data = qhybrid::load_binary_dataset(cfg);
    std::cerr << "K_tot " << cfg.parameter_count() << "\n";
    const auto record = qhybrid::run_training(
        cfg, data, cfg.run.base_seed, quiet ? qhybrid::ProgressFn{} : print_progress);
    const std::vector<qhybrid::RunRecord> records{record};
    const auto summary = qhybrid::summarize_records(records);
    qhybrid::export_metrics(records, summary, cfg, cfg.run.out_dir);
    std::cout << qhybrid::record_document(record).to_string();
    return 0;
}

int cmd_bootstrap(const std::string &path, const Overrides &o, std::size_t workers,
                  bool quiet) {
    const auto cfg = load(path, o);
    const auto data = qhybrid::load_binary_dataset(cfg);
    std::cerr << "K_tot " << cfg.parameter_count() << ", " << cfg.run.bootstrap_count
              << " runs\n";
    const auto result = qhybrid::run_bootstrap(
        cfg, data, workers, quiet ? qhybrid::ProgressFn{} : print_progress);
    qhybrid::export_metrics(result.records, result.summary, cfg, cfg.run.out_dir);
    if (result.summary.failed > 0) {
        std::cerr << "warning: " << result.summary.failed
                  << " run(s) failed and were excluded\n";
    }
    print_summary(result.summary);
    return 0;
}

int cmd_shotnoise(const std::string &path, const Overrides &o) {
    const auto cfg = load(path, o);
    if (cfg.model.middle != qhybrid::MiddleKind::Quantum) {
        throw qhybrid::ConfigError("shotnoise needs model.middle: quantum");
    }
    const auto layout = qhybrid::build_layout(cfg.model);
    std::mt19937_64 rng(cfg.run.base_seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<double> angles(layout.num_params());
    for (double &a : angles) {
        a = angle(rng);
    }
    qhybrid::ShotNoiseOptions options;
    options.epsilon = cfg.shotnoise.epsilon;
    options.trials = cfg.shotnoise.trials;
    options.shots_multiplier = cfg.shotnoise.shots_multiplier;
    options.base_seed = cfg.run.base_seed;
    const auto report = qhybrid::shot_noise_experiment(
        layout, angles, qhybrid::OutputSelection{cfg.model.selection}, options);
    qhybrid::write_shot_noise_report(report, cfg.run.out_dir / "shotnoise" / "report.txt");
    std::cout << report.to_text();
    return 0;
}

int cmd_summarize(const std::string &dir) {
    const auto records = qhybrid::read_records(dir);
    const auto summary = qhybrid::summarize_records(records);
    print_summary(summary);
    const auto stored = std::filesystem::path(dir) / "aggregate" / "summary.txt";
    if (std::filesystem::exists(stored) && !(qhybrid::read_summary(dir) == summary)) {
        std::cerr << "warning: " << stored.string()
                  << " differs from the summary of the run records\n";
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Hybrid quantum-classical binary classifier"};
    app.require_subcommand(1);

    Overrides o;
    std::string config_path;
    std::string results_dir;
    std::size_t workers = 1;
    bool quiet = false;

    auto add_overrides = [&](CLI::App *cmd) {
        cmd->add_option("config", config_path, "Config file")->required();
        cmd->add_option("--out", o.out, "Override run.out_dir");
        cmd->add_option("--seed", o.seed, "Override run.base_seed");
        cmd->add_option("--epochs", o.epochs, "Override train.epochs");
    };
    auto *run = app.add_subcommand("run", "Train one model with the base seed");
    add_overrides(run);
    run->add_flag("-q,--quiet", quiet, "No per-epoch progress");
    auto *boot = app.add_subcommand("bootstrap", "Seeded ensemble of training runs");
    add_overrides(boot);
    boot->add_option("-j,--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);
    boot->add_flag("-q,--quiet", quiet, "No per-epoch progress");
    auto *shot = app.add_subcommand("shotnoise", "Shot-count bound experiment");
    add_overrides(shot);
    auto *summ = app.add_subcommand("summarize", "Aggregate an existing results dir");
    summ->add_option("results-dir", results_dir, "Output directory of a bootstrap")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            return cmd_run(config_path, o, quiet);
        }
        if (*boot) {
            return cmd_bootstrap(config_path, o, workers, quiet);
        }
        if (*shot) {
            return cmd_shotnoise(config_path, o);
        }
        return cmd_summarize(results_dir);
    } catch (const qhybrid::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
