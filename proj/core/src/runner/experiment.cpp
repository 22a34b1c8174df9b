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
#include "qhybrid/runner/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "qhybrid/errors.hpp"

namespace qhybrid {
namespace {

constexpr std::size_t kEvalChunk = 512;

std::uint64_t stream_seed(std::uint64_t run_seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(run_seed),
                      static_cast<std::uint32_t>(run_seed >> 32), stream};
    std::mt19937_64 gen(seq);
    return gen();
}

double dataset_accuracy(const MainModel &model, const BinaryDataset &data) {
    if (data.size() == 0) {
        throw ArgumentError("evaluate called on an empty dataset");
    }
    std::size_t hits = 0;
    std::vector<std::size_t> idx;
    for (std::size_t start = 0; start < data.size(); start += kEvalChunk) {
        const std::size_t end = std::min(data.size(), start + kEvalChunk);
        idx.resize(end - start);
        std::iota(idx.begin(), idx.end(), start);
        const Matrix logits = hybrid_predict(model, data.gather(idx));
        for (std::size_t r = 0; r < idx.size(); ++r) {
            hits += predicted_class(logits.row(r)) == data.labels[idx[r]] ? 1 : 0;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

} // namespace

bool RunRecord::same_result(const RunRecord &other) const {
    return index == other.index && seed == other.seed && ok == other.ok &&
           error == other.error && epochs == other.epochs &&
           final_train_accuracy == other.final_train_accuracy &&
           final_val_accuracy == other.final_val_accuracy &&
           parameter_count == other.parameter_count;
}

RunSeeds RunSeeds::derive(std::uint64_t run_seed) {
    return RunSeeds{stream_seed(run_seed, 1), stream_seed(run_seed, 2),
                    stream_seed(run_seed, 3)};
}

BinaryDataset load_binary_dataset(const RunConfig &config) {
    return filter_digits(load_idx(config.data.images, config.data.labels));
}

RunRecord run_training(const RunConfig &config, const BinaryDataset &data,
                       std::uint64_t seed, const ProgressFn &progress) {
    const auto started = std::chrono::steady_clock::now();
    if (data.pixels_per_image != kInputWidth) {
        throw DataError("images have " + std::to_string(data.pixels_per_image) +
                        " pixels, models expect " + std::to_string(kInputWidth));
    }
    const RunSeeds seeds = RunSeeds::derive(seed);
    const SplitDataset parts =
        split(data, config.train.train_size, config.train.val_size, seeds.split);

    std::mt19937_64 init_rng(seeds.init);
    MainModel model = build_model(config.model, init_rng);
    OptimizerState optimizer = OptimizerState::for_model(model);

    RunRecord record;
    record.seed = seed;
    record.parameter_count = model.parameter_count();
    for (std::size_t epoch = 1; epoch <= config.train.epochs; ++epoch) {
        double loss_sum = 0.0;
        const auto order = batches(parts.train.size(), config.train.batch_size,
                                   seeds.shuffle, epoch);
        for (const auto &batch : order) {
            const Matrix x = parts.train.gather(batch);
            const std::vector<int> y = parts.train.gather_labels(batch);
            const StepResult step =
                train_step(model, optimizer, x, y, config.train.learning_rate);
            loss_sum += step.loss * static_cast<double>(batch.size());
        }
        EpochMetrics m;
        m.epoch = epoch;
        m.train_loss = loss_sum / static_cast<double>(parts.train.size());
        m.train_accuracy = dataset_accuracy(model, parts.train);
        m.val_accuracy = dataset_accuracy(model, parts.validation);
        record.epochs.push_back(m);
        if (progress) {
            progress(record, m);
        }
    }
    if (record.epochs.empty()) {
        record.final_train_accuracy = dataset_accuracy(model, parts.train);
        record.final_val_accuracy = dataset_accuracy(model, parts.validation);
    } else {
        record.final_train_accuracy = record.epochs.back().train_accuracy;
        record.final_val_accuracy = record.epochs.back().val_accuracy;
    }
    record.wall_seconds = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - started)
                              .count();
    return record;
}

RunRecord run_training(const RunConfig &config, std::uint64_t seed) {
    return run_training(config, load_binary_dataset(config), seed);
}

BootstrapSummary summarize_records(const std::vector<RunRecord> &records) {
    std::vector<AccuracyPair> finals;
    std::size_t failed = 0;
    for (const auto &r : records) {
        if (r.ok) {
            finals.push_back(AccuracyPair{r.final_train_accuracy, r.final_val_accuracy});
        } else {
            ++failed;
        }
    }
    if (finals.empty()) {
        throw TrainingError("all " + std::to_string(records.size()) +
                            " bootstrap runs failed");
    }
    return summarize(finals, failed);
}

BootstrapResult run_bootstrap(const RunConfig &config, const BinaryDataset &data,
                              std::size_t workers, const ProgressFn &progress) {
    const std::size_t count = config.run.bootstrap_count;
    BootstrapResult result;
    result.records.resize(count);

    std::mutex progress_mutex;
    auto guarded_progress = [&](const RunRecord &r, const EpochMetrics &m) {
        if (progress) {
            std::lock_guard lock(progress_mutex);
            progress(r, m);
        }
    };
    auto run_one = [&](std::size_t k) {
        const std::uint64_t seed = config.run.base_seed + k;
        RunRecord record;
        try {
            record = run_training(config, data, seed,
                                  [&](const RunRecord &r, const EpochMetrics &m) {
                                      RunRecord tagged = r;
                                      tagged.index = k;
                                      guarded_progress(tagged, m);
                                  });
        } catch (const std::exception &e) {
            record = RunRecord{};
            record.seed = seed;
            record.ok = false;
            record.error = e.what();
        }
        record.index = k;
        result.records[k] = std::move(record);
    };

    workers = std::clamp<std::size_t>(workers, 1, count);
    if (workers == 1) {
        for (std::size_t k = 0; k < count; ++k) {
            run_one(k);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < count; k = next++) {
                    run_one(k);
                }
            });
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    result.summary = summarize_records(result.records);
    return result;
}

} // namespace qhybrid
