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
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "qhybrid/errors.hpp"
#include "qhybrid/runner/config.hpp"
#include "qhybrid/runner/document.hpp"
#include "qhybrid/runner/experiment.hpp"
#include "qhybrid/runner/results_io.hpp"
#include "qhybrid/runner/shot_noise.hpp"
#include "qhybrid/runner/statistics.hpp"

using namespace qhybrid;

namespace {

const std::string kMinimal = R"(# minimal classical config
model:
  encoder_units: 3
  middle: classical
  classical_units: 2
data:
  images: imgs.idx
  labels: "labels.idx"
)";

std::string message_of(const std::string &text) {
    try {
        (void)parse_config(text);
    } catch (const Error &e) {
        return e.what();
    }
    return "";
}

// Naive statistics used as the oracle.
double oracle_median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

double oracle_percentile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    // smallest value with at least p% of the sample at or below it
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (100.0 * static_cast<double>(i + 1) >= p * static_cast<double>(v.size()) - 1e-9) {
            return v[i];
        }
    }
    return v.back();
}

struct SyntheticRun {
    fixture::TempDir dir{"runner"};
    fixture::IdxFiles files;
    SyntheticRun() { files = fixture::write_synthetic_idx(dir.path(), 300, 21); }

    RunConfig config(const std::string &block, std::size_t epochs, std::size_t runs) {
        return parse_config(fixture::small_config(files, block, epochs, 150, 60, runs,
                                                  dir.path() / "out"));
    }
};

} // namespace

TEST_SUITE("runner") {

TEST_CASE("document parsing") {
    const auto doc = Document::parse("a:\n  x: 1 # note\n  y: '# kept'\n  z: [u1-all, u2-even]\n"
                                     "\nb:\n  x: two words\n");
    CHECK(doc.find("a", "x") == "1");
    CHECK(doc.find("a", "y") == "# kept");
    CHECK(doc.find("a", "z") == "u1-all, u2-even");
    CHECK(doc.find("b", "x") == "two words");
    CHECK_FALSE(doc.find("b", "y").has_value());
    CHECK_THROWS_AS((void)Document::parse("a:\n  x: 1\n  x: 2\n"), ConfigError);
    CHECK_THROWS_AS((void)Document::parse("  x: 1\n"), ConfigError);
    CHECK_THROWS_AS((void)Document::parse("a:\nx: 1\n"), ConfigError);
    CHECK(Document::parse(doc.to_string()).entries().size() == doc.entries().size());
    CHECK(format_double(0.1) == "0.1");
    CHECK(parse_real("x", format_double(1e-4)) == 1e-4);
    CHECK(parse_real("x", format_double(0.1 + 0.2)) == 0.1 + 0.2);
    CHECK_THROWS_AS((void)parse_uint("run.base_seed", "-3"), ConfigError);
    CHECK_THROWS_AS((void)parse_real("train.learning_rate", "fast"), ConfigError);
}

TEST_CASE("minimal classical config") {
    const auto cfg = parse_config(kMinimal, "/data");
    CHECK(cfg.model.middle == MiddleKind::Classical);
    CHECK(cfg.train.batch_size == 16);
    CHECK(cfg.train.epochs == 100);
    CHECK(cfg.train.learning_rate == 1e-4);
    CHECK(cfg.train.train_size == 9916);
    CHECK(cfg.train.val_size == 2480);
    CHECK(cfg.run.bootstrap_count == 48);
    CHECK(cfg.data.images == std::filesystem::path("/data/imgs.idx"));
    CHECK(cfg.data.labels == std::filesystem::path("/data/labels.idx"));
    // 784*3+3 + 3*2+2 + 2*2+2
    CHECK(cfg.parameter_count() == 2369);
    const auto again = parse_config(cfg.to_document().to_string());
    CHECK(again.to_document().to_string() == cfg.to_document().to_string());
}

TEST_CASE("quantum config and K_tot") {
    const std::string text = R"(model:
  encoder_units: 3
  middle: quantum
  qubits: 1
  layout: u1-all
  selection: full
data:
  images: a
  labels: b
)";
    const auto cfg = parse_config(text);
    // 784*3+3 + 2*2+2; the circuit has no parameters of its own
    CHECK(cfg.parameter_count() == 2361);
    CHECK(build_layout(cfg.model).num_params() == 3);
}

TEST_CASE("config errors name the key") {
    auto with = [](const std::string &extra) { return kMinimal + extra; };
    CHECK(message_of(with("train:\n  learning_rte: 0.1\n")).find("train.learning_rte") !=
          std::string::npos);
    CHECK(message_of("model:\n  middle: classical\n  classical_units: 2\n")
              .find("model.encoder_units") != std::string::npos);
    CHECK(message_of(with("train:\n  batch_size: many\n")).find("train.batch_size") !=
          std::string::npos);
    CHECK(message_of(with("run:\n  bootstrap_count: 0\n")).find("run.bootstrap_count") !=
          std::string::npos);
    CHECK_THROWS_AS((void)parse_config(with("train:\n  learning_rte: 0.1\n")), ConfigError);

    const std::string mismatch = R"(model:
  encoder_units: 5
  middle: quantum
  qubits: 2
  layout: u1-all, u2-even, u1-all
  selection: min
data:
  images: a
  labels: b
)";
    CHECK_THROWS_AS((void)parse_config(mismatch), DimensionError);
    CHECK(message_of(mismatch) == "dimension mismatch at encoder->middle: expected 15, got 5");
    std::string bad_layout = mismatch;
    bad_layout.replace(bad_layout.find("u2-even"), 7, "u2-odd");
    CHECK(message_of(bad_layout).find("model.layout") != std::string::npos);
    std::string classical_extra = kMinimal;
    classical_extra.insert(classical_extra.find("data:"), "  qubits: 2\n");
    CHECK(message_of(classical_extra).find("model.qubits") != std::string::npos);
}

TEST_CASE("statistics examples") {
    std::vector<double> v;
    for (int i = 1; i <= 10; ++i) {
        v.push_back(i / 10.0);
    }
    CHECK(median(v) == doctest::Approx(0.55).epsilon(1e-15));
    CHECK(nearest_rank_percentile(v, 90.0) == 0.9);
    CHECK_THROWS_AS((void)median(std::vector<double>{}), ArgumentError);

    std::vector<AccuracyPair> same(5, AccuracyPair{0.97, 0.96});
    const auto s = summarize(same);
    CHECK(s.ci68_low == s.ci68_high);
    CHECK(s.median_validation == 0.96);
    CHECK_FALSE(s.ci_degenerate);

    const std::vector<AccuracyPair> one{AccuracyPair{0.99, 0.985}};
    const auto s1 = summarize(one);
    CHECK(s1.ci_degenerate);
    CHECK(s1.median_validation == 0.985);
    CHECK(s1.tr90 == 0.99);
    CHECK(s1.vr90 == 0.985);
    CHECK_THROWS_AS((void)summarize(std::vector<AccuracyPair>{}), ArgumentError);
}

TEST_CASE("histogram bins") {
    AccuracyHistogram h;
    h.add(0.5);
    h.add(0.9);
    h.add(0.902);
    h.add(0.9019);
    h.add(1.0);
    h.add(0.999);
    CHECK(h.underflow == 1);
    CHECK(h.counts[0] == 2);
    CHECK(h.counts[1] == 1);
    CHECK(h.counts[49] == 2);
    CHECK(h.total() == 6);
    CHECK(AccuracyHistogram::edge(0) == 0.9);
    CHECK(AccuracyHistogram::edge(19) == 0.938);
    CHECK(AccuracyHistogram::edge(50) == 1.0);
}

TEST_CASE("statistics agree with a naive oracle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> acc(0.85, 1.0);
    std::uniform_int_distribution<int> size(1, 60);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = size(rng);
        std::vector<double> v(static_cast<std::size_t>(n));
        std::vector<AccuracyPair> pairs;
        for (double &x : v) {
            x = std::round(acc(rng) * 2480.0) / 2480.0;
            pairs.push_back(AccuracyPair{x, x});
        }
        CHECK(median(v) == oracle_median(v));
        for (double p : {16.0, 50.0, 84.0, 90.0, 100.0}) {
            CHECK(nearest_rank_percentile(v, p) == oracle_percentile(v, p));
        }
        const auto s = summarize(pairs, 2);
        CHECK(s.histogram.total() == v.size());
        CHECK(s.failed == 2);
        CHECK(s.ci68_low <= s.median_validation);
        CHECK(s.median_validation <= s.ci68_high);
        std::shuffle(pairs.begin(), pairs.end(), rng);
        CHECK(summarize(pairs, 2) == s);
    }
}

TEST_CASE("training on synthetic digits") {
    SyntheticRun env;
    const auto data = load_binary_dataset(env.config(fixture::kClassicalBlock, 1, 1));

    SUBCASE("epochs = 0 evaluates the untrained model") {
        const auto rec = run_training(env.config(fixture::kClassicalBlock, 0, 1), data, 3);
        CHECK(rec.epochs.empty());
        CHECK(rec.final_val_accuracy >= 0.0);
        CHECK(rec.final_val_accuracy <= 1.0);
        CHECK(rec.parameter_count == 2369);
    }
    SUBCASE("reruns are identical and learn") {
        const auto cfg = env.config(fixture::kQuantumBlock, 20, 1);
        std::size_t calls = 0;
        const auto a = run_training(cfg, data, 3, [&](const RunRecord &, const EpochMetrics &) {
            ++calls;
        });
        const auto b = run_training(cfg, data, 3);
        CHECK(calls == 20);
        CHECK(a.same_result(b));
        CHECK(a.epochs.size() == 20);
        CHECK(a.epochs.back().epoch == 20);
        CHECK(a.final_val_accuracy > 0.9);
        const auto c = run_training(cfg, data, 4);
        CHECK_FALSE(a.same_result(c));
    }
    SUBCASE("data errors propagate") {
        auto cfg = env.config(fixture::kClassicalBlock, 1, 1);
        cfg.train.train_size = 10000;
        CHECK_THROWS_AS((void)run_training(cfg, data, 1), ArgumentError);
    }
}

TEST_CASE("bootstrap, export and round trip") {
    SyntheticRun env;
    const auto cfg = env.config(fixture::kClassicalBlock, 3, 2);
    const auto data = load_binary_dataset(cfg);
    const auto result = run_bootstrap(cfg, data);
    REQUIRE(result.records.size() == 2);
    CHECK(result.records[0].seed == 11);
    CHECK(result.records[1].seed == 12);
    CHECK(result.records[1].index == 1);
    auto solo = run_training(cfg, data, 12);
    solo.index = 1;
    CHECK(result.records[1].same_result(solo));

    const auto parallel = run_bootstrap(cfg, data, 2);
    CHECK(parallel.summary == result.summary);
    CHECK(parallel.records[0].same_result(result.records[0]));

    const auto out = cfg.run.out_dir;
    export_metrics(result.records, result.summary, cfg, out);
    std::size_t csvs = 0;
    for (const auto &e : std::filesystem::recursive_directory_iterator(out)) {
        csvs += e.path().extension() == ".csv" ? 1 : 0;
    }
    CHECK(csvs == 2);
    CHECK(std::filesystem::exists(out / "aggregate" / "summary.txt"));
    CHECK(std::filesystem::exists(out / "aggregate" / "config_echo.txt"));
    const auto csv = read_text_file(out / "run_0" / "metrics.csv");
    CHECK(csv.rfind("epoch,train_loss,train_acc,val_acc\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3);

    const auto records = read_records(out);
    REQUIRE(records.size() == 2);
    CHECK(records[0].same_result(result.records[0]));
    CHECK(records[1].same_result(result.records[1]));
    CHECK(read_summary(out) == result.summary);
    CHECK(summarize_records(records) == result.summary);
    const auto echoed = parse_config(read_text_file(out / "aggregate" / "config_echo.txt"));
    CHECK(echoed.to_document().to_string() == cfg.to_document().to_string());

    const auto first = read_text_file(out / "aggregate" / "summary.txt");
    export_metrics(run_bootstrap(cfg, data).records, result.summary, cfg, out);
    CHECK(read_text_file(out / "aggregate" / "summary.txt") == first);
    CHECK(read_text_file(out / "run_0" / "metrics.csv") == csv);
}

TEST_CASE("single-run bootstrap summary") {
    SyntheticRun env;
    const auto cfg = env.config(fixture::kClassicalBlock, 2, 1);
    const auto result = run_bootstrap(cfg, load_binary_dataset(cfg));
    const auto &r = result.records[0];
    CHECK(result.summary.ci_degenerate);
    CHECK(result.summary.median_validation == r.final_val_accuracy);
    CHECK(result.summary.median_train == r.final_train_accuracy);
    CHECK(result.summary.vr90 == r.final_val_accuracy);
}

TEST_CASE("failed runs are counted and excluded") {
    std::vector<RunRecord> records(3);
    records[0].final_val_accuracy = 0.95;
    records[0].final_train_accuracy = 0.96;
    records[1].ok = false;
    records[1].error = "non-finite training loss";
    records[2].final_val_accuracy = 0.97;
    records[2].final_train_accuracy = 0.98;
    const auto s = summarize_records(records);
    CHECK(s.runs == 2);
    CHECK(s.failed == 1);
    CHECK(s.median_validation == doctest::Approx(0.96));
    std::vector<RunRecord> failed(2);
    failed[0].ok = failed[1].ok = false;
    CHECK_THROWS_AS((void)summarize_records(failed), TrainingError);

    SyntheticRun env;
    auto cfg = env.config(fixture::kClassicalBlock, 1, 2);
    cfg.train.train_size = 100000;
    CHECK_THROWS_AS((void)run_bootstrap(cfg, load_binary_dataset(cfg)), TrainingError);
}

TEST_CASE("record parsing rejects malformed files") {
    CHECK_THROWS_AS((void)parse_metrics_csv("epoch,loss\n"), DataError);
    CHECK_THROWS_AS((void)parse_metrics_csv("epoch,train_loss,train_acc,val_acc\n1,2\n"),
                    DataError);
    RunRecord r;
    r.ok = false;
    r.error = "broken:\nbadly";
    const auto text = record_document(r).to_string();
    const auto back = parse_record(text, metrics_csv({}));
    CHECK_FALSE(back.ok);
    CHECK(back.error == "broken: badly");
}

TEST_CASE("shot-noise experiment") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ang(0.0, 3.14159);
    const auto layout = CircuitLayout::parse(1, "u1-all");
    std::vector<double> w(3);
    for (double &x : w) {
        x = ang(rng);
    }
    const OutputSelection min{OutputMode::Min};
    ShotNoiseOptions opt;
    opt.epsilon = 0.1;
    opt.trials = 100;
    opt.variance_draws = 5000;
    const auto base = shot_noise_experiment(layout, w, min, opt);
    CHECK(base.success_fraction() >= 2.0 / 3.0);
    CHECK(base.shots == 3 * base.bound);
    CHECK(base.bound == sample_bound(ComplexityQuery{1, 3, 0.1, base.max_variance}));
    for (std::size_t m = 0; m < 3; ++m) {
        CHECK(std::abs(base.variances(0, m) - base.analytic_variances(0, m)) < 0.3);
    }

    ShotNoiseOptions doubled = opt;
    doubled.shots = 2 * base.shots;
    CHECK(shot_noise_experiment(layout, w, min, doubled).successes >= base.successes);

    ShotNoiseOptions loose = opt;
    loose.epsilon = 2.0;
    CHECK(shot_noise_experiment(layout, w, min, loose).success_fraction() == 1.0);

    ShotNoiseOptions bad = opt;
    bad.epsilon = 0.0;
    CHECK_THROWS_AS((void)shot_noise_experiment(layout, w, min, bad), ArgumentError);

    fixture::TempDir dir("shot");
    write_shot_noise_report(base, dir.path() / "shotnoise" / "report.txt");
    const auto doc = Document::parse(read_text_file(dir.path() / "shotnoise" / "report.txt"));
    CHECK(doc.find("bound", "sample_bound") == std::to_string(base.bound));
    CHECK(doc.find("result", "success_fraction") == format_double(base.success_fraction()));
}

TEST_CASE("shipped configs parse") {
    std::size_t count = 0;
    for (const auto &e : std::filesystem::directory_iterator(QHYBRID_CONFIGS_DIR)) {
        if (e.path().extension() != ".yaml") {
            continue;
        }
        CAPTURE(e.path().string());
        const auto cfg = load_config(e.path());
        CHECK(cfg.data.images.is_absolute());
        CHECK(cfg.parameter_count() > 0);
        ++count;
    }
    CHECK(count >= 4);
}

} // TEST_SUITE
