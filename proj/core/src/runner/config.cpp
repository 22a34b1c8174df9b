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
#include "qhybrid/runner/config.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "qhybrid/errors.hpp"

namespace qhybrid {
namespace {

struct KeySpec {
    std::string_view section;
    std::string_view key;
};

constexpr std::array kKnownKeys{
    KeySpec{"model", "encoder_units"},  KeySpec{"model", "middle"},
    KeySpec{"model", "classical_units"}, KeySpec{"model", "qubits"},
    KeySpec{"model", "layout"},         KeySpec{"model", "selection"},
    KeySpec{"train", "batch_size"},     KeySpec{"train", "epochs"},
    KeySpec{"train", "learning_rate"},  KeySpec{"train", "train_size"},
    KeySpec{"train", "val_size"},       KeySpec{"data", "images"},
    KeySpec{"data", "labels"},          KeySpec{"run", "base_seed"},
    KeySpec{"run", "bootstrap_count"},  KeySpec{"run", "out_dir"},
    KeySpec{"shotnoise", "epsilon"},    KeySpec{"shotnoise", "trials"},
    KeySpec{"shotnoise", "shots_multiplier"},
};

std::string path_of(std::string_view section, std::string_view key) {
    return std::string{section} + "." + std::string{key};
}

class Reader {
  public:
    explicit Reader(const Document &doc) : doc_{doc} {}

    [[nodiscard]] bool has(std::string_view s, std::string_view k) const {
        return doc_.find(s, k).has_value();
    }

    std::string required(std::string_view s, std::string_view k) const {
        auto v = doc_.find(s, k);
        if (!v) {
            throw ConfigError("missing required key '" + path_of(s, k) + "'");
        }
        return *v;
    }

    std::size_t required_size(std::string_view s, std::string_view k) const {
        return static_cast<std::size_t>(parse_uint(path_of(s, k), required(s, k)));
    }

    template <typename T>
    void optional_size(std::string_view s, std::string_view k, T &out) const {
        if (auto v = doc_.find(s, k)) {
            out = static_cast<T>(parse_uint(path_of(s, k), *v));
        }
    }

    void optional_real(std::string_view s, std::string_view k, double &out) const {
        if (auto v = doc_.find(s, k)) {
            out = parse_real(path_of(s, k), *v);
        }
    }

  private:
    const Document &doc_;
};

void reject_unknown_keys(const Document &doc) {
    for (const auto &e : doc.entries()) {
        bool known = false;
        for (const auto &spec : kKnownKeys) {
            known = known || (spec.section == e.section && spec.key == e.key);
        }
        if (!known) {
            throw ConfigError("unknown key '" + path_of(e.section, e.key) + "' (line " +
                              std::to_string(e.line) + ")");
        }
    }
}

void require_positive(std::string_view path, double value) {
    if (!(value > 0.0)) {
        throw ConfigError(std::string{path} + ": must be positive");
    }
}

std::filesystem::path resolve(const std::filesystem::path &base,
                              const std::filesystem::path &p) {
    if (base.empty() || p.is_absolute()) {
        return p;
    }
    return (base / p).lexically_normal();
}

} // namespace

std::size_t RunConfig::parameter_count() const {
    std::mt19937_64 rng(0);
    return build_model(model, rng).parameter_count();
}

Document RunConfig::to_document() const {
    Document doc;
    doc.set("model", "encoder_units", std::to_string(model.encoder_units));
    if (model.middle == MiddleKind::Classical) {
        doc.set("model", "middle", "classical");
        doc.set("model", "classical_units", std::to_string(model.classical_units));
    } else {
        doc.set("model", "middle", "quantum");
        doc.set("model", "qubits", std::to_string(model.qubits));
        doc.set("model", "layout", model.layout);
        doc.set("model", "selection", std::string{to_string(model.selection)});
    }
    doc.set("train", "batch_size", std::to_string(train.batch_size));
    doc.set("train", "epochs", std::to_string(train.epochs));
    doc.set("train", "learning_rate", format_double(train.learning_rate));
    doc.set("train", "train_size", std::to_string(train.train_size));
    doc.set("train", "val_size", std::to_string(train.val_size));
    doc.set("data", "images", data.images.string());
    doc.set("data", "labels", data.labels.string());
    doc.set("run", "base_seed", std::to_string(run.base_seed));
    doc.set("run", "bootstrap_count", std::to_string(run.bootstrap_count));
    doc.set("run", "out_dir", run.out_dir.string());
    doc.set("shotnoise", "epsilon", format_double(shotnoise.epsilon));
    doc.set("shotnoise", "trials", std::to_string(shotnoise.trials));
    doc.set("shotnoise", "shots_multiplier", format_double(shotnoise.shots_multiplier));
    return doc;
}

RunConfig parse_config(std::string_view text, const std::filesystem::path &base_dir) {
    const Document doc = Document::parse(text);
    reject_unknown_keys(doc);
    const Reader in{doc};

    RunConfig cfg;
    cfg.model.encoder_units = in.required_size("model", "encoder_units");
    if (cfg.model.encoder_units == 0) {
        throw ConfigError("model.encoder_units: must be positive");
    }
    const std::string middle = in.required("model", "middle");
    if (middle == "classical") {
        cfg.model.middle = MiddleKind::Classical;
        cfg.model.classical_units = in.required_size("model", "classical_units");
        if (cfg.model.classical_units == 0) {
            throw ConfigError("model.classical_units: must be positive");
        }
        for (std::string_view k : {"qubits", "layout", "selection"}) {
            if (in.has("model", k)) {
                throw ConfigError("key '" + path_of("model", k) +
                                  "' only applies to a quantum middle");
            }
        }
    } else if (middle == "quantum") {
        cfg.model.middle = MiddleKind::Quantum;
        cfg.model.qubits = in.required_size("model", "qubits");
        cfg.model.layout = in.required("model", "layout");
        try {
            cfg.model.selection = parse_output_mode(in.required("model", "selection"));
        } catch (const ArgumentError &e) {
            throw ConfigError(std::string{"model.selection: "} + e.what());
        }
        if (in.has("model", "classical_units")) {
            throw ConfigError("key 'model.classical_units' only applies to a "
                              "classical middle");
        }
        try {
            (void)build_layout(cfg.model);
        } catch (const ConfigError &) {
            throw;
        } catch (const Error &e) {
            throw ConfigError(std::string{"model.layout: "} + e.what());
        }
    } else {
        throw ConfigError("model.middle: expected 'classical' or 'quantum', got '" +
                          middle + "'");
    }

    in.optional_size("train", "batch_size", cfg.train.batch_size);
    in.optional_size("train", "epochs", cfg.train.epochs);
    in.optional_real("train", "learning_rate", cfg.train.learning_rate);
    in.optional_size("train", "train_size", cfg.train.train_size);
    in.optional_size("train", "val_size", cfg.train.val_size);
    if (cfg.train.batch_size == 0) {
        throw ConfigError("train.batch_size: must be at least 1");
    }
    if (cfg.train.learning_rate < 0.0) {
        throw ConfigError("train.learning_rate: must not be negative");
    }
    if (cfg.train.train_size == 0 || cfg.train.val_size == 0) {
        throw ConfigError("train.train_size and train.val_size must be positive");
    }

    cfg.data.images = resolve(base_dir, in.required("data", "images"));
    cfg.data.labels = resolve(base_dir, in.required("data", "labels"));

    in.optional_size("run", "base_seed", cfg.run.base_seed);
    in.optional_size("run", "bootstrap_count", cfg.run.bootstrap_count);
    if (cfg.run.bootstrap_count == 0) {
        throw ConfigError("run.bootstrap_count: must be at least 1");
    }
    if (auto v = doc.find("run", "out_dir")) {
        cfg.run.out_dir = resolve(base_dir, *v);
    } else {
        cfg.run.out_dir = resolve(base_dir, cfg.run.out_dir);
    }

    in.optional_real("shotnoise", "epsilon", cfg.shotnoise.epsilon);
    in.optional_size("shotnoise", "trials", cfg.shotnoise.trials);
    in.optional_real("shotnoise", "shots_multiplier", cfg.shotnoise.shots_multiplier);
    require_positive("shotnoise.epsilon", cfg.shotnoise.epsilon);
    require_positive("shotnoise.shots_multiplier", cfg.shotnoise.shots_multiplier);
    if (cfg.shotnoise.trials == 0) {
        throw ConfigError("shotnoise.trials: must be at least 1");
    }

    // Fail fast: one sample through a freshly initialised model.
    std::mt19937_64 rng(cfg.run.base_seed);
    const MainModel model = build_model(cfg.model, rng);
    const std::vector<double> dummy(kInputWidth, 0.0);
    require_dimensions(model, dummy);
    return cfg;
}

RunConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config '" + path.string() + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.parent_path());
}

CircuitLayout build_layout(const ModelSpec &spec) {
    return CircuitLayout::parse(spec.qubits, spec.layout);
}

MainModel build_model(const ModelSpec &spec, std::mt19937_64 &rng) {
    const std::size_t m0 = spec.encoder_units;
    if (spec.middle == MiddleKind::Classical) {
        const std::array<std::size_t, 2> enc_w{kInputWidth, m0};
        const std::array enc_a{Activation::Relu};
        Network encoder = Network::make(enc_w, enc_a, rng);
        const std::array<std::size_t, 2> mid_w{m0, spec.classical_units};
        const std::array mid_a{Activation::Sigmoid};
        Network middle = Network::make(mid_w, mid_a, rng);
        const std::array<std::size_t, 2> dec_w{spec.classical_units, kNumClasses};
        const std::array dec_a{Activation::Identity};
        Network decoder = Network::make(dec_w, dec_a, rng);
        return MainModel{std::move(encoder), ClassicalMiddle{std::move(middle)},
                         std::move(decoder)};
    }
    QuantumMiddle quantum{build_layout(spec), OutputSelection{spec.selection}};
    const std::array<std::size_t, 2> enc_w{kInputWidth, m0};
    const std::array enc_a{Activation::Identity};
    Network encoder = Network::make(enc_w, enc_a, rng);
    const std::array<std::size_t, 2> dec_w{quantum.out_width(), kNumClasses};
    const std::array dec_a{Activation::Identity};
    Network decoder = Network::make(dec_w, dec_a, rng);
    return MainModel{std::move(encoder), std::move(quantum), std::move(decoder)};
}

} // namespace qhybrid
