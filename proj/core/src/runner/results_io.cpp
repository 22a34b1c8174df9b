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
#include "qhybrid/runner/results_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "qhybrid/errors.hpp"

namespace qhybrid {
namespace {

constexpr std::string_view kCsvHeader = "epoch,train_loss,train_acc,val_acc";

std::vector<std::string_view> split_on(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        auto piece = text.substr(start, pos == std::string_view::npos ? pos : pos - start);
        while (!piece.empty() && (piece.front() == ' ' || piece.front() == '\r')) {
            piece.remove_prefix(1);
        }
        while (!piece.empty() && (piece.back() == ' ' || piece.back() == '\r')) {
            piece.remove_suffix(1);
        }
        out.push_back(piece);
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

std::string require(const Document &doc, std::string_view s, std::string_view k) {
    auto v = doc.find(s, k);
    if (!v) {
        throw DataError("missing '" + std::string{s} + "." + std::string{k} + "'");
    }
    return *v;
}

double real_of(const Document &doc, std::string_view s, std::string_view k) {
    return parse_real(std::string{s} + "." + std::string{k}, require(doc, s, k));
}

std::uint64_t uint_of(const Document &doc, std::string_view s, std::string_view k) {
    return parse_uint(std::string{s} + "." + std::string{k}, require(doc, s, k));
}

std::string single_line(std::string text) {
    std::replace(text.begin(), text.end(), '\n', ' ');
    std::replace(text.begin(), text.end(), '"', '\'');
    return text;
}

std::filesystem::path run_dir(const std::filesystem::path &out_dir, std::size_t index) {
    return out_dir / ("run_" + std::to_string(index));
}

} // namespace

std::string metrics_csv(const std::vector<EpochMetrics> &epochs) {
    std::string out{kCsvHeader};
    out += '\n';
    for (const auto &e : epochs) {
        out += std::to_string(e.epoch) + "," + format_double(e.train_loss) + "," +
               format_double(e.train_accuracy) + "," + format_double(e.val_accuracy) + "\n";
    }
    return out;
}

std::vector<EpochMetrics> parse_metrics_csv(std::string_view text) {
    std::vector<EpochMetrics> out;
    std::size_t line_no = 0;
    for (std::string_view line : split_on(text, '\n')) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (line_no == 1) {
            if (line != kCsvHeader) {
                throw DataError("metrics.csv: unexpected header '" + std::string{line} + "'");
            }
            continue;
        }
        const auto cells = split_on(line, ',');
        if (cells.size() != 4) {
            throw DataError("metrics.csv line " + std::to_string(line_no) +
                            ": expected 4 columns, got " + std::to_string(cells.size()));
        }
        EpochMetrics m;
        m.epoch = static_cast<std::size_t>(parse_uint("metrics.epoch", cells[0]));
        m.train_loss = parse_real("metrics.train_loss", cells[1]);
        m.train_accuracy = parse_real("metrics.train_acc", cells[2]);
        m.val_accuracy = parse_real("metrics.val_acc", cells[3]);
        out.push_back(m);
    }
    if (line_no == 0 || text.empty()) {
        throw DataError("metrics.csv: empty file");
    }
    return out;
}

Document record_document(const RunRecord &record) {
    Document doc;
    doc.set("run", "index", std::to_string(record.index));
    doc.set("run", "seed", std::to_string(record.seed));
    doc.set("run", "status", record.ok ? "ok" : "failed");
    if (!record.ok) {
        doc.set("run", "error", single_line(record.error));
    }
    doc.set("run", "parameter_count", std::to_string(record.parameter_count));
    doc.set("run", "epochs", std::to_string(record.epochs.size()));
    doc.set("final", "train_accuracy", format_double(record.final_train_accuracy));
    doc.set("final", "val_accuracy", format_double(record.final_val_accuracy));
    return doc;
}

RunRecord parse_record(std::string_view record_text, std::string_view metrics_text) {
    const Document doc = Document::parse(record_text);
    RunRecord r;
    r.index = static_cast<std::size_t>(uint_of(doc, "run", "index"));
    r.seed = uint_of(doc, "run", "seed");
    const std::string status = require(doc, "run", "status");
    if (status != "ok" && status != "failed") {
        throw DataError("run.status: expected 'ok' or 'failed', got '" + status + "'");
    }
    r.ok = status == "ok";
    r.error = doc.find("run", "error").value_or("");
    r.parameter_count = static_cast<std::size_t>(uint_of(doc, "run", "parameter_count"));
    r.final_train_accuracy = real_of(doc, "final", "train_accuracy");
    r.final_val_accuracy = real_of(doc, "final", "val_accuracy");
    r.epochs = parse_metrics_csv(metrics_text);
    if (r.epochs.size() != uint_of(doc, "run", "epochs")) {
        throw DataError("run.epochs does not match the rows of metrics.csv");
    }
    return r;
}

Document summary_document(const BootstrapSummary &s) {
    Document doc;
    doc.set("summary", "runs", std::to_string(s.runs));
    doc.set("summary", "failed", std::to_string(s.failed));
    doc.set("summary", "median_validation", format_double(s.median_validation));
    doc.set("summary", "ci68_low", format_double(s.ci68_low));
    doc.set("summary", "ci68_high", format_double(s.ci68_high));
    doc.set("summary", "ci_degenerate", s.ci_degenerate ? "true" : "false");
    doc.set("summary", "median_train", format_double(s.median_train));
    doc.set("summary", "tr90", format_double(s.tr90));
    doc.set("summary", "vr90", format_double(s.vr90));
    std::string edges;
    std::string counts;
    for (std::size_t i = 0; i <= AccuracyHistogram::kBins; ++i) {
        edges += (i == 0 ? "" : ", ") + format_double(AccuracyHistogram::edge(i));
    }
    for (std::size_t i = 0; i < s.histogram.counts.size(); ++i) {
        counts += (i == 0 ? "" : ", ") + std::to_string(s.histogram.counts[i]);
    }
    doc.set("histogram", "underflow", std::to_string(s.histogram.underflow));
    doc.set("histogram", "edges", edges);
    doc.set("histogram", "counts", counts);
    return doc;
}

BootstrapSummary parse_summary(std::string_view text) {
    const Document doc = Document::parse(text);
    BootstrapSummary s;
    s.runs = static_cast<std::size_t>(uint_of(doc, "summary", "runs"));
    s.failed = static_cast<std::size_t>(uint_of(doc, "summary", "failed"));
    s.median_validation = real_of(doc, "summary", "median_validation");
    s.ci68_low = real_of(doc, "summary", "ci68_low");
    s.ci68_high = real_of(doc, "summary", "ci68_high");
    const std::string degenerate = require(doc, "summary", "ci_degenerate");
    if (degenerate != "true" && degenerate != "false") {
        throw DataError("summary.ci_degenerate: expected true or false");
    }
    s.ci_degenerate = degenerate == "true";
    s.median_train = real_of(doc, "summary", "median_train");
    s.tr90 = real_of(doc, "summary", "tr90");
    s.vr90 = real_of(doc, "summary", "vr90");
    s.histogram.underflow = static_cast<std::size_t>(uint_of(doc, "histogram", "underflow"));
    const std::string counts = require(doc, "histogram", "counts");
    const auto cells = split_on(counts, ',');
    if (cells.size() != AccuracyHistogram::kBins) {
        throw DataError("histogram.counts: expected " +
                        std::to_string(AccuracyHistogram::kBins) + " bins, got " +
                        std::to_string(cells.size()));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        s.histogram.counts[i] =
            static_cast<std::size_t>(parse_uint("histogram.counts", cells[i]));
    }
    return s;
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::filesystem::path &path, std::string_view text) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create '" + path.parent_path().string() +
                          "': " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
}

void export_run(const RunRecord &record, const std::filesystem::path &out_dir) {
    const auto dir = run_dir(out_dir, record.index);
    write_text_file(dir / "metrics.csv", metrics_csv(record.epochs));
    write_text_file(dir / "record.txt", record_document(record).to_string());
    Document timing;
    timing.set("timing", "wall_seconds", format_double(record.wall_seconds));
    write_text_file(dir / "timing.txt", timing.to_string());
}

void export_metrics(const std::vector<RunRecord> &records, const BootstrapSummary &summary,
                    const RunConfig &config, const std::filesystem::path &out_dir) {
    for (const auto &r : records) {
        export_run(r, out_dir);
    }
    write_text_file(out_dir / "aggregate" / "summary.txt",
                    summary_document(summary).to_string());
    write_text_file(out_dir / "aggregate" / "config_echo.txt",
                    config.to_document().to_string());
}

std::vector<RunRecord> read_records(const std::filesystem::path &out_dir) {
    std::error_code ec;
    std::filesystem::directory_iterator it(out_dir, ec);
    if (ec) {
        throw IoError("cannot list '" + out_dir.string() + "': " + ec.message());
    }
    std::vector<RunRecord> out;
    for (const auto &entry : it) {
        const std::string name = entry.path().filename().string();
        if (!entry.is_directory() || name.rfind("run_", 0) != 0) {
            continue;
        }
        out.push_back(parse_record(read_text_file(entry.path() / "record.txt"),
                                   read_text_file(entry.path() / "metrics.csv")));
    }
    std::sort(out.begin(), out.end(),
              [](const RunRecord &a, const RunRecord &b) { return a.index < b.index; });
    return out;
}

BootstrapSummary read_summary(const std::filesystem::path &out_dir) {
    return parse_summary(read_text_file(out_dir / "aggregate" / "summary.txt"));
}

} // namespace qhybrid
