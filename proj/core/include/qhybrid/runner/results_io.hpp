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
/**
 * @file
 * Persisted results. Layout under the output directory:
 *
 *     run_<k>/metrics.csv       epoch,train_loss,train_acc,val_acc
 *     run_<k>/record.txt        seed, status, finals, parameter count
 *     run_<k>/timing.txt        wall-clock seconds (varies between reruns)
 *     aggregate/summary.txt     BootstrapSummary
 *     aggregate/config_echo.txt the config that produced the runs
 *
 * Every file except timing.txt is a pure function of config and seeds.
 * Numbers are written in shortest round-trip form so the readers below
 * recover them exactly.
 */
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qhybrid/runner/config.hpp"
#include "qhybrid/runner/experiment.hpp"
#include "qhybrid/runner/statistics.hpp"

namespace qhybrid {

[[nodiscard]] std::string metrics_csv(const std::vector<EpochMetrics> &epochs);
[[nodiscard]] std::vector<EpochMetrics> parse_metrics_csv(std::string_view text);

[[nodiscard]] Document record_document(const RunRecord &record);
/// Rebuilds a record from record.txt and metrics.csv contents.
[[nodiscard]] RunRecord parse_record(std::string_view record_text,
                                     std::string_view metrics_text);

[[nodiscard]] Document summary_document(const BootstrapSummary &summary);
[[nodiscard]] BootstrapSummary parse_summary(std::string_view text);

/// Writes run_<index>/ for one record.
void export_run(const RunRecord &record, const std::filesystem::path &out_dir);

/// Writes every run directory plus aggregate/. Throws IoError naming the
/// path that could not be written.
void export_metrics(const std::vector<RunRecord> &records, const BootstrapSummary &summary,
                    const RunConfig &config, const std::filesystem::path &out_dir);

/// Reads every run_<k>/ under `out_dir`, ordered by k.
[[nodiscard]] std::vector<RunRecord> read_records(const std::filesystem::path &out_dir);
[[nodiscard]] BootstrapSummary read_summary(const std::filesystem::path &out_dir);

[[nodiscard]] std::string read_text_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, std::string_view text);

} // namespace qhybrid
