// Copyright 2026 The EnQode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "enqode/baseline.hpp"
#include "enqode/pipeline.hpp"
#include "enqode/simulator.hpp"

namespace enqode {

inline constexpr const char *kReportSchemaVersion = "1.0";

struct ReportRow {
  std::size_t sample_id = 0;
  std::string method;  // "enqode" or "baseline"
  std::size_t depth = 0;
  std::size_t one_qubit = 0;
  std::size_t two_qubit = 0;
  std::size_t total_physical = 0;
  double ideal_fidelity = 0.0;
  double noisy_fidelity = 0.0;
  double compile_seconds = 0.0;
  std::optional<std::size_t> cluster_id;
  std::optional<std::size_t> iterations;
};

struct SampleFailure {
  std::size_t sample_id = 0;
  std::string method;
  std::string message;
};

struct ComparisonReport {
  std::vector<ReportRow> rows;  // sorted by (sample_id, method)
  std::vector<SampleFailure> failures;
  std::size_t samples_attempted = 0;
};

struct CompareSettings {
  NoiseModel noise;
  OptimizerOptions optimizer;
  BasisConfig basis;
  std::size_t jobs = 1;
  bool noisy = true;
};

/// EnQode and baseline pipelines on every row; per-sample failures are
/// recorded rather than thrown.
ComparisonReport run_comparison(const Dataset &data,
                                const TrainedLibrary &library,
                                const CompareSettings &settings);

struct MethodStats {
  std::size_t count = 0;
  double mean_depth = 0, std_depth = 0;
  double mean_one_qubit = 0, std_one_qubit = 0;
  double mean_two_qubit = 0, std_two_qubit = 0;
  double mean_total = 0, std_total = 0;
  double mean_ideal_fidelity = 0, std_ideal_fidelity = 0;
  double mean_noisy_fidelity = 0, std_noisy_fidelity = 0;
  double mean_compile_seconds = 0, std_compile_seconds = 0;
};

MethodStats method_stats(const ComparisonReport &report,
                         const std::string &method);

/// Population mean and standard deviation.
std::pair<double, double> mean_std(const std::vector<double> &values);

/**
 * Report document. Everything outside "metadata" is a pure function of the
 * inputs; wall-clock values and the timestamp live under "metadata".
 */
nlohmann::json report_to_json(const ComparisonReport &report,
                              const nlohmann::json &config_echo,
                              const std::string &timestamp);

std::string report_csv(const ComparisonReport &report);

/// Bar chart of means with one-standard-deviation whiskers.
struct BarSeries {
  std::string name;
  std::vector<double> means;
  std::vector<double> stds;
};
std::string svg_bar_chart(const std::string &title,
                          const std::vector<std::string> &categories,
                          const std::vector<BarSeries> &series,
                          const std::string &y_label, bool log_scale);

/// Box plot (min, quartiles, max) per named group.
std::string svg_box_plot(const std::string &title,
                         const std::vector<std::string> &groups,
                         const std::vector<std::vector<double>> &values,
                         const std::string &y_label);

/// Writes depth.svg, gates.svg, fidelity.svg and compile_time.svg.
void write_report_svgs(const ComparisonReport &report,
                       const std::filesystem::path &dir);

}  // namespace enqode
