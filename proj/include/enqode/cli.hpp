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
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "enqode/optimizer.hpp"
#include "enqode/simulator.hpp"

namespace enqode {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitInput = 2,
  kExitInfeasible = 3,
  kExitTotalFailure = 4,
};

struct RunConfig {
  unsigned qubits = 8;
  unsigned layers = 8;
  double floor = 0.95;
  std::size_t kmax = 16;
  NoiseModel noise;
  OptimizerOptions optimizer;
  std::uint64_t seed = 7;
  std::size_t jobs = 1;
  std::string two_qubit = "ecr";

  std::filesystem::path input;
  std::filesystem::path dataset;
  std::filesystem::path library;
  std::filesystem::path out = "enqode_out";

  bool labels = false;
  std::size_t per_class = 100;
  bool pca_per_class = false;
  bool skip_pca = false;
  std::size_t limit = 0;  // 0: every sample
  bool noisy = true;

  void validate() const;
};

/// Fields not present in the document keep their current values.
void merge_config(RunConfig &config, const nlohmann::json &doc);

/// Settings that influence results; echoed into reports.
nlohmann::json result_config_json(const RunConfig &config);

/// Entry point shared by the executable and the tests.
int run_cli(const std::vector<std::string> &args, std::ostream &out,
            std::ostream &err);

}  // namespace enqode
