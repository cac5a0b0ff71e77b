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
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "enqode/ansatz.hpp"
#include "enqode/dataio.hpp"
#include "enqode/optimizer.hpp"

namespace enqode {

struct ClusterOptions {
  double fidelity_floor = 0.95;
  std::size_t k_max = 16;
  std::uint64_t seed = 7;
  std::size_t max_lloyd_iters = 100;
  std::size_t restarts = 4;  // independent seedings per k; best kept

  void validate() const;
};

struct ClusterResult {
  std::size_t k = 0;
  std::size_t dims = 0;
  std::vector<std::size_t> assignments;  // per row
  std::vector<double> centroids;         // row-major k x dims, unit rows
  /// min over rows of the squared overlap with the assigned centroid.
  double min_overlap = 0.0;
  bool feasible = false;

  std::span<const double> centroid(std::size_t c) const {
    return {centroids.data() + c * dims, dims};
  }
};

/// Index of the centroid closest in Euclidean distance; ties go to the
/// lowest index.
std::size_t nearest_centroid(std::span<const double> x,
                             std::span<const double> centroids,
                             std::size_t dims);

/**
 * Smallest k <= k_max whose k-means partition gives every row a squared
 * overlap of at least the floor with its (unit) centroid. Rows must be unit
 * vectors. When no k qualifies, the k with the best minimum overlap is
 * returned with feasible = false.
 */
ClusterResult cluster(const Dataset &data, const ClusterOptions &options);

struct ClusterModel {
  std::size_t cluster_id = 0;
  std::vector<double> centroid;
  std::vector<double> theta_star;
  double train_fidelity = 0.0;
  std::size_t iterations = 0;
};

struct TrainedLibrary {
  AnsatzConfig config;
  std::string fingerprint;
  std::vector<ClusterModel> clusters;
  double offline_seconds = 0.0;
};

class TrainingError : public std::runtime_error {
 public:
  TrainingError(std::size_t cluster_id, const std::string &what)
      : std::runtime_error("cluster " + std::to_string(cluster_id) + ": " +
                           what),
        cluster_id_(cluster_id) {}
  std::size_t cluster_id() const { return cluster_id_; }

 private:
  std::size_t cluster_id_;
};

/// Runs `body(i)` for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)> &body);

/// Cold-start training (theta = 0) of the ansatz on every centroid.
TrainedLibrary train_offline(const Dataset &data, const ClusterResult &clusters,
                             const AnsatzConfig &config,
                             const OptimizerOptions &options,
                             std::size_t jobs = 1);

struct EmbeddingResult {
  std::size_t sample_index = 0;
  std::size_t cluster_id = 0;
  std::vector<double> theta;
  double ideal_fidelity = 0.0;
  std::size_t iterations = 0;
  double compile_time = 0.0;  // seconds, optimisation only
};

/// Nearest-centroid assignment followed by a warm-started optimisation.
EmbeddingResult embed_online(std::span<const double> x,
                             const TrainedLibrary &library,
                             const AnsatzBundle &bundle,
                             const OptimizerOptions &options,
                             std::size_t sample_index = 0);
EmbeddingResult embed_online(std::span<const double> x,
                             const TrainedLibrary &library,
                             const OptimizerOptions &options,
                             std::size_t sample_index = 0);

/// Library document. Timing lives under "metadata" and only when requested.
nlohmann::json library_to_json(const TrainedLibrary &library,
                               bool with_metadata = true);
TrainedLibrary library_from_json(const nlohmann::json &doc);
void save_library(const TrainedLibrary &library,
                  const std::filesystem::path &path);
TrainedLibrary load_library(const std::filesystem::path &path);

struct SyntheticSpec {
  unsigned num_qubits = 8;
  std::size_t clusters = 4;
  std::size_t per_cluster = 25;
  double spread = 0.15;  // noise scale relative to the centre
  double decay = 0.7;    // geometric fall-off of feature scale
  std::uint64_t seed = 11;
};

/// Unit-norm rows drawn around random centres with a geometrically decaying
/// feature spectrum, mimicking PCA output. Labels hold the generating centre.
Dataset synthetic_clustered(const SyntheticSpec &spec);

}  // namespace enqode
