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

#include "enqode/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

namespace enqode {

namespace {

// Engine-level helpers; the standard distributions are not portable.
double uniform01(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64 &rng) {
  double u = 0.0;
  while (u <= 0.0) u = uniform01(rng);
  const double v = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u)) *
         std::cos(2.0 * std::numbers::pi * v);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

bool normalize_in_place(std::span<double> v) {
  const double norm = std::sqrt(dot(v, v));
  if (!(norm > 1e-300)) return false;
  for (double &x : v) x /= norm;
  return true;
}

void check_unit_rows(const Dataset &data) {
  for (std::size_t r = 0; r < data.rows; ++r) {
    const auto row = data.row(r);
    if (std::abs(std::sqrt(dot(row, row)) - 1.0) > 1e-8) {
      throw std::invalid_argument("row " + std::to_string(r) +
                                  " is not unit-norm");
    }
  }
}

ClusterResult kmeans_once(const Dataset &data, std::size_t k,
                          std::uint64_t seed, std::size_t max_iters) {
  const std::size_t rows = data.rows;
  const std::size_t dims = data.dims;
  std::mt19937_64 rng(seed);

  ClusterResult res;
  res.k = k;
  res.dims = dims;
  res.centroids.assign(k * dims, 0.0);
  auto centroid = [&](std::size_t c) {
    return std::span<double>(res.centroids.data() + c * dims, dims);
  };

  // k-means++ seeding.
  std::vector<double> d2(rows, std::numeric_limits<double>::infinity());
  std::size_t pick = static_cast<std::size_t>(rng() % rows);
  for (std::size_t c = 0; c < k; ++c) {
    std::copy_n(data.row(pick).begin(), dims, centroid(c).begin());
    double total = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      d2[r] = std::min(d2[r], dist2(data.row(r), centroid(c)));
      total += d2[r];
    }
    if (c + 1 == k) break;
    if (total <= 0.0) {
      pick = static_cast<std::size_t>(rng() % rows);
      continue;
    }
    double u = uniform01(rng) * total;
    pick = rows - 1;
    for (std::size_t r = 0; r < rows; ++r) {
      if (u < d2[r]) {
        pick = r;
        break;
      }
      u -= d2[r];
    }
  }

  res.assignments.assign(rows, k);
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t c = nearest_centroid(data.row(r), res.centroids, dims);
      if (c != res.assignments[r]) {
        res.assignments[r] = c;
        changed = true;
      }
    }
    if (!changed) break;

    std::vector<std::size_t> counts(k, 0);
    std::fill(res.centroids.begin(), res.centroids.end(), 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      auto dst = centroid(res.assignments[r]);
      const auto src = data.row(r);
      for (std::size_t i = 0; i < dims; ++i) dst[i] += src[i];
      ++counts[res.assignments[r]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0 && normalize_in_place(centroid(c))) continue;
      // Empty or degenerate cluster: reseed at the worst-served row.
      std::size_t worst = 0;
      double worst_d = -1.0;
      for (std::size_t r = 0; r < rows; ++r) {
        const auto own = res.assignments[r];
        const double d = counts[own] > 0 && own != c
                             ? dist2(data.row(r), centroid(own))
                             : 0.0;
        if (d > worst_d) {
          worst_d = d;
          worst = r;
        }
      }
      std::copy_n(data.row(worst).begin(), dims, centroid(c).begin());
    }
  }

  res.min_overlap = 1.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t c = nearest_centroid(data.row(r), res.centroids, dims);
    res.assignments[r] = c;
    const double ov = dot(data.row(r), res.centroid(c));
    res.min_overlap = std::min(res.min_overlap, ov * ov);
  }
  return res;
}

std::vector<double> zeros(std::size_t n) { return std::vector<double>(n); }

}  // namespace

void ClusterOptions::validate() const {
  if (!(fidelity_floor >= 0.0 && fidelity_floor <= 1.0)) {
    throw std::invalid_argument("fidelity floor must lie in [0, 1]");
  }
  if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
}

std::size_t nearest_centroid(std::span<const double> x,
                             std::span<const double> centroids,
                             std::size_t dims) {
  const std::size_t k = centroids.size() / dims;
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < k; ++c) {
    const double d = dist2(x, centroids.subspan(c * dims, dims));
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

ClusterResult cluster(const Dataset &data, const ClusterOptions &options) {
  options.validate();
  if (data.rows == 0) throw std::invalid_argument("cluster: empty dataset");
  if (options.k_max > data.rows) {
    throw std::invalid_argument("k_max " + std::to_string(options.k_max) +
                                " exceeds row count " +
                                std::to_string(data.rows));
  }
  check_unit_rows(data);

  ClusterResult best_effort;
  best_effort.min_overlap = -1.0;
  for (std::size_t k = 1; k <= options.k_max; ++k) {
    ClusterResult best;
    best.min_overlap = -1.0;
    for (std::size_t r = 0; r < options.restarts; ++r) {
      ClusterResult trial =
          kmeans_once(data, k, mix_seed(options.seed, k * 1000 + r),
                      options.max_lloyd_iters);
      if (trial.min_overlap > best.min_overlap) best = std::move(trial);
    }
    if (best.min_overlap >= options.fidelity_floor) {
      best.feasible = true;
      return best;
    }
    if (best.min_overlap > best_effort.min_overlap) {
      best_effort = std::move(best);
    }
  }
  best_effort.feasible = false;
  return best_effort;
}

void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)> &body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto &t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

TrainedLibrary train_offline(const Dataset &data, const ClusterResult &clusters,
                             const AnsatzConfig &config,
                             const OptimizerOptions &options,
                             std::size_t jobs) {
  config.validate();
  options.validate();
  const std::size_t dim = std::size_t{1} << config.num_qubits;
  if (clusters.dims != dim) {
    throw std::invalid_argument("centroid length " +
                                std::to_string(clusters.dims) +
                                " does not match 2^" +
                                std::to_string(config.num_qubits));
  }
  const auto start = std::chrono::steady_clock::now();
  const AnsatzBundle bundle = build_ansatz(config);

  TrainedLibrary lib;
  lib.config = config;
  lib.fingerprint = fingerprint(data);
  lib.clusters.resize(clusters.k);
  parallel_for(clusters.k, jobs, [&](std::size_t c) {
    ClusterModel &m = lib.clusters[c];
    m.cluster_id = c;
    const auto centroid = clusters.centroid(c);
    m.centroid.assign(centroid.begin(), centroid.end());
    try {
      const OverlapModel model = embedding_model(bundle, m.centroid);
      const OptimizeResult r = minimize(
          [&model](std::span<const double> t) { return model.loss_and_grad(t); },
          zeros(config.num_params()), options);
      m.theta_star = r.theta_star;
      m.train_fidelity = 1.0 - r.loss_star;
      m.iterations = r.iterations;
    } catch (const std::exception &e) {
      throw TrainingError(c, e.what());
    }
  });
  lib.offline_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return lib;
}

EmbeddingResult embed_online(std::span<const double> x,
                             const TrainedLibrary &library,
                             const AnsatzBundle &bundle,
                             const OptimizerOptions &options,
                             std::size_t sample_index) {
  if (library.clusters.empty()) {
    throw std::invalid_argument("embed_online: library has no clusters");
  }
  const std::size_t dims = library.clusters.front().centroid.size();
  if (x.size() != dims) {
    throw std::invalid_argument("embed_online: sample length " +
                                std::to_string(x.size()) + " != " +
                                std::to_string(dims));
  }
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < library.clusters.size(); ++c) {
    const double d = dist2(x, library.clusters[c].centroid);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  const ClusterModel &m = library.clusters[best];
  const OverlapModel model = embedding_model(bundle, x);
  const OptimizeResult r = minimize(
      [&model](std::span<const double> t) { return model.loss_and_grad(t); },
      m.theta_star, options);

  EmbeddingResult out;
  out.sample_index = sample_index;
  out.cluster_id = m.cluster_id;
  out.theta = r.theta_star;
  out.ideal_fidelity = std::clamp(1.0 - r.loss_star, 0.0, 1.0);
  out.iterations = r.iterations;
  out.compile_time = r.wall_time;
  return out;
}

EmbeddingResult embed_online(std::span<const double> x,
                             const TrainedLibrary &library,
                             const OptimizerOptions &options,
                             std::size_t sample_index) {
  return embed_online(x, library, build_ansatz(library.config), options,
                      sample_index);
}

nlohmann::json library_to_json(const TrainedLibrary &library,
                               bool with_metadata) {
  nlohmann::json clusters = nlohmann::json::array();
  for (const ClusterModel &m : library.clusters) {
    clusters.push_back({{"id", m.cluster_id},
                        {"centroid", m.centroid},
                        {"theta_star", m.theta_star},
                        {"train_fidelity", m.train_fidelity},
                        {"iterations", m.iterations}});
  }
  nlohmann::json doc = {
      {"config",
       {{"num_qubits", library.config.num_qubits},
        {"layers", library.config.layers}}},
      {"fingerprint", library.fingerprint},
      {"clusters", std::move(clusters)}};
  if (with_metadata) {
    doc["metadata"] = {{"offline_seconds", library.offline_seconds}};
  }
  return doc;
}

TrainedLibrary library_from_json(const nlohmann::json &doc) {
  TrainedLibrary lib;
  try {
    lib.config.num_qubits = doc.at("config").at("num_qubits").get<unsigned>();
    lib.config.layers = doc.at("config").at("layers").get<unsigned>();
    lib.config.validate();
    lib.fingerprint = doc.at("fingerprint").get<std::string>();
    if (doc.contains("offline_seconds")) {
      lib.offline_seconds = doc["offline_seconds"].get<double>();
    } else if (doc.contains("metadata") &&
               doc["metadata"].contains("offline_seconds")) {
      lib.offline_seconds = doc["metadata"]["offline_seconds"].get<double>();
    }
    const std::size_t dim = std::size_t{1} << lib.config.num_qubits;
    for (const auto &c : doc.at("clusters")) {
      ClusterModel m;
      m.cluster_id = c.at("id").get<std::size_t>();
      m.centroid = c.at("centroid").get<std::vector<double>>();
      m.theta_star = c.at("theta_star").get<std::vector<double>>();
      m.train_fidelity = c.at("train_fidelity").get<double>();
      m.iterations = c.value("iterations", std::size_t{0});
      if (m.cluster_id != lib.clusters.size()) {
        throw std::invalid_argument("cluster ids must be 0..k-1 in order");
      }
      if (m.centroid.size() != dim ||
          m.theta_star.size() != lib.config.num_params()) {
        throw std::invalid_argument("cluster " +
                                    std::to_string(m.cluster_id) +
                                    " has mismatched vector lengths");
      }
      lib.clusters.push_back(std::move(m));
    }
  } catch (const nlohmann::json::exception &e) {
    throw std::invalid_argument(std::string("malformed library: ") + e.what());
  }
  return lib;
}

void save_library(const TrainedLibrary &library,
                  const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << library_to_json(library).dump(2) << '\n';
}

TrainedLibrary load_library(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception &e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return library_from_json(doc);
}

Dataset synthetic_clustered(const SyntheticSpec &spec) {
  if (spec.num_qubits < 1 || spec.num_qubits > 16 || spec.clusters == 0 ||
      spec.per_cluster == 0) {
    throw std::invalid_argument("synthetic_clustered: bad spec");
  }
  const std::size_t dims = std::size_t{1} << spec.num_qubits;
  std::mt19937_64 rng(spec.seed);
  std::vector<double> scale(dims);
  for (std::size_t i = 0; i < dims; ++i) {
    scale[i] = std::pow(spec.decay, static_cast<double>(i));
  }

  Dataset data;
  data.dims = dims;
  data.labels.emplace();
  data.source = "synthetic";
  std::vector<double> centre(dims);
  for (std::size_t c = 0; c < spec.clusters; ++c) {
    for (std::size_t i = 0; i < dims; ++i) {
      centre[i] = standard_normal(rng) * scale[i];
    }
    normalize_in_place(centre);
    for (std::size_t s = 0; s < spec.per_cluster; ++s) {
      std::vector<double> row(dims);
      for (std::size_t i = 0; i < dims; ++i) {
        row[i] = centre[i] + spec.spread * standard_normal(rng) * scale[i];
      }
      normalize_in_place(row);
      data.values.insert(data.values.end(), row.begin(), row.end());
      data.labels->push_back(static_cast<int>(c));
      ++data.rows;
    }
  }
  data.steps.push_back(
      "synthetic_clustered(qubits=" + std::to_string(spec.num_qubits) +
      ", clusters=" + std::to_string(spec.clusters) +
      ", per_cluster=" + std::to_string(spec.per_cluster) +
      ", seed=" + std::to_string(spec.seed) + ")");
  return data;
}

}  // namespace enqode
