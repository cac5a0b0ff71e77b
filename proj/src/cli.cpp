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

#include "enqode/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <ostream>

#include "CLI11.hpp"
#include "enqode/baseline.hpp"
#include "enqode/dataio.hpp"
#include "enqode/pipeline.hpp"
#include "enqode/report.hpp"

namespace enqode {

namespace {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

class Log {
 public:
  explicit Log(std::ostream &sink) : sink_(sink) {
    if (const char *env = std::getenv("ENQODE_LOG")) {
      const std::string v = env;
      if (v == "error") level_ = Level::Error;
      else if (v == "warn") level_ = Level::Warn;
      else if (v == "debug") level_ = Level::Debug;
      else if (v == "off") level_ = static_cast<Level>(-1);
    }
  }
  void error(const std::string &m) { emit(Level::Error, "error", m); }
  void warn(const std::string &m) { emit(Level::Warn, "warn", m); }
  void info(const std::string &m) { emit(Level::Info, "info", m); }
  void debug(const std::string &m) { emit(Level::Debug, "debug", m); }

 private:
  void emit(Level l, const char *tag, const std::string &m) {
    if (static_cast<int>(l) <= static_cast<int>(level_)) {
      sink_ << "[" << tag << "] " << m << '\n';
    }
  }
  std::ostream &sink_;
  Level level_ = Level::Info;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json read_json(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

std::filesystem::path sidecar_path(const std::filesystem::path &csv) {
  std::filesystem::path p = csv;
  p.replace_extension(".provenance.json");
  return p;
}

GateKind two_qubit_kind(const std::string &name) {
  if (name == "ecr") return GateKind::ECR;
  if (name == "cx") return GateKind::CX;
  throw InputError("two_qubit must be 'ecr' or 'cx', got '" + name + "'");
}

std::filesystem::path dataset_path(const RunConfig &c) {
  return c.dataset.empty() ? c.out / "dataset.csv" : c.dataset;
}

std::filesystem::path library_path(const RunConfig &c) {
  return c.library.empty() ? c.out / "library.json" : c.library;
}

// Prepared datasets carry their label flag in the sidecar.
Dataset load_prepared(const RunConfig &c) {
  const auto path = dataset_path(c);
  bool labelled = c.labels;
  const auto side = sidecar_path(path);
  if (std::filesystem::exists(side)) {
    labelled = read_json(side).value("labelled", labelled);
  }
  Dataset data = load_csv(path, labelled);
  for (std::size_t r = 0; r < data.rows; ++r) {
    double s = 0.0;
    for (double v : data.row(r)) s += v * v;
    if (std::abs(std::sqrt(s) - 1.0) > 1e-8) {
      throw InputError(path.string() + ": row " + std::to_string(r) +
                       " is not unit-norm; run 'prepare' first");
    }
  }
  return data;
}

Dataset pca_by_class(const Dataset &data, std::size_t target) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t r = 0; r < data.rows; ++r) {
    groups[(*data.labels)[r]].push_back(r);
  }
  Dataset out;
  out.rows = data.rows;
  out.dims = target;
  out.values.assign(data.rows * target, 0.0);
  out.labels = data.labels;
  out.source = data.source;
  out.steps = data.steps;
  for (const auto &[label, idx] : groups) {
    Dataset part;
    part.rows = idx.size();
    part.dims = data.dims;
    for (std::size_t r : idx) {
      const auto row = data.row(r);
      part.values.insert(part.values.end(), row.begin(), row.end());
    }
    const PcaResult p = pca_reduce(part, target);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      std::copy_n(p.data.row(i).begin(), target, out.row(idx[i]).begin());
    }
    out.steps.push_back("pca_reduce(class=" + std::to_string(label) +
                        ", target_dims=" + std::to_string(target) +
                        ", explained_variance_ratio=" +
                        std::to_string(p.explained_variance_ratio) + ")");
  }
  return out;
}

int cmd_prepare(const RunConfig &c, Log &log, std::ostream &out) {
  if (c.input.empty()) throw InputError("prepare needs --input");
  if (!std::filesystem::exists(c.input)) {
    throw InputError("input file not found: " + c.input.string());
  }
  const Dataset raw = load_csv(c.input, c.labels);
  log.info("loaded " + std::to_string(raw.rows) + " x " +
           std::to_string(raw.dims) + " from " + c.input.string());
  Dataset data = subsample_per_class(raw, c.per_class, c.seed);
  const std::size_t target = std::size_t{1} << c.qubits;
  if (c.skip_pca) {
    if (data.dims != target) {
      throw InputError("--no-pca needs exactly " + std::to_string(target) +
                       " features, input has " + std::to_string(data.dims));
    }
  } else if (c.pca_per_class && data.labels) {
    data = pca_by_class(data, target);
  } else {
    PcaResult p = pca_reduce(data, target);
    log.info("PCA keeps " + std::to_string(p.explained_variance_ratio) +
             " of the variance");
    data = std::move(p.data);
  }
  data = l2_normalize(data);
  std::filesystem::create_directories(c.out);
  const auto csv = c.out / "dataset.csv";
  save_csv(data, csv);
  write_text(sidecar_path(csv), provenance_json(data).dump(2) + "\n");
  out << "wrote " << csv.string() << " (" << data.rows << " rows, "
      << data.dims << " features)\n";
  return kExitOk;
}

int cmd_train(const RunConfig &c, Log &log, std::ostream &out) {
  const Dataset data = load_prepared(c);
  if (data.dims != (std::size_t{1} << c.qubits)) {
    throw InputError("dataset has " + std::to_string(data.dims) +
                     " features, expected 2^" + std::to_string(c.qubits));
  }
  ClusterOptions co;
  co.fidelity_floor = c.floor;
  co.k_max = std::min(c.kmax, data.rows);
  co.seed = c.seed;
  if (co.k_max < c.kmax) {
    log.warn("k_max clamped to the row count " + std::to_string(co.k_max));
  }
  const ClusterResult clusters = cluster(data, co);
  if (!clusters.feasible) {
    out << "fidelity floor " << c.floor << " unreachable with k_max = "
        << co.k_max << "; best achievable floor " << clusters.min_overlap
        << " at k = " << clusters.k << "\n";
    return kExitInfeasible;
  }
  log.info("k = " + std::to_string(clusters.k) +
           ", min overlap " + std::to_string(clusters.min_overlap));
  AnsatzConfig ac{c.qubits, c.layers};
  const TrainedLibrary lib =
      train_offline(data, clusters, ac, c.optimizer, c.jobs);
  std::filesystem::create_directories(c.out);
  const auto path = c.out / "library.json";
  save_library(lib, path);
  for (const ClusterModel &m : lib.clusters) {
    log.debug("cluster " + std::to_string(m.cluster_id) + " fidelity " +
              std::to_string(m.train_fidelity));
  }
  out << "trained " << lib.clusters.size() << " clusters in "
      << lib.offline_seconds << " s; wrote " << path.string() << "\n";
  return kExitOk;
}

int cmd_compare(const RunConfig &c, Log &log, std::ostream &out) {
  Dataset data = load_prepared(c);
  const TrainedLibrary lib = load_library(library_path(c));
  if (lib.clusters.empty()) throw InputError("library has no clusters");
  if (lib.fingerprint != fingerprint(data)) {
    log.warn("dataset fingerprint differs from the one the library was "
             "trained on");
  }
  if (c.limit > 0 && c.limit < data.rows) {
    data.rows = c.limit;
    data.values.resize(data.rows * data.dims);
    if (data.labels) data.labels->resize(data.rows);
  }
  CompareSettings settings;
  settings.noise = c.noise;
  settings.optimizer = c.optimizer;
  settings.basis.two_qubit_kind = two_qubit_kind(c.two_qubit);
  settings.jobs = c.jobs;
  settings.noisy = c.noisy;
  const ComparisonReport report = run_comparison(data, lib, settings);
  for (const SampleFailure &f : report.failures) {
    log.warn("sample " + std::to_string(f.sample_id) + " (" + f.method +
             "): " + f.message);
  }

  nlohmann::json echo = result_config_json(c);
  echo["qubits"] = lib.config.num_qubits;
  echo["layers"] = lib.config.layers;
  echo["library_fingerprint"] = lib.fingerprint;
  echo["dataset_fingerprint"] = fingerprint(data);
  echo["samples"] = data.rows;

  std::filesystem::create_directories(c.out);
  write_text(c.out / "report.json",
             report_to_json(report, echo, utc_timestamp()).dump(2) + "\n");
  write_text(c.out / "report.csv", report_csv(report));
  write_report_svgs(report, c.out);
  const AnsatzBundle bundle = build_ansatz(lib.config);
  write_text(c.out / "enqode_circuit.json",
             to_json(lower_to_basis(bundle.logical_circuit, settings.basis))
                     .dump(2) +
                 "\n");

  const MethodStats e = method_stats(report, "enqode");
  const MethodStats b = method_stats(report, "baseline");
  out << "samples " << data.rows << ", failures " << report.failures.size()
      << "\n"
      << "enqode   depth " << e.mean_depth << "  2q " << e.mean_two_qubit
      << "  ideal F " << e.mean_ideal_fidelity << "  noisy F "
      << e.mean_noisy_fidelity << "\n"
      << "baseline depth " << b.mean_depth << "  2q " << b.mean_two_qubit
      << "  ideal F " << b.mean_ideal_fidelity << "  noisy F "
      << b.mean_noisy_fidelity << "\n"
      << "wrote " << (c.out / "report.json").string() << "\n";
  if (report.rows.empty()) return kExitTotalFailure;
  return kExitOk;
}

int cmd_inspect(const std::filesystem::path &path, std::ostream &out) {
  const nlohmann::json doc = read_json(path);
  if (doc.contains("clusters")) {
    const TrainedLibrary lib = library_from_json(doc);
    out << "library: " << lib.config.num_qubits << " qubits, "
        << lib.config.layers << " layers, " << lib.clusters.size()
        << " clusters, fingerprint " << lib.fingerprint << "\n";
    for (const ClusterModel &m : lib.clusters) {
      out << "  cluster " << m.cluster_id << ": train fidelity "
          << m.train_fidelity << ", " << m.theta_star.size()
          << " parameters\n";
    }
  } else if (doc.contains("gates")) {
    const Circuit circ = circuit_from_json(doc);
    const GateCounts g = metrics(circ);
    out << "circuit: " << circ.num_qubits() << " qubits, " << circ.size()
        << " gates, " << circ.num_params() << " parameters\n"
        << "  depth " << g.depth_physical << ", one-qubit "
        << g.one_qubit_physical << ", two-qubit " << g.two_qubit_physical
        << ", total " << g.total_physical << ", virtual rz " << g.virtual_rz
        << "\n";
  } else {
    out << doc.dump(2) << "\n";
  }
  return kExitOk;
}

void add_common(CLI::App *cmd, RunConfig &c, std::string &config_path) {
  cmd->add_option("--config", config_path, "JSON config file");
  cmd->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--noise-p1", c.noise.p1, "one-qubit depolarizing rate");
  cmd->add_option("--noise-p2", c.noise.p2, "two-qubit depolarizing rate");
  cmd->add_option("--qubits", c.qubits, "qubit count");
  cmd->add_option("--layers", c.layers, "ansatz layers");
  cmd->add_option("--floor", c.floor, "cluster fidelity floor");
  cmd->add_option("--kmax", c.kmax, "maximum cluster count");
  cmd->add_option("--dataset", c.dataset, "prepared dataset CSV");
  cmd->add_option("--library", c.library, "trained library JSON");
}

}  // namespace

void RunConfig::validate() const {
  AnsatzConfig{qubits, layers}.validate();
  noise.validate();
  optimizer.validate();
  if (!(floor >= 0.0 && floor <= 1.0)) {
    throw InputError("floor must lie in [0, 1]");
  }
  if (kmax < 1) throw InputError("kmax must be at least 1");
  if (jobs < 1) throw InputError("jobs must be at least 1");
  if (per_class < 1) throw InputError("per_class must be at least 1");
  two_qubit_kind(two_qubit);
}

void merge_config(RunConfig &c, const nlohmann::json &doc) {
  try {
    c.qubits = doc.value("qubits", c.qubits);
    c.layers = doc.value("layers", c.layers);
    c.floor = doc.value("floor", c.floor);
    c.kmax = doc.value("kmax", c.kmax);
    c.seed = doc.value("seed", c.seed);
    c.jobs = doc.value("jobs", c.jobs);
    c.two_qubit = doc.value("two_qubit", c.two_qubit);
    if (doc.contains("noise")) {
      c.noise.p1 = doc["noise"].value("p1", c.noise.p1);
      c.noise.p2 = doc["noise"].value("p2", c.noise.p2);
    }
    if (doc.contains("optimizer")) {
      nlohmann::json merged = c.optimizer;
      merged.update(doc["optimizer"]);
      c.optimizer = merged.get<OptimizerOptions>();
    }
    if (doc.contains("input")) c.input = doc["input"].get<std::string>();
    if (doc.contains("dataset")) c.dataset = doc["dataset"].get<std::string>();
    if (doc.contains("library")) c.library = doc["library"].get<std::string>();
    if (doc.contains("out")) c.out = doc["out"].get<std::string>();
    c.labels = doc.value("labels", c.labels);
    c.per_class = doc.value("per_class", c.per_class);
    c.pca_per_class = doc.value("pca_per_class", c.pca_per_class);
    c.skip_pca = doc.value("skip_pca", c.skip_pca);
    c.limit = doc.value("limit", c.limit);
    c.noisy = doc.value("noisy", c.noisy);
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("bad config: ") + e.what());
  }
}

nlohmann::json result_config_json(const RunConfig &c) {
  return {{"qubits", c.qubits},
          {"layers", c.layers},
          {"floor", c.floor},
          {"kmax", c.kmax},
          {"seed", c.seed},
          {"two_qubit", c.two_qubit},
          {"noise", {{"p1", c.noise.p1}, {"p2", c.noise.p2}}},
          {"noisy", c.noisy},
          {"limit", c.limit},
          {"optimizer", c.optimizer}};
}

int run_cli(const std::vector<std::string> &args, std::ostream &out,
            std::ostream &err) {
  Log log(err);
  CLI::App app{"Fixed-depth approximate amplitude embedding compiler"};
  app.require_subcommand(1);

  RunConfig cli_values;
  std::string config_path;
  std::string inspect_path;

  auto *prepare = app.add_subcommand("prepare", "PCA-reduce and normalise a CSV");
  add_common(prepare, cli_values, config_path);
  prepare->add_option("--input", cli_values.input, "raw CSV");
  prepare->add_flag("--labels", cli_values.labels, "last column is a label");
  prepare->add_option("--per-class", cli_values.per_class,
                      "rows kept per label");
  prepare->add_flag("--pca-per-class", cli_values.pca_per_class,
                    "fit PCA separately for each label");
  prepare->add_flag("--no-pca", cli_values.skip_pca,
                    "input already has 2^qubits features");

  auto *train = app.add_subcommand("train", "cluster and train a library");
  add_common(train, cli_values, config_path);

  auto *compare = app.add_subcommand("compare", "compare against the baseline");
  add_common(compare, cli_values, config_path);
  compare->add_option("--limit", cli_values.limit, "first N samples only");
  bool no_noise = false;
  compare->add_flag("--no-noise", no_noise, "skip density-matrix runs");

  auto *inspect = app.add_subcommand("inspect", "summarise a library or circuit");
  inspect->add_option("path", inspect_path, "JSON file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (inspect->parsed()) return cmd_inspect(inspect_path, out);

    RunConfig config;
    if (!config_path.empty()) merge_config(config, read_json(config_path));
    // Flags given explicitly override the file.
    auto given = [&](const std::string &name) {
      for (CLI::App *sub : app.get_subcommands()) {
        const CLI::Option *opt = sub->get_option_no_throw(name);
        if (opt != nullptr && opt->count() > 0) return true;
      }
      return false;
    };
    if (given("--jobs")) config.jobs = cli_values.jobs;
    if (given("--seed")) config.seed = cli_values.seed;
    if (given("--out")) config.out = cli_values.out;
    if (given("--noise-p1")) config.noise.p1 = cli_values.noise.p1;
    if (given("--noise-p2")) config.noise.p2 = cli_values.noise.p2;
    if (given("--qubits")) config.qubits = cli_values.qubits;
    if (given("--layers")) config.layers = cli_values.layers;
    if (given("--floor")) config.floor = cli_values.floor;
    if (given("--kmax")) config.kmax = cli_values.kmax;
    if (given("--dataset")) config.dataset = cli_values.dataset;
    if (given("--library")) config.library = cli_values.library;
    if (given("--input")) config.input = cli_values.input;
    if (given("--labels")) config.labels = true;
    if (given("--per-class")) config.per_class = cli_values.per_class;
    if (given("--pca-per-class")) config.pca_per_class = true;
    if (given("--no-pca")) config.skip_pca = true;
    if (given("--limit")) config.limit = cli_values.limit;
    if (no_noise) config.noisy = false;
    config.validate();
    log.info("seed " + std::to_string(config.seed));

    if (prepare->parsed()) return cmd_prepare(config, log, out);
    if (train->parsed()) return cmd_train(config, log, out);
    return cmd_compare(config, log, out);
  } catch (const InputError &e) {
    log.error(e.what());
    return kExitInput;
  } catch (const DataError &e) {
    log.error(e.what());
    return kExitInput;
  } catch (const std::invalid_argument &e) {
    log.error(e.what());
    return kExitInput;
  } catch (const std::exception &e) {
    log.error(e.what());
    return kExitInternal;
  }
}

}  // namespace enqode
