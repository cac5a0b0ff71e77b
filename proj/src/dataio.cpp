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

#include "enqode/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <Eigen/Dense>

namespace enqode {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_double(std::string_view cell, double &out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size() &&
         std::isfinite(out);
}

bool parse_int(std::string_view cell, int &out) {
  double v = 0.0;
  if (!parse_double(cell, v) || v != std::floor(v) ||
      std::abs(v) > 2147483647.0) {
    return false;
  }
  out = static_cast<int>(v);
  return true;
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

Dataset parse_csv(const std::string &text, bool has_label_column,
                  const std::string &source) {
  Dataset data;
  data.source = source;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (first_content) {
      first_content = false;
      double probe = 0.0;
      bool numeric = true;
      for (auto c : cells) numeric = numeric && parse_double(c, probe);
      if (!numeric) continue;  // header
    }
    const std::size_t width = cells.size();
    const std::size_t feature_count = has_label_column ? width - 1 : width;
    if (has_label_column && width < 2) {
      throw DataError(source + ":" + std::to_string(line_no) +
                      ": need at least one feature and a label");
    }
    if (data.rows == 0) {
      data.dims = feature_count;
    } else if (feature_count != data.dims) {
      throw DataError(source + ":" + std::to_string(line_no) + ": row has " +
                      std::to_string(width) + " cells, expected " +
                      std::to_string(data.dims + (has_label_column ? 1 : 0)));
    }
    for (std::size_t c = 0; c < feature_count; ++c) {
      double v = 0.0;
      if (!parse_double(cells[c], v)) {
        throw DataError(source + ":" + std::to_string(line_no) + ": column " +
                        std::to_string(c + 1) + " is not numeric: '" +
                        std::string(cells[c]) + "'");
      }
      data.values.push_back(v);
    }
    if (has_label_column) {
      int label = 0;
      if (!parse_int(cells.back(), label)) {
        throw DataError(source + ":" + std::to_string(line_no) +
                        ": label is not an integer: '" +
                        std::string(cells.back()) + "'");
      }
      labels.push_back(label);
    }
    ++data.rows;
  }
  if (data.rows == 0) throw DataError(source + ": no data rows");
  if (has_label_column) data.labels = std::move(labels);
  data.steps.push_back("load_csv(rows=" + std::to_string(data.rows) +
                       ", dims=" + std::to_string(data.dims) +
                       (has_label_column ? ", labelled" : "") + ")");
  return data;
}

Dataset load_csv(const std::filesystem::path &path, bool has_label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), has_label_column, path.string());
}

PcaResult pca_reduce(const Dataset &data, std::size_t target_dims) {
  if (target_dims == 0 || target_dims > std::min(data.rows, data.dims)) {
    throw DataError("PCA target of " + std::to_string(target_dims) +
                    " dims exceeds min(rows, dims) = " +
                    std::to_string(std::min(data.rows, data.dims)));
  }
  const auto rows = static_cast<Eigen::Index>(data.rows);
  const auto dims = static_cast<Eigen::Index>(data.dims);
  const auto k = static_cast<Eigen::Index>(target_dims);
  Eigen::Map<const RowMatrix> raw(data.values.data(), rows, dims);
  const Eigen::RowVectorXd mean = raw.colwise().mean();
  const Eigen::MatrixXd centered = raw.rowwise() - mean;
  const double denom = rows > 1 ? static_cast<double>(rows - 1) : 1.0;
  const double total_variance = centered.squaredNorm() / denom;

  Eigen::MatrixXd directions = Eigen::MatrixXd::Zero(dims, k);
  Eigen::VectorXd variances(k);
  if (dims <= rows) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        centered.transpose() * centered / denom);
    for (Eigen::Index c = 0; c < k; ++c) {
      variances(c) = std::max(0.0, eig.eigenvalues()(dims - 1 - c));
      directions.col(c) = eig.eigenvectors().col(dims - 1 - c);
    }
  } else {
    // Fewer samples than features: diagonalise the Gram matrix instead.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        centered * centered.transpose() / denom);
    const double floor = 1e-12 * std::max(1.0, eig.eigenvalues()(rows - 1));
    for (Eigen::Index c = 0; c < k; ++c) {
      const double lambda = std::max(0.0, eig.eigenvalues()(rows - 1 - c));
      variances(c) = lambda;
      if (lambda > floor) {
        directions.col(c) = centered.transpose() *
                            eig.eigenvectors().col(rows - 1 - c) /
                            std::sqrt(lambda * denom);
      }
    }
  }
  for (Eigen::Index c = 0; c < k; ++c) {
    Eigen::Index arg = 0;
    directions.col(c).cwiseAbs().maxCoeff(&arg);
    if (directions(arg, c) < 0.0) directions.col(c) *= -1.0;
  }

  const Eigen::MatrixXd scores = centered * directions;
  PcaResult result;
  result.data.rows = data.rows;
  result.data.dims = target_dims;
  result.data.values.resize(data.rows * target_dims);
  Eigen::Map<RowMatrix>(result.data.values.data(), rows, k) = scores;
  result.data.labels = data.labels;
  result.data.source = data.source;
  result.data.steps = data.steps;
  result.explained_variance.assign(variances.data(), variances.data() + k);
  double kept = variances.sum();
  result.explained_variance_ratio =
      total_variance > 0.0 ? std::min(1.0, kept / total_variance) : 1.0;
  result.components.resize(target_dims * data.dims);
  Eigen::Map<RowMatrix>(result.components.data(), k, dims) =
      directions.transpose();
  result.data.steps.push_back(
      "pca_reduce(target_dims=" + std::to_string(target_dims) +
      ", explained_variance_ratio=" +
      format_double(result.explained_variance_ratio) + ")");
  return result;
}

Dataset l2_normalize(const Dataset &data) {
  Dataset out = data;
  for (std::size_t r = 0; r < out.rows; ++r) {
    auto row = out.row(r);
    double norm2 = 0.0;
    for (double v : row) norm2 += v * v;
    if (!(norm2 > 0.0)) {
      throw DataError("row " + std::to_string(r) +
                      " has zero norm and cannot be normalised");
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (double &v : row) v *= inv;
  }
  out.steps.push_back("l2_normalize");
  return out;
}

Dataset subsample_per_class(const Dataset &data, std::size_t per_class,
                            std::uint64_t seed) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t r = 0; r < data.rows; ++r) {
    groups[data.labels ? (*data.labels)[r] : 0].push_back(r);
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> keep;
  for (auto &[label, idx] : groups) {
    // Fisher-Yates with raw engine output: identical on every platform.
    for (std::size_t i = idx.size(); i > 1; --i) {
      std::swap(idx[i - 1], idx[rng() % i]);
    }
    if (idx.size() > per_class) idx.resize(per_class);
    keep.insert(keep.end(), idx.begin(), idx.end());
  }
  std::sort(keep.begin(), keep.end());

  Dataset out;
  out.rows = keep.size();
  out.dims = data.dims;
  out.source = data.source;
  out.steps = data.steps;
  if (data.labels) out.labels.emplace();
  for (std::size_t r : keep) {
    const auto row = data.row(r);
    out.values.insert(out.values.end(), row.begin(), row.end());
    if (data.labels) out.labels->push_back((*data.labels)[r]);
  }
  out.steps.push_back("subsample_per_class(per_class=" +
                      std::to_string(per_class) +
                      ", seed=" + std::to_string(seed) + ")");
  return out;
}

std::string fingerprint(const Dataset &data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](const void *p, std::size_t len) {
    const auto *bytes = static_cast<const unsigned char *>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ull;
    }
  };
  const std::uint64_t shape[2] = {data.rows, data.dims};
  mix(shape, sizeof(shape));
  mix(data.values.data(), data.values.size() * sizeof(double));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

void save_csv(const Dataset &data, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  for (std::size_t r = 0; r < data.rows; ++r) {
    const auto row = data.row(r);
    for (std::size_t c = 0; c < data.dims; ++c) {
      if (c) out << ',';
      out << format_double(row[c]);
    }
    if (data.labels) out << ',' << (*data.labels)[r];
    out << '\n';
  }
}

nlohmann::json provenance_json(const Dataset &data) {
  return {{"source", data.source},
          {"rows", data.rows},
          {"dims", data.dims},
          {"labelled", data.labels.has_value()},
          {"steps", data.steps},
          {"fingerprint", fingerprint(data)}};
}

}  // namespace enqode
