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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace enqode {

/// Raised for malformed or unusable input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Dataset {
  std::size_t rows = 0;
  std::size_t dims = 0;
  std::vector<double> values;  // row-major
  std::optional<std::vector<int>> labels;
  std::string source;
  std::vector<std::string> steps;  // preprocessing chain, in order

  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * dims, dims};
  }
  std::span<double> row(std::size_t r) {
    return {values.data() + r * dims, dims};
  }
};

/// Comma-separated numeric table. A first line containing a non-numeric
/// cell is treated as a header. With `has_label_column` the last column is
/// parsed as an integer label.
Dataset load_csv(const std::filesystem::path &path, bool has_label_column);
Dataset parse_csv(const std::string &text, bool has_label_column,
                  const std::string &source = "<memory>");

struct PcaResult {
  Dataset data;
  /// Variance along each retained direction, descending.
  std::vector<double> explained_variance;
  /// Retained variance over total variance.
  double explained_variance_ratio = 0.0;
  /// Retained directions, row-major target_dims x dims.
  std::vector<double> components;
};

/**
 * Mean-centred projection onto the top principal directions. Each direction
 * is signed so its largest-magnitude loading is positive. Throws DataError
 * when target_dims exceeds min(rows, dims) or is zero.
 */
PcaResult pca_reduce(const Dataset &data, std::size_t target_dims);

/// Divides each row by its Euclidean norm; a zero row is a DataError.
Dataset l2_normalize(const Dataset &data);

/// Keeps at most `per_class` rows of every label (all rows when the dataset
/// is unlabelled), chosen by a seeded shuffle. Row order is preserved.
Dataset subsample_per_class(const Dataset &data, std::size_t per_class,
                            std::uint64_t seed);

/// 64-bit FNV-1a over the shape and values, as 16 hex digits.
std::string fingerprint(const Dataset &data);

void save_csv(const Dataset &data, const std::filesystem::path &path);
nlohmann::json provenance_json(const Dataset &data);

}  // namespace enqode
