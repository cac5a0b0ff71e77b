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
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "enqode/symbolic.hpp"

namespace enqode {

struct OptimizerOptions {
  std::size_t max_iters = 500;
  /// Stop when the infinity norm of the gradient drops to this value.
  double grad_tolerance = 1e-7;
  /// Stop when |f_k - f_{k+1}| < loss_tolerance * f_k.
  double loss_tolerance = 1e-10;
  std::size_t history_size = 10;
  /// Strong-Wolfe constants.
  double c1 = 1e-4;
  double c2 = 0.9;
  std::size_t max_line_search_evals = 40;
  /// One seeded random restart when the first run ends above
  /// restart_loss. Off by default.
  bool random_restart = false;
  double restart_loss = 0.2;
  std::uint64_t restart_seed = 0x5eed;

  void validate() const;
};

void to_json(nlohmann::json &j, const OptimizerOptions &o);
void from_json(const nlohmann::json &j, OptimizerOptions &o);

struct OptimizeResult {
  std::vector<double> theta_star;
  double loss_star = 1.0;
  std::size_t iterations = 0;
  std::size_t gradient_evals = 0;
  bool converged = false;
  double wall_time = 0.0;  // seconds
  /// Loss of every accepted iterate, starting with the initial point.
  std::vector<double> loss_history;
};

using Objective = std::function<LossAndGrad(std::span<const double>)>;

/// Raised when the objective returns a non-finite loss or gradient.
class NonFiniteObjective : public std::runtime_error {
 public:
  NonFiniteObjective(const std::string &what, std::vector<double> theta)
      : std::runtime_error(what), theta_(std::move(theta)) {}
  const std::vector<double> &theta() const { return theta_; }

 private:
  std::vector<double> theta_;
};

/**
 * Limited-memory BFGS with a Wolfe line search (Ceres).
 *
 * Accepted iterates have non-increasing loss. The run is deterministic for a
 * given objective, start point and options.
 */
OptimizeResult minimize(const Objective &objective,
                        std::vector<double> theta0,
                        const OptimizerOptions &options = {});

}  // namespace enqode
