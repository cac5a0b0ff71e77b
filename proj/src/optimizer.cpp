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

#include "enqode/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <exception>
#include <string>

#include <ceres/ceres.h>

namespace enqode {

namespace {

// Adapts an Objective to Ceres. Failures are recorded rather than thrown
// through the solver and re-raised once it returns.
class CeresObjective final : public ceres::FirstOrderFunction {
 public:
  CeresObjective(const Objective &objective, int dim)
      : objective_(objective), dim_(dim) {}

  bool Evaluate(const double *parameters, double *cost,
                double *gradient) const override {
    if (failure_) return false;
    std::vector<double> x(parameters, parameters + dim_);
    try {
      LossAndGrad lg = objective_(x);
      ++evals_;
      bool finite = std::isfinite(lg.loss) &&
                    lg.grad.size() == static_cast<std::size_t>(dim_);
      for (double v : lg.grad) finite = finite && std::isfinite(v);
      if (!finite) {
        failure_ = std::make_exception_ptr(NonFiniteObjective(
            "objective returned a non-finite loss or gradient after " +
                std::to_string(evals_) + " evaluation(s)",
            std::move(x)));
        return false;
      }
      *cost = lg.loss;
      if (gradient) std::copy(lg.grad.begin(), lg.grad.end(), gradient);
      return true;
    } catch (...) {
      failure_ = std::current_exception();
      return false;
    }
  }

  int NumParameters() const override { return dim_; }

  void rethrow_failure() const {
    if (failure_) std::rethrow_exception(failure_);
  }
  std::size_t evals() const { return evals_; }

 private:
  const Objective &objective_;
  int dim_;
  mutable std::exception_ptr failure_;
  mutable std::size_t evals_ = 0;
};

OptimizeResult run_lbfgs(const Objective &objective, std::vector<double> theta,
                         const OptimizerOptions &opts, std::size_t &evals) {
  OptimizeResult result;
  const int dim = static_cast<int>(theta.size());
  // GradientProblem takes ownership of the function.
  auto *function = new CeresObjective(objective, dim);
  const ceres::GradientProblem problem(function);

  ceres::GradientProblemSolver::Options o;
  o.line_search_direction_type = ceres::LBFGS;
  o.line_search_type = ceres::WOLFE;
  o.line_search_interpolation_type = ceres::CUBIC;
  o.max_lbfgs_rank = static_cast<int>(opts.history_size);
  o.use_approximate_eigenvalue_bfgs_scaling = true;
  o.line_search_sufficient_function_decrease = opts.c1;
  o.line_search_sufficient_curvature_decrease = opts.c2;
  o.max_num_line_search_step_size_iterations =
      static_cast<int>(opts.max_line_search_evals);
  o.min_line_search_step_size = 1e-16;
  o.max_num_iterations = static_cast<int>(opts.max_iters);
  o.gradient_tolerance = opts.grad_tolerance;
  o.function_tolerance = opts.loss_tolerance;
  o.parameter_tolerance = 0.0;
  o.logging_type = ceres::SILENT;

  ceres::GradientProblemSolver::Summary summary;
  if (dim > 0) {
    ceres::Solve(o, problem, theta.data(), &summary);
    for (const ceres::IterationSummary &it : summary.iterations) {
      if (it.step_is_successful || it.iteration == 0) {
        result.loss_history.push_back(it.cost);
      }
    }
    // Converged at the start point: Ceres records no iterations.
    if (result.loss_history.empty()) {
      result.loss_history.push_back(summary.initial_cost);
    }
  } else {
    double cost = 0.0;
    problem.Evaluate(theta.data(), &cost, nullptr);
    summary.final_cost = cost;
    summary.termination_type = ceres::CONVERGENCE;
    result.loss_history.push_back(cost);
  }
  function->rethrow_failure();
  evals += function->evals();

  result.theta_star = std::move(theta);
  result.loss_star = summary.final_cost;
  result.iterations =
      result.loss_history.empty() ? 0 : result.loss_history.size() - 1;
  result.converged = summary.termination_type == ceres::CONVERGENCE;
  return result;
}

}  // namespace

void OptimizerOptions::validate() const {
  if (!(c1 > 0.0 && c1 < c2 && c2 < 1.0)) {
    throw std::invalid_argument("line search needs 0 < c1 < c2 < 1");
  }
  if (history_size < 1) {
    throw std::invalid_argument("history_size must be at least 1");
  }
  if (max_line_search_evals < 1) {
    throw std::invalid_argument("max_line_search_evals must be at least 1");
  }
  if (!(grad_tolerance >= 0.0) || !(loss_tolerance >= 0.0)) {
    throw std::invalid_argument("tolerances must be non-negative");
  }
}

void to_json(nlohmann::json &j, const OptimizerOptions &o) {
  j = {{"max_iters", o.max_iters},
       {"grad_tolerance", o.grad_tolerance},
       {"loss_tolerance", o.loss_tolerance},
       {"history_size", o.history_size},
       {"c1", o.c1},
       {"c2", o.c2},
       {"max_line_search_evals", o.max_line_search_evals},
       {"random_restart", o.random_restart},
       {"restart_loss", o.restart_loss},
       {"restart_seed", o.restart_seed}};
}

void from_json(const nlohmann::json &j, OptimizerOptions &o) {
  o.max_iters = j.value("max_iters", o.max_iters);
  o.grad_tolerance = j.value("grad_tolerance", o.grad_tolerance);
  o.loss_tolerance = j.value("loss_tolerance", o.loss_tolerance);
  o.history_size = j.value("history_size", o.history_size);
  o.c1 = j.value("c1", o.c1);
  o.c2 = j.value("c2", o.c2);
  o.max_line_search_evals =
      j.value("max_line_search_evals", o.max_line_search_evals);
  o.random_restart = j.value("random_restart", o.random_restart);
  o.restart_loss = j.value("restart_loss", o.restart_loss);
  o.restart_seed = j.value("restart_seed", o.restart_seed);
}

OptimizeResult minimize(const Objective &objective,
                        std::vector<double> theta0,
                        const OptimizerOptions &options) {
  options.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t dim = theta0.size();
  std::size_t evals = 0;
  OptimizeResult result = run_lbfgs(objective, std::move(theta0), options, evals);

  if (options.random_restart && result.loss_star > options.restart_loss) {
    std::mt19937_64 rng(options.restart_seed);
    std::uniform_real_distribution<double> angle(-std::numbers::pi,
                                                 std::numbers::pi);
    std::vector<double> fresh(dim);
    for (double &v : fresh) v = angle(rng);
    OptimizeResult second = run_lbfgs(objective, std::move(fresh), options, evals);
    second.iterations += result.iterations;
    if (second.loss_star < result.loss_star) {
      result = std::move(second);
    } else {
      result.iterations = second.iterations;
    }
  }
  result.gradient_evals = evals;
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace enqode
