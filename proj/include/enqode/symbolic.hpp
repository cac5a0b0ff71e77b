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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

namespace enqode {

using Complex = std::complex<double>;
using StateVector = std::vector<Complex>;

/**
 * Closed-form state reachable from |+i>^n by RZ and CY gates.
 *
 * Every amplitude has magnitude 2^(-n/2). Amplitude r at parameters theta is
 *
 *     2^(-n/2) * k_r * exp(i * sum_j p_rj theta_j / 2)
 *
 * where k_r is a fourth root of unity and p_rj is in {-1, 0, +1}. k_r is
 * stored as its quarter-turn exponent e_r (k_r = i^e_r), so closure under
 * the supported gates holds by construction.
 *
 * Qubit q corresponds to bit q of the row index. RZ uses the convention
 * Rz(theta) = diag(exp(-i theta/2), exp(+i theta/2)).
 */
class PhaseLinearState {
 public:
  /// ((|0> + i|1>)/sqrt 2)^n, i.e. Rx(-pi/2) on every qubit of |0...0>.
  static PhaseLinearState init_plus_i(unsigned n);

  /// Appends RZ on `qubit` bound to a fresh parameter; `slot` must equal
  /// num_params().
  void apply_rz(unsigned qubit, std::size_t slot);

  void apply_cy(unsigned control, unsigned target);

  StateVector evaluate(std::span<const double> theta) const;

  unsigned num_qubits() const { return n_; }
  std::size_t num_params() const { return l_; }
  std::size_t dim() const { return std::size_t{1} << n_; }

  Complex k(std::size_t row) const;
  std::uint8_t k_exponent(std::size_t row) const { return k_exp_[row]; }
  int p(std::size_t row, std::size_t col) const {
    return p_[row * l_ + col];
  }
  /// Row of p for one basis index, length num_params().
  std::span<const std::int8_t> p_row(std::size_t row) const {
    return {p_.data() + row * l_, l_};
  }

  nlohmann::json debug_json() const;

  bool operator==(const PhaseLinearState &) const = default;

 private:
  PhaseLinearState(unsigned n) : n_(n) {}

  unsigned n_;
  std::size_t l_ = 0;
  std::vector<std::uint8_t> k_exp_;
  std::vector<std::int8_t> p_;  // row-major, dim() x l_
};

struct LossAndGrad {
  double loss = 0.0;
  std::vector<double> grad;
};

/**
 * Infidelity 1 - |<t|psi(theta)>|^2 against a fixed target frame t, with
 * its exact gradient from the phase-linear form.
 */
class OverlapModel {
 public:
  /// Throws std::invalid_argument if the target length differs from the
  /// state dimension or ||t|| deviates from 1 by more than 1e-8.
  OverlapModel(PhaseLinearState state, StateVector target);

  LossAndGrad loss_and_grad(std::span<const double> theta) const;
  double loss(std::span<const double> theta) const;

  const PhaseLinearState &state() const { return state_; }
  const StateVector &target() const { return target_; }

 private:
  Complex overlap(std::span<const double> theta,
                  std::vector<Complex> *terms) const;

  PhaseLinearState state_;
  StateVector target_;
};

}  // namespace enqode
