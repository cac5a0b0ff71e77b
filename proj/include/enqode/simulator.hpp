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

#include <array>
#include <span>
#include <vector>

#include "enqode/circuit.hpp"
#include "enqode/symbolic.hpp"

namespace enqode {

/// Row-major 2x2 matrix.
using Matrix2 = std::array<Complex, 4>;
/// Row-major 4x4 matrix; local basis index is 2*bit(first) + bit(second).
using Matrix4 = std::array<Complex, 16>;

Matrix2 one_qubit_matrix(GateKind kind, double angle = 0.0);
Matrix4 two_qubit_matrix(GateKind kind);

/// Resolves a rotation gate's angle from either its fixed value or its slot.
double resolve_angle(const Gate &gate, std::span<const double> theta);

void apply_one_qubit(std::span<Complex> amps, unsigned qubit,
                     const Matrix2 &m);
void apply_two_qubit(std::span<Complex> amps, unsigned first, unsigned second,
                     const Matrix4 &m);
void apply_gate(std::span<Complex> amps, const Gate &gate,
                std::span<const double> theta);

/// Dense evolution of |0...0>. Parameters must be given iff the circuit has
/// parameter slots, with length num_params().
StateVector simulate_ideal(const Circuit &circuit,
                           std::span<const double> theta = {});

struct NoiseModel {
  double p1 = 2e-4;
  double p2 = 7e-3;

  void validate() const;
};

class DensityMatrix {
 public:
  static constexpr unsigned kMaxQubits = 10;

  explicit DensityMatrix(unsigned n);  // |0...0><0...0|
  DensityMatrix(unsigned n, std::vector<Complex> row_major);
  static DensityMatrix pure(const StateVector &psi);

  unsigned num_qubits() const { return n_; }
  std::size_t dim() const { return std::size_t{1} << n_; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return data_[i * dim() + j];
  }
  std::span<Complex> raw() { return data_; }
  std::span<const Complex> raw() const { return data_; }

  Complex trace() const;
  double hermiticity_error() const;
  /// Smallest eigenvalue (Hermitian part).
  double min_eigenvalue() const;
  /// Throws std::invalid_argument unless trace is 1 within 1e-10 and the
  /// matrix is Hermitian within 1e-12.
  void validate() const;

  void apply_unitary(const Gate &gate, std::span<const double> theta);
  void depolarize(std::span<const unsigned> qubits, double p);

 private:
  unsigned n_;
  std::vector<Complex> data_;
};

/// Density-matrix evolution of a basis-lowered circuit. Each physical gate
/// is followed by a depolarizing channel on its support; RZ is noiseless.
DensityMatrix simulate_noisy(const Circuit &circuit,
                             std::span<const double> theta,
                             const NoiseModel &noise);

/// (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 via Hermitian eigendecompositions.
double state_fidelity(const DensityMatrix &rho, const DensityMatrix &sigma);
/// <x|rho|x> for a pure reference state.
double state_fidelity(const DensityMatrix &rho, const StateVector &x);
/// |<a|b>|^2.
double state_fidelity(const StateVector &a, const StateVector &b);

/**
 * Reorders amplitudes so that logical qubit q ends up on physical qubit
 * layout[q]: out[index'] = in[index] where bit layout[q] of index' is bit q of
 * index.
 */
StateVector permute_qubits(const StateVector &in,
                           std::span<const unsigned> layout);

}  // namespace enqode
