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

#include <span>
#include <utility>
#include <vector>

#include "enqode/circuit.hpp"
#include "enqode/simulator.hpp"
#include "enqode/symbolic.hpp"

namespace enqode {

/// Fixed-structure embedding ansatz on a linear chain of qubits.
struct AnsatzConfig {
  unsigned num_qubits = 8;
  unsigned layers = 8;

  void validate() const;
  /// One RZ per qubit per layer plus the closing RZ layer.
  std::size_t num_params() const {
    return std::size_t{num_qubits} * (layers + 1);
  }
  /// CY pairs (control, target) of one layer: (0,1),(2,3),... on even
  /// layers and (1,2),(3,4),... on odd layers.
  std::vector<std::pair<unsigned, unsigned>> entangler_pairs(
      unsigned layer) const;

  bool operator==(const AnsatzConfig &) const = default;
};

struct AnsatzBundle {
  AnsatzConfig config;
  /// Rx(-pi/2) prologue, layered RZ/CY body, closing RZ layer, then
  /// Rx(-pi/2) and Ry(-pi/2) on every qubit.
  Circuit logical_circuit;
  /// The body only; the prologue is folded into the |+i> start.
  PhaseLinearState symbolic;
  /// Per-qubit epilogue unitary Ry(-pi/2) * Rx(-pi/2).
  std::vector<Matrix2> epilogue;
};

AnsatzBundle build_ansatz(const AnsatzConfig &config);

/// Epilogue^dagger * x. Throws std::invalid_argument if the length is not
/// 2^n or ||x|| deviates from 1 by more than 1e-8.
StateVector invert_epilogue(const AnsatzBundle &bundle,
                            std::span<const double> x);

StateVector apply_epilogue(const AnsatzBundle &bundle, StateVector psi);

/// Output of the full ansatz circuit at theta, from the closed form.
StateVector ansatz_state(const AnsatzBundle &bundle,
                         std::span<const double> theta);

/// Overlap objective whose optimum embeds x.
OverlapModel embedding_model(const AnsatzBundle &bundle,
                             std::span<const double> x);

}  // namespace enqode
