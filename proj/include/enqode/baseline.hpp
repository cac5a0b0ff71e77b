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
#include <vector>

#include "enqode/circuit.hpp"
#include "enqode/symbolic.hpp"

namespace enqode {

/// Target hardware basis: virtual RZ, SX and X, plus one two-qubit kind, on
/// a linear chain.
struct BasisConfig {
  GateKind two_qubit_kind = GateKind::ECR;

  void validate() const;
};

/**
 * Exact preparation of a real unit vector from |0...0> by a tree of
 * uniformly controlled RY rotations. Qubit n-1 is rotated first; qubit q is
 * controlled by every qubit above it. Each multiplexor with m live controls
 * becomes 2^m RY and 2^m CX (Gray-code order). Controls the angles do not
 * depend on are dropped, all-zero multiplexors are skipped, and zero RY
 * angles are omitted, so the gate count depends on the data.
 */
Circuit synthesize_exact(std::span<const double> x);

/// Rule-based rewrite into the basis; no merging or cancellation.
Circuit lower_to_basis(const Circuit &circuit, const BasisConfig &basis);

struct RoutedCircuit {
  Circuit circuit;
  /// final_layout[logical] = physical qubit holding it at the end.
  std::vector<unsigned> final_layout;
  std::size_t swaps_inserted = 0;
};

/// Makes every two-qubit gate act on neighbouring chain positions by
/// walking the first operand towards the second with SWAPs.
RoutedCircuit route_linear(const Circuit &circuit);

struct SynthesisOutput {
  Circuit logical_circuit;
  Circuit physical_circuit;
  std::vector<unsigned> final_layout;
  GateCounts metrics;
  double synth_time = 0.0;  // seconds: synthesis + lowering + routing
};

/// synthesize_exact -> lower_to_basis -> route_linear -> lower_to_basis.
SynthesisOutput compile_baseline(std::span<const double> x,
                                 const BasisConfig &basis = {});

/// The target as it appears on the physical qubits after routing.
StateVector routed_target(std::span<const double> x,
                          std::span<const unsigned> final_layout);

}  // namespace enqode
