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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace enqode {

enum class GateKind { RZ, RX, RY, SX, X, CX, ECR, CY, SWAP };

std::string_view to_string(GateKind kind);
GateKind gate_kind_from_string(std::string_view name);

/// Number of qubits the gate kind acts on (1 or 2).
unsigned arity(GateKind kind);
bool is_rotation(GateKind kind);

/**
 * A single gate. Rotation kinds carry exactly one of a fixed angle or a
 * parameter slot; fixed kinds carry neither. For two-qubit kinds the first
 * qubit is the control (CX, CY, ECR).
 */
struct Gate {
  GateKind kind = GateKind::X;
  std::vector<unsigned> qubits;
  std::optional<double> angle;
  std::optional<std::size_t> slot;

  static Gate fixed(GateKind kind, std::vector<unsigned> qubits);
  static Gate rotation(GateKind kind, unsigned qubit, double angle);
  static Gate parameterized(GateKind kind, unsigned qubit, std::size_t slot);

  bool operator==(const Gate &) const = default;
};

struct GateCounts {
  std::size_t one_qubit_physical = 0;
  std::size_t two_qubit_physical = 0;
  std::size_t virtual_rz = 0;
  std::size_t total_physical = 0;
  std::size_t depth_physical = 0;

  bool operator==(const GateCounts &) const = default;
};

class Circuit {
 public:
  explicit Circuit(unsigned num_qubits);

  /// Validates the gate against this circuit and appends it. Throws
  /// std::invalid_argument on an out-of-range or repeated qubit, or on a
  /// rotation/fixed-kind payload mismatch.
  Circuit &append(Gate gate);

  unsigned num_qubits() const { return num_qubits_; }
  std::size_t num_params() const { return num_params_; }
  const std::vector<Gate> &gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  /// Raises the parameter count without adding gates (slots may be unused).
  void reserve_params(std::size_t count);

  bool operator==(const Circuit &) const = default;

 private:
  unsigned num_qubits_;
  std::size_t num_params_ = 0;
  std::vector<Gate> gates_;
};

/// Physical gate counts and critical-path depth. RZ is virtual: it is
/// counted separately and is transparent to depth.
GateCounts metrics(const Circuit &circuit);

Circuit concat(const Circuit &a, const Circuit &b);

nlohmann::json to_json(const Circuit &circuit);
Circuit circuit_from_json(const nlohmann::json &doc);

}  // namespace enqode
