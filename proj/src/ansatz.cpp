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

#include "enqode/ansatz.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace enqode {

namespace {

constexpr double kQuarter = std::numbers::pi / 2;

Matrix2 matmul(const Matrix2 &a, const Matrix2 &b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Matrix2 adjoint(const Matrix2 &m) {
  return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

}  // namespace

void AnsatzConfig::validate() const {
  if (num_qubits < 2) {
    throw std::invalid_argument("ansatz needs at least 2 qubits");
  }
  if (num_qubits > 16) {
    throw std::invalid_argument("ansatz supports at most 16 qubits");
  }
  if (layers < 1) throw std::invalid_argument("ansatz needs at least 1 layer");
}

std::vector<std::pair<unsigned, unsigned>> AnsatzConfig::entangler_pairs(
    unsigned layer) const {
  std::vector<std::pair<unsigned, unsigned>> pairs;
  for (unsigned a = layer % 2; a + 1 < num_qubits; a += 2) {
    pairs.emplace_back(a, a + 1);
  }
  return pairs;
}

AnsatzBundle build_ansatz(const AnsatzConfig &config) {
  config.validate();
  const unsigned n = config.num_qubits;
  Circuit circuit(n);
  PhaseLinearState symbolic = PhaseLinearState::init_plus_i(n);

  for (unsigned q = 0; q < n; ++q) {
    circuit.append(Gate::rotation(GateKind::RX, q, -kQuarter));
  }
  std::size_t slot = 0;
  auto rz_layer = [&] {
    for (unsigned q = 0; q < n; ++q, ++slot) {
      circuit.append(Gate::parameterized(GateKind::RZ, q, slot));
      symbolic.apply_rz(q, slot);
    }
  };
  for (unsigned layer = 0; layer < config.layers; ++layer) {
    rz_layer();
    for (const auto &[control, target] : config.entangler_pairs(layer)) {
      circuit.append(Gate::fixed(GateKind::CY, {control, target}));
      symbolic.apply_cy(control, target);
    }
  }
  rz_layer();
  for (unsigned q = 0; q < n; ++q) {
    circuit.append(Gate::rotation(GateKind::RX, q, -kQuarter));
    circuit.append(Gate::rotation(GateKind::RY, q, -kQuarter));
  }

  const Matrix2 factor = matmul(one_qubit_matrix(GateKind::RY, -kQuarter),
                                one_qubit_matrix(GateKind::RX, -kQuarter));
  return AnsatzBundle{config, std::move(circuit), std::move(symbolic),
                      std::vector<Matrix2>(n, factor)};
}

StateVector invert_epilogue(const AnsatzBundle &bundle,
                            std::span<const double> x) {
  const std::size_t dim = std::size_t{1} << bundle.config.num_qubits;
  if (x.size() != dim) {
    throw std::invalid_argument("target has length " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(dim));
  }
  double norm2 = 0.0;
  for (double v : x) norm2 += v * v;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-8) {
    throw std::invalid_argument("target vector is not normalised");
  }
  StateVector t(x.begin(), x.end());
  for (unsigned q = 0; q < bundle.config.num_qubits; ++q) {
    apply_one_qubit(t, q, adjoint(bundle.epilogue[q]));
  }
  return t;
}

StateVector apply_epilogue(const AnsatzBundle &bundle, StateVector psi) {
  for (unsigned q = 0; q < bundle.config.num_qubits; ++q) {
    apply_one_qubit(psi, q, bundle.epilogue[q]);
  }
  return psi;
}

StateVector ansatz_state(const AnsatzBundle &bundle,
                         std::span<const double> theta) {
  return apply_epilogue(bundle, bundle.symbolic.evaluate(theta));
}

OverlapModel embedding_model(const AnsatzBundle &bundle,
                             std::span<const double> x) {
  return OverlapModel(bundle.symbolic, invert_epilogue(bundle, x));
}

}  // namespace enqode
