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

#include "enqode/baseline.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "enqode/simulator.hpp"

namespace enqode {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleEps = 1e-12;

unsigned qubits_for_length(std::size_t len) {
  if (len < 2 || !std::has_single_bit(len)) {
    throw std::invalid_argument("state length " + std::to_string(len) +
                                " is not a power of two >= 2");
  }
  return static_cast<unsigned>(std::countr_zero(len));
}

double block_norm(std::span<const double> x, std::size_t begin,
                  std::size_t len) {
  double s = 0.0;
  for (std::size_t i = begin; i < begin + len; ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

// Removes control bits the angle table does not depend on. Returns the
// surviving control qubits; `angles` is compressed in place.
std::vector<unsigned> prune_controls(std::vector<double> &angles,
                                     std::vector<unsigned> controls) {
  for (std::size_t b = controls.size(); b-- > 0;) {
    const std::size_t bit = std::size_t{1} << b;
    bool independent = true;
    for (std::size_t j = 0; j < angles.size() && independent; ++j) {
      if (!(j & bit) && std::abs(angles[j] - angles[j | bit]) > kAngleEps) {
        independent = false;
      }
    }
    if (!independent) continue;
    std::vector<double> kept;
    kept.reserve(angles.size() / 2);
    for (std::size_t j = 0; j < angles.size(); ++j) {
      if (!(j & bit)) kept.push_back(angles[j]);
    }
    angles = std::move(kept);
    controls.erase(controls.begin() + static_cast<std::ptrdiff_t>(b));
  }
  return controls;
}

// Uniformly controlled RY: control value j (bit b of j <-> controls[b])
// rotates the target by angles[j].
void append_multiplexed_ry(Circuit &circuit, unsigned target,
                           std::vector<unsigned> controls,
                           std::vector<double> angles) {
  bool all_zero = true;
  for (double a : angles) all_zero = all_zero && std::abs(a) <= kAngleEps;
  if (all_zero) return;

  controls = prune_controls(angles, std::move(controls));
  const std::size_t count = angles.size();
  const std::size_t m = controls.size();
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t gray = i ^ (i >> 1);
    double theta = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      theta += (std::popcount(j & gray) & 1) ? -angles[j] : angles[j];
    }
    theta /= static_cast<double>(count);
    if (std::abs(theta) > kAngleEps) {
      circuit.append(Gate::rotation(GateKind::RY, target, theta));
    }
    if (m == 0) break;
    const std::size_t flip =
        (i + 1 < count) ? static_cast<std::size_t>(std::countr_zero(i + 1))
                        : m - 1;
    circuit.append(Gate::fixed(GateKind::CX, {controls[flip], target}));
  }
}

void emit_u(Circuit &out, unsigned q, double theta, double phi,
            double lambda) {
  // U(theta, phi, lambda) = RZ(phi + pi) SX RZ(theta + pi) SX RZ(lambda),
  // up to global phase; gates listed in time order.
  out.append(Gate::rotation(GateKind::RZ, q, lambda));
  out.append(Gate::fixed(GateKind::SX, {q}));
  out.append(Gate::rotation(GateKind::RZ, q, theta + kPi));
  out.append(Gate::fixed(GateKind::SX, {q}));
  out.append(Gate::rotation(GateKind::RZ, q, phi + kPi));
}

void emit_cx(Circuit &out, unsigned c, unsigned t, GateKind two_qubit) {
  if (two_qubit == GateKind::CX) {
    out.append(Gate::fixed(GateKind::CX, {c, t}));
    return;
  }
  // CX(c, t) = (X (x) X) ECR(c, t) (RZ(-pi/2) (x) SX), up to global phase.
  out.append(Gate::rotation(GateKind::RZ, c, -kPi / 2));
  out.append(Gate::fixed(GateKind::SX, {t}));
  out.append(Gate::fixed(GateKind::ECR, {c, t}));
  out.append(Gate::fixed(GateKind::X, {c}));
  out.append(Gate::fixed(GateKind::X, {t}));
}

void emit_ecr(Circuit &out, unsigned c, unsigned t, GateKind two_qubit) {
  if (two_qubit == GateKind::ECR) {
    out.append(Gate::fixed(GateKind::ECR, {c, t}));
    return;
  }
  // Inverse of the dressing above.
  out.append(Gate::rotation(GateKind::RZ, c, kPi / 2));
  out.append(Gate::fixed(GateKind::SX, {t}));
  out.append(Gate::fixed(GateKind::X, {t}));
  out.append(Gate::fixed(GateKind::CX, {c, t}));
  out.append(Gate::fixed(GateKind::X, {c}));
  out.append(Gate::fixed(GateKind::X, {t}));
}

}  // namespace

void BasisConfig::validate() const {
  if (two_qubit_kind != GateKind::CX && two_qubit_kind != GateKind::ECR) {
    throw std::invalid_argument("two-qubit basis gate must be cx or ecr");
  }
}

Circuit synthesize_exact(std::span<const double> x) {
  const unsigned n = qubits_for_length(x.size());
  double norm2 = 0.0;
  for (double v : x) norm2 += v * v;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-8) {
    throw std::invalid_argument("synthesize_exact: target is not normalised");
  }

  Circuit circuit(n);
  for (unsigned q = n; q-- > 0;) {
    const std::size_t block = std::size_t{2} << q;  // 2^(q+1)
    const std::size_t half = block / 2;
    const std::size_t count = x.size() / block;
    std::vector<double> angles(count);
    for (std::size_t j = 0; j < count; ++j) {
      const std::size_t begin = j * block;
      if (q == 0) {
        angles[j] = 2.0 * std::atan2(x[begin + 1], x[begin]);
      } else {
        angles[j] = 2.0 * std::atan2(block_norm(x, begin + half, half),
                                     block_norm(x, begin, half));
      }
    }
    std::vector<unsigned> controls;
    for (unsigned c = q + 1; c < n; ++c) controls.push_back(c);
    append_multiplexed_ry(circuit, q, std::move(controls), std::move(angles));
  }
  return circuit;
}

Circuit lower_to_basis(const Circuit &circuit, const BasisConfig &basis) {
  basis.validate();
  const GateKind two = basis.two_qubit_kind;
  Circuit out(circuit.num_qubits());
  for (const Gate &g : circuit.gates()) {
    switch (g.kind) {
      case GateKind::RZ:
      case GateKind::SX:
      case GateKind::X:
        out.append(g);
        break;
      case GateKind::RX:
      case GateKind::RY: {
        if (!g.angle) {
          throw std::invalid_argument(
              "lower_to_basis: parameterized rx/ry cannot be lowered");
        }
        const unsigned q = g.qubits[0];
        if (g.kind == GateKind::RX) {
          emit_u(out, q, *g.angle, -kPi / 2, kPi / 2);
        } else {
          emit_u(out, q, *g.angle, 0.0, 0.0);
        }
        break;
      }
      case GateKind::CX:
        emit_cx(out, g.qubits[0], g.qubits[1], two);
        break;
      case GateKind::ECR:
        emit_ecr(out, g.qubits[0], g.qubits[1], two);
        break;
      case GateKind::CY: {
        // CY = S_t CX S_t^dagger.
        const unsigned c = g.qubits[0];
        const unsigned t = g.qubits[1];
        out.append(Gate::rotation(GateKind::RZ, t, -kPi / 2));
        emit_cx(out, c, t, two);
        out.append(Gate::rotation(GateKind::RZ, t, kPi / 2));
        break;
      }
      case GateKind::SWAP: {
        const unsigned a = g.qubits[0];
        const unsigned b = g.qubits[1];
        emit_cx(out, a, b, two);
        emit_cx(out, b, a, two);
        emit_cx(out, a, b, two);
        break;
      }
      default:
        throw std::invalid_argument("lower_to_basis: no rule for " +
                                    std::string(to_string(g.kind)));
    }
  }
  out.reserve_params(circuit.num_params());
  return out;
}

RoutedCircuit route_linear(const Circuit &circuit) {
  const unsigned n = circuit.num_qubits();
  std::vector<unsigned> log_to_phys(n), phys_to_log(n);
  for (unsigned q = 0; q < n; ++q) log_to_phys[q] = phys_to_log[q] = q;

  RoutedCircuit routed{Circuit(n), {}, 0};
  for (const Gate &g : circuit.gates()) {
    Gate mapped = g;
    if (g.qubits.size() == 2) {
      unsigned pa = log_to_phys[g.qubits[0]];
      const unsigned pb = log_to_phys[g.qubits[1]];
      while (pa + 1 < pb || pb + 1 < pa) {
        const unsigned next = pa < pb ? pa + 1 : pa - 1;
        routed.circuit.append(Gate::fixed(GateKind::SWAP, {pa, next}));
        ++routed.swaps_inserted;
        const unsigned moved = phys_to_log[next];
        phys_to_log[next] = g.qubits[0];
        phys_to_log[pa] = moved;
        log_to_phys[moved] = pa;
        log_to_phys[g.qubits[0]] = next;
        pa = next;
      }
    }
    for (unsigned &q : mapped.qubits) q = log_to_phys[q];
    routed.circuit.append(std::move(mapped));
  }
  routed.circuit.reserve_params(circuit.num_params());
  routed.final_layout = std::move(log_to_phys);
  return routed;
}

SynthesisOutput compile_baseline(std::span<const double> x,
                                 const BasisConfig &basis) {
  const auto start = std::chrono::steady_clock::now();
  Circuit logical = synthesize_exact(x);
  RoutedCircuit routed = route_linear(lower_to_basis(logical, basis));
  Circuit physical = lower_to_basis(routed.circuit, basis);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  SynthesisOutput out{std::move(logical), std::move(physical),
                      std::move(routed.final_layout), {}, elapsed};
  out.metrics = metrics(out.physical_circuit);
  return out;
}

StateVector routed_target(std::span<const double> x,
                          std::span<const unsigned> final_layout) {
  return permute_qubits(StateVector(x.begin(), x.end()), final_layout);
}

}  // namespace enqode
