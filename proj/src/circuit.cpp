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

#include "enqode/circuit.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <utility>

namespace enqode {

namespace {

constexpr std::array<std::pair<GateKind, std::string_view>, 9> kNames{{
    {GateKind::RZ, "rz"},
    {GateKind::RX, "rx"},
    {GateKind::RY, "ry"},
    {GateKind::SX, "sx"},
    {GateKind::X, "x"},
    {GateKind::CX, "cx"},
    {GateKind::ECR, "ecr"},
    {GateKind::CY, "cy"},
    {GateKind::SWAP, "swap"},
}};

}  // namespace

std::string_view to_string(GateKind kind) {
  for (const auto &[k, name] : kNames) {
    if (k == kind) return name;
  }
  throw std::invalid_argument("unknown gate kind");
}

GateKind gate_kind_from_string(std::string_view name) {
  for (const auto &[k, n] : kNames) {
    if (n == name) return k;
  }
  throw std::invalid_argument("unknown gate kind: " + std::string(name));
}

unsigned arity(GateKind kind) {
  switch (kind) {
    case GateKind::CX:
    case GateKind::ECR:
    case GateKind::CY:
    case GateKind::SWAP:
      return 2;
    default:
      return 1;
  }
}

bool is_rotation(GateKind kind) {
  return kind == GateKind::RZ || kind == GateKind::RX || kind == GateKind::RY;
}

Gate Gate::fixed(GateKind kind, std::vector<unsigned> qubits) {
  Gate g;
  g.kind = kind;
  g.qubits = std::move(qubits);
  return g;
}

Gate Gate::rotation(GateKind kind, unsigned qubit, double angle) {
  Gate g;
  g.kind = kind;
  g.qubits = {qubit};
  g.angle = angle;
  return g;
}

Gate Gate::parameterized(GateKind kind, unsigned qubit, std::size_t slot) {
  Gate g;
  g.kind = kind;
  g.qubits = {qubit};
  g.slot = slot;
  return g;
}

Circuit::Circuit(unsigned num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits == 0) {
    throw std::invalid_argument("circuit needs at least one qubit");
  }
}

Circuit &Circuit::append(Gate gate) {
  if (gate.qubits.size() != arity(gate.kind)) {
    throw std::invalid_argument(
        "gate " + std::string(to_string(gate.kind)) + " expects " +
        std::to_string(arity(gate.kind)) + " qubit(s)");
  }
  for (std::size_t i = 0; i < gate.qubits.size(); ++i) {
    if (gate.qubits[i] >= num_qubits_) {
      throw std::invalid_argument(
          "qubit index " + std::to_string(gate.qubits[i]) +
          " out of range for " + std::to_string(num_qubits_) + " qubits");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (gate.qubits[i] == gate.qubits[j]) {
        throw std::invalid_argument(
            "duplicate qubit " + std::to_string(gate.qubits[i]) + " in " +
            std::string(to_string(gate.kind)));
      }
    }
  }
  if (is_rotation(gate.kind)) {
    if (gate.angle.has_value() == gate.slot.has_value()) {
      throw std::invalid_argument(
          "rotation gate needs exactly one of angle or parameter slot");
    }
  } else if (gate.angle || gate.slot) {
    throw std::invalid_argument(
        "fixed gate " + std::string(to_string(gate.kind)) +
        " cannot carry an angle or slot");
  }
  if (gate.slot) num_params_ = std::max(num_params_, *gate.slot + 1);
  gates_.push_back(std::move(gate));
  return *this;
}

void Circuit::reserve_params(std::size_t count) {
  num_params_ = std::max(num_params_, count);
}

GateCounts metrics(const Circuit &circuit) {
  GateCounts counts;
  std::vector<std::size_t> level(circuit.num_qubits(), 0);
  for (const Gate &g : circuit.gates()) {
    if (g.kind == GateKind::RZ) {
      ++counts.virtual_rz;
      continue;
    }
    if (g.qubits.size() == 1) {
      ++counts.one_qubit_physical;
    } else {
      ++counts.two_qubit_physical;
    }
    std::size_t start = 0;
    for (unsigned q : g.qubits) start = std::max(start, level[q]);
    for (unsigned q : g.qubits) level[q] = start + 1;
  }
  counts.total_physical = counts.one_qubit_physical + counts.two_qubit_physical;
  counts.depth_physical =
      level.empty() ? 0 : *std::max_element(level.begin(), level.end());
  return counts;
}

Circuit concat(const Circuit &a, const Circuit &b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("concat: qubit counts differ");
  }
  Circuit out = a;
  for (const Gate &g : b.gates()) out.append(g);
  out.reserve_params(b.num_params());
  return out;
}

nlohmann::json to_json(const Circuit &circuit) {
  nlohmann::json gates = nlohmann::json::array();
  for (const Gate &g : circuit.gates()) {
    nlohmann::json j;
    j["kind"] = std::string(to_string(g.kind));
    j["qubits"] = g.qubits;
    if (g.angle) j["angle"] = *g.angle;
    if (g.slot) j["slot"] = *g.slot;
    gates.push_back(std::move(j));
  }
  return {{"num_qubits", circuit.num_qubits()},
          {"num_params", circuit.num_params()},
          {"gates", std::move(gates)}};
}

Circuit circuit_from_json(const nlohmann::json &doc) {
  Circuit circuit(doc.at("num_qubits").get<unsigned>());
  for (const auto &j : doc.at("gates")) {
    Gate g;
    g.kind = gate_kind_from_string(j.at("kind").get<std::string>());
    g.qubits = j.at("qubits").get<std::vector<unsigned>>();
    if (j.contains("angle")) g.angle = j.at("angle").get<double>();
    if (j.contains("slot")) g.slot = j.at("slot").get<std::size_t>();
    circuit.append(std::move(g));
  }
  circuit.reserve_params(doc.at("num_params").get<std::size_t>());
  return circuit;
}

}  // namespace enqode
