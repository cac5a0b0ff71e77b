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

#include <gtest/gtest.h>

#include "dense_oracle.hpp"
#include "generators.hpp"

using namespace enqode;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

std::size_t count_kind(const Circuit &c, GateKind k) {
  std::size_t n = 0;
  for (const Gate &g : c.gates()) n += g.kind == k;
  return n;
}

std::vector<double> real_unit(gen::Rng &rng, std::size_t dim) {
  return rng.unit_vector(dim);
}

}  // namespace

TEST(Ansatz, TwoQubitOneLayerStructure) {
  const AnsatzBundle b = build_ansatz({2, 1});
  const auto &g = b.logical_circuit.gates();
  ASSERT_EQ(g.size(), 11u);
  EXPECT_EQ(b.logical_circuit.num_params(), 4u);
  EXPECT_EQ(b.config.num_params(), 4u);

  const std::vector<GateKind> kinds = {
      GateKind::RX, GateKind::RX, GateKind::RZ, GateKind::RZ,
      GateKind::CY, GateKind::RZ, GateKind::RZ, GateKind::RX,
      GateKind::RY, GateKind::RX, GateKind::RY};
  for (std::size_t i = 0; i < kinds.size(); ++i) EXPECT_EQ(g[i].kind, kinds[i]) << i;

  EXPECT_EQ(g[4].qubits, (std::vector<unsigned>{0, 1}));
  for (std::size_t i : {0u, 1u, 7u, 8u, 9u, 10u}) {
    ASSERT_TRUE(g[i].angle.has_value());
    EXPECT_DOUBLE_EQ(*g[i].angle, -kHalfPi);
  }
  for (std::size_t i : {2u, 3u, 5u, 6u}) EXPECT_TRUE(g[i].slot.has_value());
}

TEST(Ansatz, EightQubitEightLayerCounts) {
  const AnsatzBundle b = build_ansatz({8, 8});
  EXPECT_EQ(b.logical_circuit.num_params(), 72u);
  EXPECT_EQ(b.symbolic.num_params(), 72u);
  EXPECT_EQ(count_kind(b.logical_circuit, GateKind::CY), 28u);
  EXPECT_EQ(count_kind(b.logical_circuit, GateKind::RZ), 72u);
  EXPECT_EQ(b.epilogue.size(), 8u);
}

TEST(Ansatz, EntanglersAreNearestNeighbourAndAlternate) {
  const AnsatzConfig cfg{7, 4};
  for (unsigned layer = 0; layer < cfg.layers; ++layer) {
    std::vector<bool> used(cfg.num_qubits, false);
    for (auto [c, t] : cfg.entangler_pairs(layer)) {
      EXPECT_EQ(t, c + 1);
      EXPECT_EQ(c % 2, layer % 2);
      EXPECT_FALSE(used[c] || used[t]);
      used[c] = used[t] = true;
    }
  }
  const AnsatzBundle b = build_ansatz(cfg);
  for (const Gate &g : b.logical_circuit.gates()) {
    if (g.kind == GateKind::CY) EXPECT_EQ(g.qubits[1], g.qubits[0] + 1);
  }
}

TEST(Ansatz, BuildIsDeterministic) {
  const AnsatzBundle a = build_ansatz({5, 3}), b = build_ansatz({5, 3});
  EXPECT_EQ(to_json(a.logical_circuit).dump(), to_json(b.logical_circuit).dump());
  EXPECT_EQ(a.symbolic.debug_json().dump(), b.symbolic.debug_json().dump());
}

TEST(Ansatz, ConfigValidation) {
  EXPECT_THROW(build_ansatz({1, 4}), std::invalid_argument);
  EXPECT_THROW(build_ansatz({4, 0}), std::invalid_argument);
  EXPECT_THROW(build_ansatz({17, 1}), std::invalid_argument);
}

TEST(AnsatzProperty, ClosedFormMatchesDenseCircuit) {
  gen::Rng rng(401);
  for (unsigned n = 2; n <= 5; ++n) {
    for (unsigned layers = 1; layers <= 3; ++layers) {
      const AnsatzBundle b = build_ansatz({n, layers});
      for (int trial = 0; trial < 3; ++trial) {
        const std::vector<double> theta = rng.angles(b.config.num_params());
        const StateVector fast = ansatz_state(b, theta);
        const StateVector dense = oracle::run(b.logical_circuit, theta);
        EXPECT_LT(oracle::max_abs_diff(fast, dense), 1e-12) << n << " " << layers;
        EXPECT_LT(oracle::max_abs_diff(simulate_ideal(b.logical_circuit, theta), dense),
                  1e-12);
      }
    }
  }
}

TEST(AnsatzProperty, SymbolicBodyStartsFromPlusI) {
  // Prologue then body, without epilogue, equals the symbolic evaluation.
  gen::Rng rng(402);
  const AnsatzBundle b = build_ansatz({3, 2});
  Circuit body(3);
  const auto &g = b.logical_circuit.gates();
  for (std::size_t i = 0; i + 6 < g.size(); ++i) body.append(g[i]);
  const std::vector<double> theta = rng.angles(b.config.num_params());
  EXPECT_LT(oracle::max_abs_diff(b.symbolic.evaluate(theta), oracle::run(body, theta)),
            1e-12);
}

TEST(Ansatz, InvertEpilogueUndoesApply) {
  gen::Rng rng(403);
  const AnsatzBundle b = build_ansatz({4, 2});
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<double> x = real_unit(rng, 16);
    const StateVector frame = invert_epilogue(b, x);
    double norm2 = 0.0;
    for (const Complex &a : frame) norm2 += std::norm(a);
    EXPECT_NEAR(norm2, 1.0, 1e-12);
    const StateVector back = apply_epilogue(b, frame);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(std::abs(back[i] - x[i]), 0, 1e-12);
  }
}

TEST(Ansatz, InvertEpilogueRejectsBadInput) {
  const AnsatzBundle b = build_ansatz({2, 1});
  const std::vector<double> unnormalized = {1.0, 1.0, 0.0, 0.0};
  EXPECT_THROW(invert_epilogue(b, unnormalized), std::invalid_argument);
  const std::vector<double> short_x = {1.0, 0.0};
  EXPECT_THROW(invert_epilogue(b, short_x), std::invalid_argument);
  EXPECT_THROW(embedding_model(b, unnormalized), std::invalid_argument);
}

TEST(Ansatz, ReachableFrameHasZeroLoss) {
  gen::Rng rng(404);
  const AnsatzBundle b = build_ansatz({3, 2});
  const std::vector<double> theta = rng.angles(b.config.num_params());
  const OverlapModel model(b.symbolic, b.symbolic.evaluate(theta));
  EXPECT_NEAR(model.loss(theta), 0.0, 1e-12);
}

TEST(AnsatzProperty, EmbeddingLossIsOutputInfidelity) {
  gen::Rng rng(405);
  for (unsigned n = 2; n <= 5; ++n) {
    const AnsatzBundle b = build_ansatz({n, 2});
    for (int trial = 0; trial < 5; ++trial) {
      const std::vector<double> x = real_unit(rng, std::size_t{1} << n);
      const std::vector<double> theta = rng.angles(b.config.num_params());
      std::vector<oracle::C> xc(x.begin(), x.end());
      const double expected =
          1.0 - oracle::overlap2(xc, oracle::run(b.logical_circuit, theta));
      EXPECT_NEAR(embedding_model(b, x).loss(theta), expected, 1e-12);
    }
  }
}
