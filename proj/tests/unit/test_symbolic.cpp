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

#include "enqode/symbolic.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "dense_oracle.hpp"
#include "generators.hpp"

using namespace enqode;
using oracle::C;

namespace {

constexpr double kPi = std::numbers::pi;

// Dense oracle: |0..0> -> Rx(-pi/2) on every qubit -> the RZ/CY program.
std::vector<C> dense_program(unsigned n, const std::vector<gen::Op> &ops,
                             const std::vector<double> &theta) {
  Circuit c(n);
  for (unsigned q = 0; q < n; ++q) {
    c.append(Gate::rotation(GateKind::RX, q, -kPi / 2));
  }
  std::size_t slot = 0;
  for (const gen::Op &op : ops) {
    if (op.is_rz) {
      c.append(Gate::parameterized(GateKind::RZ, op.a, slot++));
    } else {
      c.append(Gate::fixed(GateKind::CY, {op.a, op.b}));
    }
  }
  return oracle::run(c, theta);
}

PhaseLinearState symbolic_program(unsigned n, const std::vector<gen::Op> &ops) {
  PhaseLinearState s = PhaseLinearState::init_plus_i(n);
  std::size_t slot = 0;
  for (const gen::Op &op : ops) {
    if (op.is_rz) {
      s.apply_rz(op.a, slot++);
    } else {
      s.apply_cy(op.a, op.b);
    }
  }
  return s;
}

void expect_closed(const PhaseLinearState &s) {
  for (std::size_t r = 0; r < s.dim(); ++r) {
    EXPECT_LT(s.k_exponent(r), 4);
    for (std::size_t j = 0; j < s.num_params(); ++j) {
      EXPECT_GE(s.p(r, j), -1);
      EXPECT_LE(s.p(r, j), 1);
    }
  }
}

}  // namespace

TEST(InitPlusI, OneQubit) {
  const StateVector v = PhaseLinearState::init_plus_i(1).evaluate({});
  const double h = 1 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(v[0] - C(h, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v[1] - C(0, h)), 0.0, 1e-15);
}

TEST(InitPlusI, TwoQubitsTensorProduct) {
  const StateVector v = PhaseLinearState::init_plus_i(2).evaluate({});
  const std::vector<C> expected = {0.5, C(0, 0.5), C(0, 0.5), -0.5};
  EXPECT_LT(oracle::max_abs_diff(v, expected), 1e-15);
}

TEST(InitPlusI, PopcountRule) {
  const PhaseLinearState s = PhaseLinearState::init_plus_i(3);
  EXPECT_EQ(s.k(7), C(0, -1));
  EXPECT_EQ(s.num_params(), 0u);
}

TEST(InitPlusI, RejectsZeroQubits) {
  EXPECT_THROW(PhaseLinearState::init_plus_i(0), std::invalid_argument);
}

TEST(ApplyRz, HandComputedAtPi) {
  PhaseLinearState s = PhaseLinearState::init_plus_i(1);
  s.apply_rz(0, 0);
  const std::vector<double> theta = {kPi};
  const StateVector v = s.evaluate(theta);
  const double h = 1 / std::sqrt(2.0);
  EXPECT_LT(oracle::max_abs_diff(v, {C(0, -h), C(-h, 0)}), 1e-15);
}

TEST(ApplyRz, ColumnFollowsQubitBit) {
  PhaseLinearState s = PhaseLinearState::init_plus_i(2);
  s.apply_rz(1, 0);
  EXPECT_EQ(s.p(0, 0), -1);
  EXPECT_EQ(s.p(1, 0), -1);
  EXPECT_EQ(s.p(2, 0), 1);
  EXPECT_EQ(s.p(3, 0), 1);
}

TEST(ApplyRz, RejectsReusedOrSkippedSlot) {
  PhaseLinearState s = PhaseLinearState::init_plus_i(2);
  s.apply_rz(0, 0);
  EXPECT_THROW(s.apply_rz(1, 0), std::invalid_argument);
  EXPECT_THROW(s.apply_rz(1, 2), std::invalid_argument);
  EXPECT_THROW(s.apply_rz(2, 1), std::invalid_argument);
}

TEST(ApplyRz, RandomRzProgramMatchesDenseOracle) {
  gen::Rng rng(201);
  std::vector<gen::Op> ops;
  for (int i = 0; i < 12; ++i) {
    ops.push_back({true, static_cast<unsigned>(rng.below(4)), 0});
  }
  const std::vector<double> theta = rng.angles(ops.size());
  const StateVector v = symbolic_program(4, ops).evaluate(theta);
  EXPECT_LE(oracle::max_abs_diff(v, dense_program(4, ops, theta)), 1e-12);
}

TEST(ApplyCy, InitStateIsYEigenstate) {
  // |+i> is the +1 eigenstate of Y, so CY leaves |+i>|+i> unchanged; the
  // 4x4 CY matrix applied to the init vector gives the same amplitudes.
  PhaseLinearState s = PhaseLinearState::init_plus_i(2);
  s.apply_cy(1, 0);
  const std::vector<C> init = {0.5, C(0, 0.5), C(0, 0.5), -0.5};
  const std::vector<C> expected = oracle::apply_matrix(
      oracle::embed(oracle::local_matrix(GateKind::CY), {1, 0}, 2), init);
  EXPECT_LT(oracle::max_abs_diff(expected, init), 1e-15);
  EXPECT_LT(oracle::max_abs_diff(s.evaluate({}), expected), 1e-15);
}

TEST(ApplyCy, MovesRowsWithPhases) {
  // After RZ(pi) on qubit 0 the pair is no longer a Y eigenstate.
  PhaseLinearState s = PhaseLinearState::init_plus_i(2);
  s.apply_rz(0, 0);
  s.apply_cy(1, 0);
  const std::vector<double> theta = {kPi};
  const std::vector<gen::Op> ops = {{true, 0, 0}, {false, 1, 0}};
  EXPECT_LT(oracle::max_abs_diff(s.evaluate(theta), dense_program(2, ops, theta)),
            1e-15);
}

TEST(ApplyCy, IsAnInvolution) {
  gen::Rng rng(202);
  for (int trial = 0; trial < 20; ++trial) {
    PhaseLinearState s =
        symbolic_program(4, gen::rz_cy_program(rng, 4, 15));
    const PhaseLinearState before = s;
    const auto [c, t] = rng.distinct_pair(4);
    s.apply_cy(c, t);
    s.apply_cy(c, t);
    EXPECT_EQ(s, before);
  }
}

TEST(ApplyCy, RejectsEqualQubits) {
  PhaseLinearState s = PhaseLinearState::init_plus_i(2);
  EXPECT_THROW(s.apply_cy(1, 1), std::invalid_argument);
  EXPECT_THROW(s.apply_cy(0, 2), std::invalid_argument);
}

TEST(ApplyCy, RandomFiveQubitProgramMatchesDenseOracle) {
  gen::Rng rng(203);
  const auto ops = gen::rz_cy_program(rng, 5, 30);
  const PhaseLinearState s = symbolic_program(5, ops);
  const std::vector<double> theta = rng.angles(s.num_params());
  EXPECT_LE(oracle::max_abs_diff(s.evaluate(theta), dense_program(5, ops, theta)),
            1e-10);
}

TEST(Evaluate, ZeroParametersGiveScaledK) {
  gen::Rng rng(204);
  const PhaseLinearState s = symbolic_program(3, gen::rz_cy_program(rng, 3, 10));
  const StateVector v = s.evaluate(std::vector<double>(s.num_params(), 0.0));
  for (std::size_t r = 0; r < s.dim(); ++r) {
    EXPECT_LT(std::abs(v[r] - s.k(r) / std::sqrt(8.0)), 1e-15);
  }
}

TEST(Evaluate, PeriodFourPi) {
  PhaseLinearState s = PhaseLinearState::init_plus_i(1);
  s.apply_rz(0, 0);
  const std::vector<double> zero = {0.0}, four_pi = {4 * kPi};
  EXPECT_LT(oracle::max_abs_diff(s.evaluate(zero), s.evaluate(four_pi)), 1e-14);
}

TEST(Evaluate, TwoLayerThreeQubitAnsatzMatchesDenseOracle) {
  gen::Rng rng(205);
  std::vector<gen::Op> ops;
  for (unsigned layer = 0; layer < 2; ++layer) {
    for (unsigned q = 0; q < 3; ++q) ops.push_back({true, q, 0});
    for (unsigned a = layer % 2; a + 1 < 3; a += 2) ops.push_back({false, a, a + 1});
  }
  const PhaseLinearState s = symbolic_program(3, ops);
  const std::vector<double> theta = rng.angles(s.num_params());
  EXPECT_LE(oracle::max_abs_diff(s.evaluate(theta), dense_program(3, ops, theta)),
            1e-10);
}

TEST(Evaluate, RejectsLengthMismatch) {
  PhaseLinearState s = PhaseLinearState::init_plus_i(2);
  s.apply_rz(0, 0);
  EXPECT_THROW(s.evaluate({}), std::invalid_argument);
}

TEST(SymbolicProperty, OracleEquivalenceAndClosure) {
  gen::Rng rng(206);
  for (int trial = 0; trial < 60; ++trial) {
    const auto n = static_cast<unsigned>(2 + rng.below(4));
    const auto ops = gen::rz_cy_program(rng, n, rng.below(41));
    PhaseLinearState s = PhaseLinearState::init_plus_i(n);
    std::size_t slot = 0;
    for (const gen::Op &op : ops) {
      op.is_rz ? s.apply_rz(op.a, slot++) : s.apply_cy(op.a, op.b);
      expect_closed(s);
    }
    const std::vector<double> theta = rng.angles(s.num_params());
    const StateVector v = s.evaluate(theta);
    EXPECT_LE(oracle::max_abs_diff(v, dense_program(n, ops, theta)), 1e-10);
    const double mag = std::pow(2.0, -static_cast<double>(n) / 2);
    double norm2 = 0.0;
    for (const C &a : v) {
      EXPECT_NEAR(std::abs(a), mag, 1e-14);
      norm2 += std::norm(a);
    }
    EXPECT_NEAR(norm2, 1.0, 1e-12);
  }
}

TEST(SymbolicJson, DumpCarriesKAndP) {
  PhaseLinearState s = PhaseLinearState::init_plus_i(2);
  s.apply_rz(0, 0);
  const nlohmann::json j = s.debug_json();
  EXPECT_EQ(j.at("n"), 2);
  EXPECT_EQ(j.at("l"), 1);
  EXPECT_EQ(j.at("k_exponent"), nlohmann::json({0, 1, 1, 2}));
  EXPECT_EQ(j.at("p"), nlohmann::json({{-1}, {1}, {-1}, {1}}));
}

namespace {

OverlapModel random_model(gen::Rng &rng, unsigned n, unsigned layers,
                          std::vector<double> *theta_out = nullptr) {
  PhaseLinearState s = PhaseLinearState::init_plus_i(n);
  std::size_t slot = 0;
  for (unsigned layer = 0; layer < layers; ++layer) {
    for (unsigned q = 0; q < n; ++q) s.apply_rz(q, slot++);
    for (unsigned a = layer % 2; a + 1 < n; a += 2) s.apply_cy(a, a + 1);
  }
  std::vector<C> t(s.dim());
  double norm = 0.0;
  for (C &v : t) {
    v = C(rng.normal(), rng.normal());
    norm += std::norm(v);
  }
  for (C &v : t) v /= std::sqrt(norm);
  if (theta_out) *theta_out = rng.angles(s.num_params());
  return OverlapModel(std::move(s), std::move(t));
}

}  // namespace

TEST(LossAndGrad, ExactTargetIsGlobalOptimum) {
  gen::Rng rng(207);
  PhaseLinearState s = symbolic_program(3, gen::rz_cy_program(rng, 3, 20));
  const std::vector<double> theta0 = rng.angles(s.num_params());
  const StateVector target = s.evaluate(theta0);
  const OverlapModel m(s, target);
  const LossAndGrad lg = m.loss_and_grad(theta0);
  EXPECT_NEAR(lg.loss, 0.0, 1e-14);
  for (double g : lg.grad) EXPECT_NEAR(g, 0.0, 1e-13);
}

TEST(LossAndGrad, OneParameterShiftedCosine) {
  // psi = (e^{-i a/2}, i e^{i a/2})/sqrt2, t = (1, 0):
  // loss = 1 - 1/2 = const; use t = (1, 1)/sqrt2 instead.
  // <t|psi> = (e^{-ia/2} + i e^{ia/2})/2, |.|^2 = (1 - sin a)/2.
  PhaseLinearState s = PhaseLinearState::init_plus_i(1);
  s.apply_rz(0, 0);
  const double h = 1 / std::sqrt(2.0);
  const OverlapModel m(s, {h, h});
  for (double a : {-2.0, -0.3, 0.0, 0.7, 2.5}) {
    const std::vector<double> theta = {a};
    const LossAndGrad lg = m.loss_and_grad(theta);
    EXPECT_NEAR(lg.loss, 1.0 - (1.0 - std::sin(a)) / 2.0, 1e-14);
    EXPECT_NEAR(lg.grad[0], std::cos(a) / 2.0, 1e-14);
  }
}

TEST(LossAndGrad, MatchesCentralDifferences) {
  gen::Rng rng(208);
  std::vector<double> theta;
  const OverlapModel m = random_model(rng, 4, 3, &theta);
  const LossAndGrad lg = m.loss_and_grad(theta);
  const double h = 1e-6;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    std::vector<double> up = theta, down = theta;
    up[j] += h;
    down[j] -= h;
    const double fd = (m.loss(up) - m.loss(down)) / (2 * h);
    EXPECT_LE(std::abs(lg.grad[j] - fd), 1e-5 * std::max(1e-3, std::abs(fd)))
        << "component " << j;
  }
}

TEST(LossAndGrad, RangeAndGlobalPhaseInvariance) {
  gen::Rng rng(209);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> theta;
    const OverlapModel m = random_model(rng, 3, 2, &theta);
    StateVector rotated = m.target();
    const C phase = std::polar(1.0, rng.angle());
    for (C &v : rotated) v *= phase;
    const OverlapModel m2(m.state(), rotated);
    const double loss = m.loss(theta);
    EXPECT_GE(loss, 0.0);
    EXPECT_LE(loss, 1.0);
    EXPECT_NEAR(loss, m2.loss(theta), 1e-14);
  }
}

TEST(LossAndGrad, RejectsBadInputs) {
  PhaseLinearState s = PhaseLinearState::init_plus_i(1);
  s.apply_rz(0, 0);
  EXPECT_THROW(OverlapModel(s, {1.0}), std::invalid_argument);
  EXPECT_THROW(OverlapModel(s, {1.0, 1.0}), std::invalid_argument);
  const OverlapModel m(s, {1.0, 0.0});
  EXPECT_THROW(m.loss_and_grad({}), std::invalid_argument);
}
