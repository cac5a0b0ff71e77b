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

#include "enqode/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace enqode {

namespace {

constexpr Complex kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

Matrix2 conj(const Matrix2 &m) {
  Matrix2 out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = std::conj(m[i]);
  return out;
}

Matrix4 conj(const Matrix4 &m) {
  Matrix4 out;
  for (std::size_t i = 0; i < 16; ++i) out[i] = std::conj(m[i]);
  return out;
}

Eigen::MatrixXcd to_eigen(const DensityMatrix &rho) {
  const auto d = static_cast<Eigen::Index>(rho.dim());
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = rho(i, j);
  }
  // Symmetrise away rounding so the self-adjoint solver sees exact input.
  return 0.5 * (m + m.adjoint());
}

constexpr double kPsdTolerance = 1e-9;

}  // namespace

Matrix2 one_qubit_matrix(GateKind kind, double angle) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  switch (kind) {
    case GateKind::RZ:
      return {std::polar(1.0, -0.5 * angle), 0.0, 0.0,
              std::polar(1.0, 0.5 * angle)};
    case GateKind::RX:
      return {c, -kI * s, -kI * s, c};
    case GateKind::RY:
      return {c, -s, s, c};
    case GateKind::SX:
      return {Complex{0.5, 0.5}, Complex{0.5, -0.5}, Complex{0.5, -0.5},
              Complex{0.5, 0.5}};
    case GateKind::X:
      return {0.0, 1.0, 1.0, 0.0};
    default:
      throw std::invalid_argument("not a one-qubit gate: " +
                                  std::string(to_string(kind)));
  }
}

Matrix4 two_qubit_matrix(GateKind kind) {
  switch (kind) {
    case GateKind::CX:
      return {1, 0, 0, 0,  //
              0, 1, 0, 0,  //
              0, 0, 0, 1,  //
              0, 0, 1, 0};
    case GateKind::CY:
      return {1, 0, 0, 0,  //
              0, 1, 0, 0,  //
              0, 0, 0, -kI,  //
              0, 0, kI, 0};
    case GateKind::SWAP:
      return {1, 0, 0, 0,  //
              0, 0, 1, 0,  //
              0, 1, 0, 0,  //
              0, 0, 0, 1};
    case GateKind::ECR: {
      // (X (x) I - Y (x) X) / sqrt 2, first factor on the first qubit.
      const Complex a = kInvSqrt2;
      const Complex b = kI * kInvSqrt2;
      return {0, 0, a, b,   //
              0, 0, b, a,   //
              a, -b, 0, 0,  //
              -b, a, 0, 0};
    }
    default:
      throw std::invalid_argument("not a two-qubit gate: " +
                                  std::string(to_string(kind)));
  }
}

double resolve_angle(const Gate &gate, std::span<const double> theta) {
  if (gate.angle) return *gate.angle;
  if (!gate.slot) throw std::invalid_argument("gate has no angle");
  if (*gate.slot >= theta.size()) {
    throw std::invalid_argument("missing value for parameter slot " +
                                std::to_string(*gate.slot));
  }
  return theta[*gate.slot];
}

void apply_one_qubit(std::span<Complex> amps, unsigned qubit,
                     const Matrix2 &m) {
  const std::size_t bit = std::size_t{1} << qubit;
  for (std::size_t base = 0; base < amps.size(); ++base) {
    if (base & bit) continue;
    const Complex a0 = amps[base];
    const Complex a1 = amps[base | bit];
    amps[base] = m[0] * a0 + m[1] * a1;
    amps[base | bit] = m[2] * a0 + m[3] * a1;
  }
}

void apply_two_qubit(std::span<Complex> amps, unsigned first, unsigned second,
                     const Matrix4 &m) {
  const std::size_t hi = std::size_t{1} << first;
  const std::size_t lo = std::size_t{1} << second;
  for (std::size_t base = 0; base < amps.size(); ++base) {
    if ((base & hi) || (base & lo)) continue;
    const std::size_t idx[4] = {base, base | lo, base | hi, base | hi | lo};
    const Complex in[4] = {amps[idx[0]], amps[idx[1]], amps[idx[2]],
                           amps[idx[3]]};
    for (std::size_t r = 0; r < 4; ++r) {
      amps[idx[r]] = m[4 * r] * in[0] + m[4 * r + 1] * in[1] +
                     m[4 * r + 2] * in[2] + m[4 * r + 3] * in[3];
    }
  }
}

void apply_gate(std::span<Complex> amps, const Gate &gate,
                std::span<const double> theta) {
  if (arity(gate.kind) == 1) {
    const double angle = is_rotation(gate.kind) ? resolve_angle(gate, theta)
                                                : 0.0;
    apply_one_qubit(amps, gate.qubits[0], one_qubit_matrix(gate.kind, angle));
  } else {
    apply_two_qubit(amps, gate.qubits[0], gate.qubits[1],
                    two_qubit_matrix(gate.kind));
  }
}

StateVector simulate_ideal(const Circuit &circuit,
                           std::span<const double> theta) {
  if (theta.size() != circuit.num_params()) {
    throw std::invalid_argument(
        "simulate_ideal: circuit has " + std::to_string(circuit.num_params()) +
        " parameter slot(s) but " + std::to_string(theta.size()) +
        " value(s) were supplied");
  }
  StateVector psi(std::size_t{1} << circuit.num_qubits(), Complex{0.0, 0.0});
  psi[0] = 1.0;
  for (const Gate &g : circuit.gates()) apply_gate(psi, g, theta);
  return psi;
}

void NoiseModel::validate() const {
  if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0)) {
    throw std::invalid_argument("noise probabilities must lie in [0, 1]");
  }
}

DensityMatrix::DensityMatrix(unsigned n) : n_(n) {
  if (n == 0 || n > kMaxQubits) {
    throw std::invalid_argument("density matrix supports 1.." +
                                std::to_string(kMaxQubits) + " qubits");
  }
  data_.assign(dim() * dim(), Complex{0.0, 0.0});
  data_[0] = 1.0;
}

DensityMatrix::DensityMatrix(unsigned n, std::vector<Complex> row_major)
    : DensityMatrix(n) {
  if (row_major.size() != dim() * dim()) {
    throw std::invalid_argument("density matrix data has wrong size");
  }
  data_ = std::move(row_major);
}

DensityMatrix DensityMatrix::pure(const StateVector &psi) {
  const auto n = static_cast<unsigned>(std::countr_zero(psi.size()));
  if (psi.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("state length is not a power of two");
  }
  DensityMatrix rho(n);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    for (std::size_t j = 0; j < psi.size(); ++j) {
      rho.data_[i * psi.size() + j] = psi[i] * std::conj(psi[j]);
    }
  }
  return rho;
}

Complex DensityMatrix::trace() const {
  Complex t{0.0, 0.0};
  for (std::size_t i = 0; i < dim(); ++i) t += (*this)(i, i);
  return t;
}

double DensityMatrix::hermiticity_error() const {
  double err = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = i; j < dim(); ++j) {
      err = std::max(err, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    }
  }
  return err;
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      to_eigen(*this), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void DensityMatrix::validate() const {
  const Complex t = trace();
  if (std::abs(t - 1.0) > 1e-10) {
    throw std::invalid_argument("density matrix trace is " +
                                std::to_string(t.real()) + ", expected 1");
  }
  if (hermiticity_error() > 1e-12) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
}

// The matrix is stored row-major, so data_ doubles as a 2n-qubit vector whose
// column index occupies qubits [0, n) and row index qubits [n, 2n).
// rho -> U rho U^dagger is U on the row qubits and conj(U) on the columns.
void DensityMatrix::apply_unitary(const Gate &gate,
                                  std::span<const double> theta) {
  for (unsigned q : gate.qubits) {
    if (q >= n_) throw std::invalid_argument("gate qubit out of range");
  }
  if (arity(gate.kind) == 1) {
    const double angle = is_rotation(gate.kind) ? resolve_angle(gate, theta)
                                                : 0.0;
    const Matrix2 m = one_qubit_matrix(gate.kind, angle);
    apply_one_qubit(data_, gate.qubits[0] + n_, m);
    apply_one_qubit(data_, gate.qubits[0], conj(m));
  } else {
    const Matrix4 m = two_qubit_matrix(gate.kind);
    apply_two_qubit(data_, gate.qubits[0] + n_, gate.qubits[1] + n_, m);
    apply_two_qubit(data_, gate.qubits[0], gate.qubits[1], conj(m));
  }
}

// rho -> (1 - p) rho + p * tr_S(rho) (x) I / 2^|S|.
void DensityMatrix::depolarize(std::span<const unsigned> qubits, double p) {
  if (p == 0.0) return;
  if (qubits.empty() || qubits.size() > 2) {
    throw std::invalid_argument("depolarize supports one or two qubits");
  }
  std::vector<std::size_t> row_bits, col_bits;
  for (unsigned q : qubits) {
    col_bits.push_back(std::size_t{1} << q);
    row_bits.push_back(std::size_t{1} << (q + n_));
  }
  std::size_t mask = 0;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    mask |= row_bits[i] | col_bits[i];
  }
  const std::size_t local = std::size_t{1} << qubits.size();
  const double keep = 1.0 - p;
  const double share = p / static_cast<double>(local);

  std::vector<std::size_t> diag(local);
  for (std::size_t base = 0; base < data_.size(); ++base) {
    if (base & mask) continue;
    // Diagonal blocks on the support: row state == column state.
    Complex traced{0.0, 0.0};
    for (std::size_t s = 0; s < local; ++s) {
      std::size_t idx = base;
      for (std::size_t b = 0; b < qubits.size(); ++b) {
        if ((s >> b) & 1) idx |= row_bits[b] | col_bits[b];
      }
      diag[s] = idx;
      traced += data_[idx];
    }
    // Scale every entry of this block, then restore the traced share on the
    // diagonal ones.
    for (std::size_t rs = 0; rs < local; ++rs) {
      for (std::size_t cs = 0; cs < local; ++cs) {
        std::size_t idx = base;
        for (std::size_t b = 0; b < qubits.size(); ++b) {
          if ((rs >> b) & 1) idx |= row_bits[b];
          if ((cs >> b) & 1) idx |= col_bits[b];
        }
        data_[idx] *= keep;
      }
    }
    for (std::size_t s = 0; s < local; ++s) data_[diag[s]] += share * traced;
  }
}

DensityMatrix simulate_noisy(const Circuit &circuit,
                             std::span<const double> theta,
                             const NoiseModel &noise) {
  noise.validate();
  if (theta.size() != circuit.num_params()) {
    throw std::invalid_argument("simulate_noisy: parameter count mismatch");
  }
  for (const Gate &g : circuit.gates()) {
    switch (g.kind) {
      case GateKind::RZ:
      case GateKind::SX:
      case GateKind::X:
      case GateKind::CX:
      case GateKind::ECR:
        break;
      default:
        throw std::invalid_argument(
            "simulate_noisy: non-physical gate " +
            std::string(to_string(g.kind)) + " (lower the circuit first)");
    }
  }
  DensityMatrix rho(circuit.num_qubits());
  for (const Gate &g : circuit.gates()) {
    rho.apply_unitary(g, theta);
    if (g.kind == GateKind::RZ) continue;
    rho.depolarize(g.qubits, g.qubits.size() == 1 ? noise.p1 : noise.p2);
  }
  return rho;
}

double state_fidelity(const DensityMatrix &rho, const DensityMatrix &sigma) {
  if (rho.num_qubits() != sigma.num_qubits()) {
    throw std::invalid_argument("state_fidelity: dimension mismatch");
  }
  rho.validate();
  sigma.validate();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> rho_eig(to_eigen(rho));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> sigma_eig(
      to_eigen(sigma), Eigen::EigenvaluesOnly);
  if (rho_eig.eigenvalues().minCoeff() < -kPsdTolerance ||
      sigma_eig.eigenvalues().minCoeff() < -kPsdTolerance) {
    throw std::invalid_argument("state_fidelity: input is not PSD");
  }
  const Eigen::VectorXd root =
      rho_eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXcd sqrt_rho = rho_eig.eigenvectors() *
                                    root.asDiagonal() *
                                    rho_eig.eigenvectors().adjoint();
  Eigen::MatrixXcd inner = sqrt_rho * to_eigen(sigma) * sqrt_rho;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> inner_eig(
      inner, Eigen::EigenvaluesOnly);
  // Roundoff-level eigenvalues would contribute O(sqrt(eps)) each.
  const Eigen::VectorXd lam = inner_eig.eigenvalues();
  const double cutoff = 1e-13 * std::max(lam.maxCoeff(), 0.0);
  double tr = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] > cutoff) tr += std::sqrt(lam[i]);
  }
  return std::clamp(tr * tr, 0.0, 1.0);
}

double state_fidelity(const DensityMatrix &rho, const StateVector &x) {
  if (x.size() != rho.dim()) {
    throw std::invalid_argument("state_fidelity: dimension mismatch");
  }
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    Complex row{0.0, 0.0};
    for (std::size_t j = 0; j < x.size(); ++j) row += rho(i, j) * x[j];
    acc += std::conj(x[i]) * row;
  }
  return std::clamp(acc.real(), 0.0, 1.0);
}

double state_fidelity(const StateVector &a, const StateVector &b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("state_fidelity: dimension mismatch");
  }
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return std::min(1.0, std::norm(acc));
}

StateVector permute_qubits(const StateVector &in,
                           std::span<const unsigned> layout) {
  StateVector out(in.size());
  for (std::size_t idx = 0; idx < in.size(); ++idx) {
    std::size_t moved = 0;
    for (std::size_t q = 0; q < layout.size(); ++q) {
      if ((idx >> q) & 1) moved |= std::size_t{1} << layout[q];
    }
    out[moved] = in[idx];
  }
  return out;
}

}  // namespace enqode
