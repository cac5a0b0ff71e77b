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

// Test-only reference implementations. Nothing here calls into the
// simulator, symbolic or dataio modules: gates are built from Pauli
// algebra as full 2^n x 2^n matrices and multiplied out.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "enqode/circuit.hpp"

namespace oracle {

using C = std::complex<double>;
constexpr C kI{0.0, 1.0};

struct Mat {
  std::size_t dim = 0;
  std::vector<C> a;  // row-major

  explicit Mat(std::size_t d = 0) : dim(d), a(d * d) {}
  static Mat identity(std::size_t d) {
    Mat m(d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
  }
  C &operator()(std::size_t i, std::size_t j) { return a[i * dim + j]; }
  C operator()(std::size_t i, std::size_t j) const { return a[i * dim + j]; }
};

inline Mat mul(const Mat &x, const Mat &y) {
  Mat out(x.dim);
  for (std::size_t i = 0; i < x.dim; ++i) {
    for (std::size_t k = 0; k < x.dim; ++k) {
      const C xik = x(i, k);
      if (xik == C{}) continue;
      for (std::size_t j = 0; j < x.dim; ++j) out(i, j) += xik * y(k, j);
    }
  }
  return out;
}

inline Mat add(const Mat &x, const Mat &y, C sy = 1.0) {
  Mat out(x.dim);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = x.a[i] + sy * y.a[i];
  return out;
}

inline Mat scale(const Mat &x, C s) {
  Mat out = x;
  for (C &v : out.a) v *= s;
  return out;
}

inline Mat dagger(const Mat &x) {
  Mat out(x.dim);
  for (std::size_t i = 0; i < x.dim; ++i) {
    for (std::size_t j = 0; j < x.dim; ++j) out(i, j) = std::conj(x(j, i));
  }
  return out;
}

// kron(hi, lo): `hi` acts on the more significant index bits.
inline Mat kron(const Mat &hi, const Mat &lo) {
  Mat out(hi.dim * lo.dim);
  for (std::size_t a = 0; a < hi.dim; ++a)
    for (std::size_t b = 0; b < hi.dim; ++b)
      for (std::size_t c = 0; c < lo.dim; ++c)
        for (std::size_t d = 0; d < lo.dim; ++d)
          out(a * lo.dim + c, b * lo.dim + d) = hi(a, b) * lo(c, d);
  return out;
}

inline Mat pauli(char p) {
  Mat m(2);
  switch (p) {
    case 'I': m(0, 0) = 1; m(1, 1) = 1; break;
    case 'X': m(0, 1) = 1; m(1, 0) = 1; break;
    case 'Y': m(0, 1) = -kI; m(1, 0) = kI; break;
    case 'Z': m(0, 0) = 1; m(1, 1) = -1; break;
    default: throw std::invalid_argument("pauli");
  }
  return m;
}

// exp(-i angle/2 P)
inline Mat rotation(char p, double angle) {
  return add(scale(pauli('I'), std::cos(angle / 2)),
             scale(pauli(p), -kI * std::sin(angle / 2)));
}

inline Mat projector(int bit) {
  Mat m(2);
  m(bit, bit) = 1;
  return m;
}

/// Local matrix; for two-qubit kinds the first listed qubit is the high
/// bit of the 4x4 index.
inline Mat local_matrix(enqode::GateKind kind, double angle = 0.0) {
  using enqode::GateKind;
  switch (kind) {
    case GateKind::RZ: return rotation('Z', angle);
    case GateKind::RX: return rotation('X', angle);
    case GateKind::RY: return rotation('Y', angle);
    case GateKind::X: return pauli('X');
    case GateKind::SX:
      return add(scale(pauli('I'), C(0.5, 0.5)), scale(pauli('X'), C(0.5, -0.5)));
    case GateKind::CX:
      return add(kron(projector(0), pauli('I')), kron(projector(1), pauli('X')));
    case GateKind::CY:
      return add(kron(projector(0), pauli('I')), kron(projector(1), pauli('Y')));
    case GateKind::ECR:
      return scale(add(kron(pauli('X'), pauli('I')),
                       kron(pauli('Y'), pauli('X')), -1.0),
                   1.0 / std::sqrt(2.0));
    case GateKind::SWAP: {
      Mat m(4);
      m(0, 0) = m(3, 3) = 1;
      m(1, 2) = m(2, 1) = 1;
      return m;
    }
  }
  throw std::invalid_argument("local_matrix");
}

/// Full-register matrix of a local gate acting on `qubits` (qubit q is bit q
/// of the basis index).
inline Mat embed(const Mat &local, const std::vector<unsigned> &qubits,
                 unsigned n) {
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t k = qubits.size();
  auto local_index = [&](std::size_t r) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < k; ++i) {
      idx = (idx << 1) | ((r >> qubits[i]) & 1u);
    }
    return idx;
  };
  std::size_t mask = 0;
  for (unsigned q : qubits) mask |= std::size_t{1} << q;
  Mat out(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      if ((r & ~mask) != (c & ~mask)) continue;
      out(r, c) = local(local_index(r), local_index(c));
    }
  }
  return out;
}

inline double gate_angle(const enqode::Gate &g,
                         const std::vector<double> &theta) {
  if (g.angle) return *g.angle;
  if (g.slot) return theta.at(*g.slot);
  return 0.0;
}

inline Mat unitary(const enqode::Circuit &circuit,
                   const std::vector<double> &theta = {}) {
  const unsigned n = circuit.num_qubits();
  Mat u = Mat::identity(std::size_t{1} << n);
  for (const enqode::Gate &g : circuit.gates()) {
    u = mul(embed(local_matrix(g.kind, gate_angle(g, theta)), g.qubits, n), u);
  }
  return u;
}

inline std::vector<C> apply_matrix(const Mat &u, const std::vector<C> &v) {
  std::vector<C> out(u.dim);
  for (std::size_t i = 0; i < u.dim; ++i) {
    for (std::size_t j = 0; j < u.dim; ++j) out[i] += u(i, j) * v[j];
  }
  return out;
}

inline std::vector<C> basis_state(unsigned n, std::size_t index = 0) {
  std::vector<C> v(std::size_t{1} << n);
  v[index] = 1.0;
  return v;
}

inline std::vector<C> run(const enqode::Circuit &circuit,
                          const std::vector<double> &theta = {}) {
  return apply_matrix(unitary(circuit, theta), basis_state(circuit.num_qubits()));
}

inline double max_abs_diff(const std::vector<C> &a, const std::vector<C> &b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const Mat &a, const Mat &b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.a.size(); ++i) {
    m = std::max(m, std::abs(a.a[i] - b.a[i]));
  }
  return m;
}

/// min over global phases of max |a - e^{i phi} b|.
inline double diff_up_to_phase(const Mat &a, const Mat &b) {
  C ip{};
  for (std::size_t i = 0; i < a.a.size(); ++i) ip += std::conj(b.a[i]) * a.a[i];
  const C phase = std::abs(ip) > 0 ? ip / std::abs(ip) : C(1.0);
  return max_abs_diff(a, scale(b, phase));
}

inline double diff_up_to_phase(const std::vector<C> &a,
                               const std::vector<C> &b) {
  C ip{};
  for (std::size_t i = 0; i < a.size(); ++i) ip += std::conj(b[i]) * a[i];
  const C phase = std::abs(ip) > 0 ? ip / std::abs(ip) : C(1.0);
  std::vector<C> bb(b);
  for (C &v : bb) v *= phase;
  return max_abs_diff(a, bb);
}

inline double overlap2(const std::vector<C> &a, const std::vector<C> &b) {
  C ip{};
  for (std::size_t i = 0; i < a.size(); ++i) ip += std::conj(a[i]) * b[i];
  return std::norm(ip);
}

/// Cyclic Jacobi eigensolver for a real symmetric matrix (row-major).
/// Returns (eigenvalues descending, eigenvectors as columns, row-major).
inline std::pair<std::vector<double>, std::vector<double>> jacobi_eigen(
    std::vector<double> a, std::size_t n) {
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) < 1e-300) continue;
        const double tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x * n + x] > a[y * n + y];
  });
  std::vector<double> vals(n), vecs(n * n);
  for (std::size_t c = 0; c < n; ++c) {
    vals[c] = a[order[c] * n + order[c]];
    for (std::size_t r = 0; r < n; ++r) vecs[r * n + c] = v[r * n + order[c]];
  }
  return {vals, vecs};
}

/// Depth by greedy levelling: every non-RZ gate lands one level above the
/// highest level among its qubits.
inline std::size_t greedy_depth(const enqode::Circuit &circuit) {
  std::vector<std::size_t> level(circuit.num_qubits(), 0);
  std::size_t depth = 0;
  for (const enqode::Gate &g : circuit.gates()) {
    if (g.kind == enqode::GateKind::RZ) continue;
    std::size_t top = 0;
    for (unsigned q : g.qubits) top = std::max(top, level[q]);
    for (unsigned q : g.qubits) level[q] = top + 1;
    depth = std::max(depth, top + 1);
  }
  return depth;
}

}  // namespace oracle
