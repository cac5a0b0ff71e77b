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

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace enqode {

namespace {

constexpr Complex kQuarterTurns[4] = {
    {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};

// Guard for the dense p table; 2^20 rows is already far past anything the
// ansatz is used at.
constexpr unsigned kMaxQubits = 20;

void check_length(std::size_t got, std::size_t want) {
  if (got != want) {
    throw std::invalid_argument("parameter vector has length " +
                                std::to_string(got) + ", expected " +
                                std::to_string(want));
  }
}

}  // namespace

PhaseLinearState PhaseLinearState::init_plus_i(unsigned n) {
  if (n == 0 || n > kMaxQubits) {
    throw std::invalid_argument("init_plus_i: qubit count must be in [1, " +
                                std::to_string(kMaxQubits) + "]");
  }
  PhaseLinearState s(n);
  s.k_exp_.resize(s.dim());
  for (std::size_t r = 0; r < s.dim(); ++r) {
    s.k_exp_[r] = static_cast<std::uint8_t>(std::popcount(r) & 3);
  }
  return s;
}

void PhaseLinearState::apply_rz(unsigned qubit, std::size_t slot) {
  if (qubit >= n_) {
    throw std::invalid_argument("apply_rz: qubit " + std::to_string(qubit) +
                                " out of range");
  }
  if (slot != l_) {
    throw std::invalid_argument(
        "apply_rz: slot " + std::to_string(slot) +
        " is not fresh (next free slot is " + std::to_string(l_) + ")");
  }
  const std::size_t rows = dim();
  std::vector<std::int8_t> next(rows * (l_ + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(p_.begin() + r * l_, l_, next.begin() + r * (l_ + 1));
    next[r * (l_ + 1) + l_] = ((r >> qubit) & 1) ? 1 : -1;
  }
  p_ = std::move(next);
  ++l_;
}

void PhaseLinearState::apply_cy(unsigned control, unsigned target) {
  if (control >= n_ || target >= n_) {
    throw std::invalid_argument("apply_cy: qubit out of range");
  }
  if (control == target) {
    throw std::invalid_argument("apply_cy: control equals target");
  }
  // Y|0> = i|1>, Y|1> = -i|0>: on control-1 rows the entry moves across the
  // target flip, picking up +i (destination bit 1) or -i (destination bit 0).
  std::vector<std::uint8_t> k_next = k_exp_;
  std::vector<std::int8_t> p_next = p_;
  const std::size_t tmask = std::size_t{1} << target;
  for (std::size_t src = 0; src < dim(); ++src) {
    if (((src >> control) & 1) == 0) continue;
    const std::size_t dst = src ^ tmask;
    const std::uint8_t turn = (dst & tmask) ? 1 : 3;
    k_next[dst] = static_cast<std::uint8_t>((k_exp_[src] + turn) & 3);
    std::copy_n(p_.begin() + src * l_, l_, p_next.begin() + dst * l_);
  }
  k_exp_ = std::move(k_next);
  p_ = std::move(p_next);
}

Complex PhaseLinearState::k(std::size_t row) const {
  return kQuarterTurns[k_exp_[row]];
}

StateVector PhaseLinearState::evaluate(std::span<const double> theta) const {
  check_length(theta.size(), l_);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim()));
  StateVector out(dim());
  for (std::size_t r = 0; r < dim(); ++r) {
    double phase = 0.0;
    const std::int8_t *row = p_.data() + r * l_;
    for (std::size_t j = 0; j < l_; ++j) phase += row[j] * theta[j];
    out[r] = scale * k(r) * std::polar(1.0, 0.5 * phase);
  }
  return out;
}

nlohmann::json PhaseLinearState::debug_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < dim(); ++r) {
    rows.push_back(std::vector<int>(p_.begin() + r * l_,
                                    p_.begin() + (r + 1) * l_));
  }
  return {{"n", n_}, {"l", l_}, {"k_exponent", k_exp_}, {"p", rows}};
}

OverlapModel::OverlapModel(PhaseLinearState state, StateVector target)
    : state_(std::move(state)), target_(std::move(target)) {
  if (target_.size() != state_.dim()) {
    throw std::invalid_argument("overlap target has wrong dimension");
  }
  double norm2 = 0.0;
  for (const Complex &c : target_) norm2 += std::norm(c);
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-8) {
    throw std::invalid_argument("overlap target is not normalised");
  }
}

Complex OverlapModel::overlap(std::span<const double> theta,
                              std::vector<Complex> *terms) const {
  check_length(theta.size(), state_.num_params());
  const StateVector psi = state_.evaluate(theta);
  Complex f{0.0, 0.0};
  if (terms) terms->resize(psi.size());
  for (std::size_t r = 0; r < psi.size(); ++r) {
    const Complex a = std::conj(target_[r]) * psi[r];
    if (terms) (*terms)[r] = a;
    f += a;
  }
  return f;
}

double OverlapModel::loss(std::span<const double> theta) const {
  return 1.0 - std::norm(overlap(theta, nullptr));
}

LossAndGrad OverlapModel::loss_and_grad(std::span<const double> theta) const {
  std::vector<Complex> terms;
  const Complex f = overlap(theta, &terms);
  const std::size_t l = state_.num_params();

  // df/dtheta_j = (i/2) * S_j with S_j = sum_r a_r p_rj, and
  // d(1 - |f|^2)/dtheta_j = -2 Re(conj(f) df_j) = Im(conj(f) S_j).
  std::vector<Complex> s(l, Complex{0.0, 0.0});
  for (std::size_t r = 0; r < terms.size(); ++r) {
    const auto row = state_.p_row(r);
    const Complex a = terms[r];
    for (std::size_t j = 0; j < l; ++j) {
      if (row[j] > 0) {
        s[j] += a;
      } else if (row[j] < 0) {
        s[j] -= a;
      }
    }
  }
  LossAndGrad out;
  out.loss = std::clamp(1.0 - std::norm(f), 0.0, 1.0);
  out.grad.resize(l);
  const Complex fc = std::conj(f);
  for (std::size_t j = 0; j < l; ++j) out.grad[j] = (fc * s[j]).imag();
  return out;
}

}  // namespace enqode
