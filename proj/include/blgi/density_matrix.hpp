// Copyright 2026 The blgi-sim Authors
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

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "blgi/rng.hpp"

namespace blgi::sim {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 6;

// ---------------------------------------------------------------------------
// Outcome tables
// ---------------------------------------------------------------------------

/// Computational-basis distribution over an ordered subset of qubits.
/// The first role label is the most significant bit of the outcome index.
struct ProbabilityTable {
  std::vector<std::string> qubit_roles;
  std::vector<double> probs;

  std::size_t num_qubits() const { return qubit_roles.size(); }

  void validate(double tol = 1e-10) const {
    if (probs.size() != (std::size_t{1} << qubit_roles.size())) {
      throw std::invalid_argument("ProbabilityTable: size/label mismatch");
    }
    double total = 0.0;
    for (double p : probs) {
      if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("ProbabilityTable: entry outside [0,1]");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > tol) {
      throw std::invalid_argument("ProbabilityTable: not normalized");
    }
  }

  /// Marginal over a subset of this table's columns, in the order given.
  ProbabilityTable marginal(const std::vector<std::size_t>& columns) const {
    const std::size_t k = qubit_roles.size();
    for (std::size_t c : columns) {
      if (c >= k) throw std::invalid_argument("marginal: column out of range");
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
      for (std::size_t j = i + 1; j < columns.size(); ++j) {
        if (columns[i] == columns[j]) {
          throw std::invalid_argument("marginal: duplicate column");
        }
      }
    }
    ProbabilityTable out;
    for (std::size_t c : columns) out.qubit_roles.push_back(qubit_roles[c]);
    out.probs.assign(std::size_t{1} << columns.size(), 0.0);
    for (std::size_t idx = 0; idx < probs.size(); ++idx) {
      std::size_t sub = 0;
      for (std::size_t c : columns) {
        sub = (sub << 1) | ((idx >> (k - 1 - c)) & 1u);
      }
      out.probs[sub] += probs[idx];
    }
    return out;
  }
};

/// Sampled measurement records: one row of bits per repetition.
struct ShotTable {
  std::vector<std::string> qubit_roles;
  std::vector<std::uint8_t> bits;  // row-major, n_shots x num_qubits
  std::uint64_t n_shots = 0;
  std::uint64_t seed = 0;

  std::uint8_t at(std::uint64_t shot, std::size_t col) const {
    return bits[shot * qubit_roles.size() + col];
  }
};

/// Draws independent rows from `dist`. Identical (dist, n_shots, seed)
/// triples produce bit-identical tables.
inline ShotTable sample_shots(const ProbabilityTable& dist,
                              std::uint64_t n_shots, std::uint64_t seed) {
  dist.validate();
  if (n_shots == 0) {
    throw std::invalid_argument("sample_shots: n_shots must be >= 1");
  }
  const std::size_t k = dist.num_qubits();
  std::vector<double> cdf(dist.probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.probs.size(); ++i) {
    acc += dist.probs[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;  // guard against round-off at the top end

  ShotTable table;
  table.qubit_roles = dist.qubit_roles;
  table.n_shots = n_shots;
  table.seed = seed;
  table.bits.resize(n_shots * k);
  SplitMix64 rng(seed);
  for (std::uint64_t s = 0; s < n_shots; ++s) {
    const double u = rng.next_double();
    const std::size_t idx = static_cast<std::size_t>(
        std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    for (std::size_t c = 0; c < k; ++c) {
      table.bits[s * k + c] =
          static_cast<std::uint8_t>((idx >> (k - 1 - c)) & 1u);
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Gates
// ---------------------------------------------------------------------------

enum class GateKind { RotX, RotY, RotZ, ControlledZ };

/// One circuit element: a single-qubit rotation or a CZ.
struct GateOp {
  GateKind kind;
  std::vector<int> targets;
  double angle = 0.0;  // radians; rotations only

  static GateOp rx(int q, double angle) { return {GateKind::RotX, {q}, angle}; }
  static GateOp ry(int q, double angle) { return {GateKind::RotY, {q}, angle}; }
  static GateOp rz(int q, double angle) { return {GateKind::RotZ, {q}, angle}; }
  static GateOp cz(int q1, int q2) {
    return {GateKind::ControlledZ, {q1, q2}, 0.0};
  }

  void validate(int n_qubits) const {
    const std::size_t want = kind == GateKind::ControlledZ ? 2u : 1u;
    if (targets.size() != want) {
      throw std::invalid_argument("GateOp: wrong target count");
    }
    for (int q : targets) {
      if (q < 0 || q >= n_qubits) {
        throw std::invalid_argument("GateOp: target out of range");
      }
    }
    if (want == 2 && targets[0] == targets[1]) {
      throw std::invalid_argument("GateOp: duplicate targets");
    }
  }
};

// ---------------------------------------------------------------------------
// Density matrix
// ---------------------------------------------------------------------------

/// Dense density matrix of an n-qubit register (n <= 6).
///
/// Conventions, used everywhere in this library:
///   * qubit 0 is the most significant bit of a basis-state index;
///   * rotations are U = exp(-i*angle*sigma/2) with
///     sigma_y = [[0,-i],[i,0]], so Ry(theta)|0> = cos(theta/2)|0>
///     + sin(theta/2)|1>.
class DensityMatrix {
 public:
  /// Product state with qubit q in (1-p_q)|0><0| + p_q|1><1|.
  static DensityMatrix thermal(int n_qubits, const std::vector<double>& pops) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
      throw std::invalid_argument("DensityMatrix: qubit count out of range");
    }
    if (pops.size() != static_cast<std::size_t>(n_qubits)) {
      throw std::invalid_argument("DensityMatrix: one population per qubit");
    }
    for (double p : pops) {
      if (!(p >= 0.0 && p <= 0.5)) {
        throw std::invalid_argument(
            "DensityMatrix: thermal population outside [0, 0.5]");
      }
    }
    DensityMatrix rho(n_qubits);
    for (std::size_t i = 0; i < rho.dim_; ++i) {
      double p = 1.0;
      for (int q = 0; q < n_qubits; ++q) {
        const bool excited = (i >> (n_qubits - 1 - q)) & 1u;
        p *= excited ? pops[q] : 1.0 - pops[q];
      }
      rho(i, i) = p;
    }
    return rho;
  }

  static DensityMatrix ground(int n_qubits) {
    return thermal(n_qubits, std::vector<double>(n_qubits, 0.0));
  }

  int n_qubits() const { return n_; }
  std::size_t dim() const { return dim_; }

  cplx& operator()(std::size_t r, std::size_t c) { return m_[r * dim_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return m_[r * dim_ + c];
  }

  /// Conjugates the state by a single-qubit rotation on qubit q.
  void apply_rotation(GateKind axis, int q, double angle) {
    check_qubit(q);
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    std::array<cplx, 4> u;  // row-major 2x2
    switch (axis) {
      case GateKind::RotX:
        u = {cplx(c, 0), cplx(0, -s), cplx(0, -s), cplx(c, 0)};
        break;
      case GateKind::RotY:
        u = {cplx(c, 0), cplx(-s, 0), cplx(s, 0), cplx(c, 0)};
        break;
      case GateKind::RotZ:
        u = {std::polar(1.0, -angle / 2.0), cplx(0, 0), cplx(0, 0),
             std::polar(1.0, angle / 2.0)};
        break;
      default:
        throw std::invalid_argument("apply_rotation: not a rotation axis");
    }
    conjugate_1q(u, q);
  }

  /// Conjugates by diag(1,1,1,-1) on the (q1, q2) subspace.
  void apply_cz(int q1, int q2) {
    check_qubit(q1);
    check_qubit(q2);
    if (q1 == q2) throw std::invalid_argument("apply_cz: equal targets");
    const std::size_t m1 = bit_mask(q1);
    const std::size_t m2 = bit_mask(q2);
    auto sign = [&](std::size_t i) {
      return ((i & m1) && (i & m2)) ? -1.0 : 1.0;
    };
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t c = 0; c < dim_; ++c) {
        (*this)(r, c) *= sign(r) * sign(c);
      }
    }
  }

  void apply(const GateOp& op) {
    op.validate(n_);
    if (op.kind == GateKind::ControlledZ) {
      apply_cz(op.targets[0], op.targets[1]);
    } else {
      apply_rotation(op.kind, op.targets[0], op.angle);
    }
  }

  /// rho -> K0 rho K0^dag + K1 rho K1^dag on qubit q.
  void apply_kraus_1q(const std::array<cplx, 4>& k0,
                      const std::array<cplx, 4>& k1, int q) {
    check_qubit(q);
    DensityMatrix a = *this;
    a.conjugate_1q(k0, q);
    DensityMatrix b = *this;
    b.conjugate_1q(k1, q);
    for (std::size_t i = 0; i < m_.size(); ++i) m_[i] = a.m_[i] + b.m_[i];
  }

  /// Marginal computational-basis distribution over the listed qubits,
  /// in the order given (first listed = most significant output bit).
  ProbabilityTable probabilities(const std::vector<int>& qubits,
                                 std::vector<std::string> roles = {}) const {
    if (qubits.empty()) {
      throw std::invalid_argument("probabilities: empty qubit list");
    }
    for (std::size_t i = 0; i < qubits.size(); ++i) {
      check_qubit(qubits[i]);
      for (std::size_t j = i + 1; j < qubits.size(); ++j) {
        if (qubits[i] == qubits[j]) {
          throw std::invalid_argument("probabilities: duplicate qubit");
        }
      }
    }
    ProbabilityTable table;
    if (roles.empty()) {
      for (int q : qubits) table.qubit_roles.push_back("q" + std::to_string(q));
    } else {
      if (roles.size() != qubits.size()) {
        throw std::invalid_argument("probabilities: one role per qubit");
      }
      table.qubit_roles = std::move(roles);
    }
    table.probs.assign(std::size_t{1} << qubits.size(), 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
      std::size_t sub = 0;
      for (int q : qubits) sub = (sub << 1) | ((i & bit_mask(q)) ? 1u : 0u);
      table.probs[sub] += (*this)(i, i).real();
    }
    // Clamp round-off so downstream validation sees entries in [0,1].
    for (double& p : table.probs) {
      if (p < 0.0 && p > -1e-12) p = 0.0;
      if (p > 1.0 && p < 1.0 + 1e-12) p = 1.0;
    }
    return table;
  }

  /// <Z_q> = 1 - 2 P(q = 1).
  double expectation_z(int q) const {
    check_qubit(q);
    double p1 = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      if (i & bit_mask(q)) p1 += (*this)(i, i).real();
    }
    return 1.0 - 2.0 * p1;
  }

  /// Reduced state over `keep` (in the order given), tracing out the rest.
  DensityMatrix partial_trace(const std::vector<int>& keep) const {
    if (keep.empty() || keep.size() > static_cast<std::size_t>(n_)) {
      throw std::invalid_argument("partial_trace: bad subset");
    }
    for (std::size_t i = 0; i < keep.size(); ++i) {
      check_qubit(keep[i]);
      for (std::size_t j = i + 1; j < keep.size(); ++j) {
        if (keep[i] == keep[j]) {
          throw std::invalid_argument("partial_trace: duplicate qubit");
        }
      }
    }
    std::vector<int> traced;
    for (int q = 0; q < n_; ++q) {
      if (std::find(keep.begin(), keep.end(), q) == keep.end()) {
        traced.push_back(q);
      }
    }
    const int k = static_cast<int>(keep.size());
    DensityMatrix out(k);
    const std::size_t kd = out.dim_;
    const std::size_t td = std::size_t{1} << traced.size();
    auto full_index = [&](std::size_t kept_bits, std::size_t traced_bits) {
      std::size_t idx = 0;
      for (int i = 0; i < k; ++i) {
        if ((kept_bits >> (k - 1 - i)) & 1u) idx |= bit_mask(keep[i]);
      }
      for (std::size_t i = 0; i < traced.size(); ++i) {
        if ((traced_bits >> (traced.size() - 1 - i)) & 1u) {
          idx |= bit_mask(traced[i]);
        }
      }
      return idx;
    };
    for (std::size_t r = 0; r < kd; ++r) {
      for (std::size_t c = 0; c < kd; ++c) {
        cplx sum = 0.0;
        for (std::size_t t = 0; t < td; ++t) {
          sum += (*this)(full_index(r, t), full_index(c, t));
        }
        out(r, c) = sum;
      }
    }
    return out;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  /// Tr(rho^2); 1 for pure states.
  double purity() const {
    double p = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t c = 0; c < dim_; ++c) {
        p += std::norm((*this)(r, c));
      }
    }
    return p;
  }

  bool is_hermitian(double tol = 1e-12) const {
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t c = r; c < dim_; ++c) {
        if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) {
          return false;
        }
      }
    }
    return true;
  }

  /// <psi|rho|psi> for a pure target state given as amplitudes.
  double fidelity_to_pure(const std::vector<cplx>& psi) const {
    if (psi.size() != dim_) {
      throw std::invalid_argument("fidelity_to_pure: dimension mismatch");
    }
    cplx f = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t c = 0; c < dim_; ++c) {
        f += std::conj(psi[r]) * (*this)(r, c) * psi[c];
      }
    }
    return f.real();
  }

  std::size_t bit_mask(int q) const {
    return std::size_t{1} << (n_ - 1 - q);
  }

 private:
  explicit DensityMatrix(int n)
      : n_(n), dim_(std::size_t{1} << n), m_(dim_ * dim_, cplx(0, 0)) {}

  void check_qubit(int q) const {
    if (q < 0 || q >= n_) {
      throw std::invalid_argument("DensityMatrix: qubit index out of range");
    }
  }

  /// rho -> U rho U^dag for a 2x2 matrix U acting on qubit q.
  void conjugate_1q(const std::array<cplx, 4>& u, int q) {
    const std::size_t mask = bit_mask(q);
    // Left multiply: rows mixed in pairs.
    for (std::size_t r0 = 0; r0 < dim_; ++r0) {
      if (r0 & mask) continue;
      const std::size_t r1 = r0 | mask;
      for (std::size_t c = 0; c < dim_; ++c) {
        const cplx a = (*this)(r0, c);
        const cplx b = (*this)(r1, c);
        (*this)(r0, c) = u[0] * a + u[1] * b;
        (*this)(r1, c) = u[2] * a + u[3] * b;
      }
    }
    // Right multiply by U^dag: columns mixed in pairs.
    for (std::size_t c0 = 0; c0 < dim_; ++c0) {
      if (c0 & mask) continue;
      const std::size_t c1 = c0 | mask;
      for (std::size_t r = 0; r < dim_; ++r) {
        const cplx a = (*this)(r, c0);
        const cplx b = (*this)(r, c1);
        (*this)(r, c0) = a * std::conj(u[0]) + b * std::conj(u[1]);
        (*this)(r, c1) = a * std::conj(u[2]) + b * std::conj(u[3]);
      }
    }
  }

  int n_;
  std::size_t dim_;
  std::vector<cplx> m_;
};

/// Thermal product-state initialization (`pops` may be empty for all-zero).
inline DensityMatrix init_register(int n_qubits,
                                   const std::vector<double>& thermal_pops) {
  return DensityMatrix::thermal(n_qubits, thermal_pops);
}

}  // namespace blgi::sim
