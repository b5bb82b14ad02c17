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

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "blgi/density_matrix.hpp"
#include "blgi/rng.hpp"

namespace blgi::noise {

using sim::cplx;
using sim::DensityMatrix;
using sim::ProbabilityTable;
using sim::ShotTable;
using sim::SplitMix64;

// ---------------------------------------------------------------------------
// Channels
// ---------------------------------------------------------------------------

/// rho -> (1-p) rho + p Z rho Z on qubit q. Populations are untouched;
/// coherences involving q scale by (1 - 2p).
inline void dephasing_channel(DensityMatrix& state, int q, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("dephasing_channel: p outside [0,1]");
  }
  const std::size_t mask = state.bit_mask(q);
  const double scale = 1.0 - 2.0 * p;
  for (std::size_t r = 0; r < state.dim(); ++r) {
    for (std::size_t c = 0; c < state.dim(); ++c) {
      if ((r & mask) != (c & mask)) state(r, c) *= scale;
    }
  }
}

/// Two-Kraus amplitude damping on qubit q:
///   K0 = [[1, 0], [0, sqrt(1-g)]],  K1 = [[0, sqrt(g)], [0, 0]].
inline void amplitude_damping_channel(DensityMatrix& state, int q,
                                      double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("amplitude_damping_channel: gamma outside [0,1]");
  }
  if (gamma == 0.0) return;
  const std::array<cplx, 4> k0 = {cplx(1, 0), cplx(0, 0), cplx(0, 0),
                                  cplx(std::sqrt(1.0 - gamma), 0)};
  const std::array<cplx, 4> k1 = {cplx(0, 0), cplx(std::sqrt(gamma), 0),
                                  cplx(0, 0), cplx(0, 0)};
  state.apply_kraus_1q(k0, k1, q);
}

// ---------------------------------------------------------------------------
// Readout
// ---------------------------------------------------------------------------

/// Row-stochastic single-qubit assignment map P(reported | true).
struct ConfusionMatrix {
  double p_read1_given0 = 0.0;
  double p_read0_given1 = 0.0;

  double visibility() const { return 1.0 - p_read1_given0 - p_read0_given1; }

  void validate() const {
    if (!(p_read1_given0 >= 0.0 && p_read1_given0 <= 1.0) ||
        !(p_read0_given1 >= 0.0 && p_read0_given1 <= 1.0)) {
      throw std::invalid_argument("ConfusionMatrix: probability outside [0,1]");
    }
  }

  static ConfusionMatrix ideal() { return {0.0, 0.0}; }

  /// Both error probabilities (1-v)/2, so the knob is the visibility v.
  static ConfusionMatrix symmetric(double visibility) {
    if (!(visibility >= 0.0 && visibility <= 1.0)) {
      throw std::invalid_argument("ConfusionMatrix: visibility outside [0,1]");
    }
    const double e = (1.0 - visibility) / 2.0;
    return {e, e};
  }
};

/// Applies the tensor product of per-qubit confusion maps to an outcome
/// distribution; one matrix per table column, in table order.
inline ProbabilityTable readout_confusion(
    const ProbabilityTable& dist, const std::vector<ConfusionMatrix>& matrices) {
  if (matrices.size() != dist.num_qubits()) {
    throw std::invalid_argument("readout_confusion: one matrix per qubit");
  }
  for (const auto& m : matrices) m.validate();
  ProbabilityTable out = dist;
  const std::size_t k = dist.num_qubits();
  for (std::size_t q = 0; q < k; ++q) {
    const std::size_t mask = std::size_t{1} << (k - 1 - q);
    const double p10 = matrices[q].p_read1_given0;
    const double p01 = matrices[q].p_read0_given1;
    for (std::size_t i0 = 0; i0 < out.probs.size(); ++i0) {
      if (i0 & mask) continue;
      const std::size_t i1 = i0 | mask;
      const double a = out.probs[i0];
      const double b = out.probs[i1];
      out.probs[i0] = (1.0 - p10) * a + p01 * b;
      out.probs[i1] = p10 * a + (1.0 - p01) * b;
    }
  }
  return out;
}

/// Shot-level variant: flips each sampled bit independently with the
/// corresponding confusion probabilities. Seeded and reproducible.
inline ShotTable readout_confusion_shots(
    const ShotTable& shots, const std::vector<ConfusionMatrix>& matrices,
    std::uint64_t seed) {
  const std::size_t k = shots.qubit_roles.size();
  if (matrices.size() != k) {
    throw std::invalid_argument("readout_confusion_shots: one matrix per qubit");
  }
  for (const auto& m : matrices) m.validate();
  ShotTable out = shots;
  SplitMix64 rng(seed);
  for (std::uint64_t s = 0; s < out.n_shots; ++s) {
    for (std::size_t c = 0; c < k; ++c) {
      const double u = rng.next_double();
      std::uint8_t& bit = out.bits[s * k + c];
      const double p_flip =
          bit ? matrices[c].p_read0_given1 : matrices[c].p_read1_given0;
      if (u < p_flip) bit ^= 1u;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

/// Dominant imperfections of the modeled device: per-gate-layer dephasing
/// and energy decay, per-qubit readout confusion and thermal population.
struct NoiseModel {
  double gate_dephasing_p = 0.0;
  double t1_gamma = 0.0;
  std::vector<ConfusionMatrix> readout_confusion;
  std::vector<double> thermal_pops;

  void validate() const {
    if (!(gate_dephasing_p >= 0.0 && gate_dephasing_p <= 1.0)) {
      throw std::invalid_argument("NoiseModel: dephasing outside [0,1]");
    }
    if (!(t1_gamma >= 0.0 && t1_gamma <= 1.0)) {
      throw std::invalid_argument("NoiseModel: t1_gamma outside [0,1]");
    }
    if (readout_confusion.size() != thermal_pops.size()) {
      throw std::invalid_argument("NoiseModel: per-qubit list size mismatch");
    }
    for (const auto& m : readout_confusion) m.validate();
    for (double p : thermal_pops) {
      if (!(p >= 0.0 && p <= 0.5)) {
        throw std::invalid_argument("NoiseModel: thermal pop outside [0,0.5]");
      }
    }
  }

  std::size_t num_qubits() const { return thermal_pops.size(); }
  bool is_noiseless_gates() const {
    return gate_dephasing_p == 0.0 && t1_gamma == 0.0;
  }

  static NoiseModel ideal(std::size_t n_qubits) {
    NoiseModel m;
    m.readout_confusion.assign(n_qubits, ConfusionMatrix::ideal());
    m.thermal_pops.assign(n_qubits, 0.0);
    return m;
  }

  /// Same gate noise, per-qubit entries restricted to `qubits`.
  NoiseModel subset(const std::vector<int>& qubits) const {
    NoiseModel m;
    m.gate_dephasing_p = gate_dephasing_p;
    m.t1_gamma = t1_gamma;
    for (int q : qubits) {
      if (q < 0 || static_cast<std::size_t>(q) >= num_qubits()) {
        throw std::invalid_argument("NoiseModel::subset: index out of range");
      }
      m.readout_confusion.push_back(
          readout_confusion[static_cast<std::size_t>(q)]);
      m.thermal_pops.push_back(thermal_pops[static_cast<std::size_t>(q)]);
    }
    return m;
  }

  /// Four-qubit defaults in chain order (ancilla1, bell1, bell2, ancilla2):
  /// symmetric readout errors 0.015/0.004/0.067/0.007, thermal excited-state
  /// populations 0.013/0.007/0.028/0.01, dephasing 0.25% per gate layer.
  static NoiseModel device_defaults() {
    NoiseModel m;
    m.gate_dephasing_p = 0.0025;
    m.t1_gamma = 0.0;
    m.readout_confusion = {{0.015, 0.015}, {0.004, 0.004}, {0.067, 0.067},
                           {0.007, 0.007}};
    m.thermal_pops = {0.013, 0.007, 0.028, 0.01};
    return m;
  }
};

/// One post-layer noise step: dephasing then damping on each qubit that
/// participated in the layer.
inline void apply_layer_noise(DensityMatrix& state,
                              const std::vector<int>& qubits,
                              const NoiseModel& model) {
  if (model.is_noiseless_gates()) return;
  for (int q : qubits) {
    if (model.gate_dephasing_p > 0.0) {
      dephasing_channel(state, q, model.gate_dephasing_p);
    }
    if (model.t1_gamma > 0.0) {
      amplitude_damping_channel(state, q, model.t1_gamma);
    }
  }
}

}  // namespace blgi::noise
