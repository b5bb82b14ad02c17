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

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "blgi/density_matrix.hpp"
#include "blgi/estimator.hpp"
#include "blgi/noise.hpp"

namespace blgi::protocol {

using noise::NoiseModel;
using sim::DensityMatrix;
using sim::GateOp;
using sim::ProbabilityTable;

inline constexpr double kPi = std::numbers::pi;

enum class BellVariant { PsiMinus, PsiPlus, PhiPlus, PhiMinus };

/// Register layout of the four-qubit chain: ancilla 1, bell 1, bell 2,
/// ancilla 2. All per-qubit noise lists follow this order.
inline constexpr int kAlpha1 = 0;
inline constexpr int kBell1 = 1;
inline constexpr int kBell2 = 2;
inline constexpr int kAlpha2 = 3;

// ---------------------------------------------------------------------------
// Gate layers
// ---------------------------------------------------------------------------

/// Gates scheduled together; layer noise hits each participating qubit once.
struct Layer {
  std::vector<GateOp> gates;

  std::vector<int> participants() const {
    std::vector<int> qs;
    for (const auto& g : gates) {
      for (int q : g.targets) {
        if (std::find(qs.begin(), qs.end(), q) == qs.end()) qs.push_back(q);
      }
    }
    return qs;
  }
};

inline void run_layers(DensityMatrix& state, const std::vector<Layer>& layers,
                       const NoiseModel& model) {
  for (const auto& layer : layers) {
    for (const auto& g : layer.gates) state.apply(g);
    noise::apply_layer_noise(state, layer.participants(), model);
  }
}

/// Bell preparation from |00> on (q1, q2) using rotations and CZ only:
/// Ry(pi/2) on both, CZ, Ry(pi/2) on q2 yields (|01>+|10>)/sqrt(2); the
/// other variants differ by a final single-qubit frame gate on q1.
inline std::vector<Layer> bell_prep_layers(int q1, int q2,
                                           BellVariant variant) {
  std::vector<Layer> layers;
  layers.push_back({{GateOp::ry(q1, kPi / 2), GateOp::ry(q2, kPi / 2)}});
  layers.push_back({{GateOp::cz(q1, q2)}});
  Layer finish{{GateOp::ry(q2, kPi / 2)}};
  switch (variant) {
    case BellVariant::PsiPlus:
      break;
    case BellVariant::PsiMinus:
      finish.gates.push_back(GateOp::rz(q1, kPi));
      break;
    case BellVariant::PhiPlus:
      finish.gates.push_back(GateOp::rx(q1, kPi));
      break;
    case BellVariant::PhiMinus:
      finish.gates.push_back(GateOp::rx(q1, kPi));
      finish.gates.push_back(GateOp::rz(q1, kPi));
      break;
    default:
      throw std::invalid_argument("bell_prep_layers: unknown variant");
  }
  layers.push_back(std::move(finish));
  return layers;
}

/// Noiseless Bell preparation on (q1, q2) of an existing register.
inline void prepare_bell(DensityMatrix& state, int q1, int q2,
                         BellVariant variant) {
  run_layers(state, bell_prep_layers(q1, q2, variant),
             NoiseModel::ideal(static_cast<std::size_t>(state.n_qubits())));
}

/// Tunable-strength measurement of `target` through `ancilla`:
/// Ry(phi) on the ancilla, CZ, Ry(-pi/2) on the ancilla. Afterwards
/// <Z>_ancilla = sin(phi) * <Z>_target(pre). phi = pi/2 acts as a
/// projective CNOT-style readout; phi = 0 leaves the target untouched.
inline void weak_measure(DensityMatrix& state, int target, int ancilla,
                         double phi) {
  if (!(phi >= 0.0 && phi <= kPi / 2 + 1e-12)) {
    throw std::invalid_argument("weak_measure: phi outside [0, pi/2]");
  }
  state.apply(GateOp::ry(ancilla, phi));
  state.apply(GateOp::cz(target, ancilla));
  state.apply(GateOp::ry(ancilla, -kPi / 2));
}

// ---------------------------------------------------------------------------
// BLGI
// ---------------------------------------------------------------------------

struct BlgiConfig {
  // Detector angles. Defaults are the standard CHSH-optimal set.
  double angle_a = 0.0;
  double angle_b = kPi / 4;
  double angle_a_prime = kPi / 2;
  double angle_b_prime = 3 * kPi / 4;
  // Ancilla measurement strengths in [0, pi/2].
  double phi1 = kPi / 4;
  double phi2 = kPi / 4;
  BellVariant bell_variant = BellVariant::PsiMinus;
  std::uint64_t n_shots = 600000;
  stats::CalibrationMode calibration_mode = stats::CalibrationMode::EmpiricalZero;
  // Per-angle offsets (a, b, a', b'); models detector-angle fine trims.
  std::array<double, 4> detector_trim{0.0, 0.0, 0.0, 0.0};
  // Optional mid-sequence echo X pulses on the bell pair. Off by default;
  // no sign compensation is applied to the correlators when enabled.
  bool echo_x = false;
  // Aggregate phase-flip probability applied once per qubit between the
  // basis rotations and the entangling layer (sequence-level dephasing
  // knob, distinct from the per-layer model in NoiseModel).
  double sequence_dephasing_p = 0.0;

  void validate() const {
    if (!(phi1 >= 0.0 && phi1 <= kPi / 2 + 1e-12) ||
        !(phi2 >= 0.0 && phi2 <= kPi / 2 + 1e-12)) {
      throw std::invalid_argument("BlgiConfig: strengths outside [0, pi/2]");
    }
    if (n_shots < 1) {
      throw std::invalid_argument("BlgiConfig: n_shots must be >= 1");
    }
    if (!(sequence_dephasing_p >= 0.0 && sequence_dephasing_p <= 1.0)) {
      throw std::invalid_argument(
          "BlgiConfig: sequence dephasing outside [0,1]");
    }
  }
};

/// Full BLGI circuit, exact outcome distribution over 16 outcomes in role
/// order (alpha1, beta1, beta2, alpha2).
///
/// Sequence: thermal init; Bell preparation on the central pair; first
/// basis rotations Ry(a), Ry(b); simultaneous weak measurements at phi1,
/// phi2 (one noise layer); final basis change, realized as the relative
/// rotation (a'-a)-pi resp. (b'-b)-pi together with the ancillas'
/// Ry(-pi/2); readout confusion. The extra half turn in the basis change
/// is fixed by requiring the weak-limit correlator of the singlet to
/// reach 2*sqrt(2) at the standard angles.
inline ProbabilityTable run_blgi(const BlgiConfig& cfg,
                                 const NoiseModel& model) {
  cfg.validate();
  model.validate();
  if (model.num_qubits() != 4) {
    throw std::invalid_argument("run_blgi: noise model must cover 4 qubits");
  }
  const double a = cfg.angle_a + cfg.detector_trim[0];
  const double b = cfg.angle_b + cfg.detector_trim[1];
  const double ap = cfg.angle_a_prime + cfg.detector_trim[2];
  const double bp = cfg.angle_b_prime + cfg.detector_trim[3];

  DensityMatrix state = DensityMatrix::thermal(4, model.thermal_pops);

  std::vector<Layer> layers = bell_prep_layers(kBell1, kBell2, cfg.bell_variant);
  layers.push_back({{GateOp::ry(kBell1, a), GateOp::ry(kBell2, b)}});
  if (cfg.echo_x) {
    layers.push_back({{GateOp::rx(kBell1, kPi), GateOp::rx(kBell2, kPi)}});
  }
  run_layers(state, layers, model);

  if (cfg.sequence_dephasing_p > 0.0) {
    for (int q = 0; q < 4; ++q) {
      noise::dephasing_channel(state, q, cfg.sequence_dephasing_p);
    }
  }

  std::vector<Layer> tail;
  tail.push_back({{GateOp::ry(kAlpha1, cfg.phi1), GateOp::ry(kAlpha2, cfg.phi2)}});
  tail.push_back({{GateOp::cz(kAlpha1, kBell1), GateOp::cz(kAlpha2, kBell2)}});
  tail.push_back({{GateOp::ry(kAlpha1, -kPi / 2), GateOp::ry(kAlpha2, -kPi / 2),
                   GateOp::ry(kBell1, (ap - a) - kPi),
                   GateOp::ry(kBell2, (bp - b) - kPi)}});
  run_layers(state, tail, model);

  ProbabilityTable dist = state.probabilities(
      {kAlpha1, kBell1, kBell2, kAlpha2},
      {"alpha1", "beta1", "beta2", "alpha2"});
  return noise::readout_confusion(dist, model.readout_confusion);
}

/// Raw correlator terms from the 16-outcome table: marginals over
/// (alpha1,alpha2), (alpha1,beta2), (beta1,alpha2), (beta1,beta2).
inline stats::BlgiTerms blgi_raw_terms(const ProbabilityTable& dist) {
  if (dist.num_qubits() != 4) {
    throw std::invalid_argument("blgi_raw_terms: needs a 16-outcome table");
  }
  return {stats::correlation_E(dist.marginal({0, 3})),
          stats::correlation_E(dist.marginal({0, 2})),
          stats::correlation_E(dist.marginal({1, 3})),
          stats::correlation_E(dist.marginal({1, 2}))};
}

// ---------------------------------------------------------------------------
// Ancilla calibration experiment
// ---------------------------------------------------------------------------

/// Raw ancilla <Z> after the weak-measurement sequence with the target
/// prepared in |0> (or |1> with a pi pulse), under the model's thermal,
/// gate and readout noise for that (target, ancilla) pair.
inline double ancilla_raw_trace(double phi, const NoiseModel& model,
                                int target_q, int ancilla_q, bool excited) {
  if (!(phi >= 0.0 && phi <= kPi / 2 + 1e-12)) {
    throw std::invalid_argument("ancilla_raw_trace: phi outside [0, pi/2]");
  }
  model.validate();
  DensityMatrix state = DensityMatrix::thermal(
      2, {model.thermal_pops[static_cast<std::size_t>(target_q)],
          model.thermal_pops[static_cast<std::size_t>(ancilla_q)]});
  const int tgt = 0, anc = 1;
  std::vector<Layer> layers;
  layers.push_back({{GateOp::ry(tgt, excited ? kPi : 0.0)}});
  layers.push_back({{GateOp::ry(anc, phi)}});
  layers.push_back({{GateOp::cz(tgt, anc)}});
  layers.push_back({{GateOp::ry(anc, -kPi / 2)}});
  NoiseModel pair_model = model;
  pair_model.thermal_pops = {0.0, 0.0};  // already in the initial state
  pair_model.readout_confusion = {
      model.readout_confusion[static_cast<std::size_t>(target_q)],
      model.readout_confusion[static_cast<std::size_t>(ancilla_q)]};
  run_layers(state, layers, pair_model);
  ProbabilityTable dist = noise::readout_confusion(
      state.probabilities({anc}),
      {model.readout_confusion[static_cast<std::size_t>(ancilla_q)]});
  return dist.probs[0] - dist.probs[1];
}

/// |0>- and |1>-state traces over a strength grid for one detector pair.
inline stats::CalibrationCurve simulate_calibration_curve(
    const std::vector<double>& phi_grid, const NoiseModel& model, int target_q,
    int ancilla_q) {
  stats::CalibrationCurve curve;
  curve.phi_grid = phi_grid;
  for (double phi : phi_grid) {
    curve.zero_state_trace.push_back(
        ancilla_raw_trace(phi, model, target_q, ancilla_q, false));
    curve.one_state_trace.push_back(
        ancilla_raw_trace(phi, model, target_q, ancilla_q, true));
  }
  return curve;
}

/// Calibration factors for both ancillas under the configured mode. The
/// empirical mode simulates the |0>-state calibration experiment with the
/// same noise model, mirroring the measured-curve normalization.
inline std::pair<double, double> blgi_calibration_factors(
    const BlgiConfig& cfg, const NoiseModel& model) {
  if (cfg.calibration_mode == stats::CalibrationMode::SinPhi) {
    return {stats::calibration_factor(cfg.phi1, stats::CalibrationMode::SinPhi),
            stats::calibration_factor(cfg.phi2, stats::CalibrationMode::SinPhi)};
  }
  stats::CalibrationCurve c1 =
      simulate_calibration_curve({cfg.phi1}, model, kBell1, kAlpha1);
  stats::CalibrationCurve c2 =
      simulate_calibration_curve({cfg.phi2}, model, kBell2, kAlpha2);
  return {stats::calibration_factor(cfg.phi1, stats::CalibrationMode::EmpiricalZero, &c1),
          stats::calibration_factor(cfg.phi2, stats::CalibrationMode::EmpiricalZero, &c2)};
}

// ---------------------------------------------------------------------------
// CHSH
// ---------------------------------------------------------------------------

struct ChshConfig {
  double theta = kPi / 4;  // detector angle difference a - b
  BellVariant bell_variant = BellVariant::PhiPlus;
  std::uint64_t n_shots = 600000;

  void validate() const {
    if (!(theta >= 0.0 && theta <= kPi)) {
      throw std::invalid_argument("ChshConfig: theta outside [0, pi]");
    }
    if (n_shots < 1) {
      throw std::invalid_argument("ChshConfig: n_shots must be >= 1");
    }
  }
};

struct ChshResult {
  double e_ab = 0.0;
  double e_apb = 0.0;   // (a', b)
  double e_abp = 0.0;   // (a, b')
  double e_apbp = 0.0;  // (a', b')
  double chsh = 0.0;    // E(a,b) + E(a',b) + E(a,b') - E(a',b')
};

/// Exact outcome distributions of the four projective experiments, in the
/// order (a,b), (a',b), (a,b'), (a',b').
inline std::array<ProbabilityTable, 4> chsh_distributions(
    const ChshConfig& cfg, const NoiseModel& model) {
  cfg.validate();
  model.validate();
  if (model.num_qubits() != 2) {
    throw std::invalid_argument("run_chsh: noise model must cover 2 qubits");
  }
  const double a = cfg.theta;
  const double b = 0.0;
  const double a_prime = a - kPi / 2;
  const double b_prime = b + kPi / 2;

  auto experiment = [&](double x1, double x2) {
    DensityMatrix state = DensityMatrix::thermal(2, model.thermal_pops);
    std::vector<Layer> layers = bell_prep_layers(0, 1, cfg.bell_variant);
    layers.push_back({{GateOp::ry(0, x1), GateOp::ry(1, x2)}});
    run_layers(state, layers, model);
    return noise::readout_confusion(
        state.probabilities({0, 1}, {"beta1", "beta2"}),
        model.readout_confusion);
  };

  return {experiment(a, b), experiment(a_prime, b), experiment(a, b_prime),
          experiment(a_prime, b_prime)};
}

/// Four projective two-qubit experiments at a = theta, b = 0 with primed
/// bases a quarter turn away. The primes are realized with opposite senses
/// (a' as a - pi/2 on qubit 1, b' as b + pi/2 on qubit 2); this is the
/// convention under which the sum reaches 2*sqrt(2) at theta = pi/4 for
/// the Phi+ pair.
inline ChshResult run_chsh(const ChshConfig& cfg, const NoiseModel& model) {
  const auto dists = chsh_distributions(cfg, model);
  ChshResult r;
  r.e_ab = stats::correlation_E(dists[0]);
  r.e_apb = stats::correlation_E(dists[1]);
  r.e_abp = stats::correlation_E(dists[2]);
  r.e_apbp = stats::correlation_E(dists[3]);
  r.chsh = r.e_ab + r.e_apb + r.e_abp - r.e_apbp;
  return r;
}

// ---------------------------------------------------------------------------
// LGI
// ---------------------------------------------------------------------------

struct LgiResult {
  double e12 = 0.0;
  double e23 = 0.0;
  double e13 = 0.0;
  double k = 0.0;  // E12 + E23 - E13, classically within [-3, 1]
};

/// Joint outcome distribution of one two-time experiment: rotate into the
/// earlier basis, measure projectively (measure-and-forget), rotate by the
/// basis difference and read out.
inline ProbabilityTable lgi_joint(double prep_angle, double theta_i,
                                  double theta_j) {
  DensityMatrix state = DensityMatrix::ground(1);
  state.apply(GateOp::ry(0, prep_angle));
  state.apply(GateOp::ry(0, theta_i));
  const double p0 = state.probabilities({0}).probs[0];
  ProbabilityTable joint;
  joint.qubit_roles = {"m1", "m2"};
  joint.probs.assign(4, 0.0);
  for (int m1 = 0; m1 < 2; ++m1) {
    const double weight = m1 == 0 ? p0 : 1.0 - p0;
    if (weight <= 0.0) continue;
    DensityMatrix branch = DensityMatrix::ground(1);
    if (m1 == 1) branch.apply(GateOp::ry(0, kPi));
    branch.apply(GateOp::ry(0, theta_j - theta_i));
    const double p2_0 = branch.probabilities({0}).probs[0];
    joint.probs[static_cast<std::size_t>(m1 * 2 + 0)] = weight * p2_0;
    joint.probs[static_cast<std::size_t>(m1 * 2 + 1)] = weight * (1.0 - p2_0);
  }
  return joint;
}

/// Three two-time experiments on one qubit; the joint statistics of each
/// pair give E(ti,tj).
inline LgiResult run_lgi(double prep_angle,
                         const std::array<double, 3>& basis_angles) {
  LgiResult r;
  r.e12 = stats::correlation_E(
      lgi_joint(prep_angle, basis_angles[0], basis_angles[1]));
  r.e23 = stats::correlation_E(
      lgi_joint(prep_angle, basis_angles[1], basis_angles[2]));
  r.e13 = stats::correlation_E(
      lgi_joint(prep_angle, basis_angles[0], basis_angles[2]));
  r.k = r.e12 + r.e23 - r.e13;
  return r;
}

/// Weak-ancilla variant measured in a single configuration: preparation
/// stands in for the first "measurement" (outcome +1), the second basis is
/// probed through the ancilla at strength phi and calibrated, the third is
/// read out projectively. prep_angle = -basis_angles[0] aligns the
/// preparation with the first basis.
inline LgiResult run_lgi_weak(double prep_angle,
                              const std::array<double, 3>& basis_angles,
                              double phi, stats::CalibrationMode mode) {
  if (!(phi > 0.0 && phi <= kPi / 2 + 1e-12)) {
    throw std::invalid_argument("run_lgi_weak: phi outside (0, pi/2]");
  }
  const int tgt = 0, anc = 1;
  DensityMatrix state = DensityMatrix::ground(2);
  state.apply(GateOp::ry(tgt, prep_angle));
  state.apply(GateOp::ry(tgt, basis_angles[1]));
  weak_measure(state, tgt, anc, phi);
  state.apply(GateOp::ry(tgt, basis_angles[2] - basis_angles[1]));

  double cal = 0.0;
  if (mode == stats::CalibrationMode::SinPhi) {
    cal = stats::calibration_factor(phi, mode);
  } else {
    // Noiseless single-branch experiment: the |0>-state trace is sin(phi).
    stats::CalibrationCurve curve{{phi}, {std::sin(phi)}, {-std::sin(phi)}};
    cal = stats::calibration_factor(phi, mode, &curve);
  }

  ProbabilityTable joint =
      state.probabilities({anc, tgt}, {"ancilla", "target"});
  LgiResult r;
  for (std::size_t idx = 0; idx < 4; ++idx) {
    const double p = joint.probs[idx];
    const double va = stats::bit_value(static_cast<std::uint8_t>(idx >> 1));
    const double vt = stats::bit_value(static_cast<std::uint8_t>(idx & 1u));
    r.e12 += p * cal * va;
    r.e23 += p * cal * va * vt;
    r.e13 += p * vt;
  }
  r.k = r.e12 + r.e23 - r.e13;
  return r;
}

}  // namespace blgi::protocol
