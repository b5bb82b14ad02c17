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
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "blgi/density_matrix.hpp"

namespace blgi::stats {

using sim::ProbabilityTable;
using sim::ShotTable;

class singular_calibration_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class degenerate_calibration_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Correlators
// ---------------------------------------------------------------------------

/// E = P(00) - P(10) - P(01) + P(11) for a two-qubit outcome table;
/// equals the <Z (x) Z> correlation of the distribution.
inline double correlation_E(const ProbabilityTable& dist) {
  if (dist.num_qubits() != 2) {
    throw std::invalid_argument("correlation_E: needs a two-qubit table");
  }
  dist.validate();
  return dist.probs[0] - dist.probs[2] - dist.probs[1] + dist.probs[3];
}

/// The four two-qubit correlators of the hybrid inequality, indexed by
/// which detectors they pair: ancilla-ancilla, ancilla-bell, bell-ancilla,
/// bell-bell.
struct BlgiTerms {
  double e_aa = 0.0;
  double e_ab = 0.0;
  double e_ba = 0.0;
  double e_bb = 0.0;
};

/// <C> = -E(aa) - E(ab) + E(ba) - E(bb).
inline double blgi_correlator(double e_aa, double e_ab, double e_ba,
                              double e_bb) {
  return -e_aa - e_ab + e_ba - e_bb;
}

inline double blgi_correlator(const BlgiTerms& t) {
  return blgi_correlator(t.e_aa, t.e_ab, t.e_ba, t.e_bb);
}

// ---------------------------------------------------------------------------
// Ancilla calibration
// ---------------------------------------------------------------------------

enum class CalibrationMode { SinPhi, EmpiricalZero };

/// Raw ancilla <Z> traces versus measurement strength, for a target
/// prepared in |0> and in |1>. Ideal traces are +-sin(phi).
struct CalibrationCurve {
  std::vector<double> phi_grid;
  std::vector<double> zero_state_trace;
  std::vector<double> one_state_trace;

  double zero_at(double phi) const { return lookup(zero_state_trace, phi); }
  double one_at(double phi) const { return lookup(one_state_trace, phi); }

 private:
  double lookup(const std::vector<double>& trace, double phi) const {
    for (std::size_t i = 0; i < phi_grid.size(); ++i) {
      if (std::abs(phi_grid[i] - phi) < 1e-12) return trace[i];
    }
    throw std::invalid_argument("CalibrationCurve: phi not in curve");
  }
};

/// Rescaling that restores the target <Z> from the compressed ancilla
/// signal. SinPhi divides by the ideal compression sin(phi); EmpiricalZero
/// divides by the measured |0>-state trace, which pins the calibrated
/// |0>-state mean to exactly 1.
inline double calibration_factor(double phi, CalibrationMode mode,
                                 const CalibrationCurve* curve = nullptr) {
  if (!(phi > 0.0 && phi <= std::numbers::pi / 2.0 + 1e-12)) {
    throw singular_calibration_error(
        "calibration_factor: phi must be in (0, pi/2]");
  }
  if (mode == CalibrationMode::SinPhi) {
    return 1.0 / std::sin(phi);
  }
  if (curve == nullptr) {
    throw std::invalid_argument(
        "calibration_factor: empirical mode needs a curve");
  }
  const double z = curve->zero_at(phi);
  if (z <= 0.0) {
    throw degenerate_calibration_error(
        "calibration_factor: |0>-state trace not positive");
  }
  return 1.0 / z;
}

/// Per-term rescaling rule: the ancilla-ancilla term picks up both
/// factors, each mixed term the factor of its ancilla, and the bell-bell
/// term is untouched.
inline BlgiTerms apply_blgi_calibration(const BlgiTerms& raw, double cal1,
                                        double cal2) {
  if (!(cal1 > 0.0) || !(cal2 > 0.0) || !std::isfinite(cal1) ||
      !std::isfinite(cal2)) {
    throw std::invalid_argument(
        "apply_blgi_calibration: factors must be positive and finite");
  }
  return {raw.e_aa * cal1 * cal2, raw.e_ab * cal1, raw.e_ba * cal2, raw.e_bb};
}

// ---------------------------------------------------------------------------
// Per-shot correlator and significance
// ---------------------------------------------------------------------------

/// Eigenvalue map for measured bits: 0 -> +1, 1 -> -1.
inline double bit_value(std::uint8_t bit) { return bit ? -1.0 : 1.0; }

/// Single-realization correlator C = -a1*a2 - a1*b2 + b1*a2 - b1*b2 with
/// calibrated ancilla values a_k = +-cal_k and projective values b_k = +-1.
inline double per_shot_correlator(std::uint8_t alpha1_bit,
                                  std::uint8_t bell1_bit,
                                  std::uint8_t bell2_bit,
                                  std::uint8_t alpha2_bit, double cal1,
                                  double cal2) {
  const double a1 = cal1 * bit_value(alpha1_bit);
  const double b1 = bit_value(bell1_bit);
  const double b2 = bit_value(bell2_bit);
  const double a2 = cal2 * bit_value(alpha2_bit);
  return -a1 * a2 - a1 * b2 + b1 * a2 - b1 * b2;
}

/// Compensated (Kahan) accumulator; keeps shard-and-merge reductions
/// associativity-safe for million-shot streams.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct CorrelatorEstimate {
  double mean = 0.0;
  double sem = 0.0;  // sample stddev / sqrt(n)
  std::uint64_t n = 0;
  double sigmas_above_classical = 0.0;  // (mean - 2) / sem
  bool degenerate_sem = false;          // sem == 0 with mean > 2
};

/// (mean - 2) / sem; +infinity sentinel (with the estimate's warning flag)
/// when sem is zero while the mean exceeds the classical bound.
inline double violation_significance(const CorrelatorEstimate& est) {
  if (est.sem == 0.0) {
    if (est.mean > 2.0) return std::numeric_limits<double>::infinity();
    return 0.0;
  }
  return (est.mean - 2.0) / est.sem;
}

/// Mean and SEM of a value stream (two-pass, compensated).
inline CorrelatorEstimate estimate_from_values(
    const std::vector<double>& values) {
  if (values.size() < 2) {
    throw std::invalid_argument("estimate_from_values: needs n >= 2");
  }
  KahanSum total;
  for (double v : values) total.add(v);
  const double mean = total.value() / static_cast<double>(values.size());
  KahanSum sq;
  for (double v : values) sq.add((v - mean) * (v - mean));
  const double var = sq.value() / static_cast<double>(values.size() - 1);
  CorrelatorEstimate est;
  est.mean = mean;
  est.sem = std::sqrt(var / static_cast<double>(values.size()));
  est.n = values.size();
  est.degenerate_sem = est.sem == 0.0 && est.mean > 2.0;
  est.sigmas_above_classical = violation_significance(est);
  return est;
}

/// Empirical raw correlator terms of a four-column shot table in role
/// order (alpha1, bell1, bell2, alpha2).
inline BlgiTerms empirical_raw_terms(const ShotTable& shots) {
  if (shots.qubit_roles.size() != 4) {
    throw std::invalid_argument("empirical_raw_terms: needs four columns");
  }
  KahanSum aa, ab, ba, bb;
  for (std::uint64_t s = 0; s < shots.n_shots; ++s) {
    const double a1 = bit_value(shots.at(s, 0));
    const double b1 = bit_value(shots.at(s, 1));
    const double b2 = bit_value(shots.at(s, 2));
    const double a2 = bit_value(shots.at(s, 3));
    aa.add(a1 * a2);
    ab.add(a1 * b2);
    ba.add(b1 * a2);
    bb.add(b1 * b2);
  }
  const double n = static_cast<double>(shots.n_shots);
  return {aa.value() / n, ab.value() / n, ba.value() / n, bb.value() / n};
}

/// Mean, SEM and significance of the per-shot correlator stream.
inline CorrelatorEstimate estimate_blgi(const ShotTable& shots, double cal1,
                                        double cal2) {
  if (shots.qubit_roles.size() != 4) {
    throw std::invalid_argument("estimate_blgi: needs four columns");
  }
  if (shots.n_shots < 2) {
    throw std::invalid_argument("estimate_blgi: needs n >= 2");
  }
  KahanSum total;
  for (std::uint64_t s = 0; s < shots.n_shots; ++s) {
    total.add(per_shot_correlator(shots.at(s, 0), shots.at(s, 1),
                                  shots.at(s, 2), shots.at(s, 3), cal1, cal2));
  }
  const double n = static_cast<double>(shots.n_shots);
  const double mean = total.value() / n;
  KahanSum sq;
  for (std::uint64_t s = 0; s < shots.n_shots; ++s) {
    const double v = per_shot_correlator(shots.at(s, 0), shots.at(s, 1),
                                         shots.at(s, 2), shots.at(s, 3), cal1,
                                         cal2);
    sq.add((v - mean) * (v - mean));
  }
  CorrelatorEstimate est;
  est.mean = mean;
  est.sem = std::sqrt(sq.value() / (n - 1.0) / n);
  est.n = shots.n_shots;
  est.degenerate_sem = est.sem == 0.0 && est.mean > 2.0;
  est.sigmas_above_classical = violation_significance(est);
  return est;
}

/// Exact standard deviation of the per-shot correlator under a 16-outcome
/// distribution in role order (alpha1, bell1, bell2, alpha2); the SEM of an
/// n-shot estimate is this value / sqrt(n).
inline double exact_per_shot_stddev(const ProbabilityTable& dist, double cal1,
                                    double cal2) {
  if (dist.num_qubits() != 4) {
    throw std::invalid_argument("exact_per_shot_stddev: needs 16 outcomes");
  }
  double mean = 0.0, second = 0.0;
  for (std::size_t idx = 0; idx < 16; ++idx) {
    const double c = per_shot_correlator(
        static_cast<std::uint8_t>((idx >> 3) & 1u),
        static_cast<std::uint8_t>((idx >> 2) & 1u),
        static_cast<std::uint8_t>((idx >> 1) & 1u),
        static_cast<std::uint8_t>(idx & 1u), cal1, cal2);
    mean += dist.probs[idx] * c;
    second += dist.probs[idx] * c * c;
  }
  return std::sqrt(std::max(0.0, second - mean * mean));
}

}  // namespace blgi::stats
