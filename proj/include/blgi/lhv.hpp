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
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "blgi/estimator.hpp"
#include "blgi/rng.hpp"

namespace blgi::protocol {

/// Local-hidden-variable detector model: a hidden state lambda in [0,1)
/// determines every detector output deterministically, with values in
/// {-1,+1}. Remote detectors share lambda but nothing else.
struct LhvModel {
  std::function<int(double lambda, double angle)> alice;
  std::function<int(double lambda, double angle)> bob;

  /// Both detectors report fixed signs regardless of lambda and angle.
  static LhvModel constant(int a_sign, int b_sign) {
    if ((a_sign != 1 && a_sign != -1) || (b_sign != 1 && b_sign != -1)) {
      throw std::invalid_argument("LhvModel: signs must be +-1");
    }
    return {[a_sign](double, double) { return a_sign; },
            [b_sign](double, double) { return b_sign; }};
  }

  /// Uniform hidden direction xi = 2*pi*lambda; each side reports the
  /// sign of cos(angle - xi), anticorrelated between the sides. Produces
  /// the linear sawtooth E(theta) = -1 + 2*theta/pi on [0, pi].
  static LhvModel sign_model() {
    auto response = [](double lambda, double angle) {
      return std::cos(angle - 2.0 * std::numbers::pi * lambda) >= 0.0 ? 1 : -1;
    };
    return {[response](double l, double a) { return response(l, a); },
            [response](double l, double a) { return -response(l, a); }};
  }

  /// Randomized deterministic model: lambda is quantized into n_states
  /// hidden states and each (state, side, angle) cell gets an arbitrary
  /// but fixed sign derived from `seed`.
  static LhvModel random_table(std::uint64_t seed, int n_states) {
    if (n_states < 1) {
      throw std::invalid_argument("LhvModel: n_states must be >= 1");
    }
    auto cell_sign = [seed, n_states](double lambda, double angle, int side) {
      const auto state = static_cast<std::uint64_t>(
          std::min<double>(n_states - 1, std::floor(lambda * n_states)));
      std::uint64_t bits;
      static_assert(sizeof(bits) == sizeof(angle));
      std::memcpy(&bits, &angle, sizeof(bits));
      sim::SplitMix64 h(seed ^ (state * 0x9E3779B97F4A7C15ULL) ^
                        (bits * 0xC2B2AE3D27D4EB4FULL) ^
                        static_cast<std::uint64_t>(side));
      return (h.next_u64() & 1u) ? 1 : -1;
    };
    return {[cell_sign](double l, double a) { return cell_sign(l, a, 0); },
            [cell_sign](double l, double a) { return cell_sign(l, a, 1); }};
  }
};

struct LhvBaselineResult {
  std::vector<double> e_theta;       // E at each requested angle difference
  stats::CorrelatorEstimate chsh;    // CHSH combination at standard angles
  stats::CorrelatorEstimate blgi;    // <C> at standard angles
};

/// Samples hidden states and evaluates the detector model: E(theta) with
/// the first detector fixed at 0, plus the CHSH and BLGI combinations at
/// the standard angle set (a=0, b=pi/4, a'=pi/2, b'=3pi/4). Every
/// combination obeys the classical bound of 2 up to sampling error.
inline LhvBaselineResult lhv_baseline(const std::vector<double>& theta_grid,
                                      const LhvModel& model,
                                      std::uint64_t n_samples,
                                      std::uint64_t seed) {
  if (n_samples < 2) {
    throw std::invalid_argument("lhv_baseline: needs n_samples >= 2");
  }
  if (!model.alice || !model.bob) {
    throw std::invalid_argument("lhv_baseline: incomplete model");
  }
  constexpr double a = 0.0;
  constexpr double b = std::numbers::pi / 4;
  constexpr double a_prime = std::numbers::pi / 2;
  constexpr double b_prime = 3 * std::numbers::pi / 4;

  std::vector<std::int64_t> theta_sum(theta_grid.size(), 0);
  // Outputs are +-1, so all accumulators below stay exact integers.
  std::int64_t chsh_sum = 0, chsh_sq = 0, blgi_sum = 0, blgi_sq = 0;

  sim::SplitMix64 rng(seed);
  for (std::uint64_t s = 0; s < n_samples; ++s) {
    const double lambda = rng.next_double();
    for (std::size_t t = 0; t < theta_grid.size(); ++t) {
      theta_sum[t] += model.alice(lambda, 0.0) * model.bob(lambda, theta_grid[t]);
    }
    const int alpha1 = model.alice(lambda, a);
    const int bell1 = model.alice(lambda, a_prime);
    const int alpha2 = model.bob(lambda, b);
    const int bell2 = model.bob(lambda, b_prime);
    const int chsh_c = alpha1 * alpha2 + bell1 * alpha2 + alpha1 * bell2 -
                       bell1 * bell2;
    const int blgi_c = -alpha1 * alpha2 - alpha1 * bell2 + bell1 * alpha2 -
                       bell1 * bell2;
    chsh_sum += chsh_c;
    chsh_sq += chsh_c * chsh_c;
    blgi_sum += blgi_c;
    blgi_sq += blgi_c * blgi_c;
  }

  auto finalize = [n_samples](std::int64_t sum, std::int64_t sq) {
    stats::CorrelatorEstimate est;
    const double n = static_cast<double>(n_samples);
    est.mean = static_cast<double>(sum) / n;
    const double var =
        (static_cast<double>(sq) - n * est.mean * est.mean) / (n - 1.0);
    est.sem = std::sqrt(std::max(0.0, var) / n);
    est.n = n_samples;
    est.degenerate_sem = est.sem == 0.0 && est.mean > 2.0;
    est.sigmas_above_classical = stats::violation_significance(est);
    return est;
  };

  LhvBaselineResult result;
  result.e_theta.reserve(theta_grid.size());
  for (std::size_t t = 0; t < theta_grid.size(); ++t) {
    result.e_theta.push_back(static_cast<double>(theta_sum[t]) /
                             static_cast<double>(n_samples));
  }
  result.chsh = finalize(chsh_sum, chsh_sq);
  result.blgi = finalize(blgi_sum, blgi_sq);
  return result;
}

}  // namespace blgi::protocol
