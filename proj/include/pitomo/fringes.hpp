// Copyright pitomo contributors
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

/**
 * @file fringes.hpp
 * @brief Sampled interference fringes: generation, fitting and the
 *        scalar summaries used by the reconstruction.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pitomo/common.hpp"
#include "pitomo/interferometer.hpp"

namespace pitomo {

/**
 * One recorded fringe: detection probability (or normalized counts)
 * versus swept phase at a fixed setting. The config field holds a
 * configuration label once known, otherwise the anonymous candidate id
 * the record was taken under. counts_per_point = 0 marks an exact,
 * noise-free trace.
 */
struct FringeRecord {
  std::string config;
  double theta = 0.0;
  double delta = 0.0;
  Polarization pol = Polarization::H;
  long long counts_per_point = 0;
  std::uint64_t seed = 0;

  std::vector<double> phi;    // strictly increasing, in [0, 2pi)
  std::vector<double> value;  // same length as phi
};

/**
 * Sample one fringe on a uniform grid phi_k = 2 pi k / grid_size,
 * k = 0 .. grid_size-1. With counts_per_point = 0 the trace is exact;
 * otherwise each point is an independent Poisson draw with mean
 * counts_per_point * p, normalized back by counts_per_point. Metadata
 * other than counts and seed is left for the caller to fill.
 *
 * Throws GridTooSmallError when grid_size < 8; three-parameter fits
 * need margin beyond their minimum.
 */
inline FringeRecord sample_fringe(const FringeCoefficients& fc,
                                  double pump_phase, int grid_size = 64,
                                  long long counts_per_point = 0,
                                  std::uint64_t seed = 0) {
  if (grid_size < 8)
    throw GridTooSmallError("sample_fringe: grid_size below 8");
  FringeRecord r;
  r.counts_per_point = counts_per_point;
  r.seed = counts_per_point > 0 ? seed : 0;
  r.phi.reserve(grid_size);
  r.value.reserve(grid_size);

  std::mt19937_64 rng(seed);
  for (int k = 0; k < grid_size; ++k) {
    const double phi = 2.0 * kPi * k / grid_size;
    double p = fc.evaluate(phi, pump_phase);
    r.phi.push_back(phi);
    if (counts_per_point == 0) {
      r.value.push_back(p);
    } else {
      p = std::clamp(p, 0.0, 1.0);  // guard rounding at the range edge
      std::poisson_distribution<long long> draw(
          static_cast<double>(counts_per_point) * p);
      r.value.push_back(static_cast<double>(draw(rng)) /
                        static_cast<double>(counts_per_point));
    }
  }
  return r;
}

/** Sinusoid fit a + amplitude * sin(phi + phase); amplitude >= 0. */
struct FitResult {
  double offset = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;  // in (-pi, pi]
};

/**
 * Least-squares fit of value = a + b sin(phi) + c cos(phi), reported as
 * offset a, amplitude sqrt(b^2 + c^2) and phase atan2(c, b), so the
 * model reads offset + amplitude * sin(phi + phase).
 *
 * Throws GridTooSmallError for fewer than 8 points and
 * IllConditionedError when the normal equations are rank deficient
 * (degenerate grids).
 */
inline FitResult fit_sinusoid(const FringeRecord& r) {
  const std::size_t n = r.phi.size();
  if (n < 8 || r.value.size() != n)
    throw GridTooSmallError("fit_sinusoid: need at least 8 sampled points");

  Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::Vector3d row(1.0, std::sin(r.phi[k]), std::cos(r.phi[k]));
    g += row * row.transpose();
    rhs += row * r.value[k];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <=
      1e-12 * static_cast<double>(n))
    throw IllConditionedError("fit_sinusoid: degenerate phase grid");

  const Eigen::Vector3d sol = g.ldlt().solve(rhs);
  FitResult f;
  f.offset = sol(0);
  f.amplitude = std::hypot(sol(1), sol(2));
  f.phase = wrap_to_pi(std::atan2(sol(2), sol(1)));
  return f;
}

enum class PMinusMode { Fit, Exact };

/**
 * Peak-to-trough excursion of a fringe. Fit mode (default) returns twice
 * the fitted amplitude and is the noise-robust estimator; Exact mode
 * returns max - min of the recorded values and is only faithful on
 * noise-free traces.
 */
inline double p_minus(const FringeRecord& r, PMinusMode mode = PMinusMode::Fit) {
  if (mode == PMinusMode::Exact) {
    const auto [lo, hi] = std::minmax_element(r.value.begin(), r.value.end());
    return *hi - *lo;
  }
  return 2.0 * fit_sinusoid(r).amplitude;
}

/**
 * Fringe visibility amplitude / offset of the fitted sinusoid, equal to
 * (max - min) / (max + min) for an exact trace. Throws
 * ZeroDenominatorError when the fitted offset is not positive.
 */
inline double visibility(const FitResult& f, double eps_zero = 1e-9) {
  if (f.offset <= eps_zero)
    throw ZeroDenominatorError("visibility: fitted offset vanishes");
  return f.amplitude / f.offset;
}

inline double visibility(const FringeRecord& r, double eps_zero = 1e-9) {
  return visibility(fit_sinusoid(r), eps_zero);
}

/**
 * Phase of fringe a relative to fringe b, wrapped into (-pi, pi]. Both
 * fits must show real contrast; eps_vis is a visibility, so a fit is
 * flat when its amplitude is at or below eps_vis times its offset.
 * Comparing flat fringes throws FlatFringeError since their phases are
 * numerical noise.
 */
inline double phase_difference(const FitResult& a, const FitResult& b,
                               double eps_vis = kFlatVisibility) {
  if (a.amplitude <= eps_vis * a.offset || b.amplitude <= eps_vis * b.offset)
    throw FlatFringeError("phase_difference: flat fringe has no phase");
  return wrap_to_pi(a.phase - b.phase);
}

}  // namespace pitomo
