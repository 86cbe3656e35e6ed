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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "pitomo/fringes.hpp"

using namespace pitomo;
using Catch::Matchers::WithinAbs;

namespace {

FringeCoefficients make_fc(double offset, double amplitude, double phase) {
  FringeCoefficients fc;
  fc.offset = offset;
  fc.amplitude = amplitude;
  fc.phase_offset = phase;
  return fc;
}

}  // namespace

TEST_CASE("sampling lays down the canonical phase grid", "[fringes]") {
  const FringeCoefficients fc = make_fc(0.4, 0.2, 1.1);
  const FringeRecord r = sample_fringe(fc, 0.3, 64);
  REQUIRE(r.phi.size() == 64);
  REQUIRE(r.value.size() == 64);
  REQUIRE(r.counts_per_point == 0);
  for (int k = 0; k < 64; ++k) {
    REQUIRE_THAT(r.phi[k], WithinAbs(2.0 * kPi * k / 64.0, 1e-15));
    REQUIRE_THAT(r.value[k], WithinAbs(fc.evaluate(r.phi[k], 0.3), 1e-15));
  }
  CHECK_THROWS_AS(sample_fringe(fc, 0.0, 7), GridTooSmallError);
  CHECK_NOTHROW(sample_fringe(fc, 0.0, 8));
}

TEST_CASE("exact traces fit back to their coefficients", "[fringes]") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double offset = 0.1 + 0.4 * unit(rng);
    const double amplitude = offset * unit(rng);
    const double phase = angle(rng);
    const double pump = angle(rng);
    const int grid = 8 + static_cast<int>(120 * unit(rng));
    const FringeRecord r =
        sample_fringe(make_fc(offset, amplitude, phase), pump, grid);
    const FitResult f = fit_sinusoid(r);
    REQUIRE_THAT(f.offset, WithinAbs(offset, 1e-12));
    REQUIRE_THAT(f.amplitude, WithinAbs(amplitude, 1e-12));
    if (amplitude > 1e-6)
      REQUIRE_THAT(wrap_to_pi(f.phase - (phase - pump)), WithinAbs(0.0, 1e-9));
  }
}

TEST_CASE("fit survives irregular grids", "[fringes]") {
  FringeRecord r = sample_fringe(make_fc(0.5, 0.25, -2.0), 0.7, 48);
  // Drop every fifth point; the normal equations stay well conditioned.
  FringeRecord sparse;
  for (std::size_t k = 0; k < r.phi.size(); ++k) {
    if (k % 5 == 0) continue;
    sparse.phi.push_back(r.phi[k]);
    sparse.value.push_back(r.value[k]);
  }
  const FitResult f = fit_sinusoid(sparse);
  CHECK_THAT(f.offset, WithinAbs(0.5, 1e-12));
  CHECK_THAT(f.amplitude, WithinAbs(0.25, 1e-12));
  CHECK_THAT(wrap_to_pi(f.phase - (-2.0 - 0.7)), WithinAbs(0.0, 1e-12));
}

TEST_CASE("degenerate grids are rejected", "[fringes]") {
  FringeRecord r;
  for (int k = 0; k < 12; ++k) {
    r.phi.push_back(0.3);  // all points at one phase
    r.value.push_back(0.5);
  }
  CHECK_THROWS_AS(fit_sinusoid(r), IllConditionedError);

  FringeRecord mismatched = sample_fringe(make_fc(0.4, 0.1, 0.0), 0.0, 16);
  mismatched.value.pop_back();
  CHECK_THROWS_AS(fit_sinusoid(mismatched), GridTooSmallError);
}

TEST_CASE("peak-to-trough excursion in both modes", "[fringes]") {
  // phase - pump = 0 puts the extrema exactly on grid points of a
  // 64-point grid (phi = pi/2 and 3 pi/2), so Exact equals Fit here.
  const FringeRecord r = sample_fringe(make_fc(0.4, 0.15, 0.9), 0.9, 64);
  CHECK_THAT(p_minus(r, PMinusMode::Fit), WithinAbs(0.3, 1e-12));
  CHECK_THAT(p_minus(r, PMinusMode::Exact), WithinAbs(0.3, 1e-12));

  // Generic phase: Exact only underestimates, and only slightly.
  const FringeRecord g = sample_fringe(make_fc(0.4, 0.15, 0.37), -0.21, 64);
  const double exact = p_minus(g, PMinusMode::Exact);
  CHECK(exact <= 0.3 + 1e-12);
  CHECK(exact > 0.3 * (1.0 - 3e-3));
  CHECK_THAT(p_minus(g, PMinusMode::Fit), WithinAbs(0.3, 1e-12));
}

TEST_CASE("visibility matches the exact contrast ratio", "[fringes]") {
  const FringeRecord r = sample_fringe(make_fc(0.35, 0.21, 0.9), 0.9, 64);
  const double vmax = 0.35 + 0.21, vmin = 0.35 - 0.21;
  CHECK_THAT(visibility(r), WithinAbs((vmax - vmin) / (vmax + vmin), 1e-12));

  FitResult flat;
  flat.offset = 0.0;
  flat.amplitude = 0.0;
  CHECK_THROWS_AS(visibility(flat), ZeroDenominatorError);
}

TEST_CASE("relative phase of two fringes", "[fringes]") {
  const FringeRecord a = sample_fringe(make_fc(0.4, 0.2, 2.9), 0.4, 64);
  const FringeRecord b = sample_fringe(make_fc(0.3, 0.1, -1.8), 0.4, 64);
  const double d = phase_difference(fit_sinusoid(a), fit_sinusoid(b));
  // Pump phase cancels between fringes taken under the same pump.
  CHECK_THAT(wrap_to_pi(d - wrap_to_pi(2.9 - (-1.8))), WithinAbs(0.0, 1e-12));

  const FringeRecord flat = sample_fringe(make_fc(0.4, 0.0, 0.0), 0.0, 64);
  CHECK_THROWS_AS(phase_difference(fit_sinusoid(a), fit_sinusoid(flat)),
                  FlatFringeError);
}

TEST_CASE("poisson sampling is reproducible and unbiased", "[fringes]") {
  const FringeCoefficients fc = make_fc(0.4, 0.2, 1.3);
  const FringeRecord a = sample_fringe(fc, 0.0, 64, 100000, 7);
  const FringeRecord b = sample_fringe(fc, 0.0, 64, 100000, 7);
  REQUIRE(a.value == b.value);
  REQUIRE(a.counts_per_point == 100000);
  REQUIRE(a.seed == 7);

  const FringeRecord c = sample_fringe(fc, 0.0, 64, 100000, 8);
  REQUIRE(a.value != c.value);

  for (double v : a.value) {
    REQUIRE(v >= 0.0);
    // Values are integer counts over counts_per_point.
    const double scaled = v * 100000.0;
    REQUIRE_THAT(scaled - std::round(scaled), WithinAbs(0.0, 1e-6));
  }

  const FitResult f = fit_sinusoid(a);
  CHECK_THAT(f.offset, WithinAbs(0.4, 5e-3));
  CHECK_THAT(f.amplitude, WithinAbs(0.2, 5e-3));
  CHECK_THAT(wrap_to_pi(f.phase - 1.3), WithinAbs(0.0, 5e-2));
}
