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

#include "pitomo/simulate.hpp"
#include "pitomo/states.hpp"

using namespace pitomo;
using Catch::Matchers::WithinAbs;

namespace {

// Reference two-qubit state used throughout: diag (0.4, 0, 0, 0.6) with
// corner entries -0.3 -+ 0.3i. J(HH,VV) = 0.3*sqrt(2)/sqrt(0.24).
const double kDemoJ = std::sqrt(3.0) / 2.0;
const double kDemoPhase = -3.0 * kPi / 4.0;

}  // namespace

TEST_CASE("from_params reproduces the demo matrix entries", "[states]") {
  const DensityMatrix dm = from_params(demo_state());
  CHECK_THAT(dm.entry(Emission::HH, Emission::HH).real(), WithinAbs(0.4, 1e-15));
  CHECK_THAT(dm.entry(Emission::VV, Emission::VV).real(), WithinAbs(0.6, 1e-15));
  CHECK_THAT(dm.entry(Emission::HV, Emission::HV).real(), WithinAbs(0.0, 1e-15));
  CHECK_THAT(dm.entry(Emission::VH, Emission::VH).real(), WithinAbs(0.0, 1e-15));
  CHECK_THAT(dm.entry(Emission::HH, Emission::VV).real(), WithinAbs(-0.3, 1e-15));
  CHECK_THAT(dm.entry(Emission::HH, Emission::VV).imag(), WithinAbs(-0.3, 1e-15));
  CHECK_THAT(dm.entry(Emission::VV, Emission::HH).real(), WithinAbs(-0.3, 1e-15));
  CHECK_THAT(dm.entry(Emission::VV, Emission::HH).imag(), WithinAbs(+0.3, 1e-15));
  // Modulus of the corner equals the product of the two fringe
  // excursions seen in either configuration, 0.3*sqrt(2).
  CHECK_THAT(std::abs(dm.entry(Emission::HH, Emission::VV)),
             WithinAbs(0.3 * std::sqrt(2.0), 1e-15));
}

TEST_CASE("from_params rejects out-of-domain parameters", "[states]") {
  StateParams p = demo_state();
  p.set_intensity(Emission::HH, 1.2);
  CHECK_THROWS_AS(from_params(p), ParameterDomainError);

  p = demo_state();
  p.set_intensity(Emission::HH, 0.5);  // sum now 1.1
  CHECK_THROWS_AS(from_params(p), ParameterDomainError);

  p = demo_state();
  p.set_pair(Emission::HH, Emission::VV, 1.5, 0.0);
  CHECK_THROWS_AS(from_params(p), ParameterDomainError);

  CHECK_THROWS_AS(demo_state().set_pair(Emission::HH, Emission::HH, 0.5, 0.1),
                  ParameterDomainError);
}

TEST_CASE("parameter round trip is exact for random states", "[states]") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const StateParams p = random_state(seed);
    const StateParams q = to_params(from_params(p));
    for (Emission e : kEmissions)
      REQUIRE_THAT(q.intensity(e), WithinAbs(p.intensity(e), 1e-12));
    for (const auto& [a, b] : kEmissionPairs) {
      REQUIRE_THAT(q.indistinguishability(a, b),
                   WithinAbs(p.indistinguishability(a, b), 1e-12));
      if (p.indistinguishability(a, b) > 1e-9)
        REQUIRE_THAT(wrap_to_pi(q.phase(a, b) - p.phase(a, b)),
                     WithinAbs(0.0, 1e-12));
    }
  }
}

TEST_CASE("to_params zeroes pairs touching an empty diagonal", "[states]") {
  const StateParams p = to_params(from_params(demo_state()));
  CHECK(p.indistinguishability(Emission::HH, Emission::HV) == 0.0);
  CHECK(p.phase(Emission::HH, Emission::HV) == 0.0);
  CHECK(!p.has_coherence(Emission::HV, Emission::VH));
  CHECK_THAT(p.indistinguishability(Emission::HH, Emission::VV),
             WithinAbs(kDemoJ, 1e-14));
  CHECK_THAT(p.phase(Emission::HH, Emission::VV), WithinAbs(kDemoPhase, 1e-14));
  CHECK_THAT(p.phase(Emission::VV, Emission::HH), WithinAbs(-kDemoPhase, 1e-14));
}

TEST_CASE("to_params rejects an invalid matrix", "[states]") {
  DensityMatrix dm = from_params(demo_state());
  dm.m(0, 0) = 0.7;  // trace now 1.3
  CHECK_THROWS_AS(to_params(dm), InvalidStateError);
}

TEST_CASE("validate reports defects without throwing", "[states]") {
  DensityMatrix dm = from_params(demo_state());
  StateDiagnostics d = validate(dm);
  CHECK(d.valid);
  CHECK_THAT(d.trace_defect, WithinAbs(0.0, 1e-14));
  CHECK_THAT(d.hermiticity_defect, WithinAbs(0.0, 1e-14));
  // Eigenvalues of the demo state are 0.5 +- sqrt(0.19) and two zeros.
  CHECK(d.min_eigenvalue >= -1e-12);
  CHECK(d.min_eigenvalue <= 1e-12);

  dm.m(0, 1) = complexd(0.1, 0.2);  // break Hermiticity only
  d = validate(dm);
  CHECK(!d.valid);
  CHECK(d.hermiticity_defect > 0.09);
}

TEST_CASE("random_state covers rank-deficient through full-rank", "[states]") {
  double lowest = 1.0, highest = -1.0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const StateParams p = random_state(seed);
    const StateDiagnostics d = validate(from_params(p));
    REQUIRE(d.valid);
    lowest = std::min(lowest, d.min_eigenvalue);
    highest = std::max(highest, d.min_eigenvalue);
  }
  CHECK(lowest < 1e-3);   // rank-deficient / near-pure members
  CHECK(highest > 0.1);   // comfortably full-rank members

  // Determinism in the seed.
  const StateParams a = random_state(123), b = random_state(123);
  for (Emission e : kEmissions) CHECK(a.intensity(e) == b.intensity(e));
}

TEST_CASE("fidelity: identity, symmetry, frozen cross value", "[states]") {
  const DensityMatrix demo = from_params(demo_state());
  const DensityMatrix mixed = from_params(mixed_max_state());

  CHECK_THAT(fidelity(demo, demo), WithinAbs(1.0, 1e-12));
  CHECK_THAT(fidelity(mixed, mixed), WithinAbs(1.0, 1e-12));

  // Against the maximally mixed state, F = (sum sqrt(lambda/4))^2 =
  // (1 + 2 sqrt(0.06)) / 4 from the demo eigenvalues 0.5 +- sqrt(0.19).
  const double expected = (1.0 + 2.0 * std::sqrt(0.06)) / 4.0;
  CHECK_THAT(fidelity(demo, mixed), WithinAbs(expected, 1e-12));
  CHECK_THAT(fidelity(mixed, demo), WithinAbs(expected, 1e-12));

  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const DensityMatrix a = from_params(random_state(seed));
    const DensityMatrix b = from_params(random_state(seed + 1000));
    const double fab = fidelity(a, b), fba = fidelity(b, a);
    REQUIRE_THAT(fab - fba, WithinAbs(0.0, 1e-11));
    REQUIRE(fab >= 0.0);
    REQUIRE(fab <= 1.0);
    REQUIRE_THAT(fidelity(a, a), WithinAbs(1.0, 1e-11));
  }
}

TEST_CASE("trace distance: zero on equals, frozen cross value", "[states]") {
  const DensityMatrix demo = from_params(demo_state());
  const DensityMatrix mixed = from_params(mixed_max_state());
  CHECK_THAT(trace_distance(demo, demo), WithinAbs(0.0, 1e-13));
  // Eigenvalues of demo - mixed are {0.25 +- sqrt(0.19), -0.25, -0.25}.
  CHECK_THAT(trace_distance(demo, mixed),
             WithinAbs(0.25 + std::sqrt(0.19), 1e-12));
  CHECK_THAT(trace_distance(mixed, demo),
             WithinAbs(0.25 + std::sqrt(0.19), 1e-12));
}

TEST_CASE("generalized_bell family and werner preset", "[states]") {
  const StateParams g = generalized_bell(0.3, 0.5, 1.0);
  CHECK_THAT(g.intensity(Emission::VV), WithinAbs(0.7, 1e-15));
  CHECK(g.intensity(Emission::HV) == 0.0);
  CHECK_THAT(g.phase(Emission::HH, Emission::VV), WithinAbs(1.0, 1e-15));
  CHECK(validate(from_params(g)).valid);
  CHECK_THROWS_AS(generalized_bell(1.2, 0.5, 0.0), ParameterDomainError);
  CHECK_THROWS_AS(generalized_bell(0.5, -0.1, 0.0), ParameterDomainError);

  // Werner: matrix form p*Bell + (1-p)*I/4, checked entrywise.
  const double w = 0.7;
  const DensityMatrix wm = from_params(werner_state(w));
  const DensityMatrix bell = from_params(bell_state());
  const DensityMatrix mixed = from_params(mixed_max_state());
  const Eigen::Matrix4cd expect = w * bell.m + (1.0 - w) * mixed.m;
  CHECK((wm.m - expect).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(validate(wm).valid);
}

TEST_CASE("psd_project clamps and renormalizes", "[states]") {
  // Valid input is (numerically) a fixed point.
  const DensityMatrix demo = from_params(demo_state());
  const DensityMatrix same = psd_project(demo);
  CHECK((same.m - demo.m).cwiseAbs().maxCoeff() < 1e-12);

  // Push an eigenvalue negative, project, and check validity returns.
  DensityMatrix bad = demo;
  bad.m(1, 1) = -0.05;
  bad.m(0, 0) = 0.45;  // keep the trace at 1
  CHECK(!validate(bad).valid);
  const DensityMatrix fixed = psd_project(bad);
  const StateDiagnostics d = validate(fixed);
  CHECK(d.valid);
  CHECK_THAT(d.trace_defect, WithinAbs(0.0, 1e-12));
}
