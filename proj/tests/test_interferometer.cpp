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

#include "pitomo/interferometer.hpp"
#include "pitomo/simulate.hpp"

using namespace pitomo;
using Catch::Matchers::WithinAbs;

TEST_CASE("half-wave plate is unitary and self-inverse", "[interferometer]") {
  for (int k = 0; k <= 24; ++k) {
    const double gamma = -kPi + 2.0 * kPi * k / 24.0;
    const Eigen::Matrix2d h = hwp(gamma);
    CHECK((h * h.transpose() - Eigen::Matrix2d::Identity()).cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK((h * h - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
  const Eigen::Matrix2d h0 = hwp(0.0);
  CHECK_THAT(h0(0, 0), WithinAbs(1.0, 1e-15));
  CHECK_THAT(h0(1, 1), WithinAbs(-1.0, 1e-15));
  const Eigen::Matrix2d h45 = hwp(kPi / 4.0);
  CHECK_THAT(h45(0, 1), WithinAbs(1.0, 1e-15));
  CHECK_THAT(h45(0, 0), WithinAbs(0.0, 1e-15));
}

TEST_CASE("cross coherence against the reference emission", "[interferometer]") {
  const StateParams p = demo_state();
  const CrossCoherence d = cross_coherence(Configuration::D, p);
  CHECK(d.j[index_of(Emission::VV)] == 1.0);  // reference with itself
  CHECK(d.phi[index_of(Emission::VV)] == 0.0);
  CHECK_THAT(d.j[index_of(Emission::HH)],
             WithinAbs(std::sqrt(3.0) / 2.0, 1e-15));
  CHECK_THAT(d.phi[index_of(Emission::HH)], WithinAbs(-3.0 * kPi / 4.0, 1e-15));
  CHECK(d.j[index_of(Emission::HV)] == 0.0);
  CHECK(d.j[index_of(Emission::VH)] == 0.0);

  const CrossCoherence a = cross_coherence(Configuration::A, p);
  CHECK(a.j[index_of(Emission::HH)] == 1.0);
  CHECK_THAT(a.phi[index_of(Emission::VV)], WithinAbs(+3.0 * kPi / 4.0, 1e-15));
}

TEST_CASE("demo-state fringe coefficients in configurations A and D",
          "[interferometer]") {
  const StateParams p = demo_state();
  const ImperfectionModel ideal;

  struct Expect {
    Configuration c;
    int probe;
    double offset, amplitude, phase;
  };
  // Ideal amplitudes are sqrt(I)*J/2; phases are the pair phases seen
  // from the configuration's reference emission.
  const double j = std::sqrt(3.0) / 2.0;
  const Expect cases[4] = {
      {Configuration::A, probe_for(Emission::HH), 0.35,
       0.5 * std::sqrt(0.4), 0.0},
      {Configuration::A, probe_for(Emission::VV), 0.40,
       0.5 * std::sqrt(0.6) * j, +3.0 * kPi / 4.0},
      {Configuration::D, probe_for(Emission::HH), 0.35,
       0.5 * std::sqrt(0.4) * j, -3.0 * kPi / 4.0},
      {Configuration::D, probe_for(Emission::VV), 0.40,
       0.5 * std::sqrt(0.6), 0.0},
  };

  for (const Expect& e : cases) {
    const ProbeSetting& ps = kCanonicalProbes[e.probe];
    Settings s;
    s.theta = ps.theta;
    s.delta = ps.delta;
    s.pol = ps.pol;
    const FringeCoefficients fc = fringe_coefficients(p, e.c, s, ideal);
    CHECK_THAT(fc.offset, WithinAbs(e.offset, 1e-12));
    CHECK_THAT(fc.amplitude, WithinAbs(e.amplitude, 1e-12));
    CHECK_THAT(wrap_to_pi(fc.phase_offset - e.phase), WithinAbs(0.0, 1e-12));
  }

  // The four-decimal values these amplitudes round to.
  CHECK_THAT(0.5 * std::sqrt(0.4), WithinAbs(0.3162, 1e-4));
  CHECK_THAT(0.5 * std::sqrt(0.6) * j, WithinAbs(0.3354, 1e-4));
  CHECK_THAT(0.5 * std::sqrt(0.4) * j, WithinAbs(0.2739, 1e-4));
  CHECK_THAT(0.5 * std::sqrt(0.6), WithinAbs(0.3873, 1e-4));
}

TEST_CASE("coefficients match the probability at every swept phase",
          "[interferometer]") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const StateParams p = random_state(trial);
    ImperfectionModel imp;
    imp.t_h = 0.2 + 0.8 * unit(rng);
    imp.b1_sq = 0.1 + 0.8 * unit(rng);
    const Configuration c = kConfigurations[trial % 4];
    const ProbeSetting& ps = kCanonicalProbes[trial % 4 == 0 ? 3 : trial % 4];
    Settings s;
    s.theta = ps.theta;
    s.delta = ps.delta;
    s.pol = ps.pol;
    s.pump_phase = angle(rng);
    const FringeCoefficients fc = fringe_coefficients(p, c, s, imp);
    REQUIRE(fc.offset - fc.amplitude >= -1e-12);
    REQUIRE(fc.offset + fc.amplitude <= 1.0 + 1e-12);
    for (int k = 0; k < 16; ++k) {
      s.phi = angle(rng);
      REQUIRE_THAT(fc.evaluate(s.phi, s.pump_phase) -
                       detection_probability(p, c, s, imp),
                   WithinAbs(0.0, 1e-14));
    }
  }
}

TEST_CASE("two live sine terms refuse single-sinusoid coefficients",
          "[interferometer]") {
  // Away from the canonical plate angles both cross terms survive for a
  // state with coherence in both H-emissions.
  const StateParams p = to_params(from_params(random_state(7)));
  Settings s;
  s.theta = kPi / 8.0;
  s.delta = 0.0;
  s.pol = Polarization::H;
  CHECK_THROWS_AS(fringe_coefficients(p, Configuration::A, s),
                  SumOfSinusoidsError);
  // The full probability still evaluates fine there.
  s.phi = 0.3;
  const double v = detection_probability(p, Configuration::A, s);
  CHECK(v >= 0.0);
  CHECK(v <= 1.0);
}

TEST_CASE("detection probability stays within [0,1] everywhere",
          "[interferometer]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const StateParams p = random_state(1000 + trial);
    ImperfectionModel imp;
    imp.t_h = unit(rng);
    imp.b1_sq = unit(rng);
    Settings s;
    s.theta = angle(rng);
    s.delta = angle(rng);
    s.pol = trial % 2 ? Polarization::H : Polarization::V;
    s.phi = angle(rng);
    s.pump_phase = angle(rng);
    const Configuration c = kConfigurations[trial % 4];
    const double v = detection_probability(p, c, s, imp);
    REQUIRE(v >= -1e-12);
    REQUIRE(v <= 1.0 + 1e-12);
  }
}

TEST_CASE("probability depends only on phi minus pump phase",
          "[interferometer]") {
  const StateParams p = demo_state();
  Settings s;
  s.theta = 0.0;
  s.delta = 0.0;
  s.pol = Polarization::H;
  for (int k = 0; k < 24; ++k) {
    s.phi = 0.37 + k * 0.11;
    s.pump_phase = -1.9 + k * 0.23;
    Settings shifted = s;
    shifted.phi += 0.77;
    shifted.pump_phase += 0.77;
    REQUIRE_THAT(detection_probability(p, Configuration::A, s) -
                     detection_probability(p, Configuration::A, shifted),
                 WithinAbs(0.0, 1e-14));
  }
}

TEST_CASE("level probes are independent of theta, configuration and phi",
          "[interferometer]") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const StateParams p = random_state(seed);
    ImperfectionModel imp;
    imp.t_h = 0.6;
    imp.b1_sq = 0.35;
    const double expect_h =
        0.5 * imp.b1_sq *
        (p.intensity(Emission::HH) + p.intensity(Emission::VH));
    const double expect_v =
        0.5 * imp.b1_sq *
        (p.intensity(Emission::HV) + p.intensity(Emission::VV));
    for (Configuration c : kConfigurations)
      for (int t = 0; t < 7; ++t)
        for (int f = 0; f < 3; ++f) {
          Settings s;
          s.theta = -kPi / 2.0 + t * kPi / 6.0;
          s.phi = f * 2.1;
          s.delta = kPi / 4.0;
          s.pol = Polarization::H;
          REQUIRE_THAT(detection_probability(p, c, s, imp),
                       WithinAbs(expect_h, 1e-12));
          s.delta = 0.0;
          s.pol = Polarization::V;
          REQUIRE_THAT(detection_probability(p, c, s, imp),
                       WithinAbs(expect_v, 1e-12));
        }
  }
}

TEST_CASE("reference configuration maximizes selector visibility",
          "[interferometer]") {
  // The selector fringe of configuration X carries J(ref(X), ref(c)) in
  // configuration c, which is 1 exactly when c = X.
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const StateParams p = random_state(seed + 50);
    for (Configuration target : kConfigurations) {
      const int sel = selector_for(target);
      const ProbeSetting& ps = kCanonicalProbes[sel];
      Settings s;
      s.theta = ps.theta;
      s.delta = ps.delta;
      s.pol = ps.pol;
      double own = 0.0;
      std::array<double, 4> vis{};
      for (Configuration c : kConfigurations) {
        const FringeCoefficients fc = fringe_coefficients(p, c, s);
        const double v = fc.offset > 1e-12 ? fc.amplitude / fc.offset : 0.0;
        vis[index_of(c)] = v;
        if (c == target) own = v;
      }
      for (double v : vis) REQUIRE(own >= v - 1e-12);
    }
  }
}
