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
 * @file interferometer.hpp
 * @brief Closed-form single-photon detection probabilities for the
 *        path-identity interferometer.
 *
 * Two sources emit photon pairs into aligned paths; only one photon of
 * each pair is ever detected. Scanning the interferometer phase produces
 * sinusoidal fringes whose offsets, amplitudes and phases carry the full
 * two-qubit state of the undetected pair. The delay configuration (A-D)
 * selects which emission acts as the phase reference, a half-wave plate
 * angle theta routes H/V cross terms, and a second plate angle delta
 * balances the two detected polarizations.
 */

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "pitomo/common.hpp"
#include "pitomo/states.hpp"

namespace pitomo {

/** Half-wave plate Jones matrix at plate angle gamma (unitary, self-inverse). */
inline Eigen::Matrix2d hwp(double gamma) {
  const double c = std::cos(2.0 * gamma), s = std::sin(2.0 * gamma);
  Eigen::Matrix2d m;
  m << c, s, s, -c;
  return m;
}

/**
 * Source and beam-splitter imperfections.
 *
 * t_h is the amplitude transmission of the H component through the plate
 * and splitter assembly between the sources; b1_sq the probability that
 * the pair originates from the first source, so b2_sq = 1 - b1_sq.
 * arg_b is the phase of b1 relative to b2; the closed forms absorb it
 * into the swept phase, the exact model keeps it explicit.
 */
struct ImperfectionModel {
  double t_h = 1.0;
  double b1_sq = 0.5;
  double arg_b = 0.0;

  double b2_sq() const { return 1.0 - b1_sq; }
  double b1b2() const { return std::sqrt(b1_sq * b2_sq()); }
  /** Reflected H amplitude; t_h^2 + r_h^2 = 1. */
  double r_h() const { return std::sqrt(std::max(0.0, 1.0 - t_h * t_h)); }

  void check() const {
    if (!(t_h >= 0.0 && t_h <= 1.0))
      throw ParameterDomainError("ImperfectionModel: t_h outside [0,1]");
    if (!(b1_sq >= 0.0 && b1_sq <= 1.0))
      throw ParameterDomainError("ImperfectionModel: b1_sq outside [0,1]");
  }
};

/**
 * One detection setting. phi is the combined interferometer phase that is
 * swept to trace a fringe; pump_phase is the per-configuration pump phase
 * offset picked up when the delay line is moved. They enter only through
 * phi - pump_phase but are kept separate because the pump phase is fixed
 * per configuration while phi is scanned.
 */
struct Settings {
  double theta = 0.0;
  double delta = 0.0;
  Polarization pol = Polarization::H;
  double phi = 0.0;
  double pump_phase = 0.0;
};

/**
 * Coherence of each emission with the reference emission of one delay
 * configuration: j[x] = J(x, ref) and phi[x] = phi(x, ref). The pump
 * phase is not included here; it is carried by Settings.
 */
struct CrossCoherence {
  std::array<double, 4> j{};
  std::array<double, 4> phi{};
};

/** Cross coherences seen in configuration c for state p. */
inline CrossCoherence cross_coherence(Configuration c, const StateParams& p) {
  const Emission ref = reference_emission(c);
  CrossCoherence cc;
  for (Emission e : kEmissions) {
    cc.j[index_of(e)] = p.indistinguishability(e, ref);
    cc.phi[index_of(e)] = p.phase(e, ref);
  }
  return cc;
}

namespace detail {

struct FringeTerms {
  double offset;      // phase-independent level
  double a1, a2;      // signed coefficients of the two sine terms
  double phi1, phi2;  // their phase offsets (cross coherences)
};

/** Shared decomposition behind detection_probability / fringe_coefficients. */
inline FringeTerms fringe_terms(const StateParams& p, Configuration c,
                                const Settings& s,
                                const ImperfectionModel& imp) {
  imp.check();
  const CrossCoherence cc = cross_coherence(c, p);
  const double c2t = std::cos(2.0 * s.theta), s2t = std::sin(2.0 * s.theta);
  const double c2d = std::cos(2.0 * s.delta), s2d = std::sin(2.0 * s.delta);
  const double k = imp.b1b2() * imp.t_h;

  // H collects (HH, VH) against cos(2 delta); V collects (HV, VV)
  // against sin(2 delta).
  Emission x1, x2;
  double w;
  if (s.pol == Polarization::H) {
    x1 = Emission::HH;
    x2 = Emission::VH;
    w = c2d;
  } else {
    x1 = Emission::HV;
    x2 = Emission::VV;
    w = s2d;
  }

  FringeTerms t;
  t.offset = 0.5 * imp.b1_sq *
                 (p.intensity(x1) + p.intensity(x2)) +
             0.5 * imp.b2_sq() * w * w;
  t.a1 = k * w * std::sqrt(p.intensity(x1)) * cc.j[index_of(x1)] * c2t;
  t.a2 = k * w * std::sqrt(p.intensity(x2)) * cc.j[index_of(x2)] * s2t;
  t.phi1 = cc.phi[index_of(x1)];
  t.phi2 = cc.phi[index_of(x2)];
  return t;
}

}  // namespace detail

/**
 * Detection probability at one setting in configuration c. Valid for any
 * theta and delta; the result always lies in [0,1] for valid inputs.
 */
inline double detection_probability(const StateParams& p, Configuration c,
                                    const Settings& s,
                                    const ImperfectionModel& imp = {}) {
  const detail::FringeTerms t = detail::fringe_terms(p, c, s, imp);
  const double x = s.phi - s.pump_phase;
  return t.offset + t.a1 * std::sin(x + t.phi1) + t.a2 * std::sin(x + t.phi2);
}

/**
 * Sinusoid traced by one fringe: value(phi) =
 * offset + amplitude * sin(phi - pump_phase + phase_offset),
 * with amplitude >= 0 and phase_offset in (-pi, pi].
 */
struct FringeCoefficients {
  double offset = 0.0;
  double amplitude = 0.0;
  double phase_offset = 0.0;

  double evaluate(double phi, double pump_phase) const {
    return offset + amplitude * std::sin(phi - pump_phase + phase_offset);
  }
};

/**
 * Closed-form coefficients of the fringe swept at setting s (s.phi is the
 * sweep variable and is ignored). At the canonical plate angles exactly
 * one of the two sine terms survives; if both terms exceed eps_zero the
 * trace is a sum of two sinusoids and SumOfSinusoidsError is thrown
 * rather than silently combining them. A fringe with no surviving term
 * is returned flat with phase_offset = 0.
 */
inline FringeCoefficients fringe_coefficients(const StateParams& p,
                                              Configuration c,
                                              const Settings& s,
                                              const ImperfectionModel& imp = {},
                                              double eps_zero = 1e-9) {
  const detail::FringeTerms t = detail::fringe_terms(p, c, s, imp);
  const bool live1 = std::abs(t.a1) > eps_zero;
  const bool live2 = std::abs(t.a2) > eps_zero;
  if (live1 && live2)
    throw SumOfSinusoidsError(
        "fringe_coefficients: two sine terms survive at this setting");

  FringeCoefficients fc;
  fc.offset = t.offset;
  if (!live1 && !live2) return fc;
  const double a = live1 ? t.a1 : t.a2;
  const double ph = live1 ? t.phi1 : t.phi2;
  fc.amplitude = std::abs(a);
  fc.phase_offset = wrap_to_pi(a < 0.0 ? ph + kPi : ph);
  return fc;
}

//=============================================================================
// Canonical probe settings
//=============================================================================

/** Plate angles and detected polarization of one canonical probe. */
struct ProbeSetting {
  double theta;
  double delta;
  Polarization pol;
};

/**
 * The four canonical probes. Probe k isolates the fringe carrying
 * emission kEmissions[k] in every configuration:
 *   HH -> (0, 0, H),          HV -> (0, pi/4, V),
 *   VH -> (pi/4, 0, H),       VV -> (pi/4, pi/4, V).
 */
inline constexpr std::array<ProbeSetting, 4> kCanonicalProbes{{
    {0.0, 0.0, Polarization::H},
    {0.0, kPi / 4.0, Polarization::V},
    {kPi / 4.0, 0.0, Polarization::H},
    {kPi / 4.0, kPi / 4.0, Polarization::V},
}};

/** Index into kCanonicalProbes of the probe that carries emission e. */
inline constexpr int probe_for(Emission e) { return index_of(e); }

/**
 * Identification selector of configuration c: the canonical probe whose
 * fringe is the reference fringe (unit coherence, zero phase offset)
 * when the candidate really is configuration c.
 */
inline constexpr int selector_for(Configuration c) {
  return probe_for(reference_emission(c));
}

/**
 * Settings of the two phase-independent level measurements. pol H with
 * delta = pi/4 gives the HH+VH intensity level, pol V with delta = 0 the
 * HV+VV level; both are independent of theta, configuration and phi.
 * theta is arbitrary and chosen away from the canonical values so that
 * the independence is exercised rather than assumed.
 */
inline constexpr ProbeSetting kLevelProbeH{kPi / 8.0, kPi / 4.0,
                                           Polarization::H};
inline constexpr ProbeSetting kLevelProbeV{kPi / 8.0, 0.0, Polarization::V};

}  // namespace pitomo
