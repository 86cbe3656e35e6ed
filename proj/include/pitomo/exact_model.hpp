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
 * @file exact_model.hpp
 * @brief Exact mode-algebra forward model of the interferometer.
 *
 * This is the long way around: represent the emitted single-photon
 * sector as a density operator over explicit path/polarization modes,
 * apply the path-identity substitution as an isometry, trace out the
 * undetected photon and evaluate the detected-mode expectation value.
 * No fringe-level formula is reused, which makes this module an
 * independent cross-check of the closed forms in interferometer.hpp.
 * The three phases arg(b1/b2), phi_u and phi_d stay separate here; the
 * closed forms see only their combination.
 */

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "pitomo/common.hpp"
#include "pitomo/interferometer.hpp"
#include "pitomo/states.hpp"

namespace pitomo {

/** Modes of the photon that stays undetected. H0 absorbs splitter loss. */
enum class UMode : int { Hu1 = 0, Vu1 = 1, Hu2 = 2, H0 = 3 };

/** Modes of the photon that reaches the detection station. */
enum class DMode : int { Hd1 = 0, Vd1 = 1, Hd2 = 2 };

struct JointKet {
  UMode u;
  DMode d;
};

/** Single-photon-pair sector as a density operator over explicit kets. */
struct JointState {
  Eigen::MatrixXcd rho;
  std::vector<JointKet> basis;
};

/** Detected photon after the partial trace, over (Hd1, Vd1, Hd2). */
struct DetectedState {
  Eigen::Matrix3cd rho = Eigen::Matrix3cd::Zero();
};

/**
 * Joint emission state in configuration c before path identity. Five
 * kets: the four first-source emissions (mu_u1, nu_d1) and the
 * second-source emission (Hu2, Hd2). The first block is b1_sq times the
 * two-qubit matrix of p; the cross column couples each emission to the
 * second source through its coherence with the reference emission of c,
 * reduced by the pump phase of this configuration and rotated by
 * arg(b1/b2). Trace is 1 by construction.
 */
inline JointState joint_state(const StateParams& p, Configuration c,
                              const ImperfectionModel& imp = {},
                              double pump_phase = 0.0) {
  imp.check();
  const DensityMatrix dm = from_params(p);
  const CrossCoherence cc = cross_coherence(c, p);

  JointState js;
  js.basis = {{UMode::Hu1, DMode::Hd1}, {UMode::Hu1, DMode::Vd1},
              {UMode::Vu1, DMode::Hd1}, {UMode::Vu1, DMode::Vd1},
              {UMode::Hu2, DMode::Hd2}};
  js.rho = Eigen::MatrixXcd::Zero(5, 5);
  js.rho.topLeftCorner<4, 4>() = imp.b1_sq * dm.m;
  js.rho(4, 4) = imp.b2_sq();
  for (int i = 0; i < 4; ++i) {
    const double mag =
        imp.b1b2() * std::sqrt(p.intensity(kEmissions[i])) * cc.j[i];
    js.rho(i, 4) = std::polar(mag, imp.arg_b + cc.phi[i] - pump_phase);
    js.rho(4, i) = std::conj(js.rho(i, 4));
  }
  return js;
}

/**
 * Path identity: the second-source undetected mode is routed through the
 * half-wave plate at theta and the lossy splitter onto the first-source
 * modes,
 *
 *   Hu2 -> exp(-i phi_u) (t_h (cos2theta Hu1 + sin2theta Vu1) + r_h H0),
 *
 * realized as an isometry on kets, so the trace is preserved exactly.
 * The output basis gains (Hu1, Hd2), (Vu1, Hd2) and (H0, Hd2).
 */
inline JointState apply_path_identity(const JointState& js, double theta,
                                      const ImperfectionModel& imp = {},
                                      double phi_u = 0.0) {
  imp.check();
  JointState out;
  out.basis = {{UMode::Hu1, DMode::Hd1}, {UMode::Hu1, DMode::Vd1},
               {UMode::Vu1, DMode::Hd1}, {UMode::Vu1, DMode::Vd1},
               {UMode::Hu1, DMode::Hd2}, {UMode::Vu1, DMode::Hd2},
               {UMode::H0, DMode::Hd2}};

  const Eigen::Matrix2d h = hwp(theta);  // column 0 routes the H input
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(7, 5);
  for (int i = 0; i < 4; ++i) s(i, i) = 1.0;
  const complexd u_phase = std::polar(1.0, -phi_u);
  s(4, 4) = u_phase * imp.t_h * h(0, 0);
  s(5, 4) = u_phase * imp.t_h * h(1, 0);
  s(6, 4) = u_phase * imp.r_h();

  out.rho = s * js.rho * s.adjoint();
  return out;
}

/** Partial trace over the undetected modes. */
inline DetectedState reduce_detected(const JointState& js) {
  DetectedState d;
  const std::size_t n = js.basis.size();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      if (js.basis[r].u != js.basis[c].u) continue;
      d.rho(static_cast<int>(js.basis[r].d), static_cast<int>(js.basis[c].d)) +=
          js.rho(r, c);
    }
  return d;
}

/**
 * Probability of a click in the chosen output polarization, evaluated as
 * the trace formula Tr{rho E(-) E(+)}. The positive-frequency field at
 * the detector superposes the first-source mode of that polarization
 * with the delta-routed second-source mode picked up after a reflection
 * (factor i) and the detection-arm phase phi_d:
 *
 *   H: E(+) = (a_Hd1 + i e^{i phi_d} cos2delta a_Hd2) / sqrt(2)
 *   V: E(+) = (a_Vd1 + i e^{i phi_d} sin2delta a_Hd2) / sqrt(2)
 *
 * For E(+) = sum_k v_k a_k the trace contracts on a one-photon state to
 * sum_jk v_j rho_jk conj(v_k), which is w.adjoint() rho w with
 * w = conj(v): the mode coefficients enter conjugated.
 */
inline double exact_probability(const DetectedState& d, Polarization pol,
                                double delta, double phi_d = 0.0) {
  const complexd route = complexd(0.0, 1.0) * std::polar(1.0, phi_d);
  Eigen::Vector3cd v = Eigen::Vector3cd::Zero();
  if (pol == Polarization::H) {
    v(0) = 1.0;
    v(2) = route * std::cos(2.0 * delta);
  } else {
    v(1) = 1.0;
    v(2) = route * std::sin(2.0 * delta);
  }
  v /= std::sqrt(2.0);
  const Eigen::Vector3cd w = v.conjugate();
  return (w.adjoint() * d.rho * w).value().real();
}

/**
 * Full exact pipeline at one setting. The closed-form equivalent is
 * detection_probability with s.phi = imp.arg_b + phi_u - phi_d.
 */
inline double exact_detection_probability(const StateParams& p,
                                          Configuration c, double theta,
                                          double delta, Polarization pol,
                                          double pump_phase,
                                          const ImperfectionModel& imp = {},
                                          double phi_u = 0.0,
                                          double phi_d = 0.0) {
  const JointState js = joint_state(p, c, imp, pump_phase);
  const JointState after = apply_path_identity(js, theta, imp, phi_u);
  return exact_probability(reduce_detected(after), pol, delta, phi_d);
}

}  // namespace pitomo
