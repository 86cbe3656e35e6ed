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
 * @file states.hpp
 * @brief Two-qubit polarization states in intensity / indistinguishability /
 *        phase form and as 4x4 density matrices.
 *
 * The parameter form describes a two-qubit state by the emission
 * intensities I(e), pairwise degrees of indistinguishability J(a,b) and
 * pairwise phases phi(a,b). The induced matrix entry at (row a, col b) is
 *
 *     sqrt(I(a) I(b)) * J(a,b) * exp(i phi(a,b)),
 *
 * so J is symmetric with unit diagonal and phi is antisymmetric with zero
 * diagonal. Both directions of the correspondence live here, together
 * with validity diagnostics, reference state families, a seeded random
 * state generator and the comparison metrics used by the test harness.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "pitomo/common.hpp"

namespace pitomo {

using complexd = std::complex<double>;

/** 4x4 density matrix in the fixed emission basis (HH, HV, VH, VV). */
struct DensityMatrix {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();

  complexd entry(Emission row, Emission col) const {
    return m(index_of(row), index_of(col));
  }
  void set_entry(Emission row, Emission col, complexd v) {
    m(index_of(row), index_of(col)) = v;
  }
};

/**
 * Parameter form of a two-qubit state.
 *
 * Storage keeps both orientations of every pair so that lookups are
 * symmetric by construction: set_pair writes J to (a,b) and (b,a) and
 * phi to (a,b) and -phi to (b,a). Diagonal entries are pinned to
 * J = 1, phi = 0 and cannot be modified.
 */
class StateParams {
 public:
  StateParams() {
    intensity_ = {1.0, 0.0, 0.0, 0.0};
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        j_[r][c] = (r == c) ? 1.0 : 0.0;
        phi_[r][c] = 0.0;
      }
  }

  double intensity(Emission e) const { return intensity_[index_of(e)]; }
  void set_intensity(Emission e, double v) { intensity_[index_of(e)] = v; }

  /** Degree of indistinguishability J(a,b); symmetric, J(a,a) = 1. */
  double indistinguishability(Emission a, Emission b) const {
    return j_[index_of(a)][index_of(b)];
  }

  /** Pair phase phi(a,b) = arg of matrix entry (row a, col b); phi(a,a) = 0. */
  double phase(Emission a, Emission b) const {
    return phi_[index_of(a)][index_of(b)];
  }

  /** Whether the pair carries any coherence worth interpreting. */
  bool has_coherence(Emission a, Emission b, double eps_zero = 1e-9) const {
    return indistinguishability(a, b) > eps_zero;
  }

  void set_pair(Emission a, Emission b, double j, double phi) {
    if (a == b)
      throw ParameterDomainError(
          "StateParams::set_pair: diagonal pairs are fixed at J=1, phi=0");
    const int ia = index_of(a), ib = index_of(b);
    j_[ia][ib] = j;
    j_[ib][ia] = j;
    phi_[ia][ib] = phi;
    phi_[ib][ia] = (phi == 0.0) ? 0.0 : -phi;
  }

 private:
  std::array<double, 4> intensity_;
  std::array<std::array<double, 4>, 4> j_;
  std::array<std::array<double, 4>, 4> phi_;
};

/** Validity diagnostics for a candidate density matrix. */
struct StateDiagnostics {
  double trace_defect = 0.0;        // |Tr(m) - 1|
  double hermiticity_defect = 0.0;  // max entry of |m - m^dagger|
  double min_eigenvalue = 0.0;      // smallest eigenvalue of hermitized m
  bool valid = false;
};

namespace detail {

inline Eigen::Matrix4cd hermitized(const Eigen::Matrix4cd& m) {
  return 0.5 * (m + m.adjoint());
}

}  // namespace detail

/**
 * Diagnostics for m against the density-operator requirements. Reports
 * defects instead of throwing; `valid` combines all three checks.
 */
inline StateDiagnostics validate(const DensityMatrix& dm,
                                 const Tolerances& tol = {}) {
  StateDiagnostics d;
  d.trace_defect = std::abs(dm.m.trace() - complexd(1.0, 0.0));
  d.hermiticity_defect =
      (dm.m - dm.m.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(detail::hermitized(dm.m),
                                                     Eigen::EigenvaluesOnly);
  d.min_eigenvalue = es.eigenvalues().minCoeff();
  d.valid = d.trace_defect <= tol.norm && d.hermiticity_defect <= tol.herm &&
            d.min_eigenvalue >= -tol.psd;
  return d;
}

/**
 * Build the density matrix induced by parameter form p.
 *
 * Throws ParameterDomainError when an intensity or J lies outside [0,1]
 * or the intensities do not sum to 1 within tol.norm. Phases may be any
 * real numbers; they enter through exp(i phi).
 */
inline DensityMatrix from_params(const StateParams& p,
                                 const Tolerances& tol = {}) {
  double sum = 0.0;
  for (Emission e : kEmissions) {
    const double i = p.intensity(e);
    if (!(i >= 0.0 && i <= 1.0))
      throw ParameterDomainError("from_params: intensity outside [0,1]");
    sum += i;
  }
  if (std::abs(sum - 1.0) > tol.norm)
    throw ParameterDomainError("from_params: intensities do not sum to 1");

  DensityMatrix dm;
  for (Emission a : kEmissions)
    for (Emission b : kEmissions) {
      const double j = p.indistinguishability(a, b);
      if (!(j >= 0.0 && j <= 1.0))
        throw ParameterDomainError(
            "from_params: indistinguishability outside [0,1]");
      const double mag =
          std::sqrt(p.intensity(a) * p.intensity(b)) * j;
      dm.set_entry(a, b, std::polar(mag, p.phase(a, b)));
    }
  return dm;
}

/**
 * Extract the parameter form of a valid density matrix.
 *
 * Pairs whose entry modulus, or either diagonal, is at or below tol.zero
 * are reported with J = 0 and phi = 0; such phases carry no information.
 * J is clamped into [0,1] against rounding at the validity boundary.
 *
 * Throws InvalidStateError when validate(dm, tol) fails.
 */
inline StateParams to_params(const DensityMatrix& dm,
                             const Tolerances& tol = {}) {
  const StateDiagnostics diag = validate(dm, tol);
  if (!diag.valid)
    throw InvalidStateError("to_params: matrix fails density requirements");

  StateParams p;
  for (Emission e : kEmissions)
    p.set_intensity(e, std::max(0.0, dm.entry(e, e).real()));

  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      const Emission ea = kEmissions[a], eb = kEmissions[b];
      // Hermitized off-diagonal entry; rounding may leave tiny skew.
      const complexd v =
          0.5 * (dm.entry(ea, eb) + std::conj(dm.entry(eb, ea)));
      const double ia = p.intensity(ea), ib = p.intensity(eb);
      if (std::abs(v) <= tol.zero || ia <= tol.zero || ib <= tol.zero) {
        p.set_pair(ea, eb, 0.0, 0.0);
      } else {
        const double j = std::clamp(std::abs(v) / std::sqrt(ia * ib), 0.0, 1.0);
        p.set_pair(ea, eb, j, wrap_to_pi(std::arg(v)));
      }
    }
  return p;
}

/**
 * Generalized Bell family: intensity split between HH and VV with a
 * single coherent pair. `phase` is the argument of the (HH, VV) matrix
 * entry. indistinguishability < 1 gives the partially mixed members.
 */
inline StateParams generalized_bell(double intensity_hh,
                                    double indistinguishability,
                                    double phase) {
  if (!(intensity_hh >= 0.0 && intensity_hh <= 1.0))
    throw ParameterDomainError("generalized_bell: intensity outside [0,1]");
  if (!(indistinguishability >= 0.0 && indistinguishability <= 1.0))
    throw ParameterDomainError(
        "generalized_bell: indistinguishability outside [0,1]");
  StateParams p;
  p.set_intensity(Emission::HH, intensity_hh);
  p.set_intensity(Emission::HV, 0.0);
  p.set_intensity(Emission::VH, 0.0);
  p.set_intensity(Emission::VV, 1.0 - intensity_hh);
  p.set_pair(Emission::HH, Emission::VV, indistinguishability,
             wrap_to_pi(phase));
  return p;
}

/**
 * Seeded random state in parameter form.
 *
 * Ensemble: the seed drives a mixture of r in {1,2,3,4} Haar-like pure
 * states (complex standard normal 4-vectors, normalized) with weights
 * from normalized exponential draws. One quarter of the draws sharpen the
 * weights (fourth power, renormalized) to produce near-pure states, and
 * an independent quarter blend toward the maximally mixed state with a
 * weight in [0.5, 0.9] to produce comfortably full-rank states. The
 * ensemble therefore reaches rank-deficient, near-pure and full-rank
 * members. Identical seeds give identical states.
 */
inline StateParams random_state(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> rank_dist(1, 4);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int rank = rank_dist(rng);
  std::array<Eigen::Vector4cd, 4> kets;
  std::array<double, 4> w{};
  double wsum = 0.0;
  for (int k = 0; k < rank; ++k) {
    Eigen::Vector4cd v;
    for (int i = 0; i < 4; ++i) v(i) = complexd(gauss(rng), gauss(rng));
    kets[k] = v.normalized();
    w[k] = expo(rng);
    wsum += w[k];
  }
  for (int k = 0; k < rank; ++k) w[k] /= wsum;

  if (unit(rng) < 0.25) {
    // Sharpen toward the dominant component: near-pure mixtures.
    double s = 0.0;
    for (int k = 0; k < rank; ++k) {
      w[k] = w[k] * w[k] * w[k] * w[k];
      s += w[k];
    }
    for (int k = 0; k < rank; ++k) w[k] /= s;
  }

  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int k = 0; k < rank; ++k)
    rho += w[k] * (kets[k] * kets[k].adjoint());

  if (unit(rng) < 0.25) {
    // Blend keeps every eigenvalue at or above lambda/4 >= 0.125.
    const double lambda = 0.5 + 0.4 * unit(rng);
    rho = (1.0 - lambda) * rho +
          (lambda / 4.0) * Eigen::Matrix4cd::Identity();
  }

  DensityMatrix dm;
  dm.m = rho;
  return to_params(dm);
}

/**
 * Uhlmann fidelity F(a,b) = (Tr sqrt(sqrt(a) b sqrt(a)))^2, clamped into
 * [0,1]. Eigenvalues pushed slightly negative by rounding are treated
 * as zero, so near-valid reconstructions are accepted.
 *
 * Evaluated as the squared nuclear norm of sqrt(b) sqrt(a), which equals
 * the trace expression. The direct route squares the matrix, pushing
 * near-null eigenvalues below machine noise where the outer square root
 * loses them; the singular values of the product stay well conditioned,
 * so F(a, a) holds to machine precision even for rank-deficient states.
 */
inline double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  const auto root = [](const Eigen::Matrix4cd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
    return Eigen::Matrix4cd(es.eigenvectors() *
                            es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                            es.eigenvectors().adjoint());
  };
  const Eigen::Matrix4cd prod =
      root(detail::hermitized(b.m)) * root(detail::hermitized(a.m));
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(prod);
  const double root_sum = svd.singularValues().sum();
  return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

/** Trace distance (1/2) Tr |a - b|. */
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(
      detail::hermitized(a.m) - detail::hermitized(b.m),
      Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

/**
 * Nearest density matrix under eigenvalue clamping: hermitize, clamp
 * negative eigenvalues to zero, renormalize the trace.
 */
inline DensityMatrix psd_project(const DensityMatrix& dm) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(detail::hermitized(dm.m));
  Eigen::Vector4d lam = es.eigenvalues().cwiseMax(0.0);
  const double tr = lam.sum();
  if (tr <= 0.0)
    throw ZeroDenominatorError("psd_project: all eigenvalues vanish");
  lam /= tr;
  DensityMatrix out;
  out.m = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
  return out;
}

}  // namespace pitomo
