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
 * @file reconstruction.hpp
 * @brief Density-matrix reconstruction from recorded fringe sets.
 *
 * The experiment is repeated in up to four delay configurations; each
 * repetition is handed over as an anonymous candidate holding the four
 * canonical probe fringes. Reconstruction proceeds in stages:
 *
 *   1. identify_configurations labels each candidate A-D (or Absent) by
 *      which selector fringe shows peak visibility,
 *   2. estimate_loss calibrates source balance and plate transmission
 *      from the two phase-independent levels plus two visibilities,
 *   3. diagonal_elements / offdiagonal_elements read intensities,
 *      moduli and phases off the fitted fringes, cross-checking every
 *      redundantly measured quantity,
 *   4. assemble folds everything into a Hermitian matrix, renormalizes
 *      the trace within a configurable window and reports diagnostics.
 *
 * Every element records which configurations it came from and the
 * disagreement between redundant routes, so silent averaging never
 * hides inconsistent data.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pitomo/common.hpp"
#include "pitomo/fringes.hpp"
#include "pitomo/interferometer.hpp"
#include "pitomo/states.hpp"

namespace pitomo {

/** The four canonical probe fringes of one delay setting. */
struct FringeSet {
  std::array<FringeRecord, 4> probes;  // indexed like kCanonicalProbes
};

/** One anonymized repetition of the experiment. */
struct Candidate {
  std::string id;
  FringeSet fringes;
};

/** Outcome of configuration identification. */
struct IdentificationResult {
  // Candidate index chosen for each configuration; empty means Absent.
  std::array<std::optional<std::size_t>, 4> chosen{};
  // Peak selector visibility found for each configuration.
  std::array<double, 4> peak_visibility{};
  // Set when a selector maximum is tied between candidates, which
  // happens for fully coherent states where every pairwise J is 1.
  bool degenerate = false;
};

namespace detail {

/** Visibility with flat/empty guards: anything unfittable counts as 0. */
inline double guarded_visibility(const FringeRecord& r, double eps_zero) {
  const FitResult f = fit_sinusoid(r);
  if (f.offset <= eps_zero) return 0.0;
  return f.amplitude / f.offset;
}

}  // namespace detail

/**
 * Label anonymous candidates with delay configurations.
 *
 * The selector of configuration X is the canonical probe whose fringe is
 * the reference fringe when the candidate really is X; its visibility is
 * then maximal across candidates because the reference coherence is 1
 * while any other candidate shows at most J < 1 of it. For every
 * configuration the candidate with peak selector visibility is chosen;
 * a peak at or below eps_vis means no candidate carries that reference
 * emission and the configuration is reported Absent. Ties within 1e-9
 * set the degenerate flag (all-J-equal-1 states make the selectors
 * uninformative).
 */
inline IdentificationResult identify_configurations(
    const std::vector<Candidate>& candidates,
    double eps_vis = kFlatVisibility, double eps_zero = 1e-9) {
  IdentificationResult res;
  for (Configuration c : kConfigurations) {
    const int sel = selector_for(c);
    double best = 0.0;
    std::optional<std::size_t> best_k;
    std::vector<double> vis(candidates.size(), 0.0);
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      vis[k] = detail::guarded_visibility(candidates[k].fringes.probes[sel],
                                          eps_zero);
      if (!best_k || vis[k] > best) {
        best = vis[k];
        best_k = k;
      }
    }
    res.peak_visibility[index_of(c)] = best;
    if (!best_k || best <= eps_vis) continue;
    res.chosen[index_of(c)] = best_k;
    for (std::size_t k = 0; k < candidates.size(); ++k)
      if (k != *best_k && std::abs(vis[k] - best) <= 1e-9)
        res.degenerate = true;
  }
  return res;
}

/**
 * Labeled measurement set: per-configuration probe fringes (empty when
 * the configuration is absent) plus the two phase-independent levels.
 */
struct MeasurementSet {
  std::array<std::optional<FringeSet>, 4> configs{};
  FringeRecord level_h;  // pol H at delta = pi/4; offset estimates P_H0
  FringeRecord level_v;  // pol V at delta = 0;    offset estimates P_V0

  bool present(Configuration c) const {
    return configs[index_of(c)].has_value();
  }
  const FringeSet& at(Configuration c) const {
    if (!present(c))
      throw MissingConfigurationError(std::string("configuration ") +
                                      label_of(c) + " is absent");
    return *configs[index_of(c)];
  }
};

/** Apply an identification to anonymous candidates. */
inline MeasurementSet build_measurement_set(
    const std::vector<Candidate>& candidates,
    const IdentificationResult& ident, FringeRecord level_h,
    FringeRecord level_v) {
  MeasurementSet ms;
  for (Configuration c : kConfigurations) {
    const auto& pick = ident.chosen[index_of(c)];
    if (!pick) continue;
    if (*pick >= candidates.size())
      throw MissingConfigurationError("identification points past candidates");
    FringeSet fs = candidates[*pick].fringes;
    for (FringeRecord& r : fs.probes) r.config = label_of(c);
    ms.configs[index_of(c)] = std::move(fs);
  }
  ms.level_h = std::move(level_h);
  ms.level_v = std::move(level_v);
  return ms;
}

/** Calibrated source balance and plate transmission. */
struct LossEstimate {
  double b1_sq = 0.5;
  double b2_sq = 0.5;
  double t_h = 1.0;
  double gamma = 1.0;  // 1 / (4 t_h^2 b1_sq b2_sq); 1 when lossless
  double p_h0 = 0.0;   // fitted H level, (b1_sq/2)(I_HH + I_VH)
  double p_v0 = 0.0;   // fitted V level, (b1_sq/2)(I_HV + I_VV)
};

/**
 * Estimate the loss model from the measurement set alone.
 *
 * The two flat levels give the first-source emission probability,
 * b1_sq = 2 (P_H0 + P_V0). The plate transmission follows from the two
 * H-polarized reference visibilities,
 *
 *   t_h^2 = (V_A^2 + V_C^2) (1 - 2 P_V0)^2 / (8 P_H0 b2_sq),
 *
 * which stays valid when A or C is absent since the missing term is 0.
 * Throws DegenerateStateError when the data cannot support the
 * calibration: no H-level signal, both H-reference fringes flat, or a
 * source probability at the boundary.
 */
inline LossEstimate estimate_loss(const MeasurementSet& ms,
                                  double eps_zero = 1e-9,
                                  double eps_vis = kFlatVisibility) {
  if (ms.level_h.value.empty() || ms.level_v.value.empty())
    throw MissingConfigurationError("estimate_loss: level records missing");

  LossEstimate le;
  le.p_h0 = fit_sinusoid(ms.level_h).offset;
  le.p_v0 = fit_sinusoid(ms.level_v).offset;
  if (le.p_h0 <= eps_zero)
    throw DegenerateStateError(
        "estimate_loss: H level vanishes; transmission is unobservable");

  le.b1_sq = 2.0 * (le.p_h0 + le.p_v0);
  le.b2_sq = 1.0 - le.b1_sq;
  if (le.b1_sq <= eps_zero || le.b2_sq <= eps_zero)
    throw DegenerateStateError(
        "estimate_loss: source balance at the boundary; no interference");

  double v_a = 0.0, v_c = 0.0;
  if (ms.present(Configuration::A))
    v_a = detail::guarded_visibility(
        ms.at(Configuration::A).probes[selector_for(Configuration::A)],
        eps_zero);
  if (ms.present(Configuration::C))
    v_c = detail::guarded_visibility(
        ms.at(Configuration::C).probes[selector_for(Configuration::C)],
        eps_zero);
  if (v_a <= eps_vis && v_c <= eps_vis)
    throw DegenerateStateError(
        "estimate_loss: both H reference fringes flat; transmission is "
        "unobservable");

  const double one_minus_2pv = 1.0 - 2.0 * le.p_v0;
  const double t_sq = (v_a * v_a + v_c * v_c) * one_minus_2pv * one_minus_2pv /
                      (8.0 * le.p_h0 * le.b2_sq);
  le.t_h = std::sqrt(t_sq);
  le.gamma = 1.0 / (4.0 * t_sq * le.b1_sq * le.b2_sq);
  return le;
}

/** Diagonal intensities with per-element provenance. */
struct DiagonalResult {
  std::array<double, 4> intensity{};
  std::array<std::string, 4> source{};  // "A".."D", "levels", "absent-pair"
};

/**
 * Read the four intensities. The direct route squares the excursion of
 * the matching probe in the configuration whose reference the emission
 * is, I(e) = gamma * excursion^2. When that configuration is absent the
 * intensity follows from the fitted level of its polarization pair,
 * I(e) = 2 P0 / b1_sq - I(partner); when both members of a polarization
 * pair are absent the level itself certifies that both vanish.
 */
inline DiagonalResult diagonal_elements(const MeasurementSet& ms,
                                        const LossEstimate& loss) {
  DiagonalResult out;
  std::array<bool, 4> direct{};
  for (Emission e : kEmissions) {
    const Configuration c = configuration_for(e);
    if (!ms.present(c)) continue;
    const double exc = p_minus(ms.at(c).probes[probe_for(e)]);
    out.intensity[index_of(e)] = loss.gamma * exc * exc;
    out.source[index_of(e)] = label_of(c);
    direct[index_of(e)] = true;
  }

  // Level-based fallback; partners share a detected polarization.
  const std::array<std::pair<Emission, Emission>, 2> partners{{
      {Emission::HH, Emission::VH},   // H level
      {Emission::HV, Emission::VV},   // V level
  }};
  for (int side = 0; side < 2; ++side) {
    const auto [x, y] = partners[side];
    const double level = side == 0 ? loss.p_h0 : loss.p_v0;
    const double pair_sum = 2.0 * level / loss.b1_sq;
    const bool dx = direct[index_of(x)], dy = direct[index_of(y)];
    if (dx && dy) continue;
    if (!dx && !dy) {
      // Both absent: the level pins the pair sum, which must be ~0 or
      // estimate_loss would have seen signal. Split as zeros.
      out.intensity[index_of(x)] = 0.0;
      out.intensity[index_of(y)] = 0.0;
      out.source[index_of(x)] = out.source[index_of(y)] = "absent-pair";
      continue;
    }
    const Emission absent = dx ? y : x;
    const Emission present = dx ? x : y;
    out.intensity[index_of(absent)] =
        std::max(0.0, pair_sum - out.intensity[index_of(present)]);
    out.source[index_of(absent)] = "levels";
  }
  return out;
}

/** One off-diagonal element estimate with its cross-check defects. */
struct ElementEstimate {
  double modulus = 0.0;
  double phase = 0.0;        // in (-pi, pi]; meaningful only when defined
  bool phase_defined = false;
  double modulus_defect = 0.0;  // |route A - route B| when both measured
  double phase_defect = 0.0;    // wrapped phase disagreement, absolute
  std::string source;           // configurations used, e.g. "A,D"
};

/** The six unordered emission pairs in upper-triangle order. */
inline constexpr std::array<std::pair<Emission, Emission>, 6> kEmissionPairs{{
    {Emission::HH, Emission::HV},
    {Emission::HH, Emission::VH},
    {Emission::HH, Emission::VV},
    {Emission::HV, Emission::VH},
    {Emission::HV, Emission::VV},
    {Emission::VH, Emission::VV},
}};

/**
 * Off-diagonal element (row x, col y) for every pair x < y.
 *
 * Modulus: in either of the two configurations referencing x or y, the
 * probes of x and y both carry the pair coherence, and
 * |element| = gamma * excursion(x) * excursion(y). Available routes are
 * averaged and their absolute difference recorded as the modulus defect.
 *
 * Phase: the fitted phase of probe x minus that of probe y equals arg of
 * entry (x, y) in both configurations, with the shared pump phase
 * cancelling; the reference's own probe sits at zero and the pair phase
 * is antisymmetric. Routes whose fringes are flat (visibility at or below
 * eps_vis) are skipped; two live routes are combined on the circle and their
 * wrapped disagreement recorded. With no live route the phase is left
 * undefined at 0, which only happens when the modulus is itself small.
 */
inline std::array<ElementEstimate, 6> offdiagonal_elements(
    const MeasurementSet& ms, const LossEstimate& loss,
    double eps_vis = kFlatVisibility) {
  std::array<ElementEstimate, 6> out;
  for (std::size_t pi = 0; pi < kEmissionPairs.size(); ++pi) {
    const auto [x, y] = kEmissionPairs[pi];
    ElementEstimate& el = out[pi];

    std::vector<double> moduli;
    std::vector<double> phases;
    std::vector<std::string> used;
    for (const Emission ref : {y, x}) {
      const Configuration c = configuration_for(ref);
      if (!ms.present(c)) continue;
      const FringeSet& fs = ms.at(c);
      const FringeRecord& rec_x = fs.probes[probe_for(x)];
      const FringeRecord& rec_y = fs.probes[probe_for(y)];
      moduli.push_back(loss.gamma * p_minus(rec_x) * p_minus(rec_y));
      used.emplace_back(label_of(c));

      const FitResult fx = fit_sinusoid(rec_x);
      const FitResult fy = fit_sinusoid(rec_y);
      if (fx.amplitude > eps_vis * fx.offset &&
          fy.amplitude > eps_vis * fy.offset) {
        // Probe e rides at arg(e, ref) minus the shared pump phase, and
        // the reference's own probe rides at zero, so f_x - f_y equals
        // arg(x, y) from either side: referencing y reads it as
        // arg(x,y) - 0, referencing x as 0 - arg(y,x).
        phases.push_back(phase_difference(fx, fy, eps_vis));
      }
    }

    if (!moduli.empty()) {
      el.modulus = moduli.size() == 2 ? 0.5 * (moduli[0] + moduli[1])
                                      : moduli[0];
      if (moduli.size() == 2)
        el.modulus_defect = std::abs(moduli[0] - moduli[1]);
      el.source = used.size() == 2 ? used[0] + "," + used[1] : used[0];
    } else {
      el.source = "none";
    }

    if (phases.size() == 2) {
      el.phase = wrap_to_pi(std::atan2(std::sin(phases[0]) + std::sin(phases[1]),
                                       std::cos(phases[0]) + std::cos(phases[1])));
      el.phase_defect = std::abs(wrap_to_pi(phases[0] - phases[1]));
      el.phase_defined = true;
    } else if (phases.size() == 1) {
      el.phase = phases[0];
      el.phase_defined = true;
    }
  }
  return out;
}

/** Knobs of the assembly stage; defaults match the module tolerances. */
struct ReconstructionOptions {
  Tolerances tol{};
  double eps_vis = kFlatVisibility;
  double renorm_window = kRenormWindow;
  double max_modulus_defect = 0.2;  // intensity units
  double max_phase_defect = 0.5;    // radians
  bool psd_project = false;
};

/** Everything the pipeline learned, plus raw evidence for auditing. */
struct ReconstructionReport {
  StateParams params;
  DensityMatrix matrix;  // Hermitian by construction, trace renormalized
  std::optional<DensityMatrix> projected;  // eigenvalue-clamped variant
  LossEstimate loss;
  StateDiagnostics diagnostics;
  double trace_before_renorm = 0.0;

  std::array<bool, 4> config_present{};
  std::array<double, 4> peak_visibility{};  // from identification, if run
  bool degenerate_identification = false;

  std::array<std::string, 4> diagonal_source{};
  std::array<ElementEstimate, 6> offdiagonal{};

  std::optional<double> fidelity_vs_truth;
  std::optional<double> trace_distance_vs_truth;
};

/**
 * Fold a labeled measurement set into a density matrix.
 *
 * Throws InconsistentDataError when the assembled trace falls outside
 * 1 +- renorm_window or any cross-check defect exceeds its bound;
 * propagates the stage errors (DegenerateStateError and friends)
 * unchanged. Inside the window the matrix and intensities are rescaled
 * by the trace, which leaves every J untouched. When a truth matrix is
 * supplied the comparison metrics are filled in.
 */
inline ReconstructionReport assemble(
    const MeasurementSet& ms, const ReconstructionOptions& opt = {},
    const std::optional<DensityMatrix>& truth = {}) {
  ReconstructionReport rep;
  rep.loss = estimate_loss(ms, opt.tol.zero, opt.eps_vis);
  const DiagonalResult diag = diagonal_elements(ms, rep.loss);
  rep.offdiagonal = offdiagonal_elements(ms, rep.loss, opt.eps_vis);
  rep.diagonal_source = diag.source;
  for (Configuration c : kConfigurations)
    rep.config_present[index_of(c)] = ms.present(c);

  for (const ElementEstimate& el : rep.offdiagonal) {
    if (el.modulus_defect > opt.max_modulus_defect)
      throw InconsistentDataError(
          "assemble: redundant modulus routes disagree beyond bound");
    if (el.phase_defect > opt.max_phase_defect)
      throw InconsistentDataError(
          "assemble: redundant phase routes disagree beyond bound");
  }

  double trace = 0.0;
  for (double i : diag.intensity) trace += i;
  rep.trace_before_renorm = trace;
  if (std::abs(trace - 1.0) > opt.renorm_window)
    throw InconsistentDataError(
        "assemble: reconstructed trace too far from 1 to renormalize");

  std::array<double, 4> intensity = diag.intensity;
  for (double& i : intensity) i /= trace;

  DensityMatrix dm;
  for (Emission e : kEmissions)
    dm.set_entry(e, e, intensity[index_of(e)]);
  StateParams params;
  for (Emission e : kEmissions) params.set_intensity(e, intensity[index_of(e)]);

  for (std::size_t pi = 0; pi < kEmissionPairs.size(); ++pi) {
    const auto [x, y] = kEmissionPairs[pi];
    const double mod = rep.offdiagonal[pi].modulus / trace;
    const double ph = rep.offdiagonal[pi].phase;
    dm.set_entry(x, y, std::polar(mod, ph));
    dm.set_entry(y, x, std::polar(mod, -ph));

    const double ix = intensity[index_of(x)], iy = intensity[index_of(y)];
    if (mod > opt.tol.zero && ix > opt.tol.zero && iy > opt.tol.zero)
      params.set_pair(x, y, std::min(1.0, mod / std::sqrt(ix * iy)),
                      rep.offdiagonal[pi].phase_defined ? ph : 0.0);
    else
      params.set_pair(x, y, 0.0, 0.0);
  }

  rep.matrix = dm;
  rep.params = params;
  rep.diagnostics = validate(dm, opt.tol);
  if (opt.psd_project) rep.projected = psd_project(dm);
  if (truth) {
    rep.fidelity_vs_truth = fidelity(*truth, rep.matrix);
    rep.trace_distance_vs_truth = trace_distance(*truth, rep.matrix);
  }
  return rep;
}

/**
 * Full pipeline from anonymous candidates: identify, label, assemble.
 * Identification results (peak visibilities, degeneracy, presence) are
 * copied into the report.
 */
inline ReconstructionReport reconstruct(const std::vector<Candidate>& candidates,
                                        const FringeRecord& level_h,
                                        const FringeRecord& level_v,
                                        const ReconstructionOptions& opt = {},
                                        const std::optional<DensityMatrix>& truth = {}) {
  const IdentificationResult ident =
      identify_configurations(candidates, opt.eps_vis, opt.tol.zero);
  const MeasurementSet ms =
      build_measurement_set(candidates, ident, level_h, level_v);
  ReconstructionReport rep = assemble(ms, opt, truth);
  rep.peak_visibility = ident.peak_visibility;
  rep.degenerate_identification = ident.degenerate;
  return rep;
}

/** Attach truth-comparison metrics to a finished report. */
inline void score_against(ReconstructionReport& rep, const StateParams& truth) {
  const DensityMatrix t = from_params(truth);
  rep.fidelity_vs_truth = fidelity(t, rep.matrix);
  rep.trace_distance_vs_truth = trace_distance(t, rep.matrix);
}

}  // namespace pitomo
