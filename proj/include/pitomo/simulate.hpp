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
 * @file simulate.hpp
 * @brief Forward simulation of complete experiments and named presets.
 *
 * A run records the four canonical probe fringes in each of the four
 * delay settings, handed out in shuffled anonymous order exactly as an
 * experiment would (the delay line does not announce which emission it
 * matched), together with the two phase-independent level records.
 * Everything is deterministic in the master seed.
 */

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "pitomo/common.hpp"
#include "pitomo/fringes.hpp"
#include "pitomo/interferometer.hpp"
#include "pitomo/reconstruction.hpp"
#include "pitomo/states.hpp"

namespace pitomo {

enum class PumpPhasePolicy { Seeded, Zero, Explicit };

struct SimulationPlan {
  StateParams state;
  ImperfectionModel imp{};
  int grid_size = 64;
  long long counts_per_point = 0;  // 0 = exact traces
  std::uint64_t seed = 0;
  PumpPhasePolicy pump_policy = PumpPhasePolicy::Seeded;
  std::array<double, 4> pump_phases{};  // used only under Explicit
};

/**
 * A simulated run. Candidates appear in shuffled order under anonymous
 * ids; truth_index records which candidate was really which delay
 * setting so tests can score identification.
 */
struct SimulatedExperiment {
  std::vector<Candidate> candidates;
  std::array<std::size_t, 4> truth_index{};
  std::array<double, 4> pump_phase{};  // per delay setting
  FringeRecord level_h;
  FringeRecord level_v;
  StateParams truth;
  ImperfectionModel imp;
};

/**
 * Run the full forward model.
 *
 * Sub-seed layout (documented so data files can be regenerated piecewise):
 * index 0 drives pump phases, 1 the candidate shuffle, 2 + 4*d + k the
 * probe-k fringe of delay setting d, and 18/19 the two level records.
 * Noise enters only the Poisson draws, and only when counts > 0.
 */
inline SimulatedExperiment simulate(const SimulationPlan& plan) {
  plan.imp.check();
  SimulatedExperiment ex;
  ex.truth = plan.state;
  ex.imp = plan.imp;

  switch (plan.pump_policy) {
    case PumpPhasePolicy::Zero:
      ex.pump_phase = {0.0, 0.0, 0.0, 0.0};
      break;
    case PumpPhasePolicy::Explicit:
      ex.pump_phase = plan.pump_phases;
      break;
    case PumpPhasePolicy::Seeded: {
      std::mt19937_64 rng(subseed(plan.seed, 0));
      std::uniform_real_distribution<double> angle(-kPi, kPi);
      for (double& p : ex.pump_phase) p = wrap_to_pi(angle(rng));
      break;
    }
  }

  std::vector<Candidate> in_order(4);
  for (Configuration c : kConfigurations) {
    const int d = index_of(c);
    FringeSet fs;
    for (int k = 0; k < 4; ++k) {
      const ProbeSetting& ps = kCanonicalProbes[k];
      Settings s;
      s.theta = ps.theta;
      s.delta = ps.delta;
      s.pol = ps.pol;
      const FringeCoefficients fc =
          fringe_coefficients(plan.state, c, s, plan.imp);
      FringeRecord r =
          sample_fringe(fc, ex.pump_phase[d], plan.grid_size,
                        plan.counts_per_point, subseed(plan.seed, 2 + 4 * d + k));
      r.theta = ps.theta;
      r.delta = ps.delta;
      r.pol = ps.pol;
      fs.probes[k] = std::move(r);
    }
    in_order[d].fringes = std::move(fs);
  }

  // Levels are independent of theta, configuration and phi; they are
  // taken once, under the first delay setting's pump phase.
  for (int side = 0; side < 2; ++side) {
    const ProbeSetting& ps = side == 0 ? kLevelProbeH : kLevelProbeV;
    Settings s;
    s.theta = ps.theta;
    s.delta = ps.delta;
    s.pol = ps.pol;
    const FringeCoefficients fc =
        fringe_coefficients(plan.state, Configuration::A, s, plan.imp);
    FringeRecord r = sample_fringe(fc, ex.pump_phase[0], plan.grid_size,
                                   plan.counts_per_point,
                                   subseed(plan.seed, 18 + side));
    r.config = "level";
    r.theta = ps.theta;
    r.delta = ps.delta;
    r.pol = ps.pol;
    (side == 0 ? ex.level_h : ex.level_v) = std::move(r);
  }

  // Shuffle and hand out anonymous ids by shuffled position.
  std::array<std::size_t, 4> order{0, 1, 2, 3};
  std::mt19937_64 shuffle_rng(subseed(plan.seed, 1));
  std::shuffle(order.begin(), order.end(), shuffle_rng);
  ex.candidates.resize(4);
  for (std::size_t pos = 0; pos < 4; ++pos) {
    ex.candidates[pos] = std::move(in_order[order[pos]]);
    ex.candidates[pos].id = "delay-" + std::to_string(pos);
    for (FringeRecord& r : ex.candidates[pos].fringes.probes)
      r.config = ex.candidates[pos].id;
    ex.truth_index[order[pos]] = pos;
  }
  return ex;
}

/** Convenience: simulate and reconstruct in one go, scoring vs truth. */
inline ReconstructionReport round_trip(const SimulationPlan& plan,
                                       const ReconstructionOptions& opt = {}) {
  const SimulatedExperiment ex = simulate(plan);
  return reconstruct(ex.candidates, ex.level_h, ex.level_v, opt,
                     from_params(ex.truth));
}

//=============================================================================
// Presets
//=============================================================================

/**
 * The worked reference state used across tests and documentation: an
 * unbalanced, partially coherent superposition of HH and VV with
 * I_HH = 0.4, I_VV = 0.6, J(HH,VV) = sqrt(3)/2 and a (HH,VV) entry
 * argument of -3pi/4, so the corner entries read -0.3 -+ 0.3i.
 */
inline StateParams demo_state() {
  return generalized_bell(0.4, std::sqrt(3.0) / 2.0, -3.0 * kPi / 4.0);
}

/** Pure Bell state (|HH> + |VV>)/sqrt(2): equal split, J = 1, phase 0. */
inline StateParams bell_state() { return generalized_bell(0.5, 1.0, 0.0); }

/** Maximally mixed state: uniform intensities, no coherence anywhere. */
inline StateParams mixed_max_state() {
  StateParams p;
  for (Emission e : kEmissions) p.set_intensity(e, 0.25);
  return p;
}

/**
 * Werner state p |Bell><Bell| + (1-p) I/4. In parameter form:
 * I_HH = I_VV = p/2 + (1-p)/4, I_HV = I_VH = (1-p)/4, and the only
 * coherent pair is (HH, VV) with modulus p/2.
 */
inline StateParams werner_state(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ParameterDomainError("werner_state: weight outside [0,1]");
  StateParams sp;
  const double corner = p / 2.0 + (1.0 - p) / 4.0;
  const double side = (1.0 - p) / 4.0;
  sp.set_intensity(Emission::HH, corner);
  sp.set_intensity(Emission::VV, corner);
  sp.set_intensity(Emission::HV, side);
  sp.set_intensity(Emission::VH, side);
  if (p > 0.0) sp.set_pair(Emission::HH, Emission::VV, (p / 2.0) / corner, 0.0);
  return sp;
}

/**
 * Resolve a preset name: "demo", "bell", "mixed-max" or "werner(p)"
 * with p a literal like 0.7. Throws ParameterDomainError for unknown
 * names or malformed weights.
 */
inline StateParams preset_state(const std::string& name) {
  if (name == "demo") return demo_state();
  if (name == "bell") return bell_state();
  if (name == "mixed-max") return mixed_max_state();
  if (name.rfind("werner(", 0) == 0 && name.back() == ')') {
    const std::string num = name.substr(7, name.size() - 8);
    try {
      std::size_t used = 0;
      const double p = std::stod(num, &used);
      if (used != num.size()) throw std::invalid_argument(num);
      return werner_state(p);
    } catch (const std::invalid_argument&) {
      throw ParameterDomainError("preset_state: malformed werner weight '" +
                                 num + "'");
    } catch (const std::out_of_range&) {
      throw ParameterDomainError("preset_state: werner weight out of range");
    }
  }
  throw ParameterDomainError("preset_state: unknown preset '" + name + "'");
}

}  // namespace pitomo
