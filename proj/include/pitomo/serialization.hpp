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
 * @file serialization.hpp
 * @brief File formats: fringe CSVs, state JSON (matrix and parameter
 *        forms), run manifests and reconstruction reports.
 *
 * CSV layout, fixed column order:
 *
 *     config,theta,delta,pol,counts_per_point,seed
 *     <config>,<theta>,<delta>,<H|V>,<counts>,<seed>
 *     phi,value
 *     <phi>,<value>
 *     ...
 *
 * Floats in CSVs are printed with 17 significant digits so that
 * parse -> serialize is byte-stable. Parse errors name the offending
 * line. JSON numbers use the library's exact round-trip encoding.
 */

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pitomo/common.hpp"
#include "pitomo/fringes.hpp"
#include "pitomo/reconstruction.hpp"
#include "pitomo/states.hpp"

namespace pitomo {

using ordered_json = nlohmann::ordered_json;

/** Shortest exact decimal at 17 significant digits. */
inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

//=============================================================================
// Fringe CSV
//=============================================================================

inline constexpr const char* kCsvMetaHeader =
    "config,theta,delta,pol,counts_per_point,seed";
inline constexpr const char* kCsvDataHeader = "phi,value";

inline std::string write_fringe_csv(const FringeRecord& r) {
  std::ostringstream out;
  out << kCsvMetaHeader << '\n';
  out << r.config << ',' << fmt17(r.theta) << ',' << fmt17(r.delta) << ','
      << label_of(r.pol) << ',' << r.counts_per_point << ',' << r.seed << '\n';
  out << kCsvDataHeader << '\n';
  for (std::size_t k = 0; k < r.phi.size(); ++k)
    out << fmt17(r.phi[k]) << ',' << fmt17(r.value[k]) << '\n';
  return out.str();
}

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

inline double parse_double(const std::string& s, const std::string& src,
                           std::size_t lineno) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(src + ":" + std::to_string(lineno) +
                     ": expected a number, got '" + s + "'");
  }
}

inline long long parse_ll(const std::string& s, const std::string& src,
                          std::size_t lineno) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(src + ":" + std::to_string(lineno) +
                     ": expected an integer, got '" + s + "'");
  }
}

inline std::uint64_t parse_u64(const std::string& s, const std::string& src,
                               std::size_t lineno) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(src + ":" + std::to_string(lineno) +
                     ": expected an unsigned integer, got '" + s + "'");
  }
}

}  // namespace detail

/**
 * Parse one fringe CSV. `source` names the origin (file name) in error
 * messages; every ParseError carries source:line.
 */
inline FringeRecord parse_fringe_csv(const std::string& text,
                                     const std::string& source = "<csv>") {
  std::vector<std::string> lines;
  {
    std::string cur;
    for (char ch : text) {
      if (ch == '\n') {
        lines.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur.push_back(ch);
      }
    }
    if (!cur.empty()) lines.push_back(cur);
  }

  if (lines.empty() || lines[0] != kCsvMetaHeader)
    throw ParseError(source + ":1: expected header '" +
                     std::string(kCsvMetaHeader) + "'");
  if (lines.size() < 2)
    throw ParseError(source + ":2: missing metadata row");
  const auto meta = detail::split_fields(lines[1]);
  if (meta.size() != 6)
    throw ParseError(source + ":2: expected 6 metadata fields, got " +
                     std::to_string(meta.size()));

  FringeRecord r;
  r.config = meta[0];
  r.theta = detail::parse_double(meta[1], source, 2);
  r.delta = detail::parse_double(meta[2], source, 2);
  if (meta[3] == "H")
    r.pol = Polarization::H;
  else if (meta[3] == "V")
    r.pol = Polarization::V;
  else
    throw ParseError(source + ":2: polarization must be H or V, got '" +
                     meta[3] + "'");
  r.counts_per_point = detail::parse_ll(meta[4], source, 2);
  r.seed = detail::parse_u64(meta[5], source, 2);

  if (lines.size() < 3 || lines[2] != kCsvDataHeader)
    throw ParseError(source + ":3: expected header '" +
                     std::string(kCsvDataHeader) + "'");

  for (std::size_t i = 3; i < lines.size(); ++i) {
    if (lines[i].empty() && i + 1 == lines.size()) break;
    const auto f = detail::split_fields(lines[i]);
    if (f.size() != 2)
      throw ParseError(source + ":" + std::to_string(i + 1) +
                       ": expected 'phi,value', got '" + lines[i] + "'");
    r.phi.push_back(detail::parse_double(f[0], source, i + 1));
    r.value.push_back(detail::parse_double(f[1], source, i + 1));
  }
  if (r.phi.empty())
    throw ParseError(source + ":4: no data rows");
  return r;
}

//=============================================================================
// State JSON
//=============================================================================

/** Canonical key of an emission pair, e.g. "HH_VV" for row HH, col VV. */
inline std::string pair_key(Emission a, Emission b) {
  return std::string(label_of(a)) + "_" + label_of(b);
}

inline Emission parse_emission(const std::string& s, const std::string& where) {
  for (Emission e : kEmissions)
    if (s == label_of(e)) return e;
  throw ParseError(where + ": unknown emission label '" + s + "'");
}

/**
 * Serialize a state in both accepted forms at once: the parameter form
 * ("I" / "J" / "phi", pairs keyed row_col in basis order) and the matrix
 * form ("basis" / "matrix" of {re, im} cells).
 */
inline ordered_json state_to_json(const StateParams& p) {
  ordered_json j;
  ordered_json ji, jj, jphi;
  for (Emission e : kEmissions) ji[label_of(e)] = p.intensity(e);
  for (const auto& [a, b] : kEmissionPairs) {
    jj[pair_key(a, b)] = p.indistinguishability(a, b);
    jphi[pair_key(a, b)] = p.phase(a, b);
  }
  j["I"] = ji;
  j["J"] = jj;
  j["phi"] = jphi;

  const DensityMatrix dm = from_params(p);
  ordered_json basis = ordered_json::array();
  for (Emission e : kEmissions) basis.push_back(label_of(e));
  ordered_json rows = ordered_json::array();
  for (Emission r : kEmissions) {
    ordered_json row = ordered_json::array();
    for (Emission c : kEmissions) {
      const complexd v = dm.entry(r, c);
      row.push_back({{"re", v.real()}, {"im", v.imag()}});
    }
    rows.push_back(row);
  }
  j["basis"] = basis;
  j["matrix"] = rows;
  return j;
}

inline ordered_json matrix_to_json(const DensityMatrix& dm) {
  ordered_json j;
  ordered_json basis = ordered_json::array();
  for (Emission e : kEmissions) basis.push_back(label_of(e));
  ordered_json rows = ordered_json::array();
  for (Emission r : kEmissions) {
    ordered_json row = ordered_json::array();
    for (Emission c : kEmissions) {
      const complexd v = dm.entry(r, c);
      row.push_back({{"re", v.real()}, {"im", v.imag()}});
    }
    rows.push_back(row);
  }
  j["basis"] = basis;
  j["matrix"] = rows;
  return j;
}

/** A state loaded from JSON, in whichever forms the file carried. */
struct LoadedState {
  std::optional<StateParams> params;
  std::optional<DensityMatrix> matrix;

  /** Parameter form, extracting it from the matrix if needed. */
  StateParams as_params(const Tolerances& tol = {}) const {
    if (params) return *params;
    if (matrix) return to_params(*matrix, tol);
    throw ParseError("state carries neither form");
  }
  /** Matrix form, building it from parameters if needed. */
  DensityMatrix as_matrix(const Tolerances& tol = {}) const {
    if (matrix) return *matrix;
    if (params) return from_params(*params, tol);
    throw ParseError("state carries neither form");
  }
};

/**
 * Accept either state form (or a file carrying both). The parameter
 * form is preferred as primary when present since it is exact. Pair
 * keys may appear in either orientation; a reversed key contributes the
 * same J and the negated phase. A file carrying both forms must carry
 * the same state in both: a disagreement means one form was edited, and
 * silently trusting either would hide the corruption.
 */
inline LoadedState state_from_json(const ordered_json& j,
                                   const std::string& source = "<json>") {
  LoadedState out;
  if (j.contains("I") || j.contains("J") || j.contains("phi")) {
    if (!j.contains("I"))
      throw ParseError(source + ": parameter form needs an \"I\" object");
    StateParams p;
    for (Emission e : kEmissions) {
      const std::string key = label_of(e);
      if (!j["I"].contains(key))
        throw ParseError(source + ": \"I\" is missing '" + key + "'");
      p.set_intensity(e, j["I"][key].get<double>());
    }
    // J and phi entries are optional; omitted pairs stay at 0.
    std::array<std::array<double, 2>, 6> jp{};  // per pair: {J, phi}
    auto pair_index = [&](const std::string& key,
                          bool& reversed) -> std::size_t {
      const auto us = key.find('_');
      if (us == std::string::npos)
        throw ParseError(source + ": pair key '" + key +
                         "' is not of the form XX_YY");
      const Emission a = parse_emission(key.substr(0, us), source);
      const Emission b = parse_emission(key.substr(us + 1), source);
      for (std::size_t i = 0; i < kEmissionPairs.size(); ++i) {
        if (kEmissionPairs[i] == std::make_pair(a, b)) {
          reversed = false;
          return i;
        }
        if (kEmissionPairs[i] == std::make_pair(b, a)) {
          reversed = true;
          return i;
        }
      }
      throw ParseError(source + ": pair key '" + key + "' repeats a label");
    };
    if (j.contains("J"))
      for (const auto& [key, val] : j["J"].items()) {
        bool rev = false;
        jp[pair_index(key, rev)][0] = val.get<double>();
      }
    if (j.contains("phi"))
      for (const auto& [key, val] : j["phi"].items()) {
        bool rev = false;
        const std::size_t i = pair_index(key, rev);
        jp[i][1] = rev ? -val.get<double>() : val.get<double>();
      }
    for (std::size_t i = 0; i < kEmissionPairs.size(); ++i)
      p.set_pair(kEmissionPairs[i].first, kEmissionPairs[i].second, jp[i][0],
                 jp[i][1]);
    out.params = p;
  }
  if (j.contains("matrix")) {
    if (j.contains("basis")) {
      const auto& basis = j["basis"];
      if (basis.size() != 4)
        throw ParseError(source + ": basis must list 4 labels");
      for (int i = 0; i < 4; ++i)
        if (basis[i].get<std::string>() != label_of(kEmissions[i]))
          throw ParseError(source +
                           ": basis must be [\"HH\",\"HV\",\"VH\",\"VV\"]");
    }
    const auto& rows = j["matrix"];
    if (rows.size() != 4)
      throw ParseError(source + ": matrix must have 4 rows");
    DensityMatrix dm;
    for (int r = 0; r < 4; ++r) {
      if (rows[r].size() != 4)
        throw ParseError(source + ": matrix row " + std::to_string(r) +
                         " must have 4 cells");
      for (int c = 0; c < 4; ++c) {
        const auto& cell = rows[r][c];
        if (!cell.contains("re") || !cell.contains("im"))
          throw ParseError(source + ": matrix cells need \"re\" and \"im\"");
        dm.m(r, c) =
            complexd(cell["re"].get<double>(), cell["im"].get<double>());
      }
    }
    out.matrix = dm;
  }
  if (!out.params && !out.matrix)
    throw ParseError(source +
                     ": state needs either \"I\"/\"J\"/\"phi\" or \"matrix\"");
  if (out.params && out.matrix) {
    // Cross-check without validating the parameters themselves: even an
    // unphysical parameter set must still load so that diagnostics can
    // report on it, but the two forms have to describe the same entries.
    // The negated comparison also trips on NaN from corrupted inputs.
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        const Emission er = kEmissions[r];
        const Emission ec = kEmissions[c];
        const double mod = std::sqrt(out.params->intensity(er) *
                                     out.params->intensity(ec)) *
                           out.params->indistinguishability(er, ec);
        const complexd want = std::polar(mod, out.params->phase(er, ec));
        if (!(std::abs(want - out.matrix->m(r, c)) <= 1e-6))
          throw ParseError(source +
                           ": parameter and matrix forms disagree at (" +
                           label_of(er) + "," + label_of(ec) + ")");
      }
  }
  return out;
}

//=============================================================================
// Run manifest (measurement set on disk)
//=============================================================================

/** File layout of one simulated run, as stored next to its CSVs. */
struct RunManifest {
  int grid_size = 64;
  long long counts_per_point = 0;
  std::uint64_t seed = 0;
  // Candidate id -> the four probe CSV files, canonical probe order.
  std::vector<std::pair<std::string, std::array<std::string, 4>>> candidates;
  std::string level_h_file;
  std::string level_v_file;
};

inline ordered_json manifest_to_json(const RunManifest& m) {
  ordered_json j;
  j["grid_size"] = m.grid_size;
  j["counts_per_point"] = m.counts_per_point;
  j["seed"] = m.seed;
  ordered_json cands = ordered_json::array();
  for (const auto& [id, files] : m.candidates) {
    ordered_json c;
    c["id"] = id;
    c["files"] = files;
    cands.push_back(c);
  }
  j["candidates"] = cands;
  j["levels"] = {{"h", m.level_h_file}, {"v", m.level_v_file}};
  return j;
}

inline RunManifest manifest_from_json(const ordered_json& j,
                                      const std::string& source = "<json>") {
  RunManifest m;
  try {
    m.grid_size = j.at("grid_size").get<int>();
    m.counts_per_point = j.at("counts_per_point").get<long long>();
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& c : j.at("candidates")) {
      std::array<std::string, 4> files;
      const auto& jf = c.at("files");
      if (jf.size() != 4)
        throw ParseError(source + ": candidate '" +
                         c.at("id").get<std::string>() +
                         "' must list 4 probe files");
      for (int k = 0; k < 4; ++k) files[k] = jf[k].get<std::string>();
      m.candidates.emplace_back(c.at("id").get<std::string>(), files);
    }
    m.level_h_file = j.at("levels").at("h").get<std::string>();
    m.level_v_file = j.at("levels").at("v").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source + ": " + e.what());
  }
  return m;
}

//=============================================================================
// Reconstruction report JSON
//=============================================================================

inline ordered_json report_to_json(const ReconstructionReport& rep) {
  ordered_json j;
  j["loss"] = {{"b1_sq", rep.loss.b1_sq}, {"b2_sq", rep.loss.b2_sq},
               {"t_h", rep.loss.t_h},     {"gamma", rep.loss.gamma},
               {"p_h0", rep.loss.p_h0},   {"p_v0", rep.loss.p_v0}};

  ordered_json present, peak;
  for (Configuration c : kConfigurations) {
    present[label_of(c)] = rep.config_present[index_of(c)];
    peak[label_of(c)] = rep.peak_visibility[index_of(c)];
  }
  j["identification"] = {{"present", present},
                         {"peak_visibility", peak},
                         {"degenerate", rep.degenerate_identification}};

  j["params"] = state_to_json(rep.params);
  j["matrix"] = matrix_to_json(rep.matrix);
  if (rep.projected) j["projected"] = matrix_to_json(*rep.projected);

  ordered_json dsrc;
  for (Emission e : kEmissions)
    dsrc[label_of(e)] = rep.diagonal_source[index_of(e)];
  j["diagonal_source"] = dsrc;

  ordered_json els;
  for (std::size_t i = 0; i < kEmissionPairs.size(); ++i) {
    const auto& [a, b] = kEmissionPairs[i];
    const ElementEstimate& el = rep.offdiagonal[i];
    els[pair_key(a, b)] = {{"modulus", el.modulus},
                           {"phase", el.phase},
                           {"phase_defined", el.phase_defined},
                           {"modulus_defect", el.modulus_defect},
                           {"phase_defect", el.phase_defect},
                           {"source", el.source}};
  }
  j["elements"] = els;

  j["trace_before_renorm"] = rep.trace_before_renorm;
  j["diagnostics"] = {{"trace_defect", rep.diagnostics.trace_defect},
                      {"hermiticity_defect", rep.diagnostics.hermiticity_defect},
                      {"min_eigenvalue", rep.diagnostics.min_eigenvalue},
                      {"valid", rep.diagnostics.valid}};
  if (rep.fidelity_vs_truth) j["fidelity_vs_truth"] = *rep.fidelity_vs_truth;
  if (rep.trace_distance_vs_truth)
    j["trace_distance_vs_truth"] = *rep.trace_distance_vs_truth;
  return j;
}

//=============================================================================
// Small file helpers
//=============================================================================

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

inline ordered_json parse_json_file(const std::string& path) {
  try {
    return ordered_json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace pitomo
