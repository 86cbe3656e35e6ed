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
 * @file graph_export.hpp
 * @brief Graph-notation view of a state as DOT text.
 *
 * Two clusters over the same four emission vertices. The
 * indistinguishability cluster draws an undirected edge for every pair
 * with J above eps_zero, weighted by J and colored black exactly when
 * J = 1 within eps_zero (fully coherent pair). The phase cluster draws
 * the same pairs as directed edges: the arrow runs a -> b for the
 * orientation in which arg of entry (a, b) is positive, and carries that
 * positive value; negating a phase therefore reverses its arrow. A zero
 * phase on a coherent pair is drawn without direction.
 */

#include <sstream>
#include <string>

#include "pitomo/common.hpp"
#include "pitomo/reconstruction.hpp"
#include "pitomo/serialization.hpp"
#include "pitomo/states.hpp"

namespace pitomo {

inline std::string export_graph(const StateParams& p, double eps_zero = 1e-9) {
  static constexpr const char* kPairColor[6] = {
      "firebrick", "royalblue", "forestgreen",
      "darkorange", "purple",   "saddlebrown"};

  std::ostringstream out;
  out << "digraph state {\n";

  out << "  subgraph cluster_indistinguishability {\n"
      << "    label=\"indistinguishability J\";\n";
  for (Emission e : kEmissions)
    out << "    j_" << label_of(e) << " [label=\"" << label_of(e) << "\"];\n";
  for (std::size_t i = 0; i < kEmissionPairs.size(); ++i) {
    const auto [a, b] = kEmissionPairs[i];
    const double j = p.indistinguishability(a, b);
    if (j <= eps_zero) continue;
    const bool full = std::abs(j - 1.0) <= eps_zero;
    out << "    j_" << label_of(a) << " -> j_" << label_of(b)
        << " [dir=none, color=" << (full ? "black" : kPairColor[i])
        << ", label=\"" << fmt17(j) << "\"];\n";
  }
  out << "  }\n";

  out << "  subgraph cluster_phase {\n"
      << "    label=\"phase\";\n";
  for (Emission e : kEmissions)
    out << "    p_" << label_of(e) << " [label=\"" << label_of(e) << "\"];\n";
  for (std::size_t i = 0; i < kEmissionPairs.size(); ++i) {
    const auto [a, b] = kEmissionPairs[i];
    const double j = p.indistinguishability(a, b);
    if (j <= eps_zero) continue;
    const bool full = std::abs(j - 1.0) <= eps_zero;
    const char* color = full ? "black" : kPairColor[i];
    const double phi = p.phase(a, b);
    if (phi > 0.0)
      out << "    p_" << label_of(a) << " -> p_" << label_of(b);
    else if (phi < 0.0)
      out << "    p_" << label_of(b) << " -> p_" << label_of(a);
    else
      out << "    p_" << label_of(a) << " -> p_" << label_of(b)
          << " [dir=none, color=" << color << ", label=\"0\"];\n";
    if (phi != 0.0)
      out << " [color=" << color << ", label=\"" << fmt17(std::abs(phi))
          << "\"];\n";
  }
  out << "  }\n";
  out << "}\n";
  return out.str();
}

}  // namespace pitomo
