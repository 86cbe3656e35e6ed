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

// Command-line harness: simulate runs to CSV + manifest, reconstruct
// them back, round-trip in memory, export graph notation, validate
// state files. All angles are radians; runs are deterministic in --seed.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pitomo/pitomo.hpp"

namespace fs = std::filesystem;
using namespace pitomo;

namespace {

struct StateSource {
  std::string state_file;
  std::string preset;
  bool random_state_flag = false;
};

StateParams resolve_state(const StateSource& src, std::uint64_t seed) {
  const int given = (!src.state_file.empty() ? 1 : 0) +
                    (!src.preset.empty() ? 1 : 0) +
                    (src.random_state_flag ? 1 : 0);
  if (given != 1)
    throw ParameterDomainError(
        "give exactly one of --state, --preset, --random-state");
  if (!src.state_file.empty())
    return state_from_json(parse_json_file(src.state_file), src.state_file)
        .as_params();
  if (!src.preset.empty()) return preset_state(src.preset);
  return random_state(seed);
}

PumpPhasePolicy parse_pump_policy(const std::string& name) {
  if (name == "zero") return PumpPhasePolicy::Zero;
  if (name == "seeded" || name == "seeded-random") return PumpPhasePolicy::Seeded;
  if (name == "explicit") return PumpPhasePolicy::Explicit;
  throw ParameterDomainError("unknown pump-phase policy '" + name +
                             "' (zero | seeded | explicit)");
}

std::string probe_file_name(const std::string& id, int k) {
  return id + "_probe" + std::to_string(k) + ".csv";
}

void run_simulate(const SimulationPlan& plan, const std::string& out_dir) {
  const SimulatedExperiment ex = simulate(plan);
  fs::create_directories(out_dir);

  RunManifest man;
  man.grid_size = plan.grid_size;
  man.counts_per_point = plan.counts_per_point;
  man.seed = plan.seed;
  for (const Candidate& cand : ex.candidates) {
    std::array<std::string, 4> files;
    for (int k = 0; k < 4; ++k) {
      files[k] = probe_file_name(cand.id, k);
      write_text_file((fs::path(out_dir) / files[k]).string(),
                      write_fringe_csv(cand.fringes.probes[k]));
    }
    man.candidates.emplace_back(cand.id, files);
  }
  man.level_h_file = "level_h.csv";
  man.level_v_file = "level_v.csv";
  write_text_file((fs::path(out_dir) / man.level_h_file).string(),
                  write_fringe_csv(ex.level_h));
  write_text_file((fs::path(out_dir) / man.level_v_file).string(),
                  write_fringe_csv(ex.level_v));
  write_text_file((fs::path(out_dir) / "measurement_set.json").string(),
                  manifest_to_json(man).dump(2) + "\n");
  write_text_file((fs::path(out_dir) / "state.json").string(),
                  state_to_json(ex.truth).dump(2) + "\n");

  std::cout << "wrote " << man.candidates.size() << " candidates + levels to "
            << out_dir << "\n";
}

struct LoadedRun {
  std::vector<Candidate> candidates;
  FringeRecord level_h;
  FringeRecord level_v;
};

LoadedRun load_run(const std::string& manifest_path) {
  const RunManifest man =
      manifest_from_json(parse_json_file(manifest_path), manifest_path);
  const fs::path dir = fs::path(manifest_path).parent_path();
  LoadedRun run;
  for (const auto& [id, files] : man.candidates) {
    Candidate cand;
    cand.id = id;
    for (int k = 0; k < 4; ++k) {
      const std::string p = (dir / files[k]).string();
      cand.fringes.probes[k] = parse_fringe_csv(read_text_file(p), files[k]);
    }
    run.candidates.push_back(std::move(cand));
  }
  run.level_h = parse_fringe_csv(
      read_text_file((dir / man.level_h_file).string()), man.level_h_file);
  run.level_v = parse_fringe_csv(
      read_text_file((dir / man.level_v_file).string()), man.level_v_file);
  return run;
}

void print_matrix_block(const char* title, const Eigen::Matrix4cd& truth,
                        const Eigen::Matrix4cd& got, bool imag) {
  std::printf("%s\n", title);
  std::printf("  %-38s | %-38s\n", "true", "retrieved");
  for (int r = 0; r < 4; ++r) {
    std::string left, right;
    char buf[32];
    for (int c = 0; c < 4; ++c) {
      std::snprintf(buf, sizeof(buf), "%+8.4f ",
                    imag ? truth(r, c).imag() : truth(r, c).real());
      left += buf;
      std::snprintf(buf, sizeof(buf), "%+8.4f ",
                    imag ? got(r, c).imag() : got(r, c).real());
      right += buf;
    }
    std::printf("  %-38s | %-38s\n", left.c_str(), right.c_str());
  }
}

void print_single_roundtrip(const StateParams& truth,
                            const ReconstructionReport& rep) {
  const DensityMatrix t = from_params(truth);
  std::printf("loss: b1_sq=%.9f t_h=%.9f gamma=%.9f\n", rep.loss.b1_sq,
              rep.loss.t_h, rep.loss.gamma);
  std::printf("configurations:");
  for (Configuration c : kConfigurations)
    std::printf(" %s=%s", label_of(c),
                rep.config_present[index_of(c)] ? "present" : "absent");
  std::printf("\n");
  print_matrix_block("real parts", t.m, rep.matrix.m, false);
  print_matrix_block("imaginary parts", t.m, rep.matrix.m, true);
  if (rep.fidelity_vs_truth)
    std::printf("fidelity=%.12f trace_distance=%.12f\n",
                *rep.fidelity_vs_truth, *rep.trace_distance_vs_truth);
}

void run_roundtrip(SimulationPlan plan, const ReconstructionOptions& opt,
                   int sweep, bool sweep_random_states) {
  if (sweep <= 1) {
    const ReconstructionReport rep = round_trip(plan, opt);
    print_single_roundtrip(plan.state, rep);
    return;
  }
  std::vector<double> fids;
  fids.reserve(sweep);
  const std::uint64_t base = plan.seed;
  for (int s = 0; s < sweep; ++s) {
    SimulationPlan p = plan;
    p.seed = subseed(base, static_cast<std::uint64_t>(s));
    if (sweep_random_states)
      p.state = random_state(subseed(base, 1000000ULL + s));
    const ReconstructionReport rep = round_trip(p, opt);
    fids.push_back(rep.fidelity_vs_truth.value_or(0.0));
  }
  std::sort(fids.begin(), fids.end());
  const double median = fids[fids.size() / 2];
  double mean = 0.0;
  for (double f : fids) mean += f;
  mean /= static_cast<double>(fids.size());
  std::printf("sweep=%d min=%.9f median=%.9f mean=%.9f max=%.9f\n", sweep,
              fids.front(), median, mean, fids.back());
  const double edges[4] = {0.9, 0.99, 0.999, 1.0000001};
  int counts[5] = {0, 0, 0, 0, 0};
  for (double f : fids) {
    int b = 0;
    while (b < 4 && f >= edges[b]) ++b;
    counts[b]++;
  }
  std::printf("fidelity histogram: <0.9:%d  [0.9,0.99):%d  [0.99,0.999):%d  "
              "[0.999,1]:%d  >1:%d\n",
              counts[0], counts[1], counts[2], counts[3], counts[4]);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-qubit state tomography by single-photon detection"};
  app.require_subcommand(1);

  StateSource src;
  std::uint64_t seed = 0;
  int grid = 64;
  long long counts = 0;
  double th = 1.0, b1sq = 0.5;
  std::string pump_policy = "seeded";
  std::vector<double> pump_phases;
  std::string out_path;
  bool psd = false;

  auto add_state_flags = [&](CLI::App* cmd) {
    cmd->add_option("--state", src.state_file, "state JSON file");
    cmd->add_option("--preset", src.preset,
                    "demo | bell | mixed-max | werner(p)");
    cmd->add_flag("--random-state", src.random_state_flag,
                  "draw the state from --seed");
  };
  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "master RNG seed");
    cmd->add_option("--grid", grid, "phase grid points per fringe");
    cmd->add_option("--counts", counts, "counts per grid point (0 = exact)");
    cmd->add_option("--th", th, "plate H transmission in [0,1]");
    cmd->add_option("--b1sq", b1sq, "first-source emission probability");
    cmd->add_option("--pump-phase-policy", pump_policy,
                    "zero | seeded | explicit");
    cmd->add_option("--pump-phases", pump_phases,
                    "four radians for --pump-phase-policy explicit");
  };

  CLI::App* c_sim = app.add_subcommand("simulate", "write fringe CSVs + manifest");
  add_state_flags(c_sim);
  add_run_flags(c_sim);
  c_sim->add_option("--out", out_path, "output directory")->required();

  CLI::App* c_rec =
      app.add_subcommand("reconstruct", "manifest -> report JSON");
  std::string input_path, truth_path, report_path;
  c_rec->add_option("--input", input_path, "measurement_set.json path")
      ->required();
  c_rec->add_option("--truth", truth_path, "true state JSON for scoring");
  c_rec->add_option("--out", report_path, "report path (default: alongside input)");
  c_rec->add_flag("--psd-project", psd, "also report eigenvalue-clamped matrix");

  CLI::App* c_rt = app.add_subcommand("roundtrip", "simulate + reconstruct in memory");
  add_state_flags(c_rt);
  add_run_flags(c_rt);
  int sweep = 1;
  c_rt->add_option("--sweep", sweep, "number of seeded trials");
  c_rt->add_flag("--psd-project", psd, "also compute eigenvalue-clamped matrix");

  CLI::App* c_graph = app.add_subcommand("export-graph", "state -> DOT text");
  add_state_flags(c_graph);
  c_graph->add_option("--seed", seed, "seed for --random-state");
  c_graph->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* c_val = app.add_subcommand("validate", "diagnostics for a state file");
  std::string val_path;
  c_val->add_option("--state", val_path, "state JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(c_sim) || app.got_subcommand(c_rt)) {
      SimulationPlan plan;
      plan.state = resolve_state(src, seed);
      plan.imp.t_h = th;
      plan.imp.b1_sq = b1sq;
      plan.grid_size = grid;
      plan.counts_per_point = counts;
      plan.seed = seed;
      plan.pump_policy = parse_pump_policy(pump_policy);
      if (plan.pump_policy == PumpPhasePolicy::Explicit) {
        if (pump_phases.size() != 4)
          throw ParameterDomainError(
              "--pump-phases needs exactly 4 values under explicit policy");
        for (int i = 0; i < 4; ++i) plan.pump_phases[i] = pump_phases[i];
      }
      if (app.got_subcommand(c_sim)) {
        run_simulate(plan, out_path);
      } else {
        ReconstructionOptions opt;
        opt.psd_project = psd;
        run_roundtrip(plan, opt, sweep, src.random_state_flag);
      }
    } else if (app.got_subcommand(c_rec)) {
      const LoadedRun run = load_run(input_path);
      ReconstructionOptions opt;
      opt.psd_project = psd;
      std::optional<DensityMatrix> truth;
      if (!truth_path.empty())
        truth = state_from_json(parse_json_file(truth_path), truth_path)
                    .as_matrix();
      const ReconstructionReport rep =
          reconstruct(run.candidates, run.level_h, run.level_v, opt, truth);
      if (report_path.empty())
        report_path =
            (fs::path(input_path).parent_path() / "report.json").string();
      write_text_file(report_path, report_to_json(rep).dump(2) + "\n");
      std::cout << "wrote " << report_path << "\n";
      if (rep.fidelity_vs_truth)
        std::printf("fidelity=%.12f\n", *rep.fidelity_vs_truth);
    } else if (app.got_subcommand(c_graph)) {
      const StateParams p = resolve_state(src, seed);
      const std::string dot = export_graph(p);
      if (out_path.empty())
        std::cout << dot;
      else
        write_text_file(out_path, dot);
    } else if (app.got_subcommand(c_val)) {
      const LoadedState ls =
          state_from_json(parse_json_file(val_path), val_path);
      DensityMatrix dm;
      try {
        dm = ls.as_matrix();
      } catch (const ParameterDomainError& e) {
        std::cout << "{\"valid\": false, \"reason\": \"" << e.what()
                  << "\"}\n";
        return 1;
      }
      const StateDiagnostics d = validate(dm);
      ordered_json j = {{"trace_defect", d.trace_defect},
                        {"hermiticity_defect", d.hermiticity_defect},
                        {"min_eigenvalue", d.min_eigenvalue},
                        {"valid", d.valid}};
      std::cout << j.dump(2) << "\n";
      return d.valid ? 0 : 1;
    }
  } catch (const InconsistentDataError& e) {
    std::cerr << "inconsistent data: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
