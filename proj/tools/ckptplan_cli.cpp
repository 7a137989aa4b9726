// Copyright 2026 The ckptplan Authors
// SPDX-License-Identifier: Apache-2.0
//
// ckptplan: generate layer profiles, plan checkpoints, simulate and compare.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ckptplan/error.hpp"
#include "ckptplan/profile.hpp"
#include "ckptplan/report.hpp"
#include "ckptplan/simulator.hpp"
#include "ckptplan/solvers.hpp"

namespace {

using namespace ckptplan;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitGuard = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalFlags {
  std::string profile_path;
  std::string output_path;
  std::string format = "table";
  std::optional<std::uint64_t> base_overhead;
  std::uint64_t seed = 0;
};

void Emit(const GlobalFlags& flags, const std::string& text) {
  if (flags.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(flags.output_path);
  if (!out) throw DataError("cannot write " + flags.output_path);
  out << text;
}

// Status lines go to stdout when the document goes to a file, else to stderr
// so that stdout stays a clean document.
std::ostream& StatusStream(const GlobalFlags& flags) {
  return flags.output_path.empty() ? std::cerr : std::cout;
}

LayerProfile LoadGlobalProfile(const GlobalFlags& flags) {
  if (flags.profile_path.empty()) throw UsageError("--profile is required");
  LayerProfile profile = LoadProfile(flags.profile_path);
  if (flags.base_overhead) profile.set_base_overhead(*flags.base_overhead);
  return profile;
}

SolverKind SolverFromTag(const std::string& tag) {
  auto kind = ParseSolverKind(tag);
  if (!kind) throw UsageError("unknown solver '" + tag + "'");
  return *kind;
}

std::optional<CostModel> ModelFromFlag(const std::string& name) {
  if (name.empty()) return std::nullopt;
  auto model = ParseCostModel(name);
  if (!model) throw UsageError("unknown cost model '" + name + "'");
  return model;
}

std::string ProfileTable(const LayerProfile& profile, bool csv) {
  std::ostringstream out;
  if (csv) {
    out << "index,name,size_bytes,size_mib\n";
  } else {
    out << std::left << std::setw(6) << "index" << std::setw(24) << "name" << std::right
        << std::setw(16) << "bytes" << std::setw(12) << "MiB" << "\n";
  }
  for (std::size_t k = 0; k < profile.size(); ++k) {
    const Layer& layer = profile.layers()[k];
    if (csv) {
      out << k << ',' << layer.name << ',' << layer.size_bytes << ','
          << FormatMiB(layer.size_bytes) << "\n";
    } else {
      out << std::left << std::setw(6) << k << std::setw(24) << layer.name << std::right
          << std::setw(16) << layer.size_bytes << std::setw(12) << FormatMiB(layer.size_bytes)
          << "\n";
    }
  }
  return out.str();
}

std::string RenderProfile(const GlobalFlags& flags, const LayerProfile& profile) {
  if (flags.format == "json") return ProfileToJson(profile);
  return ProfileTable(profile, flags.format == "csv");
}

std::string TraceTable(const MemoryTrace& trace) {
  std::ostringstream out;
  out << std::left << std::setw(7) << "phase" << std::setw(18) << "label" << std::right
      << std::setw(16) << "bytes" << std::setw(12) << "MiB" << "\n";
  for (const auto& p : trace.points) {
    out << std::left << std::setw(7) << p.phase_index << std::setw(18) << p.label << std::right
        << std::setw(16) << p.bytes << std::setw(12) << FormatMiB(p.bytes) << "\n";
  }
  return out.str();
}

std::string SolveCsv(const SolveResult& result) {
  std::ostringstream out;
  out << "solver,model,predicted_peak_bytes,predicted_peak_mib,plan,layer_checkpoints\n"
      << result.solver << ',' << CostModelName(result.model) << ',' << result.predicted_peak
      << ',' << FormatMiB(result.predicted_peak) << ',';
  for (std::size_t k = 0; k < result.plan.size(); ++k) {
    out << (k ? " " : "") << result.plan.indices()[k];
  }
  out << ',';
  const auto layers = result.plan.LayerCheckpoints();
  for (std::size_t k = 0; k < layers.size(); ++k) out << (k ? " " : "") << layers[k];
  out << "\n";
  return out.str();
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> SplitList(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

int Run(int argc, char** argv) {
  CLI::App app{"Activation checkpoint planner for linear networks"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags flags;
  std::uint64_t base_overhead = 0;
  app.add_option("--profile", flags.profile_path, "Profile document (JSON)");
  app.add_option("--output", flags.output_path, "Write the document here instead of stdout");
  auto* format_opt =
      app.add_option("--format", flags.format, "Output format (default: json for gen-*, else table)")
          ->check(CLI::IsMember({"json", "csv", "table"}));
  auto* base_opt =
      app.add_option("--base-overhead-bytes", base_overhead, "Constant memory floor in bytes");
  app.add_option("--seed", flags.seed, "Seed for gen-random");

  std::string model_name;
  std::uint64_t batch = 1;
  std::uint64_t bytes_per_element = 4;
  auto* gen_model = app.add_subcommand("gen-model", "Write the profile of a builtin model");
  gen_model->add_option("model", model_name, "vgg19, alexnet-plain or alexnet-fine")->required();
  gen_model->add_option("--batch", batch, "Batch size")->check(CLI::PositiveNumber);
  gen_model->add_option("--bytes-per-element", bytes_per_element)->check(CLI::PositiveNumber);

  std::size_t random_layers = 0;
  std::uint64_t random_max = 0;
  auto* gen_random = app.add_subcommand("gen-random", "Write a random profile");
  gen_random->add_option("--layers", random_layers, "Number of layers N")->required();
  gen_random->add_option("--max-size", random_max, "Largest size in bytes")->required();

  std::string solver_tag = "dynamic-linear";
  std::string model_override;
  auto* solve = app.add_subcommand("solve", "Pick checkpoints for a profile");
  solve->add_option("--solver", solver_tag, "static-dp, dynamic-n2, dynamic-linear, sqrt, "
                                            "brute-static or brute-dynamic");
  solve->add_option("--model", model_override, "Score the plan under static or dynamic");

  std::string plan_file;
  std::string sim_solver;
  std::string mode_name = "pytorch";
  auto* simulate = app.add_subcommand("simulate", "Simulate the memory trace of a plan");
  auto* plan_opt = simulate->add_option("--plan-file", plan_file, "Plan document");
  simulate->add_option("--solver", sim_solver, "Plan with this solver")->excludes(plan_opt);
  simulate->add_option("--mode", mode_name, "none, chen or pytorch");

  std::vector<std::string> solver_list;
  std::string compare_model;
  auto* compare = app.add_subcommand("compare", "Compare solvers on one profile");
  compare->add_option("--solvers", solver_list, "Comma separated solver tags (default: all)")
      ->delimiter(',');
  compare->add_option("--model", compare_model, "Force one cost model for every row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  if (base_opt->count() > 0) flags.base_overhead = base_overhead;
  // Generated profiles are documents first.
  if (format_opt->count() == 0 && (*gen_model || *gen_random)) flags.format = "json";

  try {
    if (*gen_model) {
      auto model = ParseBuiltinModel(model_name);
      if (!model) throw UsageError("unknown model '" + model_name + "'");
      LayerProfile profile = GenerateBuiltin(*model, batch, bytes_per_element);
      if (flags.base_overhead) profile.set_base_overhead(*flags.base_overhead);
      Emit(flags, RenderProfile(flags, profile));
    } else if (*gen_random) {
      LayerProfile profile = GenerateRandom(random_layers, random_max, flags.seed);
      if (flags.base_overhead) profile.set_base_overhead(*flags.base_overhead);
      Emit(flags, RenderProfile(flags, profile));
    } else if (*solve) {
      const SolverKind kind = SolverFromTag(solver_tag);
      const auto model = ModelFromFlag(model_override);
      const LayerProfile profile = LoadGlobalProfile(flags);
      const SolveResult result = Solve(kind, profile, model);
      if (flags.format == "json") {
        Emit(flags, SolveResultToJson(result, profile));
      } else if (flags.format == "csv") {
        Emit(flags, SolveCsv(result));
      } else {
        Emit(flags, SolveResultToText(result, profile));
      }
    } else if (*simulate) {
      const auto mode = ParseSimMode(mode_name);
      if (!mode) throw UsageError("unknown mode '" + mode_name + "'");
      const LayerProfile profile = LoadGlobalProfile(flags);
      CheckpointPlan plan;
      if (!plan_file.empty()) {
        plan = ParsePlan(ReadFile(plan_file), profile.num_layers());
      } else {
        const SolverKind kind = SolverFromTag(sim_solver.empty() ? "dynamic-linear" : sim_solver);
        plan = Solve(kind, profile).plan;
      }
      SimulateOptions sim_options;
      sim_options.model_name = std::filesystem::path(flags.profile_path).stem().string();
      const MemoryTrace trace = Simulate(profile, plan, *mode, sim_options);
      if (flags.format == "json") {
        Emit(flags, TraceToJson(trace));
      } else if (flags.format == "csv") {
        Emit(flags, TraceToCsv(trace));
      } else {
        Emit(flags, TraceTable(trace));
      }
      StatusStream(flags) << "peak " << trace.peak_bytes << " bytes ("
                          << FormatMiB(trace.peak_bytes) << " MiB) at phase "
                          << trace.peak_phase_index << " ("
                          << trace.points[trace.peak_phase_index].label << ")\n";
      if (*mode != SimMode::kNone && trace.ForwardPeak() > trace.BackwardPeak()) {
        StatusStream(flags) << "note: forward peak exceeds backward peak\n";
      }
    } else if (*compare) {
      CompareOptions options;
      options.force_model = ModelFromFlag(compare_model);
      std::vector<SolverKind> kinds;
      for (const auto& tag : SplitList(solver_list)) kinds.push_back(SolverFromTag(tag));
      if (kinds.empty()) kinds = AllSolvers();
      const LayerProfile profile = LoadGlobalProfile(flags);
      const auto rows = Compare(profile, kinds, options);
      if (flags.format == "json") {
        Emit(flags, ComparisonToJson(rows, profile));
      } else if (flags.format == "csv") {
        Emit(flags, ComparisonToCsv(rows));
      } else {
        Emit(flags, ComparisonToTable(rows));
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGuard;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return Run(argc, argv); }
