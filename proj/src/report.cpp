// Copyright 2026 The ckptplan Authors
// SPDX-License-Identifier: Apache-2.0

#include "ckptplan/report.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "ckptplan/error.hpp"

namespace ckptplan {
namespace {

using nlohmann::json;

constexpr double kMiB = 1024.0 * 1024.0;

double ToMiB(Bytes bytes) { return static_cast<double>(bytes) / kMiB; }

SimMode ModeFor(CostModel model) {
  return model == CostModel::kStatic ? SimMode::kChen : SimMode::kPyTorch;
}

std::string JoinIndices(const std::vector<Index>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(v[k]);
  }
  return out;
}

ComparisonRow RunRow(const LayerProfile& profile, SolverKind kind,
                     const CompareOptions& options) {
  ComparisonRow row;
  row.solver = kind;
  row.model = options.force_model.value_or(NativeModel(kind));
  row.mode = ModeFor(row.model);
  try {
    SolveResult result = Solve(kind, profile, row.model);
    row.simulated_peak = Simulate(profile, result.plan, row.mode).peak_bytes;
    row.result = std::move(result);
  } catch (const GuardError& e) {
    row.error = e.what();
  } catch (const DataError& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::string FormatMiB(Bytes bytes) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", ToMiB(bytes));
  return buf;
}

std::vector<ComparisonRow> Compare(const LayerProfile& profile,
                                   const std::vector<SolverKind>& solvers,
                                   const CompareOptions& options) {
  std::vector<ComparisonRow> rows;
  rows.reserve(solvers.size());
  std::optional<Bytes> baseline;
  for (SolverKind kind : solvers) {
    rows.push_back(RunRow(profile, kind, options));
    if (kind == SolverKind::kSqrtBaseline && rows.back().result) {
      baseline = rows.back().simulated_peak;
    }
  }
  if (!baseline) {
    ComparisonRow row = RunRow(profile, SolverKind::kSqrtBaseline, options);
    if (row.result) baseline = row.simulated_peak;
  }
  if (baseline && *baseline > 0) {
    for (auto& row : rows) {
      if (row.result) {
        row.reduction = 1.0 - static_cast<double>(row.simulated_peak) /
                                  static_cast<double>(*baseline);
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
    if (a.result.has_value() != b.result.has_value()) return a.result.has_value();
    return a.simulated_peak < b.simulated_peak;
  });
  return rows;
}

std::string SolveResultToJson(const SolveResult& result, const LayerProfile& profile) {
  json doc = {
      {"solver", result.solver},
      {"model", CostModelName(result.model)},
      {"num_layers", profile.num_layers()},
      {"plan", result.plan.indices()},
      {"layer_checkpoints", result.plan.LayerCheckpoints()},
      {"predicted_peak_bytes", result.predicted_peak},
      {"predicted_peak_mib", std::stod(FormatMiB(result.predicted_peak))},
      {"base_overhead_bytes", profile.base_overhead()},
  };
  return doc.dump(2) + "\n";
}

std::string SolveResultToText(const SolveResult& result, const LayerProfile& profile) {
  std::ostringstream out;
  out << "solver:              " << result.solver << " (" << CostModelName(result.model)
      << " model)\n"
      << "layers:              " << profile.num_layers() << "\n"
      << "plan (0-based):      " << JoinIndices(result.plan.indices()) << "\n"
      << "checkpointed layers: " << JoinIndices(result.plan.LayerCheckpoints()) << "\n"
      << "predicted peak:      " << result.predicted_peak << " bytes ("
      << FormatMiB(result.predicted_peak) << " MiB)\n";
  if (profile.base_overhead() > 0) {
    const Bytes total = result.predicted_peak + profile.base_overhead();
    out << "with base overhead:  " << total << " bytes (" << FormatMiB(total) << " MiB)\n";
  }
  return out.str();
}

std::string ComparisonToJson(const std::vector<ComparisonRow>& rows, const LayerProfile& profile) {
  json out = json::array();
  for (const auto& row : rows) {
    json entry = {
        {"solver", SolverTag(row.solver)},
        {"model", CostModelName(row.model)},
        {"mode", SimModeName(row.mode)},
    };
    if (row.result) {
      entry["plan"] = row.result->plan.indices();
      entry["layer_checkpoints"] = row.result->plan.LayerCheckpoints();
      entry["predicted_peak_bytes"] = row.result->predicted_peak;
      entry["simulated_peak_bytes"] = row.simulated_peak;
      entry["simulated_peak_mib"] = std::stod(FormatMiB(row.simulated_peak));
      entry["reduction"] = row.reduction ? json(*row.reduction) : json(nullptr);
    } else {
      entry["error"] = row.error;
    }
    out.push_back(std::move(entry));
  }
  json doc = {{"num_layers", profile.num_layers()},
              {"base_overhead_bytes", profile.base_overhead()},
              {"rows", std::move(out)}};
  return doc.dump(2) + "\n";
}

std::string ComparisonToCsv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream out;
  out << "solver,model,mode,predicted_peak_bytes,simulated_peak_bytes,simulated_peak_mib,"
         "reduction,plan,error\n";
  for (const auto& row : rows) {
    out << SolverTag(row.solver) << ',' << CostModelName(row.model) << ','
        << SimModeName(row.mode) << ',';
    if (row.result) {
      out << row.result->predicted_peak << ',' << row.simulated_peak << ','
          << FormatMiB(row.simulated_peak) << ',';
      if (row.reduction) out << std::fixed << std::setprecision(4) << *row.reduction;
      out << ',' << JoinIndices(row.result->plan.indices()) << ",\n";
    } else {
      out << ",,,,," << '"' << row.error << "\"\n";
    }
  }
  return out.str();
}

std::string ComparisonToTable(const std::vector<ComparisonRow>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(16) << "solver" << std::setw(9) << "model" << std::setw(9)
      << "mode" << std::right << std::setw(14) << "predicted MiB" << std::setw(15)
      << "simulated MiB" << std::setw(11) << "reduction" << "  plan\n";
  for (const auto& row : rows) {
    out << std::left << std::setw(16) << SolverTag(row.solver) << std::setw(9)
        << CostModelName(row.model) << std::setw(9) << SimModeName(row.mode) << std::right;
    if (!row.result) {
      out << "  error: " << row.error << "\n";
      continue;
    }
    std::string reduction = "-";
    if (row.reduction) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * *row.reduction);
      reduction = buf;
    }
    out << std::setw(14) << FormatMiB(row.result->predicted_peak) << std::setw(15)
        << FormatMiB(row.simulated_peak) << std::setw(11) << reduction << "  {"
        << JoinIndices(row.result->plan.LayerCheckpoints()) << "}\n";
  }
  return out.str();
}

CheckpointPlan ParsePlan(const std::string& text, std::size_t num_layers) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("invalid plan: malformed document: ") + e.what());
  }
  if (doc.is_object() && doc.contains("plan")) doc = doc.at("plan");
  if (!doc.is_array()) throw DataError("invalid plan: expected an array of indices");
  std::vector<Index> indices;
  for (const auto& v : doc) {
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw DataError("invalid plan: indices must be non-negative integers");
    }
    indices.push_back(v.get<Index>());
  }
  return CheckpointPlan(std::move(indices), num_layers);
}

}  // namespace ckptplan
