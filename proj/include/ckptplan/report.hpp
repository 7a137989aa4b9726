// Copyright 2026 The ckptplan Authors
// SPDX-License-Identifier: Apache-2.0
//
// Solver comparison and report rendering shared by the CLI and bindings.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ckptplan/cost.hpp"
#include "ckptplan/simulator.hpp"
#include "ckptplan/solvers.hpp"

namespace ckptplan {

// Binary MiB with two decimals, e.g. "1568.00".
std::string FormatMiB(Bytes bytes);

struct ComparisonRow {
  SolverKind solver = SolverKind::kSqrtBaseline;
  CostModel model = CostModel::kDynamic;
  SimMode mode = SimMode::kPyTorch;
  std::optional<SolveResult> result;  // empty when the solver failed
  std::string error;
  Bytes simulated_peak = 0;  // includes base overhead
  // 1 - simulated_peak / baseline simulated_peak, baseline = sqrt row.
  std::optional<double> reduction;
};

struct CompareOptions {
  // Evaluate and simulate every row under one model instead of each solver's own.
  std::optional<CostModel> force_model;
};

// One row per solver, failed rows last, the rest sorted by simulated peak
// (ties keep the input order). Static rows are simulated in chen mode and
// dynamic rows in pytorch mode. The sqrt baseline is always evaluated for the
// reduction column even when not listed.
std::vector<ComparisonRow> Compare(const LayerProfile& profile,
                                   const std::vector<SolverKind>& solvers,
                                   const CompareOptions& options = {});

std::string SolveResultToJson(const SolveResult& result, const LayerProfile& profile);
std::string SolveResultToText(const SolveResult& result, const LayerProfile& profile);

std::string ComparisonToJson(const std::vector<ComparisonRow>& rows, const LayerProfile& profile);
std::string ComparisonToCsv(const std::vector<ComparisonRow>& rows);
std::string ComparisonToTable(const std::vector<ComparisonRow>& rows);

// Parses a plan document: either a JSON array of indices or an object with a
// "plan" array (as written by SolveResultToJson). Throws DataError.
CheckpointPlan ParsePlan(const std::string& text, std::size_t num_layers);

}  // namespace ckptplan
