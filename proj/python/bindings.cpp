// Copyright 2026 The ckptplan Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "ckptplan/error.hpp"
#include "ckptplan/profile.hpp"
#include "ckptplan/report.hpp"
#include "ckptplan/simulator.hpp"
#include "ckptplan/solvers.hpp"

namespace py = pybind11;
using namespace ckptplan;

namespace {

SolverKind SolverArg(const std::string& tag) {
  auto kind = ParseSolverKind(tag);
  if (!kind) throw py::value_error("unknown solver '" + tag + "'");
  return *kind;
}

std::optional<CostModel> ModelArg(const std::optional<std::string>& name) {
  if (!name) return std::nullopt;
  auto model = ParseCostModel(*name);
  if (!model) throw py::value_error("unknown cost model '" + *name + "'");
  return model;
}

SimMode ModeArg(const std::string& name) {
  auto mode = ParseSimMode(name);
  if (!mode) throw py::value_error("unknown mode '" + name + "'");
  return *mode;
}

CheckpointPlan PlanArg(const LayerProfile& profile, std::vector<Index> plan) {
  return CheckpointPlan(std::move(plan), profile.num_layers());
}

}  // namespace

PYBIND11_MODULE(_ckptplan, m) {
  m.doc() = "Activation checkpoint planning for linear networks";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<GuardError>(m, "GuardError", PyExc_RuntimeError);

  py::class_<LayerProfile>(m, "Profile")
      .def(py::init([](const std::vector<Bytes>& sizes, Bytes base) {
             return LayerProfile::FromSizes(sizes, base);
           }),
           py::arg("sizes"), py::arg("base_overhead") = 0)
      .def_property_readonly("num_layers", &LayerProfile::num_layers)
      .def_property_readonly("sizes", [](const LayerProfile& p) {
        return std::vector<Bytes>(p.sizes().begin(), p.sizes().end());
      })
      .def_property_readonly("names", [](const LayerProfile& p) {
        std::vector<std::string> out;
        for (const auto& layer : p.layers()) out.push_back(layer.name);
        return out;
      })
      .def_property("base_overhead", &LayerProfile::base_overhead, &LayerProfile::set_base_overhead)
      .def("scaled", &LayerProfile::Scaled)
      .def("to_json", &ProfileToJson)
      .def("__len__", &LayerProfile::size)
      .def("__eq__", [](const LayerProfile& a, const LayerProfile& b) { return a == b; });

  m.def("parse_profile", [](const std::string& text) { return ParseProfile(text); });
  m.def("load_profile", &LoadProfile);
  m.def(
      "generate_builtin",
      [](const std::string& name, std::uint64_t batch, std::uint64_t bpe) {
        auto model = ParseBuiltinModel(name);
        if (!model) throw py::value_error("unknown model '" + name + "'");
        return GenerateBuiltin(*model, batch, bpe);
      },
      py::arg("model"), py::arg("batch"), py::arg("bytes_per_element") = 4);
  m.def("generate_random", &GenerateRandom, py::arg("num_layers"), py::arg("max_size"),
        py::arg("seed") = 0);

  m.def(
      "static_cost",
      [](const LayerProfile& p, std::vector<Index> plan) {
        return StaticCost(p, PlanArg(p, std::move(plan)));
      },
      py::arg("profile"), py::arg("plan"));
  m.def(
      "dynamic_peak",
      [](const LayerProfile& p, std::vector<Index> plan) {
        return DynamicPeak(p, PlanArg(p, std::move(plan)));
      },
      py::arg("profile"), py::arg("plan"));

  m.def("solvers", [] {
    std::vector<std::string> out;
    for (SolverKind kind : AllSolvers()) out.emplace_back(SolverTag(kind));
    return out;
  });
  m.def(
      "solve",
      [](const LayerProfile& p, const std::string& solver, std::optional<std::string> model) {
        const SolveResult r = Solve(SolverArg(solver), p, ModelArg(model));
        py::dict out;
        out["solver"] = r.solver;
        out["model"] = std::string(CostModelName(r.model));
        out["plan"] = r.plan.indices();
        out["layer_checkpoints"] = r.plan.LayerCheckpoints();
        out["predicted_peak"] = r.predicted_peak;
        return out;
      },
      py::arg("profile"), py::arg("solver") = "dynamic-linear", py::arg("model") = py::none());

  m.def(
      "simulate",
      [](const LayerProfile& p, std::vector<Index> plan, const std::string& mode) {
        const MemoryTrace trace = Simulate(p, PlanArg(p, std::move(plan)), ModeArg(mode));
        std::vector<Bytes> bytes;
        std::vector<std::string> labels;
        for (const auto& pt : trace.points) {
          bytes.push_back(pt.bytes);
          labels.push_back(pt.label);
        }
        py::dict out;
        out["bytes"] = bytes;
        out["labels"] = labels;
        out["peak_bytes"] = trace.peak_bytes;
        out["peak_phase_index"] = trace.peak_phase_index;
        out["forward_peak"] = trace.ForwardPeak();
        out["backward_peak"] = trace.BackwardPeak();
        return out;
      },
      py::arg("profile"), py::arg("plan"), py::arg("mode") = "pytorch");

  m.def(
      "compare",
      [](const LayerProfile& p, std::optional<std::vector<std::string>> solvers,
         std::optional<std::string> model) {
        std::vector<SolverKind> kinds;
        if (solvers) {
          for (const auto& tag : *solvers) kinds.push_back(SolverArg(tag));
        } else {
          kinds = AllSolvers();
        }
        CompareOptions options;
        options.force_model = ModelArg(model);
        py::list rows;
        for (const auto& row : Compare(p, kinds, options)) {
          py::dict out;
          out["solver"] = std::string(SolverTag(row.solver));
          out["model"] = std::string(CostModelName(row.model));
          out["mode"] = std::string(SimModeName(row.mode));
          if (row.result) {
            out["plan"] = row.result->plan.indices();
            out["predicted_peak"] = row.result->predicted_peak;
            out["simulated_peak"] = row.simulated_peak;
            out["reduction"] = row.reduction;
          } else {
            out["error"] = row.error;
          }
          rows.append(out);
        }
        return rows;
      },
      py::arg("profile"), py::arg("solvers") = py::none(), py::arg("model") = py::none());
}
