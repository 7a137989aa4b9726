// Copyright 2026 The ckptplan Authors
// SPDX-License-Identifier: Apache-2.0

#include "ckptplan/simulator.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "ckptplan/error.hpp"

namespace ckptplan {

std::string_view SimModeName(SimMode mode) {
  switch (mode) {
    case SimMode::kNone:
      return "none";
    case SimMode::kChen:
      return "chen";
    case SimMode::kPyTorch:
      return "pytorch";
  }
  return "unknown";
}

std::optional<SimMode> ParseSimMode(std::string_view name) {
  if (name == "none") return SimMode::kNone;
  if (name == "chen") return SimMode::kChen;
  if (name == "pytorch") return SimMode::kPyTorch;
  return std::nullopt;
}

namespace {

Bytes MaxOver(const std::vector<TracePoint>& points, std::size_t first, std::size_t last) {
  Bytes peak = 0;
  for (std::size_t k = first; k <= last && k < points.size(); ++k) {
    peak = std::max(peak, points[k].bytes);
  }
  return peak;
}

}  // namespace

Bytes MemoryTrace::ForwardPeak() const {
  const std::size_t n = (points.size() - 2) / 2;
  return MaxOver(points, 1, n);
}

Bytes MemoryTrace::BackwardPeak() const {
  const std::size_t n = (points.size() - 2) / 2;
  return MaxOver(points, n + 1, 2 * n);
}

void SimState::AllocateCheckpoint(Index k, Bytes size) {
  if (IsLive(k)) throw std::logic_error("activation " + std::to_string(k) + " allocated twice");
  checkpoints_.emplace(k, size);
}

void SimState::AllocateSegment(Index k, Bytes size) {
  if (IsLive(k)) throw std::logic_error("activation " + std::to_string(k) + " allocated twice");
  segment_.emplace(k, size);
}

void SimState::Free(Index k) {
  if (checkpoints_.erase(k) == 0 && segment_.erase(k) == 0) {
    throw std::logic_error("activation " + std::to_string(k) + " freed while not live");
  }
}

bool SimState::IsLive(Index k) const { return checkpoints_.contains(k) || segment_.contains(k); }

Bytes SimState::Total() const {
  Bytes total = base_ + gradient_buffer_;
  for (const auto& [k, size] : checkpoints_) total += size;
  for (const auto& [k, size] : segment_) total += size;
  return total;
}

MemoryTrace Simulate(const LayerProfile& profile, const CheckpointPlan& plan, SimMode mode,
                     const SimulateOptions& options) {
  const std::size_t n = profile.num_layers();
  if (plan.size() < 2 || plan.num_layers() != n) {
    throw DataError("invalid plan: covers " + std::to_string(plan.num_layers()) +
                    " layers, profile has " + std::to_string(n));
  }
  const auto d = profile.sizes();
  const bool none = mode == SimMode::kNone;
  auto is_checkpoint = [&](Index k) { return !none && plan.contains(k); };
  auto previous_checkpoint = [&](Index i) {
    const auto& idx = plan.indices();
    return *(std::lower_bound(idx.begin(), idx.end(), i) - 1);
  };

  MemoryTrace trace;
  trace.model_name = options.model_name;
  trace.mode = mode;
  trace.base_overhead = profile.base_overhead();
  trace.points.reserve(2 * n + 2);

  SimState state(profile.base_overhead());
  auto record = [&](std::string label) {
    const std::size_t phase = trace.points.size();
    trace.points.push_back({phase, state.Total(), std::move(label)});
    if (options.observer) options.observer(phase, state);
  };

  state.AllocateCheckpoint(0, d[0]);
  record("start");

  for (Index i = 1; i <= n; ++i) {
    if (is_checkpoint(i)) {
      state.AllocateCheckpoint(i, d[i]);
    } else {
      state.AllocateSegment(i, d[i]);
    }
    if (!none && i > 1 && !is_checkpoint(i - 1)) state.Free(i - 1);
    record("forward L" + std::to_string(i));
  }

  for (Index x = n; x >= 1; --x) {
    if (!none && is_checkpoint(x)) {
      const Index h = previous_checkpoint(x);
      if (mode == SimMode::kChen) {
        // The finished segment after x goes in one batch.
        while (!state.live_segment().empty()) state.Free(state.live_segment().begin()->first);
      }
      Bytes buffer = d[h];
      for (Index k = h + 1; k < x; ++k) {
        state.AllocateSegment(k, d[k]);
        buffer = std::max(buffer, d[k]);
      }
      if (mode == SimMode::kPyTorch) state.SetGradientBuffer(buffer);
    }
    record("backward L" + std::to_string(x));
    if (mode != SimMode::kChen) state.Free(x);
  }

  if (mode == SimMode::kChen) {
    while (!state.live_segment().empty()) state.Free(state.live_segment().begin()->first);
    for (Index c : plan.indices()) {
      if (c != 0) state.Free(c);
    }
  }
  state.SetGradientBuffer(0);
  record("end");

  auto peak = std::max_element(trace.points.begin(), trace.points.end(),
                               [](const auto& a, const auto& b) { return a.bytes < b.bytes; });
  trace.peak_bytes = peak->bytes;
  trace.peak_phase_index = peak->phase_index;
  return trace;
}

PlanValidation ValidatePlanAgainstTrace(const LayerProfile& profile, const CheckpointPlan& plan,
                                        SimMode mode) {
  if (mode == SimMode::kNone) throw DataError("plan validation needs chen or pytorch mode");
  PlanValidation report;
  report.mode = mode;
  report.model = mode == SimMode::kChen ? CostModel::kStatic : CostModel::kDynamic;
  report.predicted = Evaluate(profile, plan, report.model);
  const MemoryTrace trace = Simulate(profile, plan, mode);
  report.simulated_backward_peak = trace.BackwardPeak() - trace.base_overhead;
  report.simulated_forward_peak = trace.ForwardPeak() - trace.base_overhead;
  report.forward_exceeds_backward = report.simulated_forward_peak > report.simulated_backward_peak;
  return report;
}

std::string TraceToCsv(const MemoryTrace& trace) {
  std::string out = "phase_index,label,bytes\n";
  for (const auto& p : trace.points) {
    out += std::to_string(p.phase_index) + "," + p.label + "," + std::to_string(p.bytes) + "\n";
  }
  return out;
}

std::string TraceToJson(const MemoryTrace& trace) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : trace.points) {
    points.push_back({{"phase_index", p.phase_index}, {"label", p.label}, {"bytes", p.bytes}});
  }
  nlohmann::json doc = {
      {"model_name", trace.model_name},
      {"mode", SimModeName(trace.mode)},
      {"base_overhead_bytes", trace.base_overhead},
      {"peak_bytes", trace.peak_bytes},
      {"peak_phase_index", trace.peak_phase_index},
      {"points", std::move(points)},
  };
  return doc.dump(2) + "\n";
}

}  // namespace ckptplan
