// Copyright 2026 The ckptplan Authors
// SPDX-License-Identifier: Apache-2.0
//
// Stage-by-stage replay of the training loop's activation memory.
//
// A network with N layers has training phase indices 0 .. 2N+1: 0 before
// training, 1..N the forward stages of layers 1..N, N+1..2N the backward stages
// of layers N..1, and 2N+1 after training. Memory is sampled at the end of each
// stage; a backward stage is sampled before its own activation is released.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ckptplan/cost.hpp"
#include "ckptplan/profile.hpp"

namespace ckptplan {

enum class SimMode {
  kNone,     // no checkpointing: everything allocated in forward, freed in backward
  kChen,     // checkpoints resident throughout, segments recomputed and freed in batch
  kPyTorch,  // early free of each activation plus one output-gradient buffer per segment
};

std::string_view SimModeName(SimMode mode);
std::optional<SimMode> ParseSimMode(std::string_view name);

struct TracePoint {
  std::size_t phase_index = 0;
  Bytes bytes = 0;
  std::string label;
};

struct MemoryTrace {
  std::string model_name;
  SimMode mode = SimMode::kPyTorch;
  Bytes base_overhead = 0;
  std::vector<TracePoint> points;  // 2N + 2 entries
  Bytes peak_bytes = 0;
  std::size_t peak_phase_index = 0;

  // Maxima over forward phases (1..N) and backward phases (N+1..2N).
  Bytes ForwardPeak() const;
  Bytes BackwardPeak() const;
};

// Live-tensor ledger. Every tensor is tracked by layer index.
class SimState {
 public:
  explicit SimState(Bytes base) : base_(base) {}

  void AllocateCheckpoint(Index k, Bytes size);
  void AllocateSegment(Index k, Bytes size);
  // Frees activation k wherever it lives. Throws std::logic_error when k is not live.
  void Free(Index k);
  void SetGradientBuffer(Bytes size) { gradient_buffer_ = size; }

  bool IsLive(Index k) const;
  const std::map<Index, Bytes>& live_checkpoints() const { return checkpoints_; }
  const std::map<Index, Bytes>& live_segment() const { return segment_; }
  Bytes gradient_buffer_bytes() const { return gradient_buffer_; }
  Bytes base() const { return base_; }
  Bytes Total() const;

 private:
  std::map<Index, Bytes> checkpoints_;
  std::map<Index, Bytes> segment_;
  Bytes gradient_buffer_ = 0;
  Bytes base_;
};

// Called at every sampled stage boundary with the current ledger.
using StageObserver = std::function<void(std::size_t phase_index, const SimState& state)>;

struct SimulateOptions {
  std::string model_name;  // copied into the trace
  StageObserver observer;
};

// Replays the training loop. The plan is ignored for SimMode::kNone (pass any
// valid plan, e.g. CheckpointPlan::Endpoints). Throws DataError when the plan
// does not fit the profile.
MemoryTrace Simulate(const LayerProfile& profile, const CheckpointPlan& plan, SimMode mode,
                     const SimulateOptions& options = {});

struct PlanValidation {
  SimMode mode = SimMode::kPyTorch;
  CostModel model = CostModel::kDynamic;
  Bytes predicted = 0;                 // objective value, excludes base
  Bytes simulated_backward_peak = 0;   // excludes base
  Bytes simulated_forward_peak = 0;    // excludes base
  bool forward_exceeds_backward = false;
  bool matches() const { return predicted == simulated_backward_peak; }
};

// Compares the objective matching mode (chen -> static, pytorch -> dynamic)
// with the simulated peaks. Throws DataError for SimMode::kNone.
PlanValidation ValidatePlanAgainstTrace(const LayerProfile& profile, const CheckpointPlan& plan,
                                        SimMode mode);

std::string TraceToCsv(const MemoryTrace& trace);
std::string TraceToJson(const MemoryTrace& trace);

}  // namespace ckptplan
