// Copyright 2026 The ckptplan Authors
// SPDX-License-Identifier: Apache-2.0
//
// Per-layer activation-size profiles for linear-chain networks.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ckptplan {

using Bytes = std::uint64_t;

// Profiles whose total activation size exceeds this are rejected so that every
// objective fits comfortably in 64 bits.
inline constexpr Bytes kMaxProfileBytes = Bytes{1} << 62;

struct Layer {
  std::string name;
  // Empty when the size was given directly (or the layer spans several tensors).
  std::vector<std::uint64_t> shape;
  std::uint64_t bytes_per_element = 0;
  Bytes size_bytes = 0;

  // Builds a layer whose size is product(shape) * bytes_per_element.
  // Throws DataError on zero dimensions or overflow.
  static Layer FromShape(std::string name, std::vector<std::uint64_t> shape,
                         std::uint64_t bytes_per_element);
  static Layer FromSize(std::string name, Bytes size_bytes);

  bool operator==(const Layer&) const = default;
};

// Ordered activation sizes d_0..d_n. Index 0 is the model input.
class LayerProfile {
 public:
  LayerProfile() = default;
  // Throws DataError if fewer than two layers, any size is zero, or the total
  // exceeds kMaxProfileBytes.
  explicit LayerProfile(std::vector<Layer> layers, Bytes base_overhead = 0);

  // Unnamed layers "input", "L1", ... "Ln".
  static LayerProfile FromSizes(std::span<const Bytes> sizes, Bytes base_overhead = 0);

  // Number of layers after the input (the n in d_0..d_n).
  std::size_t num_layers() const { return sizes_.size() - 1; }
  std::size_t size() const { return sizes_.size(); }
  std::span<const Bytes> sizes() const { return sizes_; }
  Bytes operator[](std::size_t k) const { return sizes_[k]; }
  const std::vector<Layer>& layers() const { return layers_; }
  Bytes base_overhead() const { return base_overhead_; }
  Bytes total_bytes() const { return total_; }

  void set_base_overhead(Bytes base) { base_overhead_ = base; }

  // Every size multiplied by factor; shapes are dropped. Throws DataError on overflow.
  LayerProfile Scaled(std::uint64_t factor) const;

  bool operator==(const LayerProfile& other) const {
    return layers_ == other.layers_ && base_overhead_ == other.base_overhead_;
  }

 private:
  std::vector<Layer> layers_;
  std::vector<Bytes> sizes_;
  Bytes base_overhead_ = 0;
  Bytes total_ = 0;
};

// Profile document (JSON):
//   { "base_overhead_bytes": <int, optional>,
//     "layers": [ { "name": ..., "size_bytes": <int> }
//               | { "name": ..., "shape": [..], "bytes_per_element": <int> }, ... ] }
// When both forms are present they must agree.
LayerProfile ParseProfile(std::string_view text);
LayerProfile ReadProfile(std::istream& in);
LayerProfile LoadProfile(const std::string& path);

// Writes the same format, always populating size_bytes.
std::string ProfileToJson(const LayerProfile& profile);
void SaveProfile(const LayerProfile& profile, const std::string& path);

enum class BuiltinModel { kVgg19, kAlexNetPlain, kAlexNetFine };

// Accepts "vgg19", "alexnet-plain"/"alexnet_plain", "alexnet-fine"/"alexnet_fine".
std::optional<BuiltinModel> ParseBuiltinModel(std::string_view name);
std::string_view BuiltinModelName(BuiltinModel model);

// Checkpoint-candidate enumeration of a standard architecture at 224x224 input.
// vgg19: 16 conv+ReLU, 5 max-pool, 3 fully-connected (n = 24).
// alexnet-plain: 5 conv blocks with fused pooling, avgpool, flatten, dropout,
//   fc, dropout, fc, fc (n = 12).
// alexnet-fine: the three max-pools as standalone layers (n = 15).
LayerProfile GenerateBuiltin(BuiltinModel model, std::uint64_t batch,
                             std::uint64_t bytes_per_element = 4);

// n layers with sizes uniform in [1, max_size], deterministic in seed.
LayerProfile GenerateRandom(std::size_t num_layers, Bytes max_size, std::uint64_t seed);

}  // namespace ckptplan
