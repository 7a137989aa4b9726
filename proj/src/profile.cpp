// Copyright 2026 The ckptplan Authors
// SPDX-License-Identifier: Apache-2.0

#include "ckptplan/profile.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "ckptplan/error.hpp"

namespace ckptplan {
namespace {

using nlohmann::json;

Bytes CheckedMul(Bytes a, Bytes b, const std::string& what) {
  Bytes out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw DataError(what + ": size overflows 64 bits");
  }
  return out;
}

std::uint64_t PositiveInt(const json& value, const std::string& what) {
  if (!value.is_number_integer()) {
    throw DataError(what + " must be an integer");
  }
  if (value.is_number_unsigned()) {
    auto v = value.get<std::uint64_t>();
    if (v == 0) throw DataError(what + " must be positive");
    return v;
  }
  auto v = value.get<std::int64_t>();
  if (v <= 0) throw DataError(what + " must be positive");
  return static_cast<std::uint64_t>(v);
}

Layer ParseLayer(const json& entry, std::size_t k) {
  const std::string where = "layers[" + std::to_string(k) + "]";
  if (!entry.is_object()) throw DataError(where + " must be an object");

  std::string name = "L" + std::to_string(k);
  if (auto it = entry.find("name"); it != entry.end()) {
    if (!it->is_string()) throw DataError(where + ".name must be a string");
    name = it->get<std::string>();
  }

  const bool has_shape = entry.contains("shape");
  const bool has_size = entry.contains("size_bytes");
  if (!has_shape && !has_size) {
    throw DataError(where + " needs size_bytes or shape with bytes_per_element");
  }

  std::optional<Layer> from_shape;
  if (has_shape) {
    const json& shape = entry.at("shape");
    if (!shape.is_array() || shape.empty()) {
      throw DataError(where + ".shape must be a non-empty array");
    }
    std::vector<std::uint64_t> dims;
    for (const auto& dim : shape) {
      if (dim.is_number_integer() && dim == 0) throw DataError(where + ": zero dimension");
      dims.push_back(PositiveInt(dim, where + ".shape dimension"));
    }
    if (!entry.contains("bytes_per_element")) {
      throw DataError(where + ".shape given without bytes_per_element");
    }
    auto bpe = PositiveInt(entry.at("bytes_per_element"), where + ".bytes_per_element");
    from_shape = Layer::FromShape(name, std::move(dims), bpe);
  }

  if (has_size) {
    Bytes size = PositiveInt(entry.at("size_bytes"), where + ".size_bytes");
    if (from_shape) {
      if (from_shape->size_bytes != size) {
        throw DataError(where + ": size_bytes disagrees with shape");
      }
      return *from_shape;
    }
    return Layer::FromSize(std::move(name), size);
  }
  return *from_shape;
}

}  // namespace

Layer Layer::FromShape(std::string name, std::vector<std::uint64_t> shape,
                       std::uint64_t bytes_per_element) {
  if (shape.empty()) throw DataError(name + ": empty shape");
  if (bytes_per_element == 0) throw DataError(name + ": bytes_per_element must be positive");
  Bytes size = bytes_per_element;
  for (auto dim : shape) {
    if (dim == 0) throw DataError(name + ": zero dimension");
    size = CheckedMul(size, dim, name);
  }
  Layer layer;
  layer.name = std::move(name);
  layer.shape = std::move(shape);
  layer.bytes_per_element = bytes_per_element;
  layer.size_bytes = size;
  return layer;
}

Layer Layer::FromSize(std::string name, Bytes size_bytes) {
  if (size_bytes == 0) throw DataError(name + ": size must be positive");
  Layer layer;
  layer.name = std::move(name);
  layer.size_bytes = size_bytes;
  return layer;
}

LayerProfile::LayerProfile(std::vector<Layer> layers, Bytes base_overhead)
    : layers_(std::move(layers)), base_overhead_(base_overhead) {
  if (layers_.size() < 2) {
    throw DataError("profile needs at least an input and one layer");
  }
  sizes_.reserve(layers_.size());
  for (const auto& layer : layers_) {
    if (layer.size_bytes == 0) throw DataError(layer.name + ": size must be positive");
    if (layer.size_bytes > kMaxProfileBytes - total_) {
      throw DataError("profile total exceeds 2^62 bytes");
    }
    total_ += layer.size_bytes;
    sizes_.push_back(layer.size_bytes);
  }
}

LayerProfile LayerProfile::FromSizes(std::span<const Bytes> sizes, Bytes base_overhead) {
  std::vector<Layer> layers;
  layers.reserve(sizes.size());
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    layers.push_back(Layer::FromSize(k == 0 ? "input" : "L" + std::to_string(k), sizes[k]));
  }
  return LayerProfile(std::move(layers), base_overhead);
}

LayerProfile LayerProfile::Scaled(std::uint64_t factor) const {
  if (factor == 0) throw DataError("scale factor must be positive");
  std::vector<Layer> layers;
  layers.reserve(layers_.size());
  for (const auto& layer : layers_) {
    layers.push_back(Layer::FromSize(layer.name, CheckedMul(layer.size_bytes, factor, layer.name)));
  }
  return LayerProfile(std::move(layers), base_overhead_);
}

LayerProfile ParseProfile(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed profile document: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("profile document must be an object");

  Bytes base = 0;
  if (auto it = doc.find("base_overhead_bytes"); it != doc.end()) {
    if (!it->is_number_integer() ||
        (!it->is_number_unsigned() && it->get<std::int64_t>() < 0)) {
      throw DataError("base_overhead_bytes must be a non-negative integer");
    }
    base = it->get<std::uint64_t>();
  }

  auto it = doc.find("layers");
  if (it == doc.end() || !it->is_array()) throw DataError("profile needs a layers array");
  if (it->size() < 2) throw DataError("profile needs at least an input and one layer");

  std::vector<Layer> layers;
  layers.reserve(it->size());
  for (std::size_t k = 0; k < it->size(); ++k) {
    layers.push_back(ParseLayer((*it)[k], k));
  }
  return LayerProfile(std::move(layers), base);
}

LayerProfile ReadProfile(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseProfile(buffer.str());
}

LayerProfile LoadProfile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open profile " + path);
  return ReadProfile(in);
}

std::string ProfileToJson(const LayerProfile& profile) {
  json layers = json::array();
  for (const auto& layer : profile.layers()) {
    json entry = {{"name", layer.name}};
    if (!layer.shape.empty()) {
      entry["shape"] = layer.shape;
      entry["bytes_per_element"] = layer.bytes_per_element;
    }
    entry["size_bytes"] = layer.size_bytes;
    layers.push_back(std::move(entry));
  }
  json doc = {{"base_overhead_bytes", profile.base_overhead()}, {"layers", std::move(layers)}};
  return doc.dump(2) + "\n";
}

void SaveProfile(const LayerProfile& profile, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << ProfileToJson(profile);
}

std::optional<BuiltinModel> ParseBuiltinModel(std::string_view name) {
  if (name == "vgg19") return BuiltinModel::kVgg19;
  if (name == "alexnet-plain" || name == "alexnet_plain") return BuiltinModel::kAlexNetPlain;
  if (name == "alexnet-fine" || name == "alexnet_fine") return BuiltinModel::kAlexNetFine;
  return std::nullopt;
}

std::string_view BuiltinModelName(BuiltinModel model) {
  switch (model) {
    case BuiltinModel::kVgg19:
      return "vgg19";
    case BuiltinModel::kAlexNetPlain:
      return "alexnet-plain";
    case BuiltinModel::kAlexNetFine:
      return "alexnet-fine";
  }
  return "unknown";
}

namespace {

using Shape = std::vector<std::uint64_t>;

Shape Chw(std::uint64_t batch, std::uint64_t c, std::uint64_t hw) { return {batch, c, hw, hw}; }

std::vector<Layer> Vgg19Layers(std::uint64_t batch, std::uint64_t bpe) {
  // Channels per conv+ReLU; 0 marks a 2x2/2 max-pool.
  constexpr int kConfig[] = {64,  64,  0,   128, 128, 0,   256, 256, 256, 256, 0,
                             512, 512, 512, 512, 0,   512, 512, 512, 512, 0};
  std::vector<Layer> layers;
  std::uint64_t channels = 3;
  std::uint64_t hw = 224;
  layers.push_back(Layer::FromShape("input", Chw(batch, channels, hw), bpe));
  int conv = 0;
  int pool = 0;
  for (int c : kConfig) {
    if (c == 0) {
      hw /= 2;
      layers.push_back(
          Layer::FromShape("maxpool" + std::to_string(++pool), Chw(batch, channels, hw), bpe));
    } else {
      channels = static_cast<std::uint64_t>(c);
      layers.push_back(
          Layer::FromShape("conv" + std::to_string(++conv) + "+relu", Chw(batch, channels, hw), bpe));
    }
  }
  layers.push_back(Layer::FromShape("fc1+relu", {batch, 4096}, bpe));
  layers.push_back(Layer::FromShape("fc2+relu", {batch, 4096}, bpe));
  layers.push_back(Layer::FromShape("fc3", {batch, 1000}, bpe));
  return layers;
}

// A fused conv+ReLU+max-pool block keeps both its convolution output and its
// pooled output resident, so its size is the sum of the two tensors.
Layer FusedBlock(std::string name, const Shape& conv, const Shape& pooled, std::uint64_t bpe) {
  auto a = Layer::FromShape(name, conv, bpe);
  auto b = Layer::FromShape(name, pooled, bpe);
  return Layer::FromSize(std::move(name), a.size_bytes + b.size_bytes);
}

std::vector<Layer> AlexNetLayers(std::uint64_t batch, std::uint64_t bpe, bool fine) {
  // torchvision AlexNet at 224x224: conv1 11x11/4 pad 2 -> 55, pools 3x3/2.
  const Shape conv1 = Chw(batch, 64, 55);
  const Shape pool1 = Chw(batch, 64, 27);
  const Shape conv2 = Chw(batch, 192, 27);
  const Shape pool2 = Chw(batch, 192, 13);
  const Shape conv3 = Chw(batch, 384, 13);
  const Shape conv4 = Chw(batch, 256, 13);
  const Shape conv5 = Chw(batch, 256, 13);
  const Shape pool3 = Chw(batch, 256, 6);

  std::vector<Layer> layers;
  layers.push_back(Layer::FromShape("input", Chw(batch, 3, 224), bpe));
  if (fine) {
    layers.push_back(Layer::FromShape("conv1+relu", conv1, bpe));
    layers.push_back(Layer::FromShape("maxpool1", pool1, bpe));
    layers.push_back(Layer::FromShape("conv2+relu", conv2, bpe));
    layers.push_back(Layer::FromShape("maxpool2", pool2, bpe));
    layers.push_back(Layer::FromShape("conv3+relu", conv3, bpe));
    layers.push_back(Layer::FromShape("conv4+relu", conv4, bpe));
    layers.push_back(Layer::FromShape("conv5+relu", conv5, bpe));
    layers.push_back(Layer::FromShape("maxpool3", pool3, bpe));
  } else {
    layers.push_back(FusedBlock("conv1+relu+maxpool", conv1, pool1, bpe));
    layers.push_back(FusedBlock("conv2+relu+maxpool", conv2, pool2, bpe));
    layers.push_back(Layer::FromShape("conv3+relu", conv3, bpe));
    layers.push_back(Layer::FromShape("conv4+relu", conv4, bpe));
    layers.push_back(FusedBlock("conv5+relu+maxpool", conv5, pool3, bpe));
  }
  layers.push_back(Layer::FromShape("avgpool", Chw(batch, 256, 6), bpe));
  layers.push_back(Layer::FromShape("flatten", {batch, 9216}, bpe));
  layers.push_back(Layer::FromShape("dropout1", {batch, 9216}, bpe));
  layers.push_back(Layer::FromShape("fc1+relu", {batch, 4096}, bpe));
  layers.push_back(Layer::FromShape("dropout2", {batch, 4096}, bpe));
  layers.push_back(Layer::FromShape("fc2+relu", {batch, 4096}, bpe));
  layers.push_back(Layer::FromShape("fc3", {batch, 1000}, bpe));
  return layers;
}

}  // namespace

LayerProfile GenerateBuiltin(BuiltinModel model, std::uint64_t batch,
                             std::uint64_t bytes_per_element) {
  if (batch == 0) throw DataError("batch must be positive");
  if (bytes_per_element == 0) throw DataError("bytes_per_element must be positive");
  switch (model) {
    case BuiltinModel::kVgg19:
      return LayerProfile(Vgg19Layers(batch, bytes_per_element));
    case BuiltinModel::kAlexNetPlain:
      return LayerProfile(AlexNetLayers(batch, bytes_per_element, false));
    case BuiltinModel::kAlexNetFine:
      return LayerProfile(AlexNetLayers(batch, bytes_per_element, true));
  }
  throw DataError("unknown model");
}

LayerProfile GenerateRandom(std::size_t num_layers, Bytes max_size, std::uint64_t seed) {
  if (num_layers == 0) throw DataError("random profile needs at least one layer");
  if (max_size == 0) throw DataError("max size must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Bytes> dist(1, max_size);
  std::vector<Bytes> sizes(num_layers + 1);
  for (auto& s : sizes) s = dist(rng);
  return LayerProfile::FromSizes(sizes);
}

}  // namespace ckptplan
