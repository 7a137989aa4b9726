// Copyright 2026 The ckptplan Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ckptplan/error.hpp"
#include "ckptplan/profile.hpp"
#include "oracles.hpp"

namespace ckptplan {
namespace {

constexpr double kMiB = 1024.0 * 1024.0;

TEST(BuiltinTest, Vgg19MatchesShapePropagation) {
  const LayerProfile profile = GenerateBuiltin(BuiltinModel::kVgg19, 128);
  ASSERT_EQ(profile.size(), 25u);
  EXPECT_EQ(profile.num_layers(), 24u);
  const auto expected = oracle::Vgg19(128);
  ASSERT_EQ(expected.size(), 25u);
  for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_EQ(profile[k], expected[k]) << k;
}

TEST(BuiltinTest, Vgg19FrozenSizes) {
  const LayerProfile profile = GenerateBuiltin(BuiltinModel::kVgg19, 128);
  EXPECT_EQ(profile[0], 77070336u);     // 128 x 3 x 224 x 224 x 4
  EXPECT_EQ(profile[1], 1644167168u);   // 128 x 64 x 224 x 224 x 4
  EXPECT_EQ(profile[3], 411041792u);    // first pool
  EXPECT_EQ(profile[24], 512000u);      // 128 x 1000 x 4
  EXPECT_EQ(profile.layers()[3].name, "maxpool1");
}

TEST(BuiltinTest, Vgg19BatchScalesLinearly) {
  const auto one = GenerateBuiltin(BuiltinModel::kVgg19, 1);
  const auto many = GenerateBuiltin(BuiltinModel::kVgg19, 32);
  for (std::size_t k = 0; k < one.size(); ++k) EXPECT_EQ(many[k], 32 * one[k]);
}

TEST(BuiltinTest, AlexNetFinePoolIndices) {
  const LayerProfile fine = GenerateBuiltin(BuiltinModel::kAlexNetFine, 128);
  ASSERT_EQ(fine.size(), 16u);
  std::vector<std::size_t> pools;
  for (std::size_t k = 0; k < fine.size(); ++k) {
    if (fine.layers()[k].name.rfind("maxpool", 0) == 0) pools.push_back(k);
  }
  EXPECT_EQ(pools, (std::vector<std::size_t>{2, 4, 8}));
}

TEST(BuiltinTest, AlexNetFineEarlySizesNearReference) {
  // Reference activation sizes are about 103 MiB and 26 MiB; the derived shapes
  // come in lower, so allow 15 percent.
  const LayerProfile fine = GenerateBuiltin(BuiltinModel::kAlexNetFine, 128);
  EXPECT_NEAR(fine[1] / kMiB, 103.0, 0.15 * 103.0);
  EXPECT_NEAR(fine[2] / kMiB, 26.0, 0.15 * 26.0);
  EXPECT_EQ(fine[1], 128u * 64 * 55 * 55 * 4);
  EXPECT_EQ(fine[2], 128u * 64 * 27 * 27 * 4);
}

TEST(BuiltinTest, AlexNetPlainFusesPools) {
  const LayerProfile plain = GenerateBuiltin(BuiltinModel::kAlexNetPlain, 128);
  const LayerProfile fine = GenerateBuiltin(BuiltinModel::kAlexNetFine, 128);
  ASSERT_EQ(plain.size(), 13u);
  EXPECT_EQ(plain[1], fine[1] + fine[2]);
  EXPECT_EQ(plain[2], fine[3] + fine[4]);
  EXPECT_EQ(plain[5], fine[7] + fine[8]);
  for (std::size_t k = 6; k < plain.size(); ++k) EXPECT_EQ(plain[k], fine[k + 3]);
}

TEST(BuiltinTest, ModelNames) {
  EXPECT_EQ(ParseBuiltinModel("vgg19"), BuiltinModel::kVgg19);
  EXPECT_EQ(ParseBuiltinModel("alexnet-fine"), BuiltinModel::kAlexNetFine);
  EXPECT_EQ(ParseBuiltinModel("alexnet_plain"), BuiltinModel::kAlexNetPlain);
  EXPECT_FALSE(ParseBuiltinModel("resnet50").has_value());
  EXPECT_EQ(BuiltinModelName(BuiltinModel::kAlexNetPlain), "alexnet-plain");
  EXPECT_THROW(GenerateBuiltin(BuiltinModel::kVgg19, 0), DataError);
}

TEST(ProfileTest, RoundTripBuiltin) {
  for (auto model : {BuiltinModel::kVgg19, BuiltinModel::kAlexNetPlain, BuiltinModel::kAlexNetFine}) {
    LayerProfile profile = GenerateBuiltin(model, 16);
    profile.set_base_overhead(12345);
    EXPECT_EQ(ParseProfile(ProfileToJson(profile)), profile);
  }
}

TEST(ProfileTest, RoundTripRandom) {
  const LayerProfile profile = GenerateRandom(40, 1000, 7);
  std::istringstream in(ProfileToJson(profile));
  EXPECT_EQ(ReadProfile(in), profile);
}

TEST(ProfileTest, SizesOnlyDocument) {
  const auto profile = ParseProfile(R"({"layers":[{"size_bytes":3},{"name":"a","size_bytes":5}]})");
  EXPECT_EQ(profile.num_layers(), 1u);
  EXPECT_EQ(profile.total_bytes(), 8u);
  EXPECT_EQ(profile.base_overhead(), 0u);
  EXPECT_EQ(profile.layers()[1].name, "a");
}

TEST(ProfileTest, ShapeDocument) {
  const auto profile = ParseProfile(
      R"({"base_overhead_bytes": 9, "layers":[{"shape":[2,3],"bytes_per_element":4},
          {"shape":[5],"bytes_per_element":2,"size_bytes":10}]})");
  EXPECT_EQ(profile[0], 24u);
  EXPECT_EQ(profile[1], 10u);
  EXPECT_EQ(profile.base_overhead(), 9u);
}

TEST(ProfileTest, RejectsBadDocuments) {
  const char* bad[] = {
      "not json",
      "[]",
      R"({"layers":[]})",
      R"({"layers":[{"size_bytes":4}]})",
      R"({"layers":[{"size_bytes":4},{"size_bytes":0}]})",
      R"({"layers":[{"size_bytes":4},{"size_bytes":-2}]})",
      R"({"layers":[{"size_bytes":4},{"name":"x"}]})",
      R"({"layers":[{"size_bytes":4},{"shape":[2,0],"bytes_per_element":4}]})",
      R"({"layers":[{"size_bytes":4},{"shape":[2,2]}]})",
      R"({"layers":[{"size_bytes":4},{"shape":[2,2],"bytes_per_element":4,"size_bytes":15}]})",
      R"({"layers":[{"size_bytes":4},{"size_bytes":2.5}]})",
      R"({"base_overhead_bytes":-1,"layers":[{"size_bytes":4},{"size_bytes":4}]})",
      R"({"layers":[{"size_bytes":4611686018427387904},{"size_bytes":4}]})",
  };
  for (const char* text : bad) EXPECT_THROW(ParseProfile(text), DataError) << text;
}

TEST(ProfileTest, ZeroDimensionMessage) {
  try {
    ParseProfile(R"({"layers":[{"size_bytes":4},{"shape":[2,0],"bytes_per_element":4}]})");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("zero dimension"), std::string::npos);
  }
}

TEST(ProfileTest, MissingFile) {
  EXPECT_THROW(LoadProfile("/nonexistent/profile.json"), DataError);
}

TEST(ProfileTest, ScaledMultipliesSizes) {
  const LayerProfile profile = GenerateRandom(10, 50, 3);
  const LayerProfile scaled = profile.Scaled(7);
  for (std::size_t k = 0; k < profile.size(); ++k) EXPECT_EQ(scaled[k], 7 * profile[k]);
  EXPECT_THROW(profile.Scaled(0), DataError);
}

TEST(RandomTest, DeterministicAndInRange) {
  const auto a = GenerateRandom(200, 17, 42);
  const auto b = GenerateRandom(200, 17, 42);
  const auto c = GenerateRandom(200, 17, 43);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  ASSERT_EQ(a.num_layers(), 200u);
  for (auto s : a.sizes()) {
    EXPECT_GE(s, 1u);
    EXPECT_LE(s, 17u);
  }
  EXPECT_THROW(GenerateRandom(0, 5, 1), DataError);
  EXPECT_THROW(GenerateRandom(5, 0, 1), DataError);
}

}  // namespace
}  // namespace ckptplan
