// Copyright 2026 The ckptplan Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ckptplan/error.hpp"
#include "ckptplan/monotonic_queue.hpp"
#include "ckptplan/solvers.hpp"
#include "oracles.hpp"

namespace ckptplan {
namespace {

constexpr Bytes kMiBBytes = 1024 * 1024;

LayerProfile Sizes(std::vector<Bytes> d) { return LayerProfile::FromSizes(d); }

// Quadratic recursion written out on the test side; returns the smallest
// minimizing successor for each i.
std::vector<Index> ReferenceChoices(const oracle::Sizes& d) {
  const std::size_t n = d.size() - 1;
  std::vector<Bytes> m(n + 1);
  std::vector<Index> choice(n + 1, n);
  m[n] = d[n];
  for (Index i = n; i-- > 0;) {
    Bytes best = ~Bytes{0};
    Bytes interior = 0;
    Bytes peak = d[i];
    for (Index j = i + 1; j <= n; ++j) {
      if (j > i + 1) {
        interior += d[j - 1];
        peak = std::max(peak, d[j - 1]);
      }
      const Bytes u = interior + peak + d[j];
      const Bytes value = d[i] + std::max(m[j], u);
      if (value < best) {
        best = value;
        choice[i] = j;
      }
    }
    m[i] = best;
  }
  return choice;
}

TEST(MonotonicQueueTest, SlidingWindowMinimum) {
  std::mt19937_64 rng(5);
  std::vector<Bytes> keys(500);
  for (auto& k : keys) k = rng() % 20;
  MonotonicQueue<Bytes> queue;
  std::size_t start = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    queue.Push(i, keys[i]);
    if (rng() % 3 == 0 && start < i) start += 1 + rng() % (i - start);
    queue.EvictBefore(start);
    const auto first = std::min_element(keys.begin() + start, keys.begin() + i + 1);
    ASSERT_EQ(queue.Head().key, *first);
    ASSERT_EQ(queue.Head().index, static_cast<std::size_t>(first - keys.begin()));
    Index prev_index = 0;
    Bytes prev_key = 0;
    bool first_entry = true;
    for (const auto& e : queue) {
      if (!first_entry) {
        ASSERT_LT(prev_index, e.index);
        ASSERT_LE(prev_key, e.key);
      }
      prev_index = e.index;
      prev_key = e.key;
      first_entry = false;
    }
  }
}

TEST(SolverTags, RoundTrip) {
  for (SolverKind kind : AllSolvers()) EXPECT_EQ(ParseSolverKind(SolverTag(kind)), kind);
  EXPECT_EQ(AllSolvers().size(), 6u);
  EXPECT_FALSE(ParseSolverKind("greedy").has_value());
  EXPECT_EQ(NativeModel(SolverKind::kStaticDp), CostModel::kStatic);
  EXPECT_EQ(NativeModel(SolverKind::kBruteStatic), CostModel::kStatic);
  EXPECT_EQ(NativeModel(SolverKind::kDynamicLinear), CostModel::kDynamic);
  EXPECT_EQ(NativeModel(SolverKind::kSqrtBaseline), CostModel::kDynamic);
}

TEST(StaticDpTest, Examples) {
  auto r = SolveStaticDp(Sizes({2, 1, 1, 1, 2}));
  EXPECT_EQ(r.predicted_peak, 6u);
  EXPECT_EQ(r.plan.indices(), (std::vector<Index>{0, 2, 4}));
  EXPECT_EQ(r.model, CostModel::kStatic);
  EXPECT_EQ(r.solver, "static-dp");
  r = SolveStaticDp(Sizes({1, 1}));
  EXPECT_EQ(r.predicted_peak, 2u);
  EXPECT_EQ(r.plan.indices(), (std::vector<Index>{0, 1}));
}

TEST(StaticDpTest, LargeFirstLayer) {
  // A window whose every candidate exceeds the budget on its own.
  const auto p = Sizes({1, 50, 1, 1, 50, 1});
  const auto r = SolveStaticDp(p, {.verify_queue = true});
  EXPECT_EQ(r.predicted_peak, BruteForceStatic(p).predicted_peak);
}

TEST(DynamicTest, Examples) {
  for (const auto& r : {SolveDynamicQuadratic(Sizes({2, 1, 1, 2})),
                        SolveDynamicLinear(Sizes({2, 1, 1, 2}))}) {
    EXPECT_EQ(r.predicted_peak, 6u);
    EXPECT_EQ(r.plan.indices(), (std::vector<Index>{0, 2, 3}));
    EXPECT_EQ(r.model, CostModel::kDynamic);
  }
  for (const auto& r : {SolveDynamicQuadratic(Sizes({5, 3})), SolveDynamicLinear(Sizes({5, 3}))}) {
    EXPECT_EQ(r.predicted_peak, 13u);
    EXPECT_EQ(r.plan.indices(), (std::vector<Index>{0, 1}));
  }
}

TEST(DynamicTest, UniformSizesAgree) {
  const auto p = LayerProfile::FromSizes(std::vector<Bytes>(101, 7));
  const auto a = SolveDynamicQuadratic(p);
  const auto b = SolveDynamicLinear(p);
  EXPECT_EQ(a.predicted_peak, b.predicted_peak);
  EXPECT_EQ(a.plan, b.plan);
}

TEST(SqrtTest, Examples) {
  auto r = SolveSqrtBaseline(LayerProfile::FromSizes(std::vector<Bytes>(5, 1)));
  EXPECT_EQ(r.plan.indices(), (std::vector<Index>{0, 2, 4}));
  r = SolveSqrtBaseline(LayerProfile::FromSizes(std::vector<Bytes>(10, 3)));
  EXPECT_EQ(r.plan.size(), 4u);
  r = SolveSqrtBaseline(LayerProfile::FromSizes(std::vector<Bytes>(25, 1)));
  EXPECT_EQ(r.plan.indices(), (std::vector<Index>{0, 5, 10, 15, 20, 24}));
  EXPECT_EQ(r.model, CostModel::kDynamic);
  EXPECT_EQ(r.predicted_peak, DynamicPeak(LayerProfile::FromSizes(std::vector<Bytes>(25, 1)), r.plan));
  const auto s = SolveSqrtBaseline(Sizes({1, 2, 3, 4, 5}), CostModel::kStatic);
  EXPECT_EQ(s.model, CostModel::kStatic);
  EXPECT_EQ(s.predicted_peak, StaticCost(Sizes({1, 2, 3, 4, 5}), s.plan));
}

TEST(SqrtTest, SegmentCount) {
  for (std::size_t n = 1; n <= 200; ++n) {
    const auto r = SolveSqrtBaseline(LayerProfile::FromSizes(std::vector<Bytes>(n + 1, 1)));
    const auto k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    EXPECT_EQ(r.plan.size() - 1, std::min(k, n)) << n;
  }
}

TEST(BruteForceTest, ExamplesAndGuard) {
  EXPECT_EQ(BruteForceStatic(Sizes({2, 1, 1, 1, 2})).predicted_peak, 6u);
  EXPECT_EQ(BruteForceDynamic(Sizes({2, 1, 1, 2})).predicted_peak, 6u);
  const auto big = LayerProfile::FromSizes(std::vector<Bytes>(31, 1));
  EXPECT_THROW(BruteForceStatic(big), GuardError);
  try {
    BruteForceDynamic(big);
    FAIL() << "expected GuardError";
  } catch (const GuardError& e) {
    EXPECT_NE(std::string(e.what()).find("instance too large"), std::string::npos);
  }
}

class SolverPropertyTest : public ::testing::Test {
 protected:
  std::mt19937_64 rng_{777};
};

TEST_F(SolverPropertyTest, MatchExhaustiveOracle) {
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng_() % 14;
    const auto d = oracle::RandomSizes(rng_, n, 1, 100);
    const auto p = LayerProfile::FromSizes(d);
    const Bytes best_static = oracle::MinStatic(d);
    const Bytes best_dynamic = oracle::MinDynamic(d);
    ASSERT_EQ(SolveStaticDp(p, {.verify_queue = true}).predicted_peak, best_static);
    ASSERT_EQ(BruteForceStatic(p).predicted_peak, best_static);
    ASSERT_EQ(SolveDynamicQuadratic(p).predicted_peak, best_dynamic);
    ASSERT_EQ(SolveDynamicLinear(p, {.verify_queue = true}).predicted_peak, best_dynamic);
    ASSERT_EQ(BruteForceDynamic(p).predicted_peak, best_dynamic);
  }
}

TEST_F(SolverPropertyTest, PredictedPeakIsObjectiveOfPlan) {
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng_() % 18;
    const auto d = oracle::RandomSizes(rng_, n, 1, 1000);
    const auto p = LayerProfile::FromSizes(d);
    for (SolverKind kind : AllSolvers()) {
      const auto r = Solve(kind, p);
      ASSERT_EQ(r.plan.num_layers(), n);
      ASSERT_EQ(r.model, NativeModel(kind));
      const auto& plan = r.plan.indices();
      const Bytes expected = r.model == CostModel::kStatic ? oracle::StaticCost(d, plan)
                                                           : oracle::DynamicPeak(d, plan);
      ASSERT_EQ(r.predicted_peak, expected) << SolverTag(kind);
    }
  }
}

TEST_F(SolverPropertyTest, LinearMatchesQuadraticChoices) {
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng_() % 200;
    const Bytes hi = trial % 3 == 0 ? 5 : 1000;
    const auto d = oracle::RandomSizes(rng_, n, 1, hi);
    const auto p = LayerProfile::FromSizes(d);
    DynamicLinearStats stats;
    const auto linear = SolveDynamicLinear(p, {.verify_queue = trial < 100, .stats = &stats});
    const auto quadratic = SolveDynamicQuadratic(p);
    ASSERT_EQ(linear.predicted_peak, quadratic.predicted_peak);
    ASSERT_EQ(linear.plan, quadratic.plan);

    const auto choices = ReferenceChoices(d);
    ASSERT_EQ(stats.steps.size(), n);
    Index expected_i = n;
    for (const auto& step : stats.steps) {
      ASSERT_EQ(step.i, --expected_i);
      ASSERT_EQ(step.chosen, choices[step.i]) << "i=" << step.i;
      ASSERT_GT(step.crossover, step.i);
      ASSERT_GE(step.chosen, step.crossover);
      ASSERT_LE(step.chosen, n);
    }
    // Amortized linear work.
    ASSERT_LE(stats.search_moves, 4 * n + 4);
  }
}

TEST_F(SolverPropertyTest, ChoicesWalkLeftAsIDecreases) {
  // The crossover search never moves right: each search resumes at the
  // previous choice, or at the new queue head after that entry was evicted.
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng_() % 300;
    const auto p = LayerProfile::FromSizes(oracle::RandomSizes(rng_, n, 1, 1000));
    DynamicLinearStats stats;
    SolveDynamicLinear(p, {.stats = &stats});
    for (std::size_t k = 1; k < stats.steps.size(); ++k) {
      const auto& prev = stats.steps[k - 1];
      const auto& cur = stats.steps[k];
      ASSERT_LE(cur.crossover, cur.start);
      ASSERT_TRUE(cur.start == prev.chosen || cur.start == prev.i);
      ASSERT_LE(cur.start, prev.chosen);
    }
  }
}

TEST_F(SolverPropertyTest, PeakMonotoneUnderSizeIncrease) {
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng_() % 60;
    auto d = oracle::RandomSizes(rng_, n, 1, 100);
    auto bigger = d;
    for (auto& v : bigger) v += rng_() % 3 == 0 ? rng_() % 50 : 0;
    const auto a = LayerProfile::FromSizes(d);
    const auto b = LayerProfile::FromSizes(bigger);
    ASSERT_LE(SolveDynamicLinear(a).predicted_peak, SolveDynamicLinear(b).predicted_peak);
    ASSERT_LE(SolveStaticDp(a).predicted_peak, SolveStaticDp(b).predicted_peak);
  }
}

TEST_F(SolverPropertyTest, ScaleInvariance) {
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng_() % 16;
    const auto p = LayerProfile::FromSizes(oracle::RandomSizes(rng_, n, 1, 100));
    for (SolverKind kind : AllSolvers()) {
      const auto base = Solve(kind, p);
      for (Bytes c : {2, 7, 128}) {
        const auto scaled = Solve(kind, p.Scaled(c));
        ASSERT_EQ(scaled.plan, base.plan);
        ASSERT_EQ(scaled.predicted_peak, c * base.predicted_peak);
      }
    }
  }
}

TEST(SolveTest, ModelOverrideRescores) {
  const auto p = Sizes({4, 1, 3, 1, 5, 2, 2});
  const auto native = Solve(SolverKind::kStaticDp, p);
  const auto rescored = Solve(SolverKind::kStaticDp, p, CostModel::kDynamic);
  EXPECT_EQ(rescored.plan, native.plan);
  EXPECT_EQ(rescored.model, CostModel::kDynamic);
  EXPECT_EQ(rescored.predicted_peak, DynamicPeak(p, native.plan));
  EXPECT_EQ(Solve(SolverKind::kDynamicLinear, p, CostModel::kDynamic).predicted_peak,
            SolveDynamicLinear(p).predicted_peak);
}

class Vgg19Test : public ::testing::Test {
 protected:
  LayerProfile profile_ = GenerateBuiltin(BuiltinModel::kVgg19, 128);
};

TEST_F(Vgg19Test, DynamicBeatsReferencePlan) {
  const CheckpointPlan reference({0, 2, 4, 6, 9, 11, 14, 16, 19, 21, 23, 24}, 24);
  const auto r = SolveDynamicLinear(profile_);
  EXPECT_LE(r.predicted_peak, DynamicPeak(profile_, reference));
  // 4777.5 MiB; the reference subset reaches the same optimum.
  EXPECT_EQ(r.predicted_peak, 9555 * kMiBBytes / 2);
  EXPECT_EQ(DynamicPeak(profile_, reference), r.predicted_peak);
}

TEST_F(Vgg19Test, StaticMatchesReferencePlan) {
  const CheckpointPlan reference({0, 3, 6, 24}, 24);
  const auto r = SolveStaticDp(profile_);
  EXPECT_LE(r.predicted_peak, StaticCost(profile_, reference));
  EXPECT_EQ(r.plan, reference);
}

TEST_F(Vgg19Test, SqrtGapIs1960MiB) {
  const auto sqrt_plan = SolveSqrtBaseline(profile_);
  EXPECT_EQ(sqrt_plan.plan.indices(), (std::vector<Index>{0, 5, 10, 15, 20, 24}));
  EXPECT_EQ(sqrt_plan.predicted_peak - SolveDynamicLinear(profile_).predicted_peak,
            1960 * kMiBBytes);
}

TEST(AlexNetTest, FineGranularityLowersPeak) {
  const auto fine = SolveDynamicLinear(GenerateBuiltin(BuiltinModel::kAlexNetFine, 128));
  const auto plain = SolveDynamicLinear(GenerateBuiltin(BuiltinModel::kAlexNetPlain, 128));
  EXPECT_LT(fine.predicted_peak, plain.predicted_peak);
  const double delta = static_cast<double>(plain.predicted_peak - fine.predicted_peak) / kMiBBytes;
  EXPECT_GE(delta, 50.0);
  EXPECT_LE(delta, 150.0);
}

}  // namespace
}  // namespace ckptplan
