// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "imcsort/engine.hpp"

using namespace imcsort;

namespace {

std::vector<Word> random_vector(std::mt19937_64& rng, std::size_t n, ColId width) {
  std::vector<Word> v(n);
  for (auto& x : v) x = rng() & ((Word{1} << width) - 1);
  return v;
}

SortConfig measured(ColId width = 4, bool trace = false) {
  SortConfig cfg;
  cfg.width = width;
  cfg.mode = AccountingMode::Measured;
  cfg.emit_trace = trace;
  return cfg;
}

}  // namespace

TEST(OracleSort, MatchesStdStableSort) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    auto v = random_vector(rng, 1 + rng() % 20, 6);
    auto expected = v;
    std::stable_sort(expected.begin(), expected.end());
    EXPECT_EQ(oracle_sort(v), expected);
  }
  EXPECT_TRUE(oracle_sort({}).empty());
}

TEST(Sort, KnownVectors) {
  SortConfig cfg;
  EXPECT_EQ(sort({3, 7, 4, 8, 6, 2, 1, 5}, cfg).sorted, (std::vector<Word>{1, 2, 3, 4, 5, 6, 7, 8}));
  EXPECT_EQ(sort({8, 1}, cfg).sorted, (std::vector<Word>{1, 8}));
  EXPECT_EQ(sort({15, 15, 0, 0}, cfg).sorted, (std::vector<Word>{0, 0, 15, 15}));
  const std::vector<Word> ascending{1, 2, 3, 4, 5, 6, 7, 8};
  EXPECT_EQ(sort(ascending, cfg).sorted, ascending);
  EXPECT_EQ(sort({8, 7, 6, 5, 4, 3, 2, 1}, cfg).sorted, ascending);
}

TEST(Sort, CycleCountIsDataIndependent) {
  const auto a = sort({1, 2, 3, 4, 5, 6, 7, 8}, measured());
  const auto b = sort({3, 7, 4, 8, 6, 2, 1, 5}, measured());
  EXPECT_EQ(a.measured, b.measured);
}

TEST(Sort, RejectsBadInput) {
  SortConfig cfg;
  auto kind = [&](const std::vector<Word>& v, SortConfig c) {
    try {
      sort(v, c);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Parse;
  };
  EXPECT_EQ(kind({1, 2, 3, 4, 5, 6}, cfg), ErrorKind::NotPowerOfTwo);
  EXPECT_EQ(kind({}, cfg), ErrorKind::NotPowerOfTwo);
  EXPECT_EQ(kind({1}, cfg), ErrorKind::NotPowerOfTwo);
  EXPECT_EQ(kind({16, 1}, cfg), ErrorKind::ValueOutOfRange);
  SortConfig zero = cfg;
  zero.t_op = 0.0;
  EXPECT_EQ(kind({2, 1}, zero), ErrorKind::InvalidConfig);
}

struct Shape {
  std::size_t n;
  ColId width;
};

class SortShapes : public ::testing::TestWithParam<Shape> {};

TEST_P(SortShapes, RandomVectorsMatchOracle) {
  const auto [n, width] = GetParam();
  std::mt19937_64 rng(1000 * n + width);
  for (int i = 0; i < 100; ++i) {
    const auto v = random_vector(rng, n, width);
    for (bool reuse : {false, true}) {
      SortConfig cfg = measured(width);
      cfg.reuse_rows = reuse;
      const auto r = sort(v, cfg);
      ASSERT_EQ(r.sorted, oracle_sort(v));
      ASSERT_EQ(r.conservation_violations, 0u);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Shapes, SortShapes,
                         ::testing::Values(Shape{2, 4}, Shape{4, 4}, Shape{8, 4}, Shape{8, 2}, Shape{16, 4},
                                           Shape{8, 1}, Shape{4, 64}));

TEST(Sort, Deterministic) {
  const std::vector<Word> v{3, 7, 4, 8, 6, 2, 1, 5};
  const auto a = sort(v, measured(4, true));
  const auto b = sort(v, measured(4, true));
  EXPECT_EQ(a.sorted, b.sorted);
  EXPECT_EQ(a.measured, b.measured);
  EXPECT_EQ(trace_export(a), trace_export(b));
}

TEST(Sort, TraceAuditsAreClean) {
  const auto r = sort({3, 7, 4, 8, 6, 2, 1, 5}, measured(4, true));
  EXPECT_EQ(r.lockstep_violations, 0u);
  EXPECT_EQ(r.conservation_violations, 0u);
  ASSERT_TRUE(r.trace.has_value());
  EXPECT_EQ(r.trace->size(), r.measured.total());
  EXPECT_EQ(r.partitions, 4u);
  for (const auto& c : *r.trace) EXPECT_EQ(c.partitions.size(), 4u);
}

TEST(Sort, TwoValueTrace) {
  const auto r = sort({0b1000, 0b0001}, measured(4, true));
  ASSERT_TRUE(r.trace.has_value());
  const auto& t = *r.trace;
  const auto& last = t.back().partitions[0];
  EXPECT_EQ(last.row_string(3), "0001");
  EXPECT_EQ(last.row_string(4), "1000");

  auto last_change = [&](RowId row) {
    std::size_t at = 0;
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (t[i].partitions[0].row_bits(row) != t[i - 1].partitions[0].row_bits(row)) at = t[i].cycle;
    }
    return at;
  };
  EXPECT_EQ(last_change(4) + 1, last_change(3));
  EXPECT_EQ(last_change(3), t.back().cycle);
}

TEST(Sort, ReplayRecoversSortedOutput) {
  std::mt19937_64 rng(5);
  for (std::size_t n : {2u, 4u, 8u, 16u}) {
    const auto v = random_vector(rng, n, 4);
    const auto r = sort(v, measured(4, true));
    const auto records = trace_export(r);
    EXPECT_EQ(replay_final_cycle(records, r.final_layout), r.sorted);
  }
}

TEST(Sort, TraceExportNeedsTrace) {
  const auto r = sort({2, 1}, measured());
  try {
    trace_export(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoTrace);
  }
}

TEST(Sort, TraceRecordShape) {
  const auto r = sort({8, 1}, measured(4, true));
  const auto records = trace_export(r);
  EXPECT_EQ(records.size(), r.trace->size() * r.rows_per_partition);
  EXPECT_EQ(records.front().cycle, 1u);
  EXPECT_EQ(records.front().op_class, "NOT");
}

TEST(Sort, CycleTotals) {
  const std::vector<Word> v{3, 7, 4, 8, 6, 2, 1, 5};
  const auto m = sort(v, measured());
  EXPECT_EQ(m.measured.total(), 6u * 18u + 40u);
  EXPECT_LE(m.measured.total(), 2u * 192u);
  EXPECT_GE(2u * m.measured.total(), 192u);
  EXPECT_EQ(m.stats, m.measured);

  const auto p = sort(v, SortConfig{});
  EXPECT_EQ(p.stats.total(), 192u);
  EXPECT_EQ(p.perf.total_cycles, 192u);
  EXPECT_EQ(p.measured, m.measured);
}
