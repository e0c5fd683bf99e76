// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "imcsort/bitcell_array.hpp"

using namespace imcsort;

namespace {

ArrayState with_rows(ColId width, RowId height, std::initializer_list<std::pair<RowId, Word>> rows) {
  ArrayState a(width, height);
  for (auto [r, v] : rows) a.load_value(r, v);
  return a;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an imcsort::Error";
  return ErrorKind::Parse;
}

}  // namespace

TEST(BitcellArray, Create4x22) {
  ArrayState a(4, 22);
  EXPECT_EQ(a.width(), 4u);
  EXPECT_EQ(a.height(), 22u);
  EXPECT_EQ(a.row_string(2), "1111");
  for (RowId r = 1; r <= 22; ++r) {
    if (r != 2) EXPECT_EQ(a.row_string(r), "0000") << "row " << r;
  }
}

TEST(BitcellArray, CreateMinimal) {
  ArrayState a(1, 5);
  EXPECT_EQ(a.row_string(2), "1");
  EXPECT_EQ(a.read_value(1), 0u);
}

TEST(BitcellArray, CreateTooSmall) {
  EXPECT_EQ(kind_of([] { ArrayState(4, 4); }), ErrorKind::DimensionTooSmall);
  EXPECT_EQ(kind_of([] { ArrayState(0, 22); }), ErrorKind::DimensionTooSmall);
}

TEST(BitcellArray, LoadValueIsMsbFirst) {
  ArrayState a(4, 22);
  a.load_value(3, 8);
  EXPECT_EQ(a.row_string(3), "1000");
  EXPECT_TRUE(a.bit(3, 1));
  EXPECT_FALSE(a.bit(3, 4));
  EXPECT_EQ(a.read_value(3), 8u);
  a.load_value(5, 0);
  EXPECT_EQ(a.row_string(5), "0000");
  a.load_value(4, 1);
  EXPECT_EQ(a.row_string(4), "0001");
  EXPECT_EQ(a.read_value(4), 1u);
}

TEST(BitcellArray, ReadConstantRows) {
  ArrayState a(4, 22);
  EXPECT_EQ(a.read_value(1), 0u);
  EXPECT_EQ(a.read_value(2), 15u);
}

TEST(BitcellArray, LoadErrors) {
  ArrayState a(4, 22);
  EXPECT_EQ(kind_of([&] { a.load_value(1, 3); }), ErrorKind::ConstantRowWrite);
  EXPECT_EQ(kind_of([&] { a.load_value(2, 3); }), ErrorKind::ConstantRowWrite);
  EXPECT_EQ(kind_of([&] { a.load_value(3, 16); }), ErrorKind::ValueOutOfRange);
  EXPECT_EQ(kind_of([&] { a.read_value(23); }), ErrorKind::RowOutOfRange);
  EXPECT_EQ(kind_of([&] { a.read_value(0); }), ErrorKind::RowOutOfRange);
}

TEST(BitcellArray, ExecuteExamples) {
  auto a = with_rows(4, 8, {{3, 0b1100}, {4, 0b1010}});
  a.execute(make_and(3, 4, 5));
  EXPECT_EQ(a.row_string(5), "1000");

  a.load_value(3, 0b1000);
  a.execute(make_not(3, 6));
  EXPECT_EQ(a.row_string(6), "0111");

  a.load_value(3, 0b1011);
  a.execute(make_copy(3, 7, WritebackMode::broadcast_from(3)));
  EXPECT_EQ(a.row_string(7), "1111");

  a.load_value(3, 0b1010);
  a.execute(make_copy(3, 8, WritebackMode::shift_right()));
  EXPECT_EQ(a.row_string(8), "0101");
}

TEST(BitcellArray, ExecuteRejectsBadInstructions) {
  ArrayState a(4, 8);
  auto bad = [&](Instruction in) { return kind_of([&] { a.execute(in); }); };
  EXPECT_EQ(bad(make_and(3, 4, 1)), ErrorKind::InvalidInstruction);
  EXPECT_EQ(bad(make_and(3, 4, 2)), ErrorKind::InvalidInstruction);
  EXPECT_EQ(bad(make_and(3, 4, 3)), ErrorKind::InvalidInstruction);
  EXPECT_EQ(bad(make_and(3, 3, 5)), ErrorKind::InvalidInstruction);
  EXPECT_EQ(bad(make_and(3, 9, 5)), ErrorKind::InvalidInstruction);
  EXPECT_EQ(bad(make_and(3, 4, 5, WritebackMode::broadcast_from(5))), ErrorKind::InvalidInstruction);
  EXPECT_EQ(bad(make_and(3, 4, 5, WritebackMode::broadcast_from(0))), ErrorKind::InvalidInstruction);
}

TEST(BitcellArray, OpClassDerivation) {
  EXPECT_EQ(op_class(make_nor(3, 4, 5)), OpClass::Nor);
  EXPECT_EQ(op_class(make_not(3, 5)), OpClass::Not);
  EXPECT_EQ(op_class(make_nor(kZerosRow, 3, 5)), OpClass::Not);
  EXPECT_EQ(op_class(make_and(3, 4, 5)), OpClass::And);
  EXPECT_EQ(op_class(make_copy(3, 5)), OpClass::Copy);
  EXPECT_EQ(op_class(make_and(kOnesRow, 3, 5)), OpClass::Copy);
  // NOR with the ones row is a plain NOR (always 0), AND with zeros a plain AND.
  EXPECT_EQ(op_class(make_nor(kOnesRow, 3, 5)), OpClass::Nor);
  EXPECT_EQ(op_class(make_and(kZerosRow, 3, 5)), OpClass::And);
}

// Property checks over random rows and random instruction streams.
class BitcellProperties : public ::testing::TestWithParam<ColId> {};

TEST_P(BitcellProperties, GateAlgebra) {
  const ColId width = GetParam();
  std::mt19937_64 rng(1234 + width);
  ArrayState probe(width, 10);
  const Word mask = probe.mask();
  for (int iter = 0; iter < 500; ++iter) {
    const Word x = rng() & mask;
    const Word y = rng() & mask;
    auto a = with_rows(width, 10, {{3, x}, {4, y}});
    a.execute(make_copy(3, 5));
    EXPECT_EQ(a.read_value(5), x);
    a.execute(make_not(3, 6));
    EXPECT_EQ(a.read_value(6), ~x & mask);
    a.execute(make_not(6, 7));
    EXPECT_EQ(a.read_value(7), x);
    a.execute(make_and(3, 4, 8));
    a.execute(make_and(4, 3, 9));
    EXPECT_EQ(a.read_value(8), a.read_value(9));
    EXPECT_EQ(a.read_value(8), x & y);
    a.execute(make_nor(3, 4, 8));
    a.execute(make_nor(4, 3, 9));
    EXPECT_EQ(a.read_value(8), a.read_value(9));
    EXPECT_EQ(a.read_value(8), ~(x | y) & mask);
  }
}

TEST_P(BitcellProperties, RandomStreamsKeepInvariants) {
  const ColId width = GetParam();
  const RowId height = 12;
  std::mt19937_64 rng(99 + width);
  ArrayState a(width, height);
  for (RowId r = 3; r <= height; ++r) a.load_value(r, rng() & a.mask());

  for (int iter = 0; iter < 2000; ++iter) {
    Instruction in;
    in.gate = (rng() & 1) ? Gate::And : Gate::Nor;
    do {
      in.src_a = 1 + rng() % height;
      in.src_b = 1 + rng() % height;
      in.dest = 3 + rng() % (height - 2);
    } while (find_violation(in, width, height));
    switch (rng() % 3) {
      case 0: in.writeback = WritebackMode::same(); break;
      case 1: in.writeback = WritebackMode::shift_right(); break;
      default: in.writeback = WritebackMode::broadcast_from(1 + rng() % width); break;
    }

    const ArrayState before = a;
    ArrayState twin = a;
    a.execute(in);
    twin.execute(in);
    ASSERT_EQ(a, twin);  // determinism

    for (RowId r = 1; r <= height; ++r) {
      if (r != in.dest) ASSERT_EQ(a.row_bits(r), before.row_bits(r)) << "locality, row " << r;
    }
    ASSERT_EQ(a.read_value(kZerosRow), 0u);
    ASSERT_EQ(a.read_value(kOnesRow), a.mask());

    const Word out = a.read_value(in.dest);
    if (in.writeback.kind == WritebackMode::Kind::BroadcastFrom) {
      ASSERT_TRUE(out == 0 || out == a.mask());
    }
    if (in.writeback.kind == WritebackMode::Kind::ShiftRight) {
      ASSERT_FALSE(a.bit(in.dest, 1));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Widths, BitcellProperties, ::testing::Values(1u, 2u, 4u, 7u, 16u, 64u));

TEST(BitcellArray, ExecuteFromReadsRemoteOperands) {
  auto sender = with_rows(4, 8, {{5, 0b0110}});
  ArrayState receiver(4, 8);
  receiver.execute_from(sender, make_copy(5, 3));
  EXPECT_EQ(receiver.read_value(3), 0b0110u);
  EXPECT_EQ(sender.read_value(3), 0u);
}
