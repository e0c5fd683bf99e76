// SPDX-License-Identifier: Apache-2.0
#pragma once

// Bit-level model of one SRAM compute partition.
//
// Rows and columns are 1-indexed. Row 1 permanently holds logic 0 and row 2
// logic 1; they are the only way to obtain NOT (NOR with the zeros row) and
// COPY (AND with the ones row), since a cycle always activates exactly two
// distinct wordlines. Column 1 holds the most significant bit of a stored
// word.
//
// Internally each row is a mask with column c at bit (width - c), so a row's
// mask is numerically equal to the unsigned word it stores.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imcsort/error.hpp"

namespace imcsort {

using RowId = std::uint32_t;
using ColId = std::uint32_t;
using Word = std::uint64_t;

inline constexpr RowId kZerosRow = 1;
inline constexpr RowId kOnesRow = 2;
inline constexpr RowId kRowA = 3;
inline constexpr RowId kRowB = 4;
inline constexpr RowId kFirstWorkingRow = 5;
inline constexpr RowId kMinHeight = 5;
inline constexpr ColId kMaxWidth = 64;

enum class Gate : std::uint8_t { And, Nor };

// Accounting category of one cycle.
enum class OpClass : std::uint8_t { Nor, Not, And, Copy };

inline const char* to_string(Gate g) { return g == Gate::And ? "AND" : "NOR"; }

inline const char* to_string(OpClass c) {
  switch (c) {
    case OpClass::Nor: return "NOR";
    case OpClass::Not: return "NOT";
    case OpClass::And: return "AND";
    case OpClass::Copy: return "COPY";
  }
  return "?";
}

/// Writeback selector, one per cycle. ShiftRight moves every gate output one
/// column to the right and drives column 1 with 0; BroadcastFrom(j) writes
/// the gate output of column j into every column.
struct WritebackMode {
  enum class Kind : std::uint8_t { SameColumn, ShiftRight, BroadcastFrom };

  Kind kind = Kind::SameColumn;
  ColId source_col = 0;  // only meaningful for BroadcastFrom

  static constexpr WritebackMode same() { return {Kind::SameColumn, 0}; }
  static constexpr WritebackMode shift_right() { return {Kind::ShiftRight, 0}; }
  static constexpr WritebackMode broadcast_from(ColId col) { return {Kind::BroadcastFrom, col}; }

  friend bool operator==(const WritebackMode&, const WritebackMode&) = default;
};

struct Instruction {
  Gate gate = Gate::And;
  RowId src_a = 0;
  RowId src_b = 0;
  RowId dest = 0;
  WritebackMode writeback = WritebackMode::same();

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

inline Instruction make_and(RowId a, RowId b, RowId dest, WritebackMode wb = WritebackMode::same()) {
  return {Gate::And, a, b, dest, wb};
}
inline Instruction make_nor(RowId a, RowId b, RowId dest, WritebackMode wb = WritebackMode::same()) {
  return {Gate::Nor, a, b, dest, wb};
}
inline Instruction make_not(RowId src, RowId dest, WritebackMode wb = WritebackMode::same()) {
  return {Gate::Nor, src, kZerosRow, dest, wb};
}
inline Instruction make_copy(RowId src, RowId dest, WritebackMode wb = WritebackMode::same()) {
  return {Gate::And, src, kOnesRow, dest, wb};
}

inline OpClass op_class(const Instruction& in) {
  if (in.gate == Gate::Nor) {
    return (in.src_a == kZerosRow || in.src_b == kZerosRow) ? OpClass::Not : OpClass::Nor;
  }
  return (in.src_a == kOnesRow || in.src_b == kOnesRow) ? OpClass::Copy : OpClass::And;
}

inline std::string to_string(const WritebackMode& wb) {
  switch (wb.kind) {
    case WritebackMode::Kind::SameColumn: return "same";
    case WritebackMode::Kind::ShiftRight: return "shift";
    case WritebackMode::Kind::BroadcastFrom: return "bcast," + std::to_string(wb.source_col);
  }
  return "?";
}

inline std::string to_string(const Instruction& in) {
  return std::string(to_string(in.gate)) + " r" + std::to_string(in.src_a) + " r" +
         std::to_string(in.src_b) + " -> r" + std::to_string(in.dest) + " " + to_string(in.writeback);
}

/// Returns a description of the first invariant the instruction breaks for an
/// array of the given geometry, or nothing when it is well formed.
inline std::optional<std::string> find_violation(const Instruction& in, ColId width, RowId height) {
  auto in_range = [&](RowId r) { return r >= 1 && r <= height; };
  if (!in_range(in.src_a) || !in_range(in.src_b) || !in_range(in.dest)) {
    return "row index out of range [1, " + std::to_string(height) + "]";
  }
  if (in.src_a == in.src_b) return "sources must be two distinct rows";
  if (in.dest == in.src_a || in.dest == in.src_b) return "destination equals a source row";
  if (in.dest == kZerosRow || in.dest == kOnesRow) return "destination is a constant row";
  if (in.writeback.kind == WritebackMode::Kind::BroadcastFrom &&
      (in.writeback.source_col < 1 || in.writeback.source_col > width)) {
    return "broadcast column out of range [1, " + std::to_string(width) + "]";
  }
  return std::nullopt;
}

class ArrayState {
 public:
  ArrayState(ColId width, RowId height) : width_(width), height_(height) {
    if (width < 1 || width > kMaxWidth) {
      throw Error(ErrorKind::DimensionTooSmall,
                  "width must be in [1, " + std::to_string(kMaxWidth) + "], got " + std::to_string(width));
    }
    if (height < kMinHeight) {
      throw Error(ErrorKind::DimensionTooSmall,
                  "height must be at least " + std::to_string(kMinHeight) + ", got " + std::to_string(height));
    }
    rows_.assign(height, 0);
    rows_[kOnesRow - 1] = mask();
  }

  ColId width() const noexcept { return width_; }
  RowId height() const noexcept { return height_; }

  Word mask() const noexcept { return width_ == 64 ? ~Word{0} : ((Word{1} << width_) - 1); }

  Word row_bits(RowId row) const {
    check_row(row);
    return rows_[row - 1];
  }

  bool bit(RowId row, ColId col) const {
    if (col < 1 || col > width_) {
      throw Error(ErrorKind::ColumnOutOfRange, "column " + std::to_string(col));
    }
    return (row_bits(row) >> (width_ - col)) & 1U;
  }

  /// MSB-first text of a row, e.g. "1000".
  std::string row_string(RowId row) const {
    const Word bits = row_bits(row);
    std::string s(width_, '0');
    for (ColId c = 1; c <= width_; ++c) {
      if ((bits >> (width_ - c)) & 1U) s[c - 1] = '1';
    }
    return s;
  }

  void load_value(RowId row, Word value) {
    check_row(row);
    if (row == kZerosRow || row == kOnesRow) {
      throw Error(ErrorKind::ConstantRowWrite, "row " + std::to_string(row) + " is a constant row");
    }
    if ((value & ~mask()) != 0) {
      throw Error(ErrorKind::ValueOutOfRange,
                  std::to_string(value) + " does not fit in " + std::to_string(width_) + " bits");
    }
    rows_[row - 1] = value;
  }

  Word read_value(RowId row) const { return row_bits(row); }

  void execute(const Instruction& in) { execute_from(*this, in); }

  /// Executes `in` with the operand rows sensed in `source` and the result
  /// written into this array. Used for the inter-partition leg of a transfer,
  /// where the temporary row belongs to another partition's column slice.
  void execute_from(const ArrayState& source, const Instruction& in) {
    if (source.width_ != width_) {
      throw Error(ErrorKind::InvalidInstruction, "partition widths differ");
    }
    if (auto v = find_violation(in, width_, std::min(height_, source.height_))) {
      throw Error(ErrorKind::InvalidInstruction, *v + " in '" + to_string(in) + "'");
    }
    const Word a = source.rows_[in.src_a - 1];
    const Word b = source.rows_[in.src_b - 1];
    const Word g = in.gate == Gate::And ? (a & b) : (~(a | b) & mask());
    Word out = 0;
    switch (in.writeback.kind) {
      case WritebackMode::Kind::SameColumn:
        out = g;
        break;
      case WritebackMode::Kind::ShiftRight:
        out = g >> 1;
        break;
      case WritebackMode::Kind::BroadcastFrom:
        out = ((g >> (width_ - in.writeback.source_col)) & 1U) ? mask() : 0;
        break;
    }
    rows_[in.dest - 1] = out;
  }

  friend bool operator==(const ArrayState&, const ArrayState&) = default;

 private:
  void check_row(RowId row) const {
    if (row < 1 || row > height_) {
      throw Error(ErrorKind::RowOutOfRange,
                  "row " + std::to_string(row) + " not in [1, " + std::to_string(height_) + "]");
    }
  }

  ColId width_;
  RowId height_;
  std::vector<Word> rows_;
};

}  // namespace imcsort
