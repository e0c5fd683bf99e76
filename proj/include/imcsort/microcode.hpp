// SPDX-License-Identifier: Apache-2.0
#pragma once

// Compare-and-swap microcode: compilation of a k-bit CAS block into a
// two-input bitline program, row allocation, and op-class accounting.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "imcsort/bitcell_array.hpp"
#include "imcsort/error.hpp"

namespace imcsort {

/// One instruction per cycle. Cycles are 1-based in reporting; `compare_end`
/// and `mux_end` count instructions, so the compare phase is cycles
/// [1, compare_end] and the mux phase (compare_end, mux_end]. The remaining
/// two instructions are the swap writes: row 4 (max), then row 3 (min).
struct MicroProgram {
  ColId width = 0;
  std::vector<Instruction> instructions;
  std::size_t compare_end = 0;
  std::size_t mux_end = 0;
  RowId row_a = kRowA;
  RowId row_b = kRowB;
  RowId select_row = 0;
  RowId select_complement_row = 0;
  RowId total_rows = kMinHeight;

  std::size_t size() const noexcept { return instructions.size(); }

  friend bool operator==(const MicroProgram&, const MicroProgram&) = default;
};

struct CycleStats {
  std::size_t nor_cycles = 0;
  std::size_t not_cycles = 0;
  std::size_t and_cycles = 0;
  std::size_t copy_cycles = 0;
  std::size_t transfer_cycles = 0;

  std::size_t total() const noexcept {
    return nor_cycles + not_cycles + and_cycles + copy_cycles + transfer_cycles;
  }

  // Inter-stage transfers are COPY operations; this is the COPY figure as an
  // op-class table reports it.
  std::size_t copy_column() const noexcept { return copy_cycles + transfer_cycles; }

  void add(OpClass c, std::size_t count = 1) {
    switch (c) {
      case OpClass::Nor: nor_cycles += count; break;
      case OpClass::Not: not_cycles += count; break;
      case OpClass::And: and_cycles += count; break;
      case OpClass::Copy: copy_cycles += count; break;
    }
  }

  CycleStats& operator+=(const CycleStats& o) {
    nor_cycles += o.nor_cycles;
    not_cycles += o.not_cycles;
    and_cycles += o.and_cycles;
    copy_cycles += o.copy_cycles;
    transfer_cycles += o.transfer_cycles;
    return *this;
  }

  CycleStats scaled(std::size_t k) const {
    return {nor_cycles * k, not_cycles * k, and_cycles * k, copy_cycles * k, transfer_cycles * k};
  }

  friend bool operator==(const CycleStats&, const CycleStats&) = default;
};

inline CycleStats classify_cycles(const MicroProgram& program) {
  CycleStats stats;
  for (const auto& in : program.instructions) stats.add(op_class(in));
  return stats;
}

/// Structural audit: every instruction invariant, the phase markers, the swap
/// writes and the select-row metadata. Returns one message per violation.
inline std::vector<std::string> audit_program(const MicroProgram& p) {
  std::vector<std::string> out;
  if (p.width < 1 || p.width > kMaxWidth) out.push_back("width out of range");
  if (p.total_rows < kMinHeight) out.push_back("total_rows below minimum height");
  for (std::size_t i = 0; i < p.instructions.size(); ++i) {
    if (auto v = find_violation(p.instructions[i], p.width, p.total_rows)) {
      out.push_back("cycle " + std::to_string(i + 1) + ": " + *v);
    }
  }
  if (!(p.compare_end < p.mux_end && p.mux_end <= p.size())) {
    out.push_back("phase markers must satisfy compare_end < mux_end <= size");
  }
  if (p.size() < 2 || p.instructions[p.size() - 2].dest != kRowB || p.instructions.back().dest != kRowA) {
    out.push_back("last two instructions must write row 4 then row 3");
  }
  if (p.select_row == p.select_complement_row || p.select_row < kFirstWorkingRow ||
      p.select_complement_row < kFirstWorkingRow || p.select_row > p.total_rows ||
      p.select_complement_row > p.total_rows) {
    out.push_back("select rows must be two distinct working rows");
  }
  return out;
}

namespace detail {

class FreshRows {
 public:
  RowId next() { return next_++; }
  RowId used_through() const { return next_ - 1; }

 private:
  RowId next_ = kFirstWorkingRow;
};

}  // namespace detail

/// Compiles a width-bit compare-and-swap block.
///
/// Compare phase. Per column, gt = A & ~B and lt = ~A & B. The result
/// s = [A > B] satisfies, scanning from the LSB (column k) toward the MSB,
///   R_k = gt_k,   R_c = gt_c | (~lt_c & R_{c+1}),   s = R_1.
/// The recurrence is carried in complemented form, nR_c = NOR(gt_c, NOR(lt_c,
/// nR_{c+1})), so each step is two NOR cycles; the second one broadcasts
/// column c so that column c-1 sees it on the next step. Finishing with
/// s = NOT(nR_1) and ~s = NOT(s) leaves the select row and its complement in
/// the two rows that close the compare phase.
///
/// Mux phase. With s and ~s broadcast across the row,
///   min = NOR(NOR(A, s), NOR(B, ~s)),  max = NOR(NOR(A, ~s), NOR(B, s)),
/// so four NOR cycles prepare the operands and the swap cycles write max into
/// row 4 and then min into row 3.
///
/// Every instruction writes a fresh row; pass reuse = true to fold the
/// program through the liveness allocator.
inline MicroProgram allocate_rows(const MicroProgram& program, bool reuse);

inline constexpr ColId kPinnedSelectWidth = 4;
inline constexpr RowId kPinnedSelectRow = 21;

inline MicroProgram compile_cas(ColId width, bool reuse = false) {
  if (width == 0) throw Error(ErrorKind::WidthZero, "CAS width must be at least 1");
  if (width > kMaxWidth) throw Error(ErrorKind::ValueOutOfRange, "CAS width exceeds 64");

  MicroProgram p;
  p.width = width;
  detail::FreshRows rows;
  auto emit = [&](Instruction in) {
    p.instructions.push_back(in);
    return in.dest;
  };

  const RowId not_b = emit(make_not(kRowB, rows.next()));
  const RowId gt = emit(make_and(kRowA, not_b, rows.next()));
  const RowId lt = emit(make_nor(kRowA, not_b, rows.next()));
  RowId not_r = emit(make_not(gt, rows.next(), WritebackMode::broadcast_from(width)));
  for (ColId c = width - 1; c >= 1; --c) {
    const RowId keep = emit(make_nor(lt, not_r, rows.next()));
    not_r = emit(make_nor(gt, keep, rows.next(), WritebackMode::broadcast_from(c)));
  }
  // The 4-bit layout keeps its select pair in rows 21/22; other widths put it
  // right after the compare rows.
  const bool pinned = width == kPinnedSelectWidth;
  const RowId s = emit(make_not(not_r, pinned ? kPinnedSelectRow : rows.next()));
  const RowId not_s = emit(make_not(s, pinned ? kPinnedSelectRow + 1 : rows.next()));
  p.compare_end = p.size();
  p.select_row = s;
  p.select_complement_row = not_s;

  const RowId min_a = emit(make_nor(kRowA, s, rows.next()));
  const RowId max_b = emit(make_nor(kRowB, s, rows.next()));
  const RowId min_b = emit(make_nor(kRowB, not_s, rows.next()));
  const RowId max_a = emit(make_nor(kRowA, not_s, rows.next()));
  p.mux_end = p.size();

  emit(make_nor(max_a, max_b, kRowB));
  emit(make_nor(min_a, min_b, kRowA));

  p.total_rows = std::max({kMinHeight, rows.used_through(), not_s});
  return reuse ? allocate_rows(p, true) : p;
}

/// Reassigns working-row destinations (rows >= 5). Rows 1-4 keep their
/// meaning. Without reuse every defining instruction gets the next fresh row,
/// except the select pair, which keeps its rows.
/// With reuse, a value is live from its defining cycle to its last read, and
/// the lowest-numbered dead row is taken for each new definition. A row read
/// in the same cycle it dies is released only after that cycle's destination
/// is chosen, so a destination never aliases its own sources. The values in
/// the select rows are held live through the end of the compare phase.
inline MicroProgram allocate_rows(const MicroProgram& program, bool reuse) {
  const auto& code = program.instructions;
  const std::size_t n = code.size();
  auto working = [](RowId r) { return r >= kFirstWorkingRow; };

  // Reaching definition of each working-row read; definitions are identified
  // by the index of their instruction.
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> last_use(n, kNone);
  std::vector<std::pair<std::size_t, std::size_t>> src_def(n, {kNone, kNone});
  std::map<RowId, std::size_t> current;
  std::map<RowId, std::size_t> at_compare_end;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == program.compare_end) at_compare_end = current;
    const auto& in = code[i];
    auto resolve = [&](RowId r) -> std::size_t {
      if (!working(r)) return kNone;
      auto it = current.find(r);
      if (it == current.end()) {
        throw Error(ErrorKind::InvalidProgram,
                    "cycle " + std::to_string(i + 1) + " reads row " + std::to_string(r) + " before it is written");
      }
      last_use[it->second] = i;
      return it->second;
    };
    src_def[i] = {resolve(in.src_a), resolve(in.src_b)};
    if (working(in.dest)) current[in.dest] = i;
  }
  if (program.compare_end >= n) at_compare_end = current;
  for (RowId meta : {program.select_row, program.select_complement_row}) {
    if (auto it = at_compare_end.find(meta); it != at_compare_end.end() && program.compare_end > 0) {
      std::size_t& lu = last_use[it->second];
      if (lu == kNone || lu < program.compare_end - 1) lu = program.compare_end - 1;
    }
  }

  MicroProgram out = program;
  std::vector<RowId> phys(n, 0);
  std::set<RowId> free_rows;
  RowId next_fresh = kFirstWorkingRow;
  RowId high_water = kRowB;
  std::map<RowId, RowId> phys_at_compare_end;

  std::map<std::size_t, RowId> pinned;  // defining instruction -> row
  if (!reuse) {
    for (RowId meta : {program.select_row, program.select_complement_row}) {
      if (auto it = at_compare_end.find(meta); it != at_compare_end.end()) pinned[it->second] = meta;
    }
  }
  auto is_pinned_row = [&](RowId r) {
    return std::any_of(pinned.begin(), pinned.end(), [&](const auto& kv) { return kv.second == r; });
  };

  auto take_row = [&]() {
    if (reuse && !free_rows.empty()) {
      RowId r = *free_rows.begin();
      free_rows.erase(free_rows.begin());
      return r;
    }
    while (is_pinned_row(next_fresh)) ++next_fresh;
    return next_fresh++;
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (i == program.compare_end) {
      for (auto [virt, def] : at_compare_end) phys_at_compare_end[virt] = phys[def];
    }
    Instruction in = code[i];
    if (src_def[i].first != kNone) in.src_a = phys[src_def[i].first];
    if (src_def[i].second != kNone) in.src_b = phys[src_def[i].second];
    if (working(in.dest)) {
      auto pin = pinned.find(i);
      phys[i] = pin != pinned.end() ? pin->second : take_row();
      in.dest = phys[i];
      high_water = std::max(high_water, in.dest);
    }
    out.instructions[i] = in;

    if (reuse) {
      for (std::size_t def : {src_def[i].first, src_def[i].second}) {
        if (def != kNone && last_use[def] == i) free_rows.insert(phys[def]);
      }
      if (working(code[i].dest) && last_use[i] == kNone) free_rows.insert(phys[i]);
    }
  }
  if (program.compare_end >= n) {
    for (auto [virt, def] : at_compare_end) phys_at_compare_end[virt] = phys[def];
  }

  auto remap = [&](RowId r) {
    auto it = phys_at_compare_end.find(r);
    return it == phys_at_compare_end.end() ? r : it->second;
  };
  out.select_row = remap(program.select_row);
  out.select_complement_row = remap(program.select_complement_row);
  out.total_rows = std::max<RowId>(kMinHeight, high_water);
  return out;
}

struct CasRun {
  Word min = 0;
  Word max = 0;
  std::vector<ArrayState> trace;  // one snapshot after each executed cycle
};

inline ArrayState load_cas_inputs(const MicroProgram& program, Word a, Word b) {
  ArrayState array(program.width, program.total_rows);
  array.load_value(program.row_a, a);
  array.load_value(program.row_b, b);
  return array;
}

inline CasRun run_cas(const MicroProgram& program, Word a, Word b, bool record_trace = true) {
  ArrayState array = load_cas_inputs(program, a, b);
  CasRun run;
  if (record_trace) run.trace.reserve(program.size());
  for (const auto& in : program.instructions) {
    array.execute(in);
    if (record_trace) run.trace.push_back(array);
  }
  run.min = array.read_value(program.row_a);
  run.max = array.read_value(program.row_b);
  return run;
}

/// Runs only the compare phase; the returned array holds the select rows.
inline ArrayState run_compare_phase(const MicroProgram& program, Word a, Word b) {
  ArrayState array = load_cas_inputs(program, a, b);
  for (std::size_t i = 0; i < program.compare_end; ++i) array.execute(program.instructions[i]);
  return array;
}

}  // namespace imcsort
