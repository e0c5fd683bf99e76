// SPDX-License-Identifier: Apache-2.0
#pragma once

// Cycle-accurate execution of a complete N-input sort across N/2 partitions.
//
// Each stage runs the CAS microprogram in lockstep on every partition. On a
// stage boundary the values that must change partition are moved one at a
// time through a temporary row: the sender copies the value into one of its
// dead working rows (cycle 1) and the receiver copies it from there into the
// row just vacated (cycle 2). Moves that form a cycle among partitions are
// chained: the first value is parked in row 5 of its sender, every following
// value travels through row 6, and the parked value lands last.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "imcsort/bitcell_array.hpp"
#include "imcsort/error.hpp"
#include "imcsort/microcode.hpp"
#include "imcsort/perfmodel.hpp"
#include "imcsort/sortnet.hpp"

namespace imcsort {

inline constexpr RowId kParkRow = kFirstWorkingRow;
inline constexpr RowId kTransitRow = kFirstWorkingRow + 1;

struct SortConfig {
  ColId width = 4;
  AccountingMode mode = AccountingMode::Paper;
  bool reuse_rows = false;
  double t_op = kDefaultTopNs;
  bool emit_trace = false;
};

enum class Phase { Cas, Transfer };

struct TraceCycle {
  std::size_t cycle = 0;  // 1-based
  std::size_t stage = 0;
  Phase phase = Phase::Cas;
  std::size_t pc = 0;  // 1-based program counter during CAS, 0 otherwise
  std::vector<std::optional<Instruction>> ops;  // per partition; empty = idle
  std::vector<ArrayState> partitions;           // state after the cycle
};

struct SortResult {
  std::vector<Word> sorted;
  CycleStats stats;     // per the configured accounting mode
  CycleStats measured;  // always the counted cycles
  PerfReport perf;
  std::optional<std::vector<TraceCycle>> trace;
  std::vector<Location> final_layout;
  std::size_t partitions = 0;
  RowId rows_per_partition = 0;
  std::size_t values_moved = 0;
  std::size_t lockstep_violations = 0;
  std::size_t conservation_violations = 0;
};

/// Stable bubble sort over plain integers; no cycle accounting.
inline std::vector<Word> oracle_sort(std::vector<Word> values) {
  for (std::size_t end = values.size(); end > 1; --end) {
    bool swapped = false;
    for (std::size_t i = 0; i + 1 < end; ++i) {
      if (values[i + 1] < values[i]) {
        std::swap(values[i], values[i + 1]);
        swapped = true;
      }
    }
    if (!swapped) break;
  }
  return values;
}

namespace detail {

class Fabric {
 public:
  Fabric(const SortConfig& cfg, std::size_t partitions, RowId height)
      : cfg_(cfg), arrays_(partitions, ArrayState(cfg.width, height)) {}

  std::vector<ArrayState>& arrays() { return arrays_; }
  const std::vector<ArrayState>& arrays() const { return arrays_; }
  std::size_t cycles() const { return cycle_; }
  std::vector<TraceCycle> take_trace() { return std::move(trace_); }

  void lockstep(const Instruction& in, std::size_t stage, std::size_t pc) {
    for (auto& a : arrays_) a.execute(in);
    record(stage, Phase::Cas, pc, std::vector<std::optional<Instruction>>(arrays_.size(), in));
  }

  // One partition works, the others idle. `from` is the partition whose rows
  // are sensed (the sender's temporary row on the receiving leg).
  void single(std::size_t to, std::size_t from, const Instruction& in, std::size_t stage) {
    arrays_[to].execute_from(arrays_[from], in);
    std::vector<std::optional<Instruction>> ops(arrays_.size());
    ops[to] = in;
    record(stage, Phase::Transfer, 0, std::move(ops));
  }

 private:
  void record(std::size_t stage, Phase phase, std::size_t pc, std::vector<std::optional<Instruction>> ops) {
    ++cycle_;
    if (!cfg_.emit_trace) return;
    trace_.push_back({cycle_, stage, phase, pc, std::move(ops), arrays_});
  }

  const SortConfig& cfg_;
  std::vector<ArrayState> arrays_;
  std::vector<TraceCycle> trace_;
  std::size_t cycle_ = 0;
};

inline std::size_t run_boundary(Fabric& fabric, const std::vector<Move>& moves, std::size_t partitions,
                                std::size_t stage) {
  std::vector<const Move*> into(partitions, nullptr);
  std::vector<char> sends(partitions, 0);
  for (const auto& m : moves) {
    if (into[m.to.partition] || sends[m.from.partition]) {
      throw Error(ErrorKind::InvalidProgram, "partition moves more than one value on a boundary");
    }
    into[m.to.partition] = &m;
    sends[m.from.partition] = 1;
  }
  std::vector<char> done(moves.size(), 0);
  std::size_t cycles = 0;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    if (done[i]) continue;
    const Move& first = moves[i];
    done[i] = 1;
    fabric.single(first.from.partition, first.from.partition, make_copy(first.from.row, kParkRow), stage);
    ++cycles;
    std::size_t cur = first.from.partition;
    while (true) {
      const Move* m = into[cur];
      if (m == nullptr) throw Error(ErrorKind::InvalidProgram, "vacated row never refilled");
      if (m == &first) break;
      done[static_cast<std::size_t>(m - moves.data())] = 1;
      const std::size_t src = m->from.partition;
      fabric.single(src, src, make_copy(m->from.row, kTransitRow), stage);
      fabric.single(cur, src, make_copy(kTransitRow, m->to.row), stage);
      cycles += 2;
      cur = src;
    }
    fabric.single(first.to.partition, first.from.partition, make_copy(kParkRow, first.to.row), stage);
    ++cycles;
  }
  return cycles;
}

inline std::size_t count_multiset_mismatch(const Fabric& fabric, std::vector<Word> expected) {
  std::vector<Word> held;
  for (const auto& a : fabric.arrays()) {
    held.push_back(a.read_value(kRowA));
    held.push_back(a.read_value(kRowB));
  }
  std::sort(held.begin(), held.end());
  std::sort(expected.begin(), expected.end());
  return held == expected ? 0 : 1;
}

}  // namespace detail

inline void validate_sort_input(const std::vector<Word>& values, const SortConfig& cfg) {
  if (cfg.width < 1 || cfg.width > kMaxWidth) {
    throw Error(ErrorKind::InvalidConfig, "width must be in [1, 64]");
  }
  if (!(cfg.t_op > 0.0)) throw Error(ErrorKind::InvalidConfig, "t_op must be positive");
  require_network_size(values.size());
  const Word mask = cfg.width == 64 ? ~Word{0} : ((Word{1} << cfg.width) - 1);
  for (Word v : values) {
    if ((v & ~mask) != 0) {
      throw Error(ErrorKind::ValueOutOfRange,
                  std::to_string(v) + " does not fit in " + std::to_string(cfg.width) + " bits");
    }
  }
}

inline SortResult sort(const std::vector<Word>& values, const SortConfig& cfg) {
  validate_sort_input(values, cfg);
  const std::size_t n = values.size();
  const SortingNetwork net = build_bitonic(n);
  const PartitionPlan plan = plan_partitions(net);
  const MicroProgram program = compile_cas(cfg.width, cfg.reuse_rows);
  const CycleStats cas_stats = classify_cycles(program);
  const RowId height = std::max<RowId>(program.total_rows, kTransitRow);

  detail::Fabric fabric(cfg, plan.partitions, height);
  for (std::size_t w = 0; w < n; ++w) {
    const Location& at = plan.initial_layout[w];
    fabric.arrays()[at.partition].load_value(at.row, values[w]);
  }

  SortResult result;
  result.partitions = plan.partitions;
  result.rows_per_partition = height;
  for (std::size_t s = 0; s < net.stages.size(); ++s) {
    if (s > 0 && !plan.moves[s].empty()) {
      result.measured.transfer_cycles += detail::run_boundary(fabric, plan.moves[s], plan.partitions, s);
      result.values_moved += plan.moves[s].size();
      result.conservation_violations += detail::count_multiset_mismatch(fabric, values);
    }
    for (std::size_t pc = 0; pc < program.size(); ++pc) {
      fabric.lockstep(program.instructions[pc], s, pc + 1);
    }
    result.measured += cas_stats;
    result.conservation_violations += detail::count_multiset_mismatch(fabric, values);
  }

  result.final_layout = plan.final_layout;
  result.sorted.resize(n);
  for (std::size_t w = 0; w < n; ++w) {
    const Location& at = plan.final_layout[w];
    result.sorted[w] = fabric.arrays()[at.partition].read_value(at.row);
  }
  if (fabric.cycles() != result.measured.total()) {
    throw Error(ErrorKind::InvalidProgram, "cycle accounting drifted from executed cycles");
  }

  if (cfg.emit_trace) {
    result.trace = fabric.take_trace();
    for (const auto& c : *result.trace) {
      if (c.phase != Phase::Cas) continue;
      for (const auto& op : c.ops) {
        if (!op || !(*op == program.instructions[c.pc - 1])) ++result.lockstep_violations;
      }
    }
  }

  if (cfg.mode == AccountingMode::Paper) {
    result.perf = paper_model(n, cfg.width, cfg.t_op);
    result.stats = result.perf.stats;
  } else {
    result.stats = result.measured;
    result.perf = measured_model(result.measured, plan, cfg.width, cfg.t_op, height, program.size());
  }
  return result;
}

// ---------------------------------------------------------------------------
// Tabular trace

struct TraceRecord {
  std::size_t cycle = 0;
  std::size_t partition = 0;
  RowId row = 0;
  std::string bits;
  std::string op_class;  // NOR / NOT / AND / COPY, or IDLE
  std::string instruction;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

inline std::vector<TraceRecord> trace_export(const SortResult& result) {
  if (!result.trace) throw Error(ErrorKind::NoTrace, "sort was run without emit_trace");
  std::vector<TraceRecord> out;
  for (const auto& c : *result.trace) {
    for (std::size_t p = 0; p < c.partitions.size(); ++p) {
      const auto& op = c.ops[p];
      const std::string cls = op ? to_string(op_class(*op)) : "IDLE";
      const std::string text = op ? to_string(*op) : "";
      const ArrayState& a = c.partitions[p];
      for (RowId r = 1; r <= a.height(); ++r) out.push_back({c.cycle, p, r, a.row_string(r), cls, text});
    }
  }
  return out;
}

/// Reads the final cycle of a tabular trace back into wire order.
inline std::vector<Word> replay_final_cycle(const std::vector<TraceRecord>& records,
                                            const std::vector<Location>& layout) {
  if (records.empty()) throw Error(ErrorKind::NoTrace, "empty trace");
  const std::size_t last = records.back().cycle;
  std::map<std::pair<std::size_t, RowId>, Word> cells;
  for (const auto& r : records) {
    if (r.cycle != last) continue;
    Word v = 0;
    for (char ch : r.bits) v = (v << 1) | static_cast<Word>(ch == '1');
    cells[{r.partition, r.row}] = v;
  }
  std::vector<Word> out;
  for (const auto& at : layout) out.push_back(cells.at({at.partition, at.row}));
  return out;
}

}  // namespace imcsort
