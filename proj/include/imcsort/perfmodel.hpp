// SPDX-License-Identifier: Apache-2.0
#pragma once

// Latency / throughput / footprint reporting, analytic (published constants)
// and measured (counted cycles).

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>

#include "imcsort/error.hpp"
#include "imcsort/microcode.hpp"
#include "imcsort/sortnet.hpp"

namespace imcsort {

enum class AccountingMode { Paper, Measured };

inline const char* to_string(AccountingMode m) { return m == AccountingMode::Paper ? "paper" : "measured"; }

inline constexpr double kDefaultTopNs = 0.55;

// Published 4-bit CAS block: 28 cycles.
inline constexpr CycleStats kPublishedCas4{14, 8, 3, 3, 0};
// Published partition geometry for the 4-bit layout (4 x 22 cells).
inline constexpr RowId kPublishedPartitionRows = 22;

struct PerfReport {
  AccountingMode mode = AccountingMode::Paper;
  std::size_t n = 0;
  ColId width = 0;
  std::size_t partitions = 0;
  RowId rows_per_partition = 0;
  CycleStats stats;
  std::size_t total_cycles = 0;
  std::size_t cas_cycles = 0;
  double t_op_ns = 0.0;
  double latency_ns = 0.0;
  double throughput_gops = 0.0;  // micro-operations per ns
  double frequency_ghz = 0.0;
  std::size_t memory_cells = 0;
  double cas_latency_ns = 0.0;
};

namespace detail {

inline void require_t_op(double t_op) {
  if (!(t_op > 0.0) || !std::isfinite(t_op)) {
    throw Error(ErrorKind::InvalidConfig, "t_op must be a positive number of nanoseconds");
  }
}

inline PerfReport finish_report(PerfReport r) {
  r.total_cycles = r.stats.total();
  r.latency_ns = static_cast<double>(r.total_cycles) * r.t_op_ns;
  r.throughput_gops = static_cast<double>(r.total_cycles) / r.latency_ns;
  r.frequency_ghz = 1.0 / r.t_op_ns;
  r.memory_cells = r.partitions * r.rows_per_partition * r.width;
  r.cas_latency_ns = static_cast<double>(r.cas_cycles) * r.t_op_ns;
  return r;
}

}  // namespace detail

/// Op-class breakdown of one CAS block as charged by the analytic model:
/// the published constants at width 4, the compiled program elsewhere.
inline CycleStats paper_cas_stats(ColId width) {
  if (width == 4) return kPublishedCas4;
  return classify_cycles(compile_cas(width));
}

inline RowId paper_partition_rows(ColId width) {
  if (width == 4) return kPublishedPartitionRows;
  return compile_cas(width).total_rows;
}

inline PerfReport paper_model(std::size_t n, ColId width, double t_op = kDefaultTopNs) {
  require_network_size(n);
  detail::require_t_op(t_op);
  if (width == 0) throw Error(ErrorKind::WidthZero, "width must be at least 1");
  const SortingNetwork net = build_bitonic(n);
  const PartitionPlan plan = plan_partitions(net);
  const CycleStats cas = paper_cas_stats(width);

  PerfReport r;
  r.mode = AccountingMode::Paper;
  r.n = n;
  r.width = width;
  r.partitions = plan.partitions;
  r.rows_per_partition = paper_partition_rows(width);
  r.stats = cas.scaled(net.stages.size());
  r.stats.transfer_cycles = paper_extra_cycles(plan);
  r.cas_cycles = cas.total();
  r.t_op_ns = t_op;
  return detail::finish_report(r);
}

/// Applies the same arithmetic to counted cycles from an engine run.
inline PerfReport measured_model(const CycleStats& stats, const PartitionPlan& plan, ColId width, double t_op,
                                 RowId rows_per_partition, std::size_t cas_cycles) {
  detail::require_t_op(t_op);
  if (stats.total() == 0) throw Error(ErrorKind::InvalidStats, "measured cycle count is zero");
  PerfReport r;
  r.mode = AccountingMode::Measured;
  r.n = plan.n;
  r.width = width;
  r.partitions = plan.partitions;
  r.rows_per_partition = rows_per_partition;
  r.stats = stats;
  r.cas_cycles = cas_cycles;
  r.t_op_ns = t_op;
  return detail::finish_report(r);
}

/// Truncates to the given number of decimals, the way a results table prints
/// 1.818... as 1.8 or 1.81.
inline double truncate_to(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::floor(x * scale + 1e-9) / scale;
}

struct BaselineSpec {
  std::string name;
  std::optional<double> latency_ns;
  std::optional<double> cycles;
  std::string source;
};

struct Comparison {
  std::string baseline;
  std::string source;
  std::optional<double> latency_ratio;  // baseline / proposed; > 1 means faster
  std::optional<double> cycle_ratio;
};

inline Comparison compare(const PerfReport& report, const BaselineSpec& baseline) {
  if (!baseline.latency_ns && !baseline.cycles) {
    throw Error(ErrorKind::MissingBaselineField, "baseline '" + baseline.name + "' has neither latency_ns nor cycles");
  }
  if ((baseline.latency_ns && !(*baseline.latency_ns > 0.0)) || (baseline.cycles && !(*baseline.cycles > 0.0))) {
    throw Error(ErrorKind::InvalidConfig, "baseline values must be positive");
  }
  if (report.total_cycles == 0 || !(report.latency_ns > 0.0)) {
    throw Error(ErrorKind::InvalidStats, "report has no cycles");
  }
  Comparison c;
  c.baseline = baseline.name;
  c.source = baseline.source;
  if (baseline.latency_ns) c.latency_ratio = *baseline.latency_ns / report.latency_ns;
  if (baseline.cycles) c.cycle_ratio = *baseline.cycles / static_cast<double>(report.total_cycles);
  return c;
}

}  // namespace imcsort
