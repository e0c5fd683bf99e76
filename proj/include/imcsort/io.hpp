// SPDX-License-Identifier: Apache-2.0
#pragma once

// File formats: input vectors, JSON/CSV reports, trace tables, network
// descriptions and baseline configs.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "imcsort/engine.hpp"
#include "imcsort/error.hpp"
#include "imcsort/perfmodel.hpp"
#include "imcsort/sortnet.hpp"

namespace imcsort::io {

using Json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Accepts a JSON array of unsigned integers or whitespace-separated decimals.
inline std::vector<Word> parse_values(const std::string& text) {
  std::size_t first = 0;
  while (first < text.size() && std::isspace(static_cast<unsigned char>(text[first]))) ++first;
  std::vector<Word> out;
  if (first < text.size() && text[first] == '[') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Parse, e.what());
    }
    for (const auto& v : j) {
      if (!v.is_number_unsigned()) throw Error(ErrorKind::Parse, "array entries must be unsigned integers");
      out.push_back(v.get<Word>());
    }
    return out;
  }
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw Error(ErrorKind::Parse, "not an unsigned integer: '" + tok + "'");
    }
    try {
      out.push_back(std::stoull(tok));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "value too large: '" + tok + "'");
    }
  }
  return out;
}

inline Json to_json(const SortingNetwork& net) {
  Json stages = Json::array();
  for (const auto& s : net.stages) {
    Json pairs = Json::array();
    for (const auto& c : s) pairs.push_back({c.lo, c.hi});
    stages.push_back(std::move(pairs));
  }
  return Json{{"n", net.n},
              {"stage_count", net.stages.size()},
              {"comparator_count", net.comparator_count()},
              {"stages", std::move(stages)}};
}

inline Json to_json(const PartitionPlan& plan) {
  Json moves = Json::array();
  for (std::size_t s = 1; s < plan.moves.size(); ++s) {
    Json list = Json::array();
    for (const auto& m : plan.moves[s]) {
      list.push_back({{"wire", m.wire},
                      {"from", {m.from.partition, m.from.row}},
                      {"to", {m.to.partition, m.to.row}}});
    }
    moves.push_back({{"stage", s}, {"moves", std::move(list)}});
  }
  return Json{{"partitions", plan.partitions},
              {"temp_rows", plan.temp_rows},
              {"provisioning_cycles_per_event", plan.provisioning_cycles_per_event},
              {"provisioning_events", plan.provisioning_events},
              {"paper_extra_cycles", paper_extra_cycles(plan)},
              {"boundaries", std::move(moves)}};
}

inline Json to_json(const CycleStats& s) {
  return Json{{"nor", s.nor_cycles},       {"not", s.not_cycles},
              {"and", s.and_cycles},       {"copy", s.copy_cycles},
              {"transfer", s.transfer_cycles}, {"copy_with_transfers", s.copy_column()},
              {"total", s.total()}};
}

inline Json to_json(const PerfReport& r) {
  return Json{{"mode", to_string(r.mode)},
              {"n", r.n},
              {"width", r.width},
              {"partitions", r.partitions},
              {"rows_per_partition", r.rows_per_partition},
              {"cycles", to_json(r.stats)},
              {"total_cycles", r.total_cycles},
              {"cas_cycles", r.cas_cycles},
              {"t_op_ns", r.t_op_ns},
              {"latency_ns", r.latency_ns},
              {"cas_latency_ns", r.cas_latency_ns},
              {"throughput_gops", r.throughput_gops},
              {"frequency_ghz", r.frequency_ghz},
              {"memory_cells", r.memory_cells},
              {"rounded",
               {{"latency_ns", truncate_to(r.latency_ns, 1)},
                {"throughput_gops", truncate_to(r.throughput_gops, 1)},
                {"frequency_ghz", truncate_to(r.frequency_ghz, 2)}}}};
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

inline std::string report_csv_header() {
  return "mode,n,width,partitions,rows_per_partition,nor,not,and,copy,transfer,total_cycles,cas_cycles,t_op_ns,"
         "latency_ns,cas_latency_ns,throughput_gops,frequency_ghz,memory_cells\n";
}

inline std::string report_csv_row(const PerfReport& r) {
  std::ostringstream os;
  os << to_string(r.mode) << ',' << r.n << ',' << r.width << ',' << r.partitions << ',' << r.rows_per_partition
     << ',' << r.stats.nor_cycles << ',' << r.stats.not_cycles << ',' << r.stats.and_cycles << ','
     << r.stats.copy_cycles << ',' << r.stats.transfer_cycles << ',' << r.total_cycles << ',' << r.cas_cycles << ','
     << format_double(r.t_op_ns) << ',' << format_double(r.latency_ns) << ',' << format_double(r.cas_latency_ns)
     << ',' << format_double(r.throughput_gops) << ',' << format_double(r.frequency_ghz) << ',' << r.memory_cells
     << '\n';
  return os.str();
}

inline std::string trace_csv(const std::vector<TraceRecord>& records) {
  std::string out = "cycle,partition,row,bits,op_class\n";
  for (const auto& r : records) {
    out += std::to_string(r.cycle) + ',' + std::to_string(r.partition) + ',' + std::to_string(r.row) + ',' + r.bits +
           ',' + r.op_class + '\n';
  }
  return out;
}

inline Json layout_json(const std::vector<Location>& layout) {
  Json j = Json::array();
  for (const auto& at : layout) j.push_back({at.partition, at.row});
  return j;
}

inline Json trace_json(const SortResult& result) {
  if (!result.trace) throw Error(ErrorKind::NoTrace, "sort was run without emit_trace");
  Json cycles = Json::array();
  for (const auto& c : *result.trace) {
    Json parts = Json::array();
    for (std::size_t p = 0; p < c.partitions.size(); ++p) {
      Json rows = Json::array();
      for (RowId r = 1; r <= c.partitions[p].height(); ++r) rows.push_back(c.partitions[p].row_string(r));
      const auto& op = c.ops[p];
      parts.push_back({{"partition", p},
                       {"op_class", op ? to_string(op_class(*op)) : "IDLE"},
                       {"instruction", op ? to_string(*op) : ""},
                       {"rows", std::move(rows)}});
    }
    cycles.push_back({{"cycle", c.cycle},
                      {"stage", c.stage},
                      {"phase", c.phase == Phase::Cas ? "cas" : "transfer"},
                      {"pc", c.pc},
                      {"partitions", std::move(parts)}});
  }
  return Json{{"partitions", result.partitions},
              {"rows_per_partition", result.rows_per_partition},
              {"final_layout", layout_json(result.final_layout)},
              {"cycles", std::move(cycles)}};
}

inline Json to_json(const SortResult& r) {
  Json j{{"sorted", r.sorted},
         {"cycles", to_json(r.stats)},
         {"measured_cycles", to_json(r.measured)},
         {"values_moved", r.values_moved},
         {"final_layout", layout_json(r.final_layout)},
         {"report", to_json(r.perf)}};
  return j;
}

inline BaselineSpec baseline_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::Parse, "baseline must be a JSON object");
  BaselineSpec b;
  b.name = j.value("name", std::string("baseline"));
  b.source = j.value("source", std::string());
  auto number = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key)) return std::nullopt;
    if (!j[key].is_number()) throw Error(ErrorKind::Parse, std::string(key) + " must be a number");
    return j[key].get<double>();
  };
  b.latency_ns = number("latency_ns");
  b.cycles = number("cycles");
  return b;
}

inline constexpr const char* kComparisonNote =
    "baseline figures are user-supplied; the published 3.4x and 5x latency-reduction claims disagree with each "
    "other and are not reproduced here";

inline Json to_json(const Comparison& c) {
  Json j{{"baseline", c.baseline}, {"source", c.source}};
  j["latency_ratio"] = c.latency_ratio ? Json(*c.latency_ratio) : Json(nullptr);
  j["cycle_ratio"] = c.cycle_ratio ? Json(*c.cycle_ratio) : Json(nullptr);
  j["note"] = kComparisonNote;
  return j;
}

/// Bar-chart data: one row per metric with proposed and baseline values.
inline std::string comparison_csv(const PerfReport& r, const BaselineSpec& b, const Comparison& c) {
  std::string out = "metric,proposed,baseline,ratio\n";
  if (b.cycles) {
    out += "cycles," + std::to_string(r.total_cycles) + ',' + format_double(*b.cycles) + ',' +
           format_double(*c.cycle_ratio) + '\n';
  }
  if (b.latency_ns) {
    out += "latency_ns," + format_double(r.latency_ns) + ',' + format_double(*b.latency_ns) + ',' +
           format_double(*c.latency_ratio) + '\n';
  }
  return out;
}

}  // namespace imcsort::io
