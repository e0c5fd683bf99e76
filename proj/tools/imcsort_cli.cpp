// SPDX-License-Identifier: Apache-2.0
//
// imcsort: command-line front end for the in-memory sorting simulator.
//
//   imcsort cas 8 1 --width 4
//   imcsort sort --input values.txt --mode measured
//   imcsort netgen -n 8 --format text
//   imcsort trace 8 1 --format csv -o fig.csv
//   imcsort report -n 8
//   imcsort compare --baseline memsort.json
//
// Exit status: 0 success, 2 usage or validation error, 1 internal error.
// Relative --output paths are resolved against $IMCSORT_OUTPUT_DIR when set.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "imcsort/imcsort.hpp"
#include "imcsort/io.hpp"

namespace {

using imcsort::io::Json;

struct Options {
  unsigned width = 4;
  std::size_t n = 8;
  double t_op = imcsort::kDefaultTopNs;
  std::string mode = "paper";
  bool reuse_rows = false;
  std::string input;
  std::string output;
  std::string format = "json";
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> values;
  std::string baseline;
  std::string trace_out;
  std::string program_out;
};

imcsort::AccountingMode parse_mode(const std::string& m) {
  return m == "measured" ? imcsort::AccountingMode::Measured : imcsort::AccountingMode::Paper;
}

imcsort::SortConfig make_config(const Options& o) {
  imcsort::SortConfig cfg;
  cfg.width = o.width;
  cfg.mode = parse_mode(o.mode);
  cfg.reuse_rows = o.reuse_rows;
  cfg.t_op = o.t_op;
  return cfg;
}

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("IMCSORT_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
      return std::filesystem::path(dir) / p;
    }
  }
  return p;
}

void write_file(const std::string& path, const std::string& text) {
  const auto p = resolve_output(path);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw imcsort::Error(imcsort::ErrorKind::InvalidConfig, "cannot write '" + p.string() + "'");
  out << text;
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
  } else {
    write_file(o.output, text);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<imcsort::Word> random_values(std::size_t n, unsigned width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const imcsort::Word mask = width >= 64 ? ~imcsort::Word{0} : ((imcsort::Word{1} << width) - 1);
  std::vector<imcsort::Word> v(n);
  for (auto& x : v) x = rng() & mask;
  return v;
}

// Input precedence: positional values, then --input, then a seeded vector.
std::vector<imcsort::Word> load_values(const Options& o, bool* generated) {
  *generated = false;
  if (!o.values.empty()) return o.values;
  if (!o.input.empty()) return imcsort::io::parse_values(imcsort::io::read_file(o.input));
  *generated = true;
  return random_values(o.n, o.width, o.seed);
}

std::string values_text(const std::vector<imcsort::Word>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s + "\n";
}

int cmd_cas(const Options& o) {
  if (o.values.size() != 2) throw imcsort::Error(imcsort::ErrorKind::InvalidConfig, "cas takes exactly two values");
  imcsort::SortConfig cfg = make_config(o);
  cfg.emit_trace = !o.trace_out.empty();
  const auto result = imcsort::sort(o.values, cfg);
  const auto program = imcsort::compile_cas(o.width, o.reuse_rows);
  const auto select = imcsort::run_compare_phase(program, o.values[0], o.values[1]);

  if (!o.trace_out.empty()) write_file(o.trace_out, imcsort::io::trace_csv(imcsort::trace_export(result)));
  if (!o.program_out.empty()) write_file(o.program_out, imcsort::to_text(program));

  if (o.format == "text") {
    emit(o, "min " + std::to_string(result.sorted[0]) + "\nmax " + std::to_string(result.sorted[1]) + "\ncycles " +
                std::to_string(result.stats.total()) + "\n");
    return 0;
  }
  Json j{{"a", o.values[0]},
         {"b", o.values[1]},
         {"width", o.width},
         {"min", result.sorted[0]},
         {"max", result.sorted[1]},
         {"select_bit", select.read_value(program.select_row) != 0 ? 1 : 0},
         {"mode", o.mode},
         {"cycles", imcsort::io::to_json(result.stats)},
         {"measured_cycles", imcsort::io::to_json(result.measured)},
         {"program_rows", program.total_rows},
         {"compare_end", program.compare_end},
         {"mux_end", program.mux_end}};
  emit(o, dump(j));
  return 0;
}

int cmd_sort(const Options& o) {
  bool generated = false;
  const auto values = load_values(o, &generated);
  const auto result = imcsort::sort(values, make_config(o));
  if (o.format == "text") {
    emit(o, values_text(result.sorted));
  } else if (o.format == "csv") {
    emit(o, imcsort::io::report_csv_header() + imcsort::io::report_csv_row(result.perf));
  } else {
    Json j{{"input", values}};
    if (generated) j["seed"] = o.seed;
    const Json body = imcsort::io::to_json(result);
    for (const auto& [k, v] : body.items()) j[k] = v;
    emit(o, dump(j));
  }
  return 0;
}

int cmd_netgen(const Options& o) {
  const auto net = imcsort::build_bitonic(o.n);
  if (o.format == "text") {
    emit(o, imcsort::to_text(net));
    return 0;
  }
  Json j = imcsort::io::to_json(net);
  j["plan"] = imcsort::io::to_json(imcsort::plan_partitions(net));
  emit(o, dump(j));
  return 0;
}

int cmd_trace(const Options& o) {
  bool generated = false;
  const auto values = load_values(o, &generated);
  imcsort::SortConfig cfg = make_config(o);
  cfg.emit_trace = true;
  const auto result = imcsort::sort(values, cfg);
  if (o.format == "json") {
    emit(o, dump(imcsort::io::trace_json(result)));
  } else {
    emit(o, imcsort::io::trace_csv(imcsort::trace_export(result)));
  }
  return 0;
}

imcsort::PerfReport build_report(const Options& o) {
  if (parse_mode(o.mode) == imcsort::AccountingMode::Paper) return imcsort::paper_model(o.n, o.width, o.t_op);
  imcsort::SortConfig cfg = make_config(o);
  return imcsort::sort(random_values(o.n, o.width, o.seed), cfg).perf;
}

int cmd_report(const Options& o) {
  const auto report = build_report(o);
  if (o.format == "csv") {
    emit(o, imcsort::io::report_csv_header() + imcsort::io::report_csv_row(report));
  } else {
    emit(o, dump(imcsort::io::to_json(report)));
  }
  return 0;
}

int cmd_compare(const Options& o) {
  if (o.baseline.empty()) {
    throw imcsort::Error(imcsort::ErrorKind::MissingBaselineField, "--baseline is required");
  }
  const auto baseline = imcsort::io::baseline_from_json(imcsort::io::read_file(o.baseline));
  const auto report = build_report(o);
  const auto cmp = imcsort::compare(report, baseline);
  if (o.format == "csv") {
    emit(o, imcsort::io::comparison_csv(report, baseline, cmp));
  } else {
    Json j{{"report", imcsort::io::to_json(report)}, {"comparison", imcsort::io::to_json(cmp)}};
    emit(o, dump(j));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle-accurate simulator for SRAM in-memory bitonic sorting"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool takes_n) {
    sub->add_option("--width,-w", o.width, "bits per value")->check(CLI::Range(1, 64));
    if (takes_n) sub->add_option("-n", o.n, "number of inputs (power of two)");
    sub->add_option("--t-op", o.t_op, "latency of one bitline operation in ns")->check(CLI::PositiveNumber);
    sub->add_option("--mode", o.mode, "cycle accounting")->check(CLI::IsMember({"paper", "measured"}));
    sub->add_flag("--reuse-rows", o.reuse_rows, "allocate working rows by liveness");
    sub->add_option("--output,-o", o.output, "output file (default stdout)");
    sub->add_option("--seed", o.seed, "seed for generated input vectors");
  };
  auto formats = [&](CLI::App* sub, std::vector<std::string> allowed) {
    sub->add_option("--format,-f", o.format, "output format")->check(CLI::IsMember(std::move(allowed)));
  };

  auto* cas = app.add_subcommand("cas", "compare-and-swap two values in one partition");
  common(cas, false);
  formats(cas, {"json", "text"});
  cas->add_option("values", o.values, "A B")->expected(2)->required();
  cas->add_option("--trace-out", o.trace_out, "write the per-cycle CSV trace here");
  cas->add_option("--program-out", o.program_out, "write the microprogram text here");

  auto* sort = app.add_subcommand("sort", "sort a vector on the partitioned fabric");
  common(sort, true);
  formats(sort, {"json", "csv", "text"});
  sort->add_option("--input,-i", o.input, "whitespace text or JSON array of unsigned integers");
  sort->add_option("values", o.values, "values to sort");

  auto* netgen = app.add_subcommand("netgen", "emit the bitonic network and its partition plan");
  common(netgen, true);
  formats(netgen, {"json", "text"});

  auto* trace = app.add_subcommand("trace", "emit the per-cycle row trace of a sort");
  common(trace, true);
  formats(trace, {"csv", "json"});
  trace->add_option("--input,-i", o.input, "whitespace text or JSON array of unsigned integers");
  trace->add_option("values", o.values, "values to sort");

  auto* report = app.add_subcommand("report", "latency / throughput / footprint report");
  common(report, true);
  formats(report, {"json", "csv"});

  auto* cmp = app.add_subcommand("compare", "speedup against a baseline config");
  common(cmp, true);
  formats(cmp, {"json", "csv"});
  cmp->add_option("--baseline,-b", o.baseline, "baseline JSON: {name, latency_ns, cycles, source}")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "imcsort: " << e.what() << "\n";
    return 2;
  }
  if (trace->parsed() && o.format == "json" && trace->count("--format") == 0) o.format = "csv";

  try {
    if (cas->parsed()) return cmd_cas(o);
    if (sort->parsed()) return cmd_sort(o);
    if (netgen->parsed()) return cmd_netgen(o);
    if (trace->parsed()) return cmd_trace(o);
    if (report->parsed()) return cmd_report(o);
    if (cmp->parsed()) return cmd_compare(o);
  } catch (const imcsort::Error& e) {
    std::cerr << "imcsort: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "imcsort: internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
