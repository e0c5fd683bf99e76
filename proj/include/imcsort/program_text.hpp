// SPDX-License-Identifier: Apache-2.0
#pragma once

// Line-oriented text form of a MicroProgram.
//
//   # imcsort microprogram v1
//   width 4
//   rows 22
//   compare_end 12
//   mux_end 16
//   select_row 21
//   select_complement_row 22
//   instructions 18
//   1 NOR 4 1 5 same
//   4 NOR 6 1 8 bcast,4
//   ...
//
// Instruction lines are `cycle gate src_a src_b dest writeback[,col]` with
// writeback one of same, shift, bcast,<col>. Blank lines and lines starting
// with '#' after the magic line are ignored by the parser.

#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>

#include "imcsort/microcode.hpp"

namespace imcsort {

inline constexpr std::string_view kProgramMagic = "# imcsort microprogram v1";

inline std::string to_text(const MicroProgram& p) {
  std::ostringstream os;
  os << kProgramMagic << '\n'
     << "width " << p.width << '\n'
     << "rows " << p.total_rows << '\n'
     << "compare_end " << p.compare_end << '\n'
     << "mux_end " << p.mux_end << '\n'
     << "select_row " << p.select_row << '\n'
     << "select_complement_row " << p.select_complement_row << '\n'
     << "instructions " << p.size() << '\n';
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& in = p.instructions[i];
    os << (i + 1) << ' ' << to_string(in.gate) << ' ' << in.src_a << ' ' << in.src_b << ' ' << in.dest << ' '
       << to_string(in.writeback) << '\n';
  }
  return os.str();
}

namespace detail {

inline std::uint64_t parse_uint(std::string_view tok, std::size_t line) {
  if (tok.empty()) throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": missing number");
  std::uint64_t v = 0;
  for (char ch : tok) {
    if (ch < '0' || ch > '9') {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": bad number '" + std::string(tok) + "'");
    }
    v = v * 10 + static_cast<std::uint64_t>(ch - '0');
    if (v > 0xffffffffULL) throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": number too large");
  }
  return v;
}

inline WritebackMode parse_writeback(const std::string& tok, std::size_t line) {
  if (tok == "same") return WritebackMode::same();
  if (tok == "shift") return WritebackMode::shift_right();
  if (tok.rfind("bcast,", 0) == 0) {
    return WritebackMode::broadcast_from(static_cast<ColId>(parse_uint(std::string_view(tok).substr(6), line)));
  }
  throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": unknown writeback '" + tok + "'");
}

}  // namespace detail

inline MicroProgram parse_program(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(is, line) || line != kProgramMagic) {
    throw Error(ErrorKind::Parse, "missing '" + std::string(kProgramMagic) + "' header");
  }
  ++line_no;

  MicroProgram p;
  std::size_t expected = 0;
  bool have_count = false;
  const char* header_keys[] = {"width", "rows", "compare_end", "mux_end", "select_row", "select_complement_row",
                               "instructions"};
  std::size_t header_index = 0;

  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (header_index < std::size(header_keys)) {
      std::string key, value, extra;
      ls >> key >> value;
      if (key != header_keys[header_index] || (ls >> extra)) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected '" +
                                          header_keys[header_index] + " <n>'");
      }
      const auto v = detail::parse_uint(value, line_no);
      switch (header_index) {
        case 0: p.width = static_cast<ColId>(v); break;
        case 1: p.total_rows = static_cast<RowId>(v); break;
        case 2: p.compare_end = v; break;
        case 3: p.mux_end = v; break;
        case 4: p.select_row = static_cast<RowId>(v); break;
        case 5: p.select_complement_row = static_cast<RowId>(v); break;
        case 6: expected = v; have_count = true; break;
      }
      ++header_index;
      continue;
    }
    std::string cycle, gate, a, b, d, wb, extra;
    if (!(ls >> cycle >> gate >> a >> b >> d >> wb) || (ls >> extra)) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected 6 fields");
    }
    if (detail::parse_uint(cycle, line_no) != p.size() + 1) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": cycle numbers must be consecutive");
    }
    Instruction in;
    if (gate == "AND") {
      in.gate = Gate::And;
    } else if (gate == "NOR") {
      in.gate = Gate::Nor;
    } else {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": unknown gate '" + gate + "'");
    }
    in.src_a = static_cast<RowId>(detail::parse_uint(a, line_no));
    in.src_b = static_cast<RowId>(detail::parse_uint(b, line_no));
    in.dest = static_cast<RowId>(detail::parse_uint(d, line_no));
    in.writeback = detail::parse_writeback(wb, line_no);
    p.instructions.push_back(in);
  }
  if (!have_count) throw Error(ErrorKind::Parse, "incomplete header");
  if (expected != p.size()) {
    throw Error(ErrorKind::Parse, "header announces " + std::to_string(expected) + " instructions, found " +
                                      std::to_string(p.size()));
  }
  return p;
}

}  // namespace imcsort
