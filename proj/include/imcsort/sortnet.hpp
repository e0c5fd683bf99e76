// SPDX-License-Identifier: Apache-2.0
#pragma once

// Bitonic comparator network and its mapping onto memory partitions.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "imcsort/bitcell_array.hpp"
#include "imcsort/error.hpp"

namespace imcsort {

struct Comparator {
  std::size_t lo = 0;  // receives the minimum
  std::size_t hi = 0;

  friend bool operator==(const Comparator&, const Comparator&) = default;
};

using Stage = std::vector<Comparator>;

struct SortingNetwork {
  std::size_t n = 0;
  std::vector<Stage> stages;

  std::size_t comparator_count() const {
    std::size_t total = 0;
    for (const auto& s : stages) total += s.size();
    return total;
  }

  friend bool operator==(const SortingNetwork&, const SortingNetwork&) = default;
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t log2_exact(std::size_t n) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

inline void require_network_size(std::size_t n) {
  if (n < 2) throw Error(ErrorKind::NotPowerOfTwo, "network needs at least 2 inputs, got " + std::to_string(n));
  if (!is_power_of_two(n)) throw Error(ErrorKind::NotPowerOfTwo, std::to_string(n) + " is not a power of two");
}

// Closed forms: log2(N)(1 + log2(N))/2 stages, N log2(N)(1 + log2(N))/4 CAS.
inline std::size_t bitonic_stage_count(std::size_t n) {
  const std::size_t k = log2_exact(n);
  return k * (1 + k) / 2;
}

inline std::size_t bitonic_comparator_count(std::size_t n) {
  const std::size_t k = log2_exact(n);
  return n * k * (1 + k) / 4;
}

/// All-ascending bitonic network. The first stage of each merge of size b
/// pairs i with (block + b - 1 - i) so that no descending comparator is ever
/// needed; the remaining stages are ordinary half-cleaners.
inline SortingNetwork build_bitonic(std::size_t n) {
  require_network_size(n);
  SortingNetwork net;
  net.n = n;
  for (std::size_t block = 2; block <= n; block *= 2) {
    Stage crossed;
    for (std::size_t start = 0; start < n; start += block) {
      for (std::size_t i = 0; i < block / 2; ++i) crossed.push_back({start + i, start + block - 1 - i});
    }
    net.stages.push_back(std::move(crossed));
    for (std::size_t d = block / 4; d >= 1; d /= 2) {
      Stage half;
      for (std::size_t j = 0; j < n; ++j) {
        if ((j & d) == 0) half.push_back({j, j + d});
      }
      net.stages.push_back(std::move(half));
    }
  }
  for (auto& s : net.stages) {
    std::sort(s.begin(), s.end(), [](const Comparator& a, const Comparator& b) { return a.lo < b.lo; });
  }
  return net;
}

/// Applies the network with plain min/max comparators.
template <typename T>
void apply_network(const SortingNetwork& net, std::vector<T>& values) {
  for (const auto& stage : net.stages) {
    for (const auto& c : stage) {
      if (values[c.hi] < values[c.lo]) std::swap(values[c.lo], values[c.hi]);
    }
  }
}

/// Checks that each stage's pairs are disjoint and cover 0..n-1.
inline std::vector<std::string> audit_network(const SortingNetwork& net) {
  std::vector<std::string> out;
  for (std::size_t s = 0; s < net.stages.size(); ++s) {
    std::vector<int> seen(net.n, 0);
    for (const auto& c : net.stages[s]) {
      if (c.lo >= c.hi || c.hi >= net.n) {
        out.push_back("stage " + std::to_string(s) + ": malformed pair");
        continue;
      }
      ++seen[c.lo];
      ++seen[c.hi];
    }
    if (std::any_of(seen.begin(), seen.end(), [](int k) { return k != 1; })) {
      out.push_back("stage " + std::to_string(s) + ": pairs do not partition the inputs");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Partition planning

struct Location {
  std::size_t partition = 0;
  RowId row = kRowA;

  friend bool operator==(const Location&, const Location&) = default;
};

struct Move {
  std::size_t wire = 0;
  Location from;
  Location to;

  friend bool operator==(const Move&, const Move&) = default;
};

struct PartitionPlan {
  std::size_t n = 0;
  std::size_t partitions = 0;
  std::size_t temp_rows = 0;
  std::size_t provisioning_cycles_per_event = 0;
  std::size_t provisioning_events = 0;
  // assignment[s][c] is the partition that runs comparator c of stage s.
  std::vector<std::vector<std::size_t>> assignment;
  // moves[s] are applied on the boundary entering stage s; moves[0] is empty.
  std::vector<std::vector<Move>> moves;
  // Wire locations before stage 0 and after the last stage.
  std::vector<Location> initial_layout;
  std::vector<Location> final_layout;

  std::size_t total_moves() const {
    std::size_t t = 0;
    for (const auto& m : moves) t += m.size();
    return t;
  }
};

namespace detail {

// Kuhn's augmenting-path matching of comparators to partitions, trying the
// candidates of each comparator in order.
inline bool augment(std::size_t c, const std::vector<std::vector<std::size_t>>& cand,
                    std::vector<std::size_t>& owner, std::vector<char>& visited) {
  for (std::size_t p : cand[c]) {
    if (visited[p]) continue;
    visited[p] = 1;
    if (owner[p] == SIZE_MAX || augment(owner[p], cand, owner, visited)) {
      owner[p] = c;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Maps each stage onto N/2 partitions holding two values each (rows 3/4).
///
/// A comparator is placed on the partition holding its lower-index operand
/// when that partition is free, else on the one holding its upper operand;
/// conflicts are resolved by augmenting paths, so every comparator lands on a
/// partition that already holds one of its operands and a stage moves exactly
/// one value per comparator that is not already co-resident. The value that
/// arrives takes the row of the value that leaves. After the CAS the lower
/// wire sits in row 3 and the upper one in row 4.
inline PartitionPlan plan_partitions(const SortingNetwork& net) {
  require_network_size(net.n);
  PartitionPlan plan;
  plan.n = net.n;
  plan.partitions = net.n / 2;
  plan.temp_rows = net.n >= 4 ? net.n / 4 : 0;
  plan.provisioning_cycles_per_event = net.n >= 4 ? 3 * net.n / 4 : 0;

  std::vector<Location> where(net.n);
  for (std::size_t w = 0; w < net.n; ++w) where[w] = {w / 2, static_cast<RowId>(kRowA + w % 2)};
  plan.initial_layout = where;

  for (std::size_t s = 0; s < net.stages.size(); ++s) {
    const Stage& stage = net.stages[s];
    std::vector<std::vector<std::size_t>> cand(stage.size());
    for (std::size_t c = 0; c < stage.size(); ++c) {
      cand[c].push_back(where[stage[c].lo].partition);
      if (where[stage[c].hi].partition != cand[c].front()) cand[c].push_back(where[stage[c].hi].partition);
    }
    std::vector<std::size_t> owner(plan.partitions, SIZE_MAX);
    for (std::size_t c = 0; c < stage.size(); ++c) {
      std::vector<char> visited(plan.partitions, 0);
      if (!detail::augment(c, cand, owner, visited)) {
        throw Error(ErrorKind::InvalidProgram, "no partition assignment for stage " + std::to_string(s));
      }
    }
    std::vector<std::size_t> assigned(stage.size());
    for (std::size_t p = 0; p < plan.partitions; ++p) assigned[owner[p]] = p;

    // Which wires sit in each partition right now.
    std::vector<std::vector<std::size_t>> holds(plan.partitions);
    for (std::size_t w = 0; w < net.n; ++w) holds[where[w].partition].push_back(w);

    std::vector<Move> moves;
    for (std::size_t c = 0; c < stage.size(); ++c) {
      const std::size_t p = assigned[c];
      const auto& cmp = stage[c];
      std::vector<std::size_t> incoming;
      for (std::size_t w : {cmp.lo, cmp.hi}) {
        if (where[w].partition != p) incoming.push_back(w);
      }
      std::vector<RowId> vacated;
      for (std::size_t w : holds[p]) {
        if (w != cmp.lo && w != cmp.hi) vacated.push_back(where[w].row);
      }
      std::sort(vacated.begin(), vacated.end());
      for (std::size_t k = 0; k < incoming.size(); ++k) {
        moves.push_back({incoming[k], where[incoming[k]], {p, vacated.at(k)}});
      }
    }
    if (s == 0 && !moves.empty()) {
      throw Error(ErrorKind::InvalidProgram, "first stage is not co-resident with the initial layout");
    }
    for (const auto& m : moves) where[m.wire] = m.to;
    for (std::size_t c = 0; c < stage.size(); ++c) {
      where[stage[c].lo] = {assigned[c], kRowA};
      where[stage[c].hi] = {assigned[c], kRowB};
    }
    if (!moves.empty()) ++plan.provisioning_events;
    plan.assignment.push_back(std::move(assigned));
    plan.moves.push_back(std::move(moves));
  }
  plan.final_layout = where;
  return plan;
}

inline const std::vector<Move>& transfer_moves(const PartitionPlan& plan, std::size_t stage_index) {
  if (stage_index < 1 || stage_index >= plan.moves.size()) {
    throw Error(ErrorKind::StageOutOfRange, "stage index " + std::to_string(stage_index) + " not in [1, " +
                                                std::to_string(plan.moves.size() == 0 ? 0 : plan.moves.size() - 1) +
                                                "]");
  }
  return plan.moves[stage_index];
}

/// Replays the plan from its initial layout and reports every stage whose
/// operands are not co-resident on their assigned partition, every move that
/// lands on an occupied row, and any partition hosting two comparators.
inline std::vector<std::string> audit_residency(const SortingNetwork& net, const PartitionPlan& plan) {
  std::vector<std::string> out;
  std::vector<Location> where = plan.initial_layout;
  for (std::size_t s = 0; s < net.stages.size(); ++s) {
    const std::string tag = "stage " + std::to_string(s) + ": ";
    std::vector<Location> next = where;
    for (const auto& m : plan.moves[s]) {
      if (!(where[m.wire] == m.from)) out.push_back(tag + "move source mismatch");
      next[m.wire] = m.to;
    }
    for (std::size_t a = 0; a < net.n; ++a) {
      for (std::size_t b = a + 1; b < net.n; ++b) {
        if (next[a] == next[b]) out.push_back(tag + "two wires share a row");
      }
    }
    std::vector<int> used(plan.partitions, 0);
    for (std::size_t c = 0; c < net.stages[s].size(); ++c) {
      const auto& cmp = net.stages[s][c];
      const std::size_t p = plan.assignment[s][c];
      if (++used[p] > 1) out.push_back(tag + "partition hosts two comparators");
      if (next[cmp.lo].partition != p || next[cmp.hi].partition != p) out.push_back(tag + "operands not co-resident");
      next[cmp.lo] = {p, kRowA};
      next[cmp.hi] = {p, kRowB};
    }
    where = std::move(next);
  }
  if (!(where == plan.final_layout)) out.push_back("final layout mismatch");
  return out;
}

// Published extra-cycle totals that override the per-event rule.
inline constexpr std::size_t kPublishedExtraCyclesN = 8;
inline constexpr std::size_t kPublishedExtraCycles = 24;

/// Extra provisioning cycles charged in paper-mode accounting:
/// (3N/4) x provisioning events, except that N = 8 is charged the published
/// 24-cycle total.
inline std::size_t paper_extra_cycles(const PartitionPlan& plan) {
  if (plan.n == kPublishedExtraCyclesN) return kPublishedExtraCycles;
  return plan.provisioning_cycles_per_event * plan.provisioning_events;
}

inline std::string to_text(const SortingNetwork& net) {
  std::string s = "n " + std::to_string(net.n) + "\nstages " + std::to_string(net.stages.size()) +
                  "\ncomparators " + std::to_string(net.comparator_count()) + "\n";
  for (const auto& stage : net.stages) {
    for (std::size_t c = 0; c < stage.size(); ++c) {
      if (c) s += ' ';
      s += std::to_string(stage[c].lo) + ":" + std::to_string(stage[c].hi);
    }
    s += '\n';
  }
  return s;
}

}  // namespace imcsort
