// Copyright 2026 The ffcl-dsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Logic levelization and per-level partitioning into DSP-sized sub-kernels.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ffcl/netlist.hpp"

namespace ffcl {

struct LeveledNetlist {
  GateNetlist base;
  // level[g] for gate g in declaration order; primary inputs are level 0.
  std::vector<int> level;
  int depth = 0;
  // gates_per_level[l - 1] is the number of gates at level l.
  std::vector<std::int64_t> gates_per_level;

  // Gate indices at `l`, in declaration order.
  std::vector<std::size_t> GatesAt(int l) const {
    std::vector<std::size_t> out;
    for (std::size_t g = 0; g < level.size(); ++g) {
      if (level[g] == l) out.push_back(g);
    }
    return out;
  }
};

// Assigns every gate 1 + the maximum level of its operands, walking the DAG
// breadth-first from the primary inputs. Constant gates have no operands and
// land on level 1.
inline LeveledNetlist Levelize(const GateNetlist& netlist) {
  const std::size_t num_gates = netlist.gates.size();
  std::unordered_map<std::string, std::size_t> driver;
  for (std::size_t g = 0; g < num_gates; ++g) {
    driver.emplace(netlist.gates[g].output, g);
  }
  std::vector<std::size_t> pending(num_gates, 0);
  std::vector<std::vector<std::size_t>> fanout(num_gates);
  for (std::size_t g = 0; g < num_gates; ++g) {
    for (const std::string& operand : netlist.gates[g].operands) {
      auto it = driver.find(operand);
      if (it == driver.end()) continue;  // primary input
      ++pending[g];
      fanout[it->second].push_back(g);
    }
  }

  LeveledNetlist out;
  out.base = netlist;
  out.level.assign(num_gates, 1);
  std::vector<std::size_t> queue;
  queue.reserve(num_gates);
  for (std::size_t g = 0; g < num_gates; ++g) {
    if (pending[g] == 0) queue.push_back(g);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t g = queue[head];
    for (std::size_t succ : fanout[g]) {
      out.level[succ] = std::max(out.level[succ], out.level[g] + 1);
      if (--pending[succ] == 0) queue.push_back(succ);
    }
  }
  if (queue.size() != num_gates) {
    throw NetlistError(NetlistError::Kind::kCombinationalCycle,
                       "netlist '" + netlist.name + "' is not acyclic");
  }
  out.depth = num_gates == 0
                  ? 0
                  : *std::max_element(out.level.begin(), out.level.end());
  out.gates_per_level.assign(out.depth, 0);
  for (int l : out.level) ++out.gates_per_level[l - 1];
  return out;
}

// Number of sub-kernels needed to run levels of the given widths on
// `n_dsp` units: sum over levels of ceil(width / n_dsp).
inline std::int64_t SubkernelsFromLevels(
    std::span<const std::int64_t> gates_per_level, std::int64_t n_dsp) {
  if (n_dsp < 1) throw std::invalid_argument("n_dsp must be >= 1");
  std::int64_t total = 0;
  for (std::int64_t width : gates_per_level) {
    if (width < 0) throw std::invalid_argument("negative level width");
    total += (width + n_dsp - 1) / n_dsp;
  }
  return total;
}

struct Slice {
  int level;
  std::vector<std::size_t> gates;
};

// Splits each level into consecutive runs of at most `n_dsp` gates, keeping
// declaration order. Slices come out ordered by level.
inline std::vector<Slice> Partition(const LeveledNetlist& leveled,
                                    std::int64_t n_dsp) {
  if (n_dsp < 1) throw std::invalid_argument("n_dsp must be >= 1");
  std::vector<std::vector<std::size_t>> by_level(leveled.depth);
  for (std::size_t g = 0; g < leveled.level.size(); ++g) {
    by_level[leveled.level[g] - 1].push_back(g);
  }
  std::vector<Slice> slices;
  const auto chunk = static_cast<std::size_t>(n_dsp);
  for (int l = 1; l <= leveled.depth; ++l) {
    const auto& gates = by_level[l - 1];
    for (std::size_t start = 0; start < gates.size(); start += chunk) {
      const std::size_t end = std::min(gates.size(), start + chunk);
      slices.push_back({l, std::vector<std::size_t>(gates.begin() + start,
                                                    gates.begin() + end)});
    }
  }
  return slices;
}

}  // namespace ffcl
