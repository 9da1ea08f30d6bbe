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

// Seeded generator of random valid netlists for fuzzing.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffcl/netlist.hpp"

namespace ffcl {

// Builds a netlist of `num_gates` gates over `num_inputs` primary inputs.
// Every operand is drawn from earlier nets, so declaration order is already
// topological. All non-constant GateOps are generated. Half of the operand
// picks favour recent nets, which keeps the circuits reasonably deep.
// Deterministic in `seed`.
inline GateNetlist RandomNetlist(std::uint64_t seed, std::size_t num_inputs,
                                 std::size_t num_gates,
                                 std::size_t num_outputs) {
  if (num_inputs < 1 || num_outputs < 1 || num_gates < num_outputs) {
    throw std::invalid_argument(
        "RandomNetlist needs num_inputs >= 1, num_outputs >= 1 and "
        "num_gates >= num_outputs");
  }
  constexpr GateOp kOps[] = {GateOp::kAnd,  GateOp::kOr,  GateOp::kXor,
                             GateOp::kNand, GateOp::kNor, GateOp::kXnor,
                             GateOp::kNot,  GateOp::kBuf};
  constexpr std::size_t kRecentWindow = 8;

  std::mt19937_64 rng(seed);
  GateNetlist n;
  n.name = "rand_" + std::to_string(seed);
  std::vector<std::string> nets;
  for (std::size_t i = 0; i < num_inputs; ++i) {
    n.primary_inputs.push_back("i" + std::to_string(i));
    nets.push_back(n.primary_inputs.back());
  }
  auto pick = [&]() -> const std::string& {
    const std::size_t count = nets.size();
    if (count > kRecentWindow && (rng() & 1) != 0) {
      return nets[count - 1 - rng() % kRecentWindow];
    }
    return nets[rng() % count];
  };
  for (std::size_t g = 0; g < num_gates; ++g) {
    Gate gate{"g" + std::to_string(g), kOps[rng() % std::size(kOps)], {}};
    for (int k = 0; k < Arity(gate.op); ++k) gate.operands.push_back(pick());
    nets.push_back(gate.output);
    n.gates.push_back(std::move(gate));
  }
  std::vector<std::size_t> chosen(num_gates);
  for (std::size_t i = 0; i < num_gates; ++i) chosen[i] = i;
  // Partial Fisher-Yates with the engine directly; std::shuffle's use of
  // distributions is implementation-defined.
  for (std::size_t i = 0; i < num_outputs; ++i) {
    std::swap(chosen[i], chosen[i + rng() % (num_gates - i)]);
  }
  for (std::size_t i = 0; i < num_outputs; ++i) {
    n.primary_outputs.push_back(n.gates[chosen[i]].output);
  }
  return n;
}

}  // namespace ffcl
