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

// Brute-force scalar evaluator for a GateNetlist. It reads the netlist
// directly (never a compiled program) and serves as the correctness oracle
// for the compiler and the machine simulator.

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ffcl/netlist.hpp"

namespace ffcl {

// One bit per primary input, keyed by net name.
using InputAssignment = std::map<std::string, bool>;

class ReferenceEvaluator {
 public:
  explicit ReferenceEvaluator(const GateNetlist& netlist)
      : num_inputs_(netlist.primary_inputs.size()) {
    std::unordered_map<std::string, std::uint32_t> index;
    const std::vector<std::string> nets = netlist.Nets();
    for (std::uint32_t i = 0; i < nets.size(); ++i) index.emplace(nets[i], i);
    for (std::size_t g : netlist.TopologicalOrder()) {
      const Gate& gate = netlist.gates[g];
      Step step{gate.op, index.at(gate.output), 0, 0};
      if (!gate.operands.empty()) step.a = index.at(gate.operands[0]);
      if (gate.operands.size() > 1) step.b = index.at(gate.operands[1]);
      steps_.push_back(step);
    }
    for (const std::string& po : netlist.primary_outputs) {
      outputs_.push_back(index.at(po));
    }
    num_nets_ = nets.size();
  }

  std::size_t num_inputs() const { return num_inputs_; }
  std::size_t num_outputs() const { return outputs_.size(); }

  // Values of every net in GateNetlist::Nets() order.
  std::vector<std::uint8_t> EvaluateAll(
      std::span<const std::uint8_t> inputs) const {
    if (inputs.size() != num_inputs_) {
      throw std::invalid_argument("expected " + std::to_string(num_inputs_) +
                                  " input bits, got " +
                                  std::to_string(inputs.size()));
    }
    std::vector<std::uint8_t> value(num_nets_, 0);
    for (std::size_t i = 0; i < inputs.size(); ++i) value[i] = inputs[i] & 1;
    for (const Step& s : steps_) {
      value[s.out] = ApplyGateBit(s.op, value[s.a] != 0, value[s.b] != 0);
    }
    return value;
  }

  // Primary output values in declaration order.
  std::vector<std::uint8_t> Evaluate(
      std::span<const std::uint8_t> inputs) const {
    const std::vector<std::uint8_t> value = EvaluateAll(inputs);
    std::vector<std::uint8_t> out;
    out.reserve(outputs_.size());
    for (std::uint32_t o : outputs_) out.push_back(value[o]);
    return out;
  }

 private:
  struct Step {
    GateOp op;
    std::uint32_t out;
    std::uint32_t a;
    std::uint32_t b;
  };

  std::size_t num_inputs_;
  std::size_t num_nets_ = 0;
  std::vector<Step> steps_;
  std::vector<std::uint32_t> outputs_;
};

// Value of every net under `assignment`, which must cover exactly the
// primary inputs.
inline std::map<std::string, bool> ReferenceEval(
    const GateNetlist& netlist, const InputAssignment& assignment) {
  if (assignment.size() != netlist.primary_inputs.size()) {
    throw std::invalid_argument("assignment must cover exactly the " +
                                std::to_string(netlist.primary_inputs.size()) +
                                " primary inputs");
  }
  std::vector<std::uint8_t> bits;
  bits.reserve(netlist.primary_inputs.size());
  for (const std::string& pi : netlist.primary_inputs) {
    auto it = assignment.find(pi);
    if (it == assignment.end()) {
      throw std::invalid_argument("no value for primary input '" + pi + "'");
    }
    bits.push_back(it->second ? 1 : 0);
  }
  const std::vector<std::uint8_t> value =
      ReferenceEvaluator(netlist).EvaluateAll(bits);
  const std::vector<std::string> nets = netlist.Nets();
  std::map<std::string, bool> result;
  for (std::size_t i = 0; i < nets.size(); ++i) result[nets[i]] = value[i];
  return result;
}

}  // namespace ffcl
