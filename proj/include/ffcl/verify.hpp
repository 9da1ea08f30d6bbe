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

// End-to-end check of a compiled program: simulate it on the machine model
// and compare every primary output against the reference evaluator.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffcl/compiler.hpp"
#include "ffcl/netlist.hpp"
#include "ffcl/reference_eval.hpp"
#include "ffcl/simulator.hpp"

namespace ffcl {

using InputRows = std::vector<std::vector<std::uint8_t>>;

inline constexpr std::size_t kMaxExhaustiveInputs = 20;

// All 2^n assignments; vector j sets input i to bit (n - 1 - i) of j, so the
// first input is the most significant.
inline InputRows ExhaustiveVectors(std::size_t num_inputs) {
  if (num_inputs > kMaxExhaustiveInputs) {
    throw std::invalid_argument("exhaustive mode supports at most " +
                                std::to_string(kMaxExhaustiveInputs) +
                                " inputs");
  }
  const std::size_t count = std::size_t{1} << num_inputs;
  InputRows rows(count, std::vector<std::uint8_t>(num_inputs));
  for (std::size_t j = 0; j < count; ++j) {
    for (std::size_t i = 0; i < num_inputs; ++i) {
      rows[j][i] = (j >> (num_inputs - 1 - i)) & 1;
    }
  }
  return rows;
}

inline InputRows RandomVectors(std::size_t num_inputs, std::size_t count,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  InputRows rows(count, std::vector<std::uint8_t>(num_inputs));
  for (auto& row : rows) {
    for (auto& bit : row) bit = rng() & 1;
  }
  return rows;
}

inline InputRows OracleOutputs(const GateNetlist& netlist,
                               const InputRows& inputs) {
  const ReferenceEvaluator oracle(netlist);
  InputRows out;
  out.reserve(inputs.size());
  for (const auto& row : inputs) out.push_back(oracle.Evaluate(row));
  return out;
}

struct Mismatch {
  std::size_t vector;
  std::string output;
  bool expected;
  bool actual;
};

struct VerifyReport {
  std::size_t vectors_checked = 0;
  std::size_t mismatch_count = 0;
  // The first kMaxRecorded mismatches.
  std::vector<Mismatch> mismatches;
  // Set when the machine faulted or the interfaces disagree.
  std::optional<std::string> fault;
  std::optional<SimResult> sim;

  static constexpr std::size_t kMaxRecorded = 64;

  bool passed() const { return !fault && mismatch_count == 0; }
};

// Compares `program` on `inputs` with precomputed oracle outputs.
inline VerifyReport VerifyAgainst(const KernelProgram& program,
                                  const std::vector<std::string>& output_names,
                                  const InputRows& inputs,
                                  const InputRows& expected,
                                  unsigned threads = 1) {
  VerifyReport report;
  if (program.OutputNames() != output_names) {
    report.fault = "program outputs do not match the netlist's primary outputs";
    return report;
  }
  try {
    report.sim = SimulateStream(
        program, std::span<const std::vector<std::uint8_t>>(inputs), threads);
  } catch (const SimulationError& e) {
    report.fault = e.what();
    return report;
  }
  const SimResult& sim = *report.sim;
  report.vectors_checked = inputs.size();
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    for (std::size_t o = 0; o < output_names.size(); ++o) {
      const bool want = expected[j][o] != 0;
      const bool got = sim.values[o][j];
      if (want == got) continue;
      if (report.mismatches.size() < VerifyReport::kMaxRecorded) {
        report.mismatches.push_back({j, output_names[o], want, got});
      }
      ++report.mismatch_count;
    }
  }
  return report;
}

inline VerifyReport Verify(const GateNetlist& netlist,
                           const KernelProgram& program,
                           const InputRows& inputs, unsigned threads = 1) {
  if (program.InputNames() != netlist.primary_inputs) {
    VerifyReport report;
    report.fault = "program inputs do not match the netlist's primary inputs";
    return report;
  }
  return VerifyAgainst(program, netlist.primary_outputs, inputs,
                       OracleOutputs(netlist, inputs), threads);
}

}  // namespace ffcl
