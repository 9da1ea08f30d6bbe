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

// Functional model of the DSP-array machine executing a KernelProgram.
//
// Each data-buffer slot is one lane_width-bit word; lane j of every word
// belongs to input vector j, so one pass over the program evaluates up to
// lane_width vectors. Alongside the values the machine counts the cycles of
// each phase of a batch:
//
//   copy      one cycle per primary-input word copied into the buffer
//   load      per sub-kernel, one cycle per group of lambda operand
//             addresses (2 * n_dsp positions, NOP slots included)
//   execute   per sub-kernel, n_exe_logic_ops cycles
//   write     per sub-kernel, one cycle per group of lambda result
//             addresses (n_dsp positions)
//   output    one cycle per group of delta primary-output words

#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ffcl/compiler.hpp"
#include "ffcl/reference_eval.hpp"

namespace ffcl {

using LaneWord = std::uint64_t;

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a program breaks the machine's memory discipline: reading a
// slot that holds no value yet, writing a slot twice (constants and inputs
// count as written) or addressing outside the buffer.
class MachineFault : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

struct BatchInput {
  // Primary-input names in program order.
  std::vector<std::string> inputs;
  // words[i] holds the lanes of input i; bit j is vector j.
  std::vector<LaneWord> words;
  // Meaningful lanes; higher lanes are ignored.
  std::size_t lanes = 0;
};

struct EventCounters {
  std::int64_t copy_cycles = 0;
  std::int64_t load_cycles = 0;
  std::int64_t execute_cycles = 0;
  std::int64_t writeback_cycles = 0;
  std::int64_t output_cycles = 0;

  std::int64_t Total() const {
    return copy_cycles + load_cycles + execute_cycles + writeback_cycles +
           output_cycles;
  }

  EventCounters& operator+=(const EventCounters& o) {
    copy_cycles += o.copy_cycles;
    load_cycles += o.load_cycles;
    execute_cycles += o.execute_cycles;
    writeback_cycles += o.writeback_cycles;
    output_cycles += o.output_cycles;
    return *this;
  }

  bool operator==(const EventCounters&) const = default;
};

struct MachineState {
  std::vector<LaneWord> data_buffer;
  std::vector<bool> written;
  // Per DSP slot: two operand registers and one result register.
  std::vector<LaneWord> reg_a;
  std::vector<LaneWord> reg_b;
  std::vector<LaneWord> reg_out;
  EventCounters events;
};

struct SimResult {
  std::vector<std::string> outputs;
  // values[o][j]: primary output o for input vector j.
  std::vector<std::vector<bool>> values;
  std::size_t num_vectors = 0;
  std::int64_t batches = 0;

  // Per-batch tallies.
  std::int64_t n_copy_mem_in = 0;
  std::int64_t n_loop_subkernels = 0;
  std::int64_t n_outputs = 0;
  std::int64_t n_compute_one_ck = 0;
  // Across all batches.
  std::int64_t n_compute = 0;
  EventCounters events;

  // Output bits of vector j, in output declaration order.
  std::vector<std::uint8_t> Row(std::size_t j) const {
    std::vector<std::uint8_t> row;
    row.reserve(values.size());
    for (const auto& v : values) row.push_back(v.at(j) ? 1 : 0);
    return row;
  }
};

class DspMachine {
 public:
  explicit DspMachine(const KernelProgram& program) : program_(program) {
    const MachineConfig& c = program_.config;
    c.Validate();
    lane_mask_ =
        c.lane_width == 64 ? ~LaneWord{0} : (LaneWord{1} << c.lane_width) - 1;
  }

  const MachineState& state() const { return state_; }

  // Runs one batch and returns the primary-output words in output order.
  std::vector<LaneWord> Run(const BatchInput& in) {
    const MachineConfig& c = program_.config;
    const std::vector<std::string> names = program_.InputNames();
    if (in.inputs != names || in.words.size() != names.size()) {
      throw SimulationError(
          "batch inputs do not match the program's primary "
          "inputs");
    }
    if (in.lanes > static_cast<std::size_t>(c.lane_width)) {
      throw SimulationError("batch of " + std::to_string(in.lanes) +
                            " lanes exceeds lane width " +
                            std::to_string(c.lane_width));
    }
    const std::size_t size = program_.buffer.size();
    const auto k = static_cast<std::size_t>(c.n_dsp);
    const auto lambda = static_cast<std::size_t>(c.lambda());
    const auto delta = static_cast<std::size_t>(c.delta());

    state_.data_buffer.assign(size, 0);
    state_.written.assign(size, false);
    state_.reg_a.assign(k, 0);
    state_.reg_b.assign(k, 0);
    state_.reg_out.assign(k, 0);
    state_.events = {};
    const LaneWord active =
        in.lanes == 64 ? ~LaneWord{0} : (LaneWord{1} << in.lanes) - 1;
    Write(kConst0Slot, 0);
    Write(kConst1Slot, lane_mask_);

    for (std::size_t i = 0; i < in.words.size(); ++i) {
      Write(kFirstInputSlot + i, in.words[i] & active);
      ++state_.events.copy_cycles;
    }

    if (active_.size() != program_.subkernels.size()) {
      active_.clear();
      for (const SubKernel& sk : program_.subkernels) {
        if (sk.in_addrs.size() != 2 * k || sk.out_addrs.size() != k ||
            sk.opcodes.size() != k) {
          throw MachineFault("sub-kernel rows do not match n_dsp");
        }
        std::vector<std::size_t> slots;
        for (std::size_t p = 0; p < k; ++p) {
          if (sk.opcodes[p] != Opcode::kNop) slots.push_back(p);
        }
        active_.push_back(std::move(slots));
      }
    }
    // The bus moves every position of a row, NOP slots included; only the
    // active slots touch the buffer.
    const auto load_groups =
        static_cast<std::int64_t>((2 * k + lambda - 1) / lambda);
    const auto store_groups =
        static_cast<std::int64_t>((k + lambda - 1) / lambda);
    for (std::size_t i = 0; i < program_.subkernels.size(); ++i) {
      const SubKernel& sk = program_.subkernels[i];
      const std::vector<std::size_t>& slots = active_[i];
      for (std::size_t p : slots) {
        state_.reg_a[p] = Read(sk.in_addrs[2 * p]);
        if (!IsUnary(sk.opcodes[p])) {
          state_.reg_b[p] = Read(sk.in_addrs[2 * p + 1]);
        }
      }
      state_.events.load_cycles += load_groups;
      for (std::size_t p : slots) {
        state_.reg_out[p] =
            Execute(sk.opcodes[p], state_.reg_a[p], state_.reg_b[p]) &
            lane_mask_;
      }
      state_.events.execute_cycles += c.n_exe_logic_ops;
      for (std::size_t p : slots) Write(sk.out_addrs[p], state_.reg_out[p]);
      state_.events.writeback_cycles += store_groups;
    }

    std::vector<LaneWord> out;
    out.reserve(program_.outputs.size());
    for (std::size_t group = 0; group < program_.outputs.size();
         group += delta) {
      const std::size_t end = std::min(program_.outputs.size(), group + delta);
      for (std::size_t o = group; o < end; ++o) {
        out.push_back(Read(program_.outputs[o]) & active);
      }
      ++state_.events.output_cycles;
    }
    if (state_.data_buffer[kConst0Slot] != 0 ||
        state_.data_buffer[kConst1Slot] != lane_mask_) {
      throw MachineFault("constant slots were modified");
    }
    return out;
  }

 private:
  LaneWord Read(std::size_t addr) const {
    if (addr >= state_.data_buffer.size()) {
      throw MachineFault("read of address " + std::to_string(addr) +
                         " outside the data buffer");
    }
    if (!state_.written[addr]) {
      throw MachineFault("read of slot " + std::to_string(addr) +
                         " before it was written");
    }
    return state_.data_buffer[addr];
  }

  void Write(std::size_t addr, LaneWord value) {
    if (addr >= state_.data_buffer.size()) {
      throw MachineFault("write to address " + std::to_string(addr) +
                         " outside the data buffer");
    }
    if (state_.written[addr]) {
      throw MachineFault("slot " + std::to_string(addr) +
                         " written more than once");
    }
    state_.data_buffer[addr] = value;
    state_.written[addr] = true;
  }

  const KernelProgram& program_;
  // Non-NOP slots of each sub-kernel, built on the first run.
  std::vector<std::vector<std::size_t>> active_;
  LaneWord lane_mask_ = 0;
  MachineState state_;
};

namespace internal {

inline void RecordTallies(const EventCounters& e, SimResult& r) {
  r.n_copy_mem_in = e.copy_cycles;
  r.n_loop_subkernels = e.load_cycles + e.execute_cycles + e.writeback_cycles;
  r.n_outputs = e.output_cycles;
  r.n_compute_one_ck = e.Total();
}

}  // namespace internal

// Runs a single batch.
inline SimResult Simulate(const KernelProgram& program, const BatchInput& in) {
  DspMachine machine(program);
  const std::vector<LaneWord> words = machine.Run(in);
  SimResult r;
  r.outputs = program.OutputNames();
  r.num_vectors = in.lanes;
  r.batches = 1;
  r.values.assign(words.size(), std::vector<bool>(in.lanes));
  for (std::size_t o = 0; o < words.size(); ++o) {
    for (std::size_t j = 0; j < in.lanes; ++j) {
      r.values[o][j] = ((words[o] >> j) & 1) != 0;
    }
  }
  r.events = machine.state().events;
  internal::RecordTallies(r.events, r);
  r.n_compute = r.n_compute_one_ck;
  return r;
}

// Packs rows (bits in primary-input order) into one batch, row j on lane j.
inline BatchInput PackBatch(const KernelProgram& program,
                            std::span<const std::vector<std::uint8_t>> rows) {
  if (rows.size() > static_cast<std::size_t>(program.config.lane_width)) {
    throw SimulationError("batch of " + std::to_string(rows.size()) +
                          " vectors exceeds lane width " +
                          std::to_string(program.config.lane_width));
  }
  BatchInput in;
  in.inputs = program.InputNames();
  in.words.assign(in.inputs.size(), 0);
  in.lanes = rows.size();
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].size() != in.inputs.size()) {
      throw SimulationError("input vector " + std::to_string(j) + " has " +
                            std::to_string(rows[j].size()) +
                            " bits, expected " +
                            std::to_string(in.inputs.size()));
    }
    for (std::size_t i = 0; i < rows[j].size(); ++i) {
      if (rows[j][i] & 1) in.words[i] |= LaneWord{1} << j;
    }
  }
  return in;
}

// Splits raw input vectors into ceil(count / lane_width) batches, runs them
// (optionally on several threads) and merges outputs in input order.
inline SimResult SimulateStream(const KernelProgram& program,
                                std::span<const std::vector<std::uint8_t>> rows,
                                unsigned threads = 1) {
  const auto width = static_cast<std::size_t>(program.config.lane_width);
  program.config.Validate();
  const std::size_t num_batches = (rows.size() + width - 1) / width;

  SimResult r;
  r.outputs = program.OutputNames();
  r.num_vectors = rows.size();
  r.batches = static_cast<std::int64_t>(num_batches);
  r.values.assign(r.outputs.size(), std::vector<bool>(rows.size()));

  std::vector<EventCounters> events(num_batches);
  std::vector<std::vector<LaneWord>> words(num_batches);
  auto run_range = [&](std::size_t first, std::size_t last) {
    DspMachine machine(program);
    for (std::size_t b = first; b < last; ++b) {
      const std::size_t begin = b * width;
      const std::size_t end = std::min(rows.size(), begin + width);
      words[b] =
          machine.Run(PackBatch(program, rows.subspan(begin, end - begin)));
      events[b] = machine.state().events;
    }
  };
  threads = std::max(
      1u, std::min<unsigned>(threads, static_cast<unsigned>(num_batches)));
  if (threads <= 1) {
    run_range(0, num_batches);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t per = (num_batches + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t first = std::min(num_batches, t * per);
      const std::size_t last = std::min(num_batches, first + per);
      pool.emplace_back([&, t, first, last] {
        try {
          run_range(first, last);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  for (std::size_t b = 0; b < num_batches; ++b) {
    const std::size_t begin = b * width;
    const std::size_t lanes = std::min(rows.size(), begin + width) - begin;
    for (std::size_t o = 0; o < words[b].size(); ++o) {
      for (std::size_t j = 0; j < lanes; ++j) {
        r.values[o][begin + j] = ((words[b][o] >> j) & 1) != 0;
      }
    }
    r.events += events[b];
  }
  if (num_batches > 0) internal::RecordTallies(events.front(), r);
  r.n_compute = r.events.Total();
  return r;
}

// Same as above for name-keyed assignments.
inline SimResult SimulateStream(const KernelProgram& program,
                                std::span<const InputAssignment> vectors,
                                unsigned threads = 1) {
  const std::vector<std::string> names = program.InputNames();
  std::vector<std::vector<std::uint8_t>> rows;
  rows.reserve(vectors.size());
  for (const InputAssignment& a : vectors) {
    if (a.size() != names.size()) {
      throw SimulationError("assignment does not cover the primary inputs");
    }
    std::vector<std::uint8_t> row;
    for (const std::string& name : names) {
      auto it = a.find(name);
      if (it == a.end()) {
        throw SimulationError("no value for primary input '" + name + "'");
      }
      row.push_back(it->second ? 1 : 0);
    }
    rows.push_back(std::move(row));
  }
  return SimulateStream(
      program, std::span<const std::vector<std::uint8_t>>(rows), threads);
}

struct StageCost {
  std::int64_t data_moves = 0;
  std::int64_t compute = 0;
};

// Two-stage pipeline over m kernels with double buffering: data movement of
// kernel i+1 overlaps computation of kernel i, and every stage is charged
// the worst stage time. Total is (m + 1) * max over all D_i and C_i.
inline std::int64_t PipelineCycles(std::span<const StageCost> kernels) {
  if (kernels.empty()) {
    throw std::invalid_argument("pipeline needs at least one kernel");
  }
  std::int64_t worst = 0;
  for (const StageCost& s : kernels) {
    if (s.data_moves < 0 || s.compute < 0) {
      throw std::invalid_argument("stage costs must be non-negative");
    }
    worst = std::max({worst, s.data_moves, s.compute});
  }
  return static_cast<std::int64_t>(kernels.size() + 1) * worst;
}

}  // namespace ffcl
