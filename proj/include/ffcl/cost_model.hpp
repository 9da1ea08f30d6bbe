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

// Closed-form cycle model of one compute kernel on the DSP-array machine.
//
// Data movement (per kernel):
//   alpha          = 3 / (lambda * (k - 1))
//   beta           = (k + 1) / 2 * alpha
//   DRAM->URAM     = ceil(alpha * S * N)
//   URAM->BRAM     = ceil(alpha * S * N / 2)
//   read_addr      = ceil(beta * S * N)
//   read_inputs_op = ceil(V * F / delta) + ceil(S * N / zeta)
//   data_moves     = max(read_inputs_op, read_addr)
//
// Compute:
//   load      = ceil(2N / lambda)
//   writeback = ceil(load / 2)
//   loop      = S * (load + exe + writeback)
//   one_ck    = F + loop + ceil(P / delta)
//   compute   = V * one_ck
//
//   n_cc = (m + 1) * max(data_moves, compute)
//
// with S sub-kernels, N DSPs, F primary inputs, P primary outputs, V packed
// input batches and m kernels. Rational terms are exact and rounded up once.

#pragma once

#include <algorithm>
#include <boost/rational.hpp>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffcl/compiler.hpp"
#include "ffcl/levelize.hpp"
#include "ffcl/machine_config.hpp"

namespace ffcl {

using Rational = boost::rational<std::int64_t>;

inline std::int64_t CeilDiv(std::int64_t a, std::int64_t b) {
  return (a + b - 1) / b;
}

inline std::int64_t Ceil(const Rational& r) {
  return CeilDiv(r.numerator(), r.denominator());
}

struct WorkloadStats {
  // At least one of these two; when both are present they must agree.
  std::optional<std::int64_t> n_subkernels;
  std::optional<std::vector<std::int64_t>> gates_per_level;
  std::int64_t n_fanin = 0;
  std::int64_t n_po = 0;
  std::int64_t n_input_vectors = 1;
  std::int64_t m = 1;

  // Sub-kernel count at `n_dsp`, derived from the level widths when known.
  std::int64_t SubkernelsAt(std::int64_t n_dsp) const {
    if (gates_per_level) {
      const std::int64_t derived =
          SubkernelsFromLevels(*gates_per_level, n_dsp);
      if (n_subkernels && *n_subkernels != derived) {
        throw std::invalid_argument(
            "n_subkernels=" + std::to_string(*n_subkernels) +
            " disagrees with gates_per_level (" + std::to_string(derived) +
            ")");
      }
      return derived;
    }
    if (!n_subkernels) {
      throw std::invalid_argument(
          "workload needs n_subkernels or gates_per_level");
    }
    return *n_subkernels;
  }

  void Validate() const {
    if (n_subkernels && *n_subkernels < 0) {
      throw std::invalid_argument("n_subkernels must be non-negative");
    }
    if (n_fanin < 0 || n_po < 0 || n_input_vectors < 0 || m < 0) {
      throw std::invalid_argument("workload counts must be non-negative");
    }
  }
};

// Stats of a compiled program. The sub-kernel count is the compiled one and
// only holds at the program's n_dsp; reset it to evaluate other DSP counts.
inline WorkloadStats WorkloadFromProgram(const KernelProgram& p,
                                         std::int64_t n_input_vectors = 1,
                                         std::int64_t m = 1) {
  WorkloadStats w;
  w.n_subkernels = p.n_subkernels();
  w.gates_per_level = p.GatesPerLevel();
  w.n_fanin = p.n_fanin;
  w.n_po = p.n_po;
  w.n_input_vectors = n_input_vectors;
  w.m = m;
  return w;
}

struct AddrMovementCost {
  Rational alpha;
  Rational beta;
  std::int64_t dram_to_uram = 0;
  std::int64_t uram_to_bram = 0;
  std::int64_t read_addr_mem = 0;
};

inline AddrMovementCost AddrMovement(const WorkloadStats& w,
                                     const MachineConfig& cfg) {
  cfg.Validate();
  w.Validate();
  const std::int64_t k = cfg.k_ddr_banks;
  AddrMovementCost c;
  c.alpha = Rational(3, cfg.lambda() * (k - 1));
  c.beta = Rational(k + 1, 2) * c.alpha;
  const std::int64_t slots = w.SubkernelsAt(cfg.n_dsp) * cfg.n_dsp;
  c.dram_to_uram = Ceil(c.alpha * slots);
  c.uram_to_bram = Ceil(c.alpha * slots / 2);
  c.read_addr_mem = Ceil(c.beta * slots);
  return c;
}

struct InputOpcodeCost {
  std::int64_t inputs = 0;
  std::int64_t opcodes = 0;
  std::int64_t total() const { return inputs + opcodes; }
};

inline InputOpcodeCost InputOpcodeMovement(const WorkloadStats& w,
                                           const MachineConfig& cfg) {
  cfg.Validate();
  w.Validate();
  InputOpcodeCost c;
  c.inputs = CeilDiv(w.n_input_vectors * w.n_fanin, cfg.delta());
  c.opcodes = CeilDiv(w.SubkernelsAt(cfg.n_dsp) * cfg.n_dsp, cfg.zeta());
  return c;
}

struct ComputeCost {
  std::int64_t n_bram_to_dsp_regs = 0;
  std::int64_t n_exe_logic_ops = 0;
  std::int64_t n_dsp_reg_to_bram = 0;
  std::int64_t n_loop_subkernels = 0;
  std::int64_t n_copy_mem_in = 0;
  std::int64_t n_outputs = 0;
  std::int64_t n_compute_one_ck = 0;
  std::int64_t n_compute = 0;
};

inline ComputeCost Compute(const WorkloadStats& w, const MachineConfig& cfg) {
  cfg.Validate();
  w.Validate();
  ComputeCost c;
  c.n_bram_to_dsp_regs = CeilDiv(2 * cfg.n_dsp, cfg.lambda());
  c.n_exe_logic_ops = cfg.n_exe_logic_ops;
  c.n_dsp_reg_to_bram = CeilDiv(c.n_bram_to_dsp_regs, 2);
  c.n_loop_subkernels =
      w.SubkernelsAt(cfg.n_dsp) *
      (c.n_bram_to_dsp_regs + c.n_exe_logic_ops + c.n_dsp_reg_to_bram);
  c.n_copy_mem_in = w.n_fanin;
  c.n_outputs = CeilDiv(w.n_po, cfg.delta());
  c.n_compute_one_ck = c.n_copy_mem_in + c.n_loop_subkernels + c.n_outputs;
  c.n_compute = w.n_input_vectors * c.n_compute_one_ck;
  return c;
}

struct CostBreakdown {
  std::int64_t n_subkernels = 0;
  Rational alpha;
  Rational beta;
  std::int64_t n_am_dram_to_uram = 0;
  std::int64_t n_am_uram_to_bram = 0;
  std::int64_t n_read_addr_mem = 0;
  std::int64_t n_read_inputs_opcode_mem = 0;
  std::int64_t n_data_moves = 0;
  std::int64_t n_bram_to_dsp_regs = 0;
  std::int64_t n_dsp_reg_to_bram = 0;
  std::int64_t n_loop_subkernels = 0;
  std::int64_t n_copy_mem_in = 0;
  std::int64_t n_outputs = 0;
  std::int64_t n_compute_one_ck = 0;
  std::int64_t n_compute = 0;
  std::int64_t n_cc = 0;

  // Worst pipeline stage: n_cc / (m + 1).
  std::int64_t StageCycles() const { return std::max(n_data_moves, n_compute); }
};

inline CostBreakdown TotalCost(const WorkloadStats& w,
                               const MachineConfig& cfg) {
  if (w.m < 1) throw std::invalid_argument("m must be >= 1");
  const AddrMovementCost addr = AddrMovement(w, cfg);
  const InputOpcodeCost io = InputOpcodeMovement(w, cfg);
  const ComputeCost comp = Compute(w, cfg);
  CostBreakdown b;
  b.n_subkernels = w.SubkernelsAt(cfg.n_dsp);
  b.alpha = addr.alpha;
  b.beta = addr.beta;
  b.n_am_dram_to_uram = addr.dram_to_uram;
  b.n_am_uram_to_bram = addr.uram_to_bram;
  b.n_read_addr_mem = addr.read_addr_mem;
  b.n_read_inputs_opcode_mem = io.total();
  b.n_data_moves = std::max(io.total(), addr.read_addr_mem);
  b.n_bram_to_dsp_regs = comp.n_bram_to_dsp_regs;
  b.n_dsp_reg_to_bram = comp.n_dsp_reg_to_bram;
  b.n_loop_subkernels = comp.n_loop_subkernels;
  b.n_copy_mem_in = comp.n_copy_mem_in;
  b.n_outputs = comp.n_outputs;
  b.n_compute_one_ck = comp.n_compute_one_ck;
  b.n_compute = comp.n_compute;
  b.n_cc = (w.m + 1) * b.StageCycles();
  return b;
}

struct SweepPoint {
  std::int64_t n_dsp;
  std::int64_t n_data_moves;
  std::int64_t n_compute;
  std::int64_t n_cc;
};

// TotalCost for every n_dsp in [first, last].
inline std::vector<SweepPoint> SweepDsp(const WorkloadStats& w,
                                        const MachineConfig& cfg,
                                        std::int64_t first, std::int64_t last) {
  if (first < 1 || last < first) {
    throw std::invalid_argument("sweep range must satisfy 1 <= first <= last");
  }
  std::vector<SweepPoint> points;
  points.reserve(static_cast<std::size_t>(last - first + 1));
  for (std::int64_t n = first; n <= last; ++n) {
    const CostBreakdown b = TotalCost(w, cfg.WithDsp(n));
    points.push_back({n, b.n_data_moves, b.n_compute, b.n_cc});
  }
  return points;
}

}  // namespace ffcl
