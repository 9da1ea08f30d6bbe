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

// Compilation of a levelized netlist into a KernelProgram: one global data
// buffer with a slot per DAG node, plus per-sub-kernel address and opcode
// rows for the DSP array.
//
// Data buffer layout:
//   0            constant 0 (all lanes clear)
//   1            constant 1 (all lanes set)
//   2..2+F-1     primary inputs, declaration order
//   2+F..        gate outputs, declaration order
//
// Sub-kernel rows, for k = n_dsp slots:
//   in_addrs[2p], in_addrs[2p+1]   operands of slot p (unary: second is 0)
//   out_addrs[p]                   result slot of slot p
//   opcodes[p]                     NOP with all-zero addresses for padding

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ffcl/levelize.hpp"
#include "ffcl/machine_config.hpp"
#include "ffcl/netlist.hpp"

namespace ffcl {

using Address = std::uint32_t;

inline constexpr Address kConst0Slot = 0;
inline constexpr Address kConst1Slot = 1;
inline constexpr Address kFirstInputSlot = 2;

enum class SlotKind : std::uint8_t {
  kConst0,
  kConst1,
  kPrimaryInput,
  kInternal,
  kOutput,
};

constexpr std::string_view SlotKindName(SlotKind kind) {
  switch (kind) {
    case SlotKind::kConst0:
      return "const0";
    case SlotKind::kConst1:
      return "const1";
    case SlotKind::kPrimaryInput:
      return "primary_input";
    case SlotKind::kInternal:
      return "internal";
    case SlotKind::kOutput:
      return "output";
  }
  return "?";
}

struct BufferSlot {
  Address index;
  std::string net;
  SlotKind kind;

  bool operator==(const BufferSlot&) const = default;
};

struct SubKernel {
  int level = 0;
  std::vector<Address> in_addrs;   // 2 * n_dsp
  std::vector<Address> out_addrs;  // n_dsp
  std::vector<Opcode> opcodes;     // n_dsp

  bool operator==(const SubKernel&) const = default;

  std::size_t ActiveSlots() const {
    std::size_t n = 0;
    for (Opcode op : opcodes) n += op != Opcode::kNop;
    return n;
  }
};

class CompileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ProgramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KernelProgram {
  std::string name;
  MachineConfig config;
  std::vector<BufferSlot> buffer;
  std::vector<SubKernel> subkernels;
  std::int64_t n_fanin = 0;
  std::int64_t n_po = 0;
  // Buffer slot of each primary output, in output declaration order.
  std::vector<Address> outputs;

  bool operator==(const KernelProgram&) const = default;

  std::int64_t n_subkernels() const {
    return static_cast<std::int64_t>(subkernels.size());
  }
  // Address words fetched per sub-kernel: two operands and one result for
  // every DSP slot.
  std::int64_t n_subk_addresses() const { return 3 * config.n_dsp; }

  std::vector<std::string> InputNames() const {
    std::vector<std::string> names;
    for (std::int64_t i = 0; i < n_fanin; ++i) {
      names.push_back(buffer.at(kFirstInputSlot + i).net);
    }
    return names;
  }

  std::vector<std::string> OutputNames() const {
    std::vector<std::string> names;
    for (Address a : outputs) names.push_back(buffer.at(a).net);
    return names;
  }

  // Active (non-NOP) slot count per level, recovering the level widths of
  // the source netlist.
  std::vector<std::int64_t> GatesPerLevel() const {
    std::vector<std::int64_t> widths;
    for (const SubKernel& sk : subkernels) {
      if (sk.level < 1) continue;
      if (widths.size() < static_cast<std::size_t>(sk.level)) {
        widths.resize(sk.level, 0);
      }
      widths[sk.level - 1] += static_cast<std::int64_t>(sk.ActiveSlots());
    }
    return widths;
  }

  // Checks every structural invariant; throws ProgramError.
  void Validate() const;
};

inline void KernelProgram::Validate() const {
  auto fail = [](const std::string& what) {
    throw ProgramError("invalid kernel program: " + what);
  };
  try {
    config.Validate();
  } catch (const ConfigError& e) {
    fail(e.what());
  }
  const std::size_t size = buffer.size();
  if (n_fanin < 0 || size < 2 + static_cast<std::size_t>(n_fanin)) {
    fail("buffer too small for constants and " + std::to_string(n_fanin) +
         " primary inputs");
  }
  if (size > config.address_space()) {
    fail("buffer of " + std::to_string(size) + " slots exceeds the " +
         std::to_string(config.addr_width) + "-bit address space");
  }
  for (std::size_t i = 0; i < size; ++i) {
    const BufferSlot& slot = buffer[i];
    if (slot.index != i)
      fail("buffer index " + std::to_string(i) + " is out of order");
    SlotKind expected;
    if (i == kConst0Slot) {
      expected = SlotKind::kConst0;
    } else if (i == kConst1Slot) {
      expected = SlotKind::kConst1;
    } else if (i < kFirstInputSlot + static_cast<std::size_t>(n_fanin)) {
      expected = SlotKind::kPrimaryInput;
    } else {
      if (slot.kind != SlotKind::kInternal && slot.kind != SlotKind::kOutput) {
        fail("slot " + std::to_string(i) + " must hold a gate output");
      }
      continue;
    }
    if (slot.kind != expected) {
      fail("slot " + std::to_string(i) + " must be " +
           std::string(SlotKindName(expected)));
    }
  }

  if (n_po != static_cast<std::int64_t>(outputs.size())) {
    fail("n_po does not match the output list");
  }
  std::vector<bool> is_output(size, false);
  for (Address a : outputs) {
    if (a >= size)
      fail("output address " + std::to_string(a) + " out of range");
    if (buffer[a].kind != SlotKind::kOutput &&
        buffer[a].kind != SlotKind::kPrimaryInput) {
      fail("output address " + std::to_string(a) + " is not an output slot");
    }
    is_output[a] = true;
  }
  for (std::size_t i = 0; i < size; ++i) {
    if (buffer[i].kind == SlotKind::kOutput && !is_output[i]) {
      fail("output slot " + std::to_string(i) + " missing from output list");
    }
  }

  const auto k = static_cast<std::size_t>(config.n_dsp);
  // written_level[a]: level that produced slot a; 0 for constants and inputs.
  constexpr int kUnwritten = -1;
  std::vector<int> written_level(size, kUnwritten);
  for (std::size_t i = 0;
       i < kFirstInputSlot + static_cast<std::size_t>(n_fanin); ++i) {
    written_level[i] = 0;
  }
  int previous_level = 1;
  for (std::size_t t = 0; t < subkernels.size(); ++t) {
    const SubKernel& sk = subkernels[t];
    const std::string where = "sub-kernel " + std::to_string(t);
    if (sk.in_addrs.size() != 2 * k || sk.out_addrs.size() != k ||
        sk.opcodes.size() != k) {
      fail(where + " rows do not match n_dsp=" + std::to_string(k));
    }
    if (sk.level < previous_level) fail(where + " breaks level order");
    previous_level = sk.level;
    for (Address a : sk.in_addrs) {
      if (a >= size)
        fail(where + " reads address " + std::to_string(a) + " out of range");
    }
    for (Address a : sk.out_addrs) {
      if (a >= size)
        fail(where + " writes address " + std::to_string(a) + " out of range");
    }
    for (std::size_t p = 0; p < k; ++p) {
      const Opcode op = sk.opcodes[p];
      const Address a = sk.in_addrs[2 * p];
      const Address b = sk.in_addrs[2 * p + 1];
      const Address out = sk.out_addrs[p];
      if (op == Opcode::kNop) {
        if (a != 0 || b != 0 || out != 0) {
          fail(where + " slot " + std::to_string(p) + " is NOP with addresses");
        }
        continue;
      }
      if (IsUnary(op) && b != 0) {
        fail(where + " slot " + std::to_string(p) +
             " unary op with second operand");
      }
      auto check_read = [&](Address in) {
        if (written_level[in] == kUnwritten || written_level[in] >= sk.level) {
          fail(where + " slot " + std::to_string(p) + " reads slot " +
               std::to_string(in) + " before it is produced");
        }
      };
      check_read(a);
      if (!IsUnary(op)) check_read(b);
      if (out < kFirstInputSlot + static_cast<std::size_t>(n_fanin)) {
        fail(where + " slot " + std::to_string(p) +
             " writes a constant or primary-input slot");
      }
      if (written_level[out] != kUnwritten) {
        fail(where + " slot " + std::to_string(p) + " writes slot " +
             std::to_string(out) + " a second time");
      }
      written_level[out] = sk.level;
    }
  }
  for (std::size_t i = 0; i < size; ++i) {
    if (written_level[i] == kUnwritten) {
      fail("slot " + std::to_string(i) + " is never written");
    }
  }
}

// Compiles `netlist` for the machine described by `config`. Throws
// CompileError when the buffer does not fit the address space.
inline KernelProgram Compile(const GateNetlist& netlist,
                             const MachineConfig& config) {
  config.Validate();
  const LeveledNetlist leveled = Levelize(netlist);
  const std::size_t buffer_size =
      2 + netlist.primary_inputs.size() + netlist.gates.size();
  if (buffer_size > config.address_space()) {
    throw CompileError(
        "netlist '" + netlist.name + "' needs " + std::to_string(buffer_size) +
        " buffer slots but addresses are " + std::to_string(config.addr_width) +
        " bits wide (" + std::to_string(config.address_space()) + " slots)");
  }

  KernelProgram p;
  p.name = netlist.name;
  p.config = config;
  p.n_fanin = static_cast<std::int64_t>(netlist.primary_inputs.size());
  p.n_po = static_cast<std::int64_t>(netlist.primary_outputs.size());

  std::unordered_map<std::string, Address> slot_of;
  std::unordered_map<std::string, bool> is_po;
  for (const std::string& po : netlist.primary_outputs) is_po[po] = true;
  p.buffer.push_back({kConst0Slot, "1'b0", SlotKind::kConst0});
  p.buffer.push_back({kConst1Slot, "1'b1", SlotKind::kConst1});
  for (const std::string& pi : netlist.primary_inputs) {
    const auto index = static_cast<Address>(p.buffer.size());
    slot_of[pi] = index;
    p.buffer.push_back({index, pi, SlotKind::kPrimaryInput});
  }
  for (const Gate& g : netlist.gates) {
    const auto index = static_cast<Address>(p.buffer.size());
    slot_of[g.output] = index;
    p.buffer.push_back(
        {index, g.output,
         is_po.contains(g.output) ? SlotKind::kOutput : SlotKind::kInternal});
  }
  for (const std::string& po : netlist.primary_outputs) {
    p.outputs.push_back(slot_of.at(po));
  }

  const auto k = static_cast<std::size_t>(config.n_dsp);
  for (const Slice& slice : Partition(leveled, config.n_dsp)) {
    SubKernel sk;
    sk.level = slice.level;
    sk.in_addrs.assign(2 * k, 0);
    sk.out_addrs.assign(k, 0);
    sk.opcodes.assign(k, Opcode::kNop);
    for (std::size_t slot = 0; slot < slice.gates.size(); ++slot) {
      const Gate& g = netlist.gates[slice.gates[slot]];
      sk.opcodes[slot] = OpcodeFor(g.op);
      sk.out_addrs[slot] = slot_of.at(g.output);
      switch (g.op) {
        case GateOp::kConst0:
          sk.in_addrs[2 * slot] = kConst0Slot;
          break;
        case GateOp::kConst1:
          sk.in_addrs[2 * slot] = kConst1Slot;
          break;
        default:
          sk.in_addrs[2 * slot] = slot_of.at(g.operands[0]);
          if (g.operands.size() > 1) {
            sk.in_addrs[2 * slot + 1] = slot_of.at(g.operands[1]);
          }
      }
    }
    p.subkernels.push_back(std::move(sk));
  }
  return p;
}

// The address memory as rows of 2 * n_dsp words: each sub-kernel contributes
// its operand row, then its result row zero-padded to the same width.
inline std::vector<std::vector<Address>> AddressMemoryRows(
    const KernelProgram& p) {
  std::vector<std::vector<Address>> rows;
  for (const SubKernel& sk : p.subkernels) {
    rows.push_back(sk.in_addrs);
    std::vector<Address> out = sk.out_addrs;
    out.resize(sk.in_addrs.size(), 0);
    rows.push_back(std::move(out));
  }
  return rows;
}

// The 3 * n_dsp address words of one sub-kernel in fetch order: operand
// pairs at 2p, 2p+1 followed by results at 2k..3k-1.
inline std::vector<Address> AddressWords(const SubKernel& sk) {
  std::vector<Address> words = sk.in_addrs;
  words.insert(words.end(), sk.out_addrs.begin(), sk.out_addrs.end());
  return words;
}

}  // namespace ffcl
