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

// Parameters of the abstract DSP-array machine and its opcode encoding.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ffcl/netlist.hpp"

namespace ffcl {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bus and memory widths default to a 512-bit AXI bus, 14-bit addresses,
// 48-lane DSP words, 6-bit opcodes and four DDR banks.
struct MachineConfig {
  std::int64_t n_dsp = 1000;
  std::int64_t lane_width = 48;
  std::int64_t axi_width = 512;
  std::int64_t addr_width = 14;
  std::int64_t opcode_width = 6;
  std::int64_t k_ddr_banks = 4;
  std::int64_t n_exe_logic_ops = 1;

  bool operator==(const MachineConfig&) const = default;

  // Addresses per bus beat.
  std::int64_t lambda() const { return axi_width / addr_width; }
  // Data words per bus beat.
  std::int64_t delta() const { return axi_width / lane_width; }
  // Opcodes per bus beat.
  std::int64_t zeta() const { return axi_width / opcode_width; }

  // Number of addressable data-buffer slots.
  std::uint64_t address_space() const { return std::uint64_t{1} << addr_width; }

  MachineConfig WithDsp(std::int64_t n) const {
    MachineConfig c = *this;
    c.n_dsp = n;
    return c;
  }

  void Validate() const {
    auto require = [](bool ok, const std::string& what) {
      if (!ok) throw ConfigError("invalid machine config: " + what);
    };
    require(n_dsp >= 1, "n_dsp must be >= 1");
    // Lanes are packed into one 64-bit host word by the simulator.
    require(lane_width >= 1 && lane_width <= 64,
            "lane_width must be in [1, 64]");
    require(addr_width >= 1 && addr_width <= 32,
            "addr_width must be in [1, 32]");
    require(opcode_width >= 4, "opcode_width must be >= 4 to encode opcodes");
    require(axi_width >= 1, "axi_width must be positive");
    require(lambda() >= 1, "axi_width must be >= addr_width");
    require(delta() >= 1, "axi_width must be >= lane_width");
    require(zeta() >= 1, "axi_width must be >= opcode_width");
    require(k_ddr_banks >= 2, "k_ddr_banks must be >= 2");
    require(n_exe_logic_ops >= 1, "n_exe_logic_ops must be >= 1");
  }
};

// Per-slot DSP operation. The numeric value is the field stored in the
// opcode buffer.
enum class Opcode : std::uint8_t {
  kNop = 0,
  kAnd = 1,
  kOr = 2,
  kXor = 3,
  kNand = 4,
  kNor = 5,
  kXnor = 6,
  kNot = 7,
  kBuf = 8,
};

inline constexpr Opcode kAllOpcodes[] = {
    Opcode::kNop, Opcode::kAnd,  Opcode::kOr,  Opcode::kXor, Opcode::kNand,
    Opcode::kNor, Opcode::kXnor, Opcode::kNot, Opcode::kBuf,
};

constexpr std::string_view OpcodeName(Opcode op) {
  switch (op) {
    case Opcode::kNop:
      return "NOP";
    case Opcode::kAnd:
      return "AND";
    case Opcode::kOr:
      return "OR";
    case Opcode::kXor:
      return "XOR";
    case Opcode::kNand:
      return "NAND";
    case Opcode::kNor:
      return "NOR";
    case Opcode::kXnor:
      return "XNOR";
    case Opcode::kNot:
      return "NOT";
    case Opcode::kBuf:
      return "BUF";
  }
  return "?";
}

inline std::optional<Opcode> OpcodeFromName(std::string_view name) {
  for (Opcode op : kAllOpcodes) {
    if (OpcodeName(op) == name) return op;
  }
  return std::nullopt;
}

constexpr bool IsUnary(Opcode op) {
  return op == Opcode::kNot || op == Opcode::kBuf;
}

// Constants compile to BUF of a constant slot.
constexpr Opcode OpcodeFor(GateOp op) {
  switch (op) {
    case GateOp::kAnd:
      return Opcode::kAnd;
    case GateOp::kOr:
      return Opcode::kOr;
    case GateOp::kXor:
      return Opcode::kXor;
    case GateOp::kNand:
      return Opcode::kNand;
    case GateOp::kNor:
      return Opcode::kNor;
    case GateOp::kXnor:
      return Opcode::kXnor;
    case GateOp::kNot:
      return Opcode::kNot;
    default:
      return Opcode::kBuf;
  }
}

// Lane-wise execution of one DSP slot on 64-bit words.
constexpr std::uint64_t Execute(Opcode op, std::uint64_t a, std::uint64_t b) {
  switch (op) {
    case Opcode::kAnd:
      return a & b;
    case Opcode::kOr:
      return a | b;
    case Opcode::kXor:
      return a ^ b;
    case Opcode::kNand:
      return ~(a & b);
    case Opcode::kNor:
      return ~(a | b);
    case Opcode::kXnor:
      return ~(a ^ b);
    case Opcode::kNot:
      return ~a;
    case Opcode::kBuf:
      return a;
    case Opcode::kNop:
      return 0;
  }
  return 0;
}

}  // namespace ffcl
