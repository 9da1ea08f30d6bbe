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

// Gate-level combinational netlist model and structural validation.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ffcl {

enum class GateOp : std::uint8_t {
  kAnd,
  kOr,
  kXor,
  kNand,
  kNor,
  kXnor,
  kNot,
  kBuf,
  kConst0,
  kConst1,
};

inline constexpr GateOp kAllGateOps[] = {
    GateOp::kAnd,  GateOp::kOr,  GateOp::kXor, GateOp::kNand,   GateOp::kNor,
    GateOp::kXnor, GateOp::kNot, GateOp::kBuf, GateOp::kConst0, GateOp::kConst1,
};

constexpr int Arity(GateOp op) {
  switch (op) {
    case GateOp::kNot:
    case GateOp::kBuf:
      return 1;
    case GateOp::kConst0:
    case GateOp::kConst1:
      return 0;
    default:
      return 2;
  }
}

constexpr std::string_view GateOpName(GateOp op) {
  switch (op) {
    case GateOp::kAnd:
      return "AND";
    case GateOp::kOr:
      return "OR";
    case GateOp::kXor:
      return "XOR";
    case GateOp::kNand:
      return "NAND";
    case GateOp::kNor:
      return "NOR";
    case GateOp::kXnor:
      return "XNOR";
    case GateOp::kNot:
      return "NOT";
    case GateOp::kBuf:
      return "BUF";
    case GateOp::kConst0:
      return "CONST0";
    case GateOp::kConst1:
      return "CONST1";
  }
  return "?";
}

// Bitwise evaluation over any unsigned word; a single bool works too.
// Unused operands are ignored.
template <typename Word>
constexpr Word ApplyGate(GateOp op, Word a, Word b) {
  switch (op) {
    case GateOp::kAnd:
      return a & b;
    case GateOp::kOr:
      return a | b;
    case GateOp::kXor:
      return a ^ b;
    case GateOp::kNand:
      return ~(a & b);
    case GateOp::kNor:
      return ~(a | b);
    case GateOp::kXnor:
      return ~(a ^ b);
    case GateOp::kNot:
      return ~a;
    case GateOp::kBuf:
      return a;
    case GateOp::kConst0:
      return Word{0};
    case GateOp::kConst1:
      return static_cast<Word>(~Word{0});
  }
  return Word{0};
}

inline bool ApplyGateBit(GateOp op, bool a, bool b) {
  return (ApplyGate<unsigned>(op, a ? 1u : 0u, b ? 1u : 0u) & 1u) != 0;
}

struct Gate {
  std::string output;
  GateOp op;
  std::vector<std::string> operands;

  bool operator==(const Gate&) const = default;
};

// Errors raised while reading or validating a netlist. Syntax errors carry
// a 1-based line/column; structural errors leave them at 0.
class NetlistError : public std::runtime_error {
 public:
  enum class Kind {
    kSyntax,
    kUnsupportedExpression,
    kUndeclaredNet,
    kMultiplyDriven,
    kUndrivenNet,
    kCombinationalCycle,
    kArity,
  };

  NetlistError(Kind kind, std::string message, int line = 0, int column = 0)
      : std::runtime_error(Format(kind, message, line, column)),
        kind_(kind),
        line_(line),
        column_(column) {}

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

  static std::string_view KindName(Kind kind) {
    switch (kind) {
      case Kind::kSyntax:
        return "syntax error";
      case Kind::kUnsupportedExpression:
        return "unsupported expression";
      case Kind::kUndeclaredNet:
        return "undeclared net";
      case Kind::kMultiplyDriven:
        return "multiply-driven net";
      case Kind::kUndrivenNet:
        return "undriven net";
      case Kind::kCombinationalCycle:
        return "combinational cycle";
      case Kind::kArity:
        return "arity mismatch";
    }
    return "error";
  }

 private:
  static std::string Format(Kind kind, const std::string& message, int line,
                            int column) {
    std::ostringstream os;
    if (line > 0) os << line << ":" << column << ": ";
    os << KindName(kind) << ": " << message;
    return os.str();
  }

  Kind kind_;
  int line_;
  int column_;
};

// A combinational DAG of single-output gates. Gates are kept in declaration
// order, which need not be topological.
struct GateNetlist {
  std::string name;
  std::vector<std::string> primary_inputs;
  std::vector<std::string> primary_outputs;
  std::vector<Gate> gates;

  bool operator==(const GateNetlist&) const = default;

  // Every net: primary inputs followed by gate outputs in declaration order.
  std::vector<std::string> Nets() const {
    std::vector<std::string> nets = primary_inputs;
    nets.reserve(primary_inputs.size() + gates.size());
    for (const Gate& g : gates) nets.push_back(g.output);
    return nets;
  }

  // Index of the gate driving `net`, if any.
  std::optional<std::size_t> DriverOf(std::string_view net) const {
    for (std::size_t i = 0; i < gates.size(); ++i) {
      if (gates[i].output == net) return i;
    }
    return std::nullopt;
  }

  // Gate indices in a topological order (stable with respect to declaration
  // order among ready gates). Throws kCombinationalCycle if none exists.
  std::vector<std::size_t> TopologicalOrder() const;

  // Checks every structural invariant, throwing NetlistError on the first
  // violation.
  void Validate() const;
};

namespace internal {

// Maps each net to the gate index driving it; primary inputs map to npos.
inline std::unordered_map<std::string, std::size_t> DriverMap(
    const GateNetlist& n) {
  constexpr std::size_t kInput = static_cast<std::size_t>(-1);
  std::unordered_map<std::string, std::size_t> drivers;
  drivers.reserve(n.primary_inputs.size() + n.gates.size());
  for (const std::string& pi : n.primary_inputs) {
    if (!drivers.emplace(pi, kInput).second) {
      throw NetlistError(NetlistError::Kind::kMultiplyDriven,
                         "primary input '" + pi + "' declared twice");
    }
  }
  for (std::size_t i = 0; i < n.gates.size(); ++i) {
    const std::string& out = n.gates[i].output;
    auto [it, inserted] = drivers.emplace(out, i);
    if (!inserted) {
      throw NetlistError(NetlistError::Kind::kMultiplyDriven,
                         "net '" + out + "' is driven more than once");
    }
  }
  return drivers;
}

}  // namespace internal

inline std::vector<std::size_t> GateNetlist::TopologicalOrder() const {
  constexpr std::size_t kInput = static_cast<std::size_t>(-1);
  const auto drivers = internal::DriverMap(*this);
  std::vector<std::size_t> pending(gates.size(), 0);
  std::vector<std::vector<std::size_t>> fanout(gates.size());
  for (std::size_t i = 0; i < gates.size(); ++i) {
    for (const std::string& operand : gates[i].operands) {
      auto it = drivers.find(operand);
      if (it == drivers.end()) {
        throw NetlistError(NetlistError::Kind::kUndrivenNet,
                           "net '" + operand + "' read by '" + gates[i].output +
                               "' has no driver");
      }
      if (it->second != kInput) {
        ++pending[i];
        fanout[it->second].push_back(i);
      }
    }
  }
  std::vector<std::size_t> order;
  order.reserve(gates.size());
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (pending[i] == 0) order.push_back(i);
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (std::size_t succ : fanout[order[head]]) {
      if (--pending[succ] == 0) order.push_back(succ);
    }
  }
  if (order.size() != gates.size()) {
    for (std::size_t i = 0; i < gates.size(); ++i) {
      if (pending[i] != 0) {
        throw NetlistError(NetlistError::Kind::kCombinationalCycle,
                           "net '" + gates[i].output +
                               "' lies on or behind a combinational cycle");
      }
    }
  }
  return order;
}

inline void GateNetlist::Validate() const {
  for (const Gate& g : gates) {
    if (static_cast<int>(g.operands.size()) != Arity(g.op)) {
      throw NetlistError(NetlistError::Kind::kArity,
                         "gate '" + g.output + "' (" +
                             std::string(GateOpName(g.op)) + ") has " +
                             std::to_string(g.operands.size()) + " operands");
    }
  }
  const auto drivers = internal::DriverMap(*this);
  std::unordered_set<std::string> seen_outputs;
  for (const std::string& po : primary_outputs) {
    if (!seen_outputs.insert(po).second) {
      throw NetlistError(NetlistError::Kind::kMultiplyDriven,
                         "primary output '" + po + "' listed twice");
    }
    if (!drivers.contains(po)) {
      throw NetlistError(NetlistError::Kind::kUndrivenNet,
                         "primary output '" + po + "' has no driver");
    }
  }
  TopologicalOrder();
}

// Canonical structural-Verilog text. Parsing the result yields an equal
// netlist.
inline std::string PrintNetlist(const GateNetlist& n) {
  std::ostringstream os;
  os << "module " << n.name << " (";
  bool first = true;
  for (const auto* list : {&n.primary_inputs, &n.primary_outputs}) {
    for (const std::string& port : *list) {
      os << (first ? "" : ", ") << port;
      first = false;
    }
  }
  os << ");\n";
  auto declare = [&os](std::string_view keyword,
                       const std::vector<std::string>& nets) {
    if (nets.empty()) return;
    os << "  " << keyword << " ";
    for (std::size_t i = 0; i < nets.size(); ++i) {
      os << (i ? ", " : "") << nets[i];
    }
    os << ";\n";
  };
  declare("input", n.primary_inputs);
  declare("output", n.primary_outputs);
  std::unordered_set<std::string> outputs(n.primary_outputs.begin(),
                                          n.primary_outputs.end());
  std::vector<std::string> wires;
  for (const Gate& g : n.gates) {
    if (!outputs.contains(g.output)) wires.push_back(g.output);
  }
  declare("wire", wires);
  for (const Gate& g : n.gates) {
    os << "  assign " << g.output << " = ";
    switch (g.op) {
      case GateOp::kAnd:
        os << g.operands[0] << " & " << g.operands[1];
        break;
      case GateOp::kOr:
        os << g.operands[0] << " | " << g.operands[1];
        break;
      case GateOp::kXor:
        os << g.operands[0] << " ^ " << g.operands[1];
        break;
      case GateOp::kNand:
        os << "~(" << g.operands[0] << " & " << g.operands[1] << ")";
        break;
      case GateOp::kNor:
        os << "~(" << g.operands[0] << " | " << g.operands[1] << ")";
        break;
      case GateOp::kXnor:
        os << "~(" << g.operands[0] << " ^ " << g.operands[1] << ")";
        break;
      case GateOp::kNot:
        os << "~" << g.operands[0];
        break;
      case GateOp::kBuf:
        os << g.operands[0];
        break;
      case GateOp::kConst0:
        os << "1'b0";
        break;
      case GateOp::kConst1:
        os << "1'b1";
        break;
    }
    os << ";\n";
  }
  os << "endmodule\n";
  return os.str();
}

}  // namespace ffcl
