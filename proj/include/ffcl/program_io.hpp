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

// JSON form of a KernelProgram (.kp.json). Serialization is canonical: the
// same program always produces the same bytes.

#pragma once

#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "ffcl/compiler.hpp"
#include "json.hpp"

namespace ffcl {
namespace internal {

using ordered_json = nlohmann::ordered_json;

inline ordered_json ConfigToJson(const MachineConfig& c) {
  ordered_json j;
  j["n_dsp"] = c.n_dsp;
  j["lane_width"] = c.lane_width;
  j["axi_width"] = c.axi_width;
  j["addr_width"] = c.addr_width;
  j["opcode_width"] = c.opcode_width;
  j["k_ddr_banks"] = c.k_ddr_banks;
  j["n_exe_logic_ops"] = c.n_exe_logic_ops;
  return j;
}

[[noreturn]] inline void SchemaError(const std::string& what) {
  throw ProgramError("schema violation: " + what);
}

inline const ordered_json& Field(const ordered_json& obj,
                                 const std::string& key) {
  if (!obj.is_object()) SchemaError("expected an object around '" + key + "'");
  auto it = obj.find(key);
  if (it == obj.end()) SchemaError("missing field '" + key + "'");
  return *it;
}

inline std::int64_t IntField(const ordered_json& obj, const std::string& key) {
  const ordered_json& v = Field(obj, key);
  if (!v.is_number_integer()) SchemaError("'" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

inline std::string StringField(const ordered_json& obj,
                               const std::string& key) {
  const ordered_json& v = Field(obj, key);
  if (!v.is_string()) SchemaError("'" + key + "' must be a string");
  return v.get<std::string>();
}

inline std::vector<Address> AddressArray(const ordered_json& obj,
                                         const std::string& key) {
  const ordered_json& v = Field(obj, key);
  if (!v.is_array()) SchemaError("'" + key + "' must be an array");
  std::vector<Address> out;
  out.reserve(v.size());
  for (const ordered_json& e : v) {
    if (!e.is_number_integer() || e.get<std::int64_t>() < 0 ||
        e.get<std::int64_t>() > std::numeric_limits<Address>::max()) {
      SchemaError("'" + key + "' entries must be non-negative addresses");
    }
    out.push_back(static_cast<Address>(e.get<std::int64_t>()));
  }
  return out;
}

inline SlotKind SlotKindFromName(const std::string& name) {
  for (SlotKind kind :
       {SlotKind::kConst0, SlotKind::kConst1, SlotKind::kPrimaryInput,
        SlotKind::kInternal, SlotKind::kOutput}) {
    if (SlotKindName(kind) == name) return kind;
  }
  SchemaError("unknown buffer kind '" + name + "'");
}

}  // namespace internal

inline std::string SerializeProgram(const KernelProgram& p) {
  internal::ordered_json j;
  j["name"] = p.name;
  j["config"] = internal::ConfigToJson(p.config);
  auto& buffer = j["buffer"] = internal::ordered_json::array();
  for (const BufferSlot& slot : p.buffer) {
    internal::ordered_json s;
    s["index"] = slot.index;
    s["net"] = slot.net;
    s["kind"] = std::string(SlotKindName(slot.kind));
    buffer.push_back(std::move(s));
  }
  auto& subkernels = j["subkernels"] = internal::ordered_json::array();
  for (const SubKernel& sk : p.subkernels) {
    internal::ordered_json s;
    s["level"] = sk.level;
    s["in_addrs"] = sk.in_addrs;
    s["out_addrs"] = sk.out_addrs;
    auto& ops = s["opcodes"] = internal::ordered_json::array();
    for (Opcode op : sk.opcodes) ops.push_back(std::string(OpcodeName(op)));
    subkernels.push_back(std::move(s));
  }
  j["n_fanin"] = p.n_fanin;
  j["n_po"] = p.n_po;
  j["outputs"] = p.outputs;
  return j.dump() + "\n";
}

// Parses and re-validates a program document. Throws ProgramError.
inline KernelProgram DeserializeProgram(const std::string& text) {
  using internal::Field;
  using internal::IntField;
  internal::ordered_json j;
  try {
    j = internal::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProgramError(std::string("malformed JSON: ") + e.what());
  }
  KernelProgram p;
  p.name = internal::StringField(j, "name");
  const auto& cfg = Field(j, "config");
  p.config.n_dsp = IntField(cfg, "n_dsp");
  p.config.lane_width = IntField(cfg, "lane_width");
  p.config.axi_width = IntField(cfg, "axi_width");
  p.config.addr_width = IntField(cfg, "addr_width");
  p.config.opcode_width = IntField(cfg, "opcode_width");
  p.config.k_ddr_banks = IntField(cfg, "k_ddr_banks");
  p.config.n_exe_logic_ops = IntField(cfg, "n_exe_logic_ops");

  const auto& buffer = Field(j, "buffer");
  if (!buffer.is_array()) internal::SchemaError("'buffer' must be an array");
  for (const auto& s : buffer) {
    const std::int64_t index = IntField(s, "index");
    if (index < 0 || index > std::numeric_limits<Address>::max()) {
      internal::SchemaError("buffer index out of range");
    }
    p.buffer.push_back(
        {static_cast<Address>(index), internal::StringField(s, "net"),
         internal::SlotKindFromName(internal::StringField(s, "kind"))});
  }
  const auto& subkernels = Field(j, "subkernels");
  if (!subkernels.is_array()) {
    internal::SchemaError("'subkernels' must be an array");
  }
  for (const auto& s : subkernels) {
    SubKernel sk;
    const std::int64_t level = IntField(s, "level");
    if (level < 1 || level > std::numeric_limits<int>::max()) {
      internal::SchemaError("sub-kernel level must be >= 1");
    }
    sk.level = static_cast<int>(level);
    sk.in_addrs = internal::AddressArray(s, "in_addrs");
    sk.out_addrs = internal::AddressArray(s, "out_addrs");
    const auto& ops = Field(s, "opcodes");
    if (!ops.is_array()) internal::SchemaError("'opcodes' must be an array");
    for (const auto& op : ops) {
      if (!op.is_string()) internal::SchemaError("opcodes must be strings");
      auto parsed = OpcodeFromName(op.get<std::string>());
      if (!parsed) {
        internal::SchemaError("unknown opcode '" + op.get<std::string>() + "'");
      }
      sk.opcodes.push_back(*parsed);
    }
    p.subkernels.push_back(std::move(sk));
  }
  p.n_fanin = IntField(j, "n_fanin");
  p.n_po = IntField(j, "n_po");
  p.outputs = internal::AddressArray(j, "outputs");
  p.Validate();
  return p;
}

inline void WriteProgramFile(const KernelProgram& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << SerializeProgram(p);
}

inline KernelProgram ReadProgramFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open program '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return DeserializeProgram(buffer.str());
}

}  // namespace ffcl
