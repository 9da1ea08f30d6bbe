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

// Text formats shared by the tools: input-vector files, workload stats and
// network specs.

#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffcl/cost_model.hpp"
#include "ffcl/network_optimizer.hpp"
#include "ffcl/program_io.hpp"
#include "ffcl/verify.hpp"
#include "json.hpp"

namespace ffcl {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

namespace internal {

inline std::string Trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::int64_t ParseCount(const std::string& text,
                               const std::string& what) {
  std::size_t used = 0;
  long long value = 0;
  try {
    value = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw FormatError(what + ": '" + text + "' is not an integer");
  }
  if (used != text.size() || value < 0) {
    throw FormatError(what + ": '" + text + "' is not a non-negative integer");
  }
  return value;
}

}  // namespace internal

// One vector per line, '0'/'1' per input. Blank lines and '#' comments are
// skipped.
inline InputRows ParseVectors(const std::string& text, std::size_t width) {
  InputRows rows;
  std::istringstream in(text);
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    line = internal::Trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.size() != width) {
      throw FormatError("vector line " + std::to_string(number) + " has " +
                        std::to_string(line.size()) + " bits, expected " +
                        std::to_string(width));
    }
    std::vector<std::uint8_t> row;
    row.reserve(width);
    for (char c : line) {
      if (c != '0' && c != '1') {
        throw FormatError("vector line " + std::to_string(number) +
                          " contains '" + std::string(1, c) + "'");
      }
      row.push_back(c == '1');
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string FormatVectors(const InputRows& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::uint8_t bit : row) out.push_back(bit ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

struct WorkloadFile {
  WorkloadStats stats;
  std::optional<std::int64_t> n_dsp;
};

// `key = value` lines:
//   gates_per_level = 4, 2, 1
//   n_subkernels = 4          (optional when gates_per_level is given)
//   n_fanin = 4
//   n_po = 1
//   n_input_vectors = 1
//   m = 1
//   n_dsp = 2                 (optional machine override)
inline WorkloadFile ParseWorkloadStats(const std::string& text) {
  WorkloadFile f;
  std::istringstream in(text);
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    line = internal::Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError("stats line " + std::to_string(number) +
                        ": expected key = value");
    }
    const std::string key = internal::Trim(line.substr(0, eq));
    const std::string value = internal::Trim(line.substr(eq + 1));
    if (key == "gates_per_level") {
      std::vector<std::int64_t> widths;
      std::istringstream items(value);
      std::string item;
      while (std::getline(items, item, ',')) {
        widths.push_back(internal::ParseCount(internal::Trim(item), key));
      }
      f.stats.gates_per_level = std::move(widths);
      continue;
    }
    const std::int64_t v = internal::ParseCount(value, key);
    if (key == "n_subkernels") {
      f.stats.n_subkernels = v;
    } else if (key == "n_fanin") {
      f.stats.n_fanin = v;
    } else if (key == "n_po") {
      f.stats.n_po = v;
    } else if (key == "n_input_vectors") {
      f.stats.n_input_vectors = v;
    } else if (key == "m") {
      f.stats.m = v;
    } else if (key == "n_dsp") {
      f.n_dsp = v;
    } else {
      throw FormatError("stats line " + std::to_string(number) +
                        ": unknown key '" + key + "'");
    }
  }
  if (!f.stats.gates_per_level && !f.stats.n_subkernels) {
    throw FormatError("stats need gates_per_level or n_subkernels");
  }
  return f;
}

namespace internal {

inline std::int64_t JsonCount(const nlohmann::json& obj, const char* key,
                              std::int64_t fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
    throw FormatError(std::string("'") + key +
                      "' must be a non-negative integer");
  }
  return it->get<std::int64_t>();
}

}  // namespace internal

// Network spec document:
//
//   {
//     "n_parallel_factor": 1,
//     "n_dsp_max": 2048,
//     "config": {"lane_width": 48, ...},            // optional overrides
//     "layers": [
//       {"name": "conv1", "n_filter": 64, "gates_per_level": [...],
//        "n_fanin": 27, "n_po": 1, "n_input_vectors": 16},
//       {"name": "conv2", "n_filter": 128, "program": "conv2.kp.json",
//        "n_input_vectors": 16}
//     ]
//   }
//
// Program paths are resolved against `base_dir`.
inline NetworkSpec ParseNetworkSpec(
    const std::string& text, const std::filesystem::path& base_dir = {}) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("malformed network spec: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("network spec must be an object");
  NetworkSpec net;
  net.n_parallel_factor = internal::JsonCount(j, "n_parallel_factor", 1);
  if (!j.contains("n_dsp_max")) throw FormatError("missing 'n_dsp_max'");
  net.n_dsp_max = internal::JsonCount(j, "n_dsp_max", 0);
  if (auto it = j.find("config"); it != j.end()) {
    MachineConfig& c = net.machine;
    c.lane_width = internal::JsonCount(*it, "lane_width", c.lane_width);
    c.axi_width = internal::JsonCount(*it, "axi_width", c.axi_width);
    c.addr_width = internal::JsonCount(*it, "addr_width", c.addr_width);
    c.opcode_width = internal::JsonCount(*it, "opcode_width", c.opcode_width);
    c.k_ddr_banks = internal::JsonCount(*it, "k_ddr_banks", c.k_ddr_banks);
    c.n_exe_logic_ops =
        internal::JsonCount(*it, "n_exe_logic_ops", c.n_exe_logic_ops);
  }
  const auto layers = j.find("layers");
  if (layers == j.end() || !layers->is_array()) {
    throw FormatError("network spec needs a 'layers' array");
  }
  for (const auto& l : *layers) {
    if (!l.is_object()) throw FormatError("each layer must be an object");
    LayerSpec layer;
    layer.name = l.value("name", "layer" + std::to_string(net.layers.size()));
    layer.n_filter = internal::JsonCount(l, "n_filter", 1);
    if (auto p = l.find("program"); p != l.end()) {
      if (!p->is_string()) throw FormatError("'program' must be a path");
      const KernelProgram program =
          ReadProgramFile((base_dir / p->get<std::string>()).string());
      layer.stats = WorkloadFromProgram(program);
      layer.stats.n_subkernels.reset();
    } else {
      auto g = l.find("gates_per_level");
      if (g == l.end() || !g->is_array()) {
        throw FormatError("layer '" + layer.name +
                          "' needs 'gates_per_level' or 'program'");
      }
      std::vector<std::int64_t> widths;
      for (const auto& w : *g) {
        if (!w.is_number_integer() || w.get<std::int64_t>() < 0) {
          throw FormatError("gates_per_level entries must be non-negative");
        }
        widths.push_back(w.get<std::int64_t>());
      }
      layer.stats.gates_per_level = std::move(widths);
      layer.stats.n_fanin = internal::JsonCount(l, "n_fanin", 0);
      layer.stats.n_po = internal::JsonCount(l, "n_po", 0);
    }
    layer.stats.n_input_vectors = internal::JsonCount(l, "n_input_vectors", 1);
    net.layers.push_back(std::move(layer));
  }
  net.Validate();
  return net;
}

}  // namespace ffcl
