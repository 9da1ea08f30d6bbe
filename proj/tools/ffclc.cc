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

// ffclc: compile, simulate, verify and cost FFCL netlists on the DSP
// machine model.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "ffcl/compiler.hpp"
#include "ffcl/cost_model.hpp"
#include "ffcl/levelize.hpp"
#include "ffcl/netlist_parser.hpp"
#include "ffcl/network_optimizer.hpp"
#include "ffcl/program_io.hpp"
#include "ffcl/random_netlist.hpp"
#include "ffcl/simulator.hpp"
#include "ffcl/spec_io.hpp"
#include "ffcl/verify.hpp"
#include "json.hpp"

namespace ffcl {
namespace {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kCompile = 3,
  kMismatch = 4,
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Machine flags shared by every subcommand. Only flags given on the command
// line override a base config (the defaults, a program's or a spec's).
struct ConfigFlags {
  MachineConfig values;
  std::vector<std::pair<std::string, CLI::Option*>> options;

  void Register(CLI::App* app) {
    auto add = [&](const char* flag, const char* key, std::int64_t& field,
                   const char* help) {
      options.emplace_back(
          key, app->add_option(flag, field, help)->capture_default_str());
    };
    add("--n-dsp", "n_dsp", values.n_dsp, "DSP slots per sub-kernel");
    add("--lane-width", "lane_width", values.lane_width, "SIMD lanes per word");
    add("--axi-width", "axi_width", values.axi_width, "AXI bus width in bits");
    add("--addr-width", "addr_width", values.addr_width,
        "data-buffer address width in bits");
    add("--opcode-width", "opcode_width", values.opcode_width,
        "opcode width in bits");
    add("--ddr-banks", "k_ddr_banks", values.k_ddr_banks, "DDR banks");
    add("--exe-cycles", "n_exe_logic_ops", values.n_exe_logic_ops,
        "cycles per logic operation");
  }

  bool Given(const std::string& key) const {
    // Every subcommand registers its own copy of each flag.
    for (const auto& [k, opt] : options) {
      if (k == key && opt->count() > 0) return true;
    }
    return false;
  }

  MachineConfig Apply(MachineConfig base) const {
    const std::pair<const char*, std::int64_t MachineConfig::*> fields[] = {
        {"n_dsp", &MachineConfig::n_dsp},
        {"lane_width", &MachineConfig::lane_width},
        {"axi_width", &MachineConfig::axi_width},
        {"addr_width", &MachineConfig::addr_width},
        {"opcode_width", &MachineConfig::opcode_width},
        {"k_ddr_banks", &MachineConfig::k_ddr_banks},
        {"n_exe_logic_ops", &MachineConfig::n_exe_logic_ops},
    };
    for (const auto& [key, member] : fields) {
      if (Given(key)) base.*member = values.*member;
    }
    return base;
  }

  nlohmann::ordered_json Overrides() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    const MachineConfig& v = values;
    const std::pair<const char*, std::int64_t> all[] = {
        {"n_dsp", v.n_dsp},
        {"lane_width", v.lane_width},
        {"axi_width", v.axi_width},
        {"addr_width", v.addr_width},
        {"opcode_width", v.opcode_width},
        {"k_ddr_banks", v.k_ddr_banks},
        {"n_exe_logic_ops", v.n_exe_logic_ops},
    };
    for (const auto& [key, value] : all) {
      if (Given(key)) j[key] = value;
    }
    return j;
  }
};

// Reproducibility record of one invocation.
struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::optional<std::uint64_t> seed;
  int exit_status = 0;
  std::vector<std::string> artifacts;

  std::string ToJson() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["config"] = config;
    j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json();
    j["exit_status"] = exit_status;
    j["artifacts"] = artifacts;
    return j.dump(2) + "\n";
  }
};

struct InputOptions {
  std::size_t vectors = 1000;
  bool exhaustive = false;
  std::string vector_file;
  std::uint64_t seed = 1;
  unsigned threads = 0;

  void Register(CLI::App* app) {
    app->add_option("--vectors", vectors, "number of random input vectors")
        ->capture_default_str();
    app->add_flag("--exhaustive", exhaustive, "apply all 2^n input vectors");
    app->add_option("--inputs", vector_file,
                    "file of input vectors, one 0/1 string per line");
    app->add_option("--seed", seed, "seed for random vectors")
        ->capture_default_str();
    app->add_option("--threads", threads,
                    "worker threads (0 = hardware concurrency)");
  }

  unsigned Threads() const {
    if (threads > 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
  }

  InputRows Rows(std::size_t width) const {
    if (!vector_file.empty()) {
      return ParseVectors(ReadTextFile(vector_file), width);
    }
    if (exhaustive) return ExhaustiveVectors(width);
    return RandomVectors(width, vectors, seed);
  }
};

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string DefaultProgramPath(const std::string& netlist_path) {
  std::filesystem::path p(netlist_path);
  return p.replace_extension(".kp.json").string();
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

void PrintBreakdown(const CostBreakdown& b, const WorkloadStats& w,
                    const MachineConfig& cfg) {
  std::cout << "n_dsp                     " << cfg.n_dsp << "\n"
            << "n_subkernels              " << b.n_subkernels << "\n"
            << "alpha                     " << b.alpha << "\n"
            << "beta                      " << b.beta << "\n"
            << "n_am_dram_to_uram         " << b.n_am_dram_to_uram << "\n"
            << "n_am_uram_to_bram         " << b.n_am_uram_to_bram << "\n"
            << "n_read_addr_mem           " << b.n_read_addr_mem << "\n"
            << "n_read_inputs_opcode_mem  " << b.n_read_inputs_opcode_mem
            << "\n"
            << "n_data_moves              " << b.n_data_moves << "\n"
            << "n_copy_mem_in             " << b.n_copy_mem_in << "\n"
            << "n_loop_subkernels         " << b.n_loop_subkernels << "\n"
            << "n_outputs                 " << b.n_outputs << "\n"
            << "n_compute_one_ck          " << b.n_compute_one_ck << "\n"
            << "n_compute                 " << b.n_compute << "\n"
            << "m                         " << w.m << "\n"
            << "n_cc_opt                  " << b.n_cc << "\n";
}

int RunCompile(const std::string& path, const std::string& out_path,
               const ConfigFlags& flags, RunManifest& manifest) {
  const GateNetlist netlist = ParseNetlistFile(path);
  const MachineConfig cfg = flags.Apply(MachineConfig{});
  const KernelProgram program = Compile(netlist, cfg);
  const std::string out =
      out_path.empty() ? DefaultProgramPath(path) : out_path;
  WriteProgramFile(program, out);
  manifest.artifacts.push_back(out);
  std::cout << "n_subkernels " << program.n_subkernels() << "\n"
            << "depth " << program.GatesPerLevel().size() << "\n"
            << "buffer_size " << program.buffer.size() << "\n"
            << "wrote " << out << "\n";
  return kOk;
}

KernelProgram ProgramFor(const std::string& netlist_path,
                         const std::string& program_path,
                         const ConfigFlags& flags, GateNetlist* netlist_out) {
  std::optional<GateNetlist> netlist;
  if (!netlist_path.empty()) netlist = ParseNetlistFile(netlist_path);
  KernelProgram program;
  if (!program_path.empty()) {
    program = ReadProgramFile(program_path);
  } else {
    if (!netlist) throw UsageError("need a netlist or --program");
    program = Compile(*netlist, flags.Apply(MachineConfig{}));
  }
  if (netlist_out && netlist) *netlist_out = std::move(*netlist);
  return program;
}

int RunSimulate(const std::string& netlist_path,
                const std::string& program_path, const InputOptions& in,
                const std::string& out_path, const ConfigFlags& flags,
                RunManifest& manifest) {
  const KernelProgram program =
      ProgramFor(netlist_path, program_path, flags, nullptr);
  const InputRows rows = in.Rows(program.n_fanin);
  const SimResult sim = SimulateStream(
      program, std::span<const std::vector<std::uint8_t>>(rows), in.Threads());
  InputRows outputs;
  outputs.reserve(rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) outputs.push_back(sim.Row(j));
  if (!out_path.empty()) {
    WriteText(out_path, FormatVectors(outputs));
    manifest.artifacts.push_back(out_path);
  } else {
    const std::string in_text = FormatVectors(rows);
    const std::string out_text = FormatVectors(outputs);
    std::istringstream a(in_text), b(out_text);
    std::string x, y;
    while (std::getline(a, x) && std::getline(b, y)) {
      std::cout << x << " -> " << y << "\n";
    }
  }
  std::cout << "vectors " << sim.num_vectors << "\n"
            << "batches " << sim.batches << "\n"
            << "n_copy_mem_in " << sim.n_copy_mem_in << "\n"
            << "n_loop_subkernels " << sim.n_loop_subkernels << "\n"
            << "n_outputs " << sim.n_outputs << "\n"
            << "n_compute_one_ck " << sim.n_compute_one_ck << "\n"
            << "n_compute " << sim.n_compute << "\n";
  return kOk;
}

int RunVerify(const std::string& netlist_path, const std::string& program_path,
              const InputOptions& in, const ConfigFlags& flags) {
  GateNetlist netlist;
  const KernelProgram program =
      ProgramFor(netlist_path, program_path, flags, &netlist);
  const InputRows rows = in.Rows(netlist.primary_inputs.size());
  if (program.InputNames() != netlist.primary_inputs) {
    std::cout << "FAIL program inputs do not match the netlist\n";
    return kMismatch;
  }
  const InputRows expected = OracleOutputs(netlist, rows);
  const VerifyReport r = VerifyAgainst(program, netlist.primary_outputs, rows,
                                       expected, in.Threads());
  if (r.fault) {
    std::cout << "FAIL machine fault: " << *r.fault << "\n";
    return kMismatch;
  }
  const std::size_t width = static_cast<std::size_t>(program.config.lane_width);
  std::size_t bad_vectors = 0;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    bad_vectors += r.sim->Row(j) != expected[j];
  }
  if (r.passed()) {
    std::cout << "PASS " << rows.size() << "/" << rows.size() << "\n";
    return kOk;
  }
  std::cout << "FAIL " << rows.size() - bad_vectors << "/" << rows.size()
            << " vectors match, " << r.mismatch_count
            << " output bits differ\n";
  for (const Mismatch& m : r.mismatches) {
    std::cout
        << "  vector " << m.vector << " (batch " << m.vector / width
        << ", lane " << m.vector % width << ") input "
        << FormatVectors({rows[m.vector]}).substr(0, rows[m.vector].size())
        << " output " << m.output << ": expected " << m.expected << ", got "
        << m.actual << "\n";
  }
  return kMismatch;
}

struct CostInput {
  WorkloadStats stats;
  MachineConfig config;
};

CostInput LoadCostInput(const std::string& path, const ConfigFlags& flags) {
  CostInput c;
  if (EndsWith(path, ".v")) {
    const LeveledNetlist leveled = Levelize(ParseNetlistFile(path));
    c.stats.gates_per_level = leveled.gates_per_level;
    c.stats.n_fanin =
        static_cast<std::int64_t>(leveled.base.primary_inputs.size());
    c.stats.n_po =
        static_cast<std::int64_t>(leveled.base.primary_outputs.size());
    c.config = flags.Apply(MachineConfig{});
  } else if (EndsWith(path, ".json")) {
    const KernelProgram program = ReadProgramFile(path);
    c.stats = WorkloadFromProgram(program);
    c.stats.n_subkernels.reset();
    c.config = flags.Apply(program.config);
  } else {
    const WorkloadFile f = ParseWorkloadStats(ReadTextFile(path));
    c.stats = f.stats;
    MachineConfig base;
    if (f.n_dsp) base.n_dsp = *f.n_dsp;
    c.config = flags.Apply(base);
  }
  return c;
}

std::pair<std::int64_t, std::int64_t> ParseRange(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    throw UsageError("--sweep expects A..B, got '" + text + "'");
  }
  try {
    std::size_t used_a = 0, used_b = 0;
    const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
    const std::int64_t first = std::stoll(a, &used_a);
    const std::int64_t last = std::stoll(b, &used_b);
    if (used_a != a.size() || used_b != b.size()) throw std::exception();
    if (first < 1 || last < first) throw std::exception();
    return {first, last};
  } catch (const std::exception&) {
    throw UsageError("--sweep expects 1 <= A <= B, got '" + text + "'");
  }
}

int RunCost(const std::string& path, std::optional<std::int64_t> m,
            std::optional<std::int64_t> vectors, const std::string& sweep,
            const std::string& out_path, const ConfigFlags& flags,
            RunManifest& manifest) {
  CostInput c = LoadCostInput(path, flags);
  if (m) c.stats.m = *m;
  if (vectors) c.stats.n_input_vectors = *vectors;
  if (sweep.empty()) {
    PrintBreakdown(TotalCost(c.stats, c.config), c.stats, c.config);
    return kOk;
  }
  const auto [first, last] = ParseRange(sweep);
  const std::vector<SweepPoint> points =
      SweepDsp(c.stats, c.config, first, last);
  std::string csv = "n_dsp,n_data_moves,n_compute,n_cc_opt\n";
  const SweepPoint* best = &points.front();
  for (const SweepPoint& p : points) {
    csv += std::to_string(p.n_dsp) + "," + std::to_string(p.n_data_moves) +
           "," + std::to_string(p.n_compute) + "," + std::to_string(p.n_cc) +
           "\n";
    if (p.n_cc < best->n_cc) best = &p;
  }
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    WriteText(out_path, csv);
    manifest.artifacts.push_back(out_path);
    std::cout << "wrote " << points.size() << " rows to " << out_path << "\n";
  }
  std::cout << "best n_dsp " << best->n_dsp << " n_cc_opt " << best->n_cc
            << "\n";
  return kOk;
}

int RunOptimize(const std::string& path, const std::string& mode,
                const std::string& out_path, const ConfigFlags& flags,
                RunManifest& manifest) {
  NetworkSpec net = ParseNetworkSpec(ReadTextFile(path),
                                     std::filesystem::path(path).parent_path());
  net.machine = flags.Apply(net.machine);
  const bool exhaustive = mode == "exhaustive" || mode == "both";
  const bool binary = mode == "binary" || mode == "both";
  std::optional<OptimizeResult> ex, bin;
  if (exhaustive) {
    ex = OptimizeDsp(net, SearchMode::kExhaustive);
    std::cout << "exhaustive n_dsp " << ex->n_dsp << " cycles " << ex->cycles
              << " evaluated " << ex->evaluated.size() << "\n";
  }
  if (binary) {
    bin = OptimizeDsp(net, SearchMode::kBinary);
    std::cout << "binary n_dsp " << bin->n_dsp << " cycles " << bin->cycles
              << " evaluated " << bin->evaluated.size() << "\n";
  }
  if (!out_path.empty()) {
    std::string csv = "n_dsp,cycles\n";
    for (std::int64_t n = 1; n <= net.n_dsp_max; ++n) {
      csv +=
          std::to_string(n) + "," + std::to_string(NetworkCost(net, n)) + "\n";
    }
    WriteText(out_path, csv);
    manifest.artifacts.push_back(out_path);
    std::cout << "wrote " << net.n_dsp_max << " rows to " << out_path << "\n";
  }
  if (ex && bin) {
    const std::int64_t gap = bin->cycles - ex->cycles;
    std::cout << "gap " << gap << " cycles ("
              << (100.0 * static_cast<double>(gap) /
                  static_cast<double>(ex->cycles))
              << "%)\n";
  }
  return kOk;
}

int RunGenerate(std::uint64_t seed, std::size_t inputs, std::size_t gates,
                std::size_t outputs, const std::string& out_path,
                RunManifest& manifest) {
  const std::string text =
      PrintNetlist(RandomNetlist(seed, inputs, gates, outputs));
  if (out_path.empty()) {
    std::cout << text;
  } else {
    WriteText(out_path, text);
    manifest.artifacts.push_back(out_path);
    std::cout << "wrote " << out_path << "\n";
  }
  return kOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"FFCL to DSP-machine compiler, simulator and cost model"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string manifest_path;
  app.add_option("--manifest", manifest_path,
                 "write a JSON run manifest to this path");

  ConfigFlags flags;
  InputOptions in;
  std::string netlist_path, program_path, out_path, sweep, mode = "exhaustive";
  std::optional<std::int64_t> m, n_vectors;
  std::uint64_t gen_seed = 1;
  std::size_t gen_inputs = 8, gen_gates = 100, gen_outputs = 4;

  CLI::App* compile = app.add_subcommand("compile", "compile a netlist");
  compile->add_option("netlist", netlist_path, "structural Verilog")
      ->required();
  compile->add_option("--out", out_path,
                      "program path (default: NAME.kp.json)");
  flags.Register(compile);

  CLI::App* simulate = app.add_subcommand("simulate", "run the machine model");
  simulate->add_option("netlist", netlist_path, "structural Verilog");
  simulate->add_option("--program", program_path, "compiled program");
  simulate->add_option("--out", out_path, "write output vectors here");
  in.Register(simulate);
  flags.Register(simulate);

  CLI::App* verify =
      app.add_subcommand("verify", "check the machine against the netlist");
  verify->add_option("netlist", netlist_path, "structural Verilog")->required();
  verify->add_option("--program", program_path,
                     "verify this program instead of compiling the netlist");
  in.Register(verify);
  flags.Register(verify);

  CLI::App* cost = app.add_subcommand(
      "cost",
      "cycle estimate for a netlist (.v), program (.json) or stats file");
  cost->add_option("input", netlist_path, "workload")->required();
  cost->add_option("--m", m, "kernels in the pipeline");
  cost->add_option("--input-vectors", n_vectors, "input batches per kernel");
  cost->add_option("--sweep", sweep, "evaluate every n_dsp in A..B");
  cost->add_option("--out", out_path, "write the sweep CSV here");
  flags.Register(cost);

  CLI::App* optimize =
      app.add_subcommand("optimize", "pick n_dsp for a network spec");
  optimize->add_option("spec", netlist_path, "network spec JSON")->required();
  optimize->add_option("--mode", mode, "exhaustive, binary or both")
      ->check(CLI::IsMember({"exhaustive", "binary", "both"}))
      ->capture_default_str();
  optimize->add_option("--out", out_path,
                       "write the cost of every n_dsp as CSV");
  flags.Register(optimize);

  CLI::App* generate =
      app.add_subcommand("generate", "write a seeded random netlist");
  generate->add_option("--seed", gen_seed)->capture_default_str();
  generate->add_option("--inputs", gen_inputs)->capture_default_str();
  generate->add_option("--gates", gen_gates)->capture_default_str();
  generate->add_option("--outputs", gen_outputs)->capture_default_str();
  generate->add_option("--out", out_path, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  RunManifest manifest;
  manifest.command = app.get_subcommands().front()->get_name();
  manifest.config = flags.Overrides();
  for (const std::string* p : {&netlist_path, &program_path, &in.vector_file}) {
    if (!p->empty()) manifest.inputs.push_back(*p);
  }
  int status = kOk;
  try {
    if (compile->parsed()) {
      status = RunCompile(netlist_path, out_path, flags, manifest);
    } else if (simulate->parsed()) {
      if (!in.exhaustive && in.vector_file.empty()) manifest.seed = in.seed;
      status = RunSimulate(netlist_path, program_path, in, out_path, flags,
                           manifest);
    } else if (verify->parsed()) {
      if (!in.exhaustive && in.vector_file.empty()) manifest.seed = in.seed;
      status = RunVerify(netlist_path, program_path, in, flags);
    } else if (cost->parsed()) {
      status =
          RunCost(netlist_path, m, n_vectors, sweep, out_path, flags, manifest);
    } else if (optimize->parsed()) {
      status = RunOptimize(netlist_path, mode, out_path, flags, manifest);
    } else if (generate->parsed()) {
      manifest.seed = gen_seed;
      status = RunGenerate(gen_seed, gen_inputs, gen_gates, gen_outputs,
                           out_path, manifest);
    }
  } catch (const NetlistError& e) {
    std::cerr << "error: " << e.what() << "\n";
    status = kParse;
  } catch (const ProgramError& e) {
    std::cerr << "error: " << e.what() << "\n";
    status = kParse;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    status = kParse;
  } catch (const CompileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    status = kCompile;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    status = kCompile;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    status = kUsage;
  }

  if (!manifest_path.empty()) {
    manifest.exit_status = status;
    WriteText(manifest_path, manifest.ToJson());
  }
  return status;
}

}  // namespace
}  // namespace ffcl

int main(int argc, char** argv) { return ffcl::Main(argc, argv); }
