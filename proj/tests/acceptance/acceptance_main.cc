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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. A criterion that finishes after its time
// limit fails. With arguments, runs only the listed criterion ids.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ffcl/compiler.hpp"
#include "ffcl/cost_model.hpp"
#include "ffcl/levelize.hpp"
#include "ffcl/netlist_parser.hpp"
#include "ffcl/network_optimizer.hpp"
#include "ffcl/program_io.hpp"
#include "ffcl/random_netlist.hpp"
#include "ffcl/simulator.hpp"
#include "ffcl/verify.hpp"
#include "json.hpp"
#include "test_netlists.hpp"

namespace ffcl {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

unsigned Threads() { return std::max(1u, std::thread::hardware_concurrency()); }

MachineConfig Dsp(std::int64_t n) { return MachineConfig{}.WithDsp(n); }

std::int64_t Pick(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

// 1. Buffer layout, address rows and opcode rows of the four-input AND tree.
Outcome GoldenTable() {
  const KernelProgram p = Compile(ParseNetlist(testing::kG1Source), Dsp(2));
  const std::vector<std::string> nets = {"1'b0", "1'b1", "a",  "b",  "c",
                                         "d",    "w1",   "w2", "out"};
  std::vector<std::string> got_nets;
  for (const BufferSlot& s : p.buffer) got_nets.push_back(s.net);
  const std::vector<std::vector<Address>> rows = {
      {2, 3, 4, 5}, {6, 7, 0, 0}, {6, 7, 0, 0}, {8, 0, 0, 0}};
  const std::vector<std::vector<Opcode>> ops = {{Opcode::kAnd, Opcode::kAnd},
                                                {Opcode::kAnd, Opcode::kNop}};
  std::vector<std::vector<Opcode>> got_ops;
  for (const SubKernel& sk : p.subkernels) got_ops.push_back(sk.opcodes);
  Outcome o;
  o.pass = got_nets == nets && AddressMemoryRows(p) == rows && got_ops == ops;
  o.detail = "buffer " + std::to_string(p.buffer.size()) + " slots, " +
             std::to_string(rows.size()) + " address rows, " +
             std::to_string(got_ops.size()) + " opcode rows";
  return o;
}

// 2. Sub-kernel counts of the two small examples.
Outcome SubkernelCounts() {
  const auto g1 = Compile(ParseNetlist(testing::kG1Source), Dsp(2));
  const auto g2 = Compile(ParseNetlist(testing::kG2Source), Dsp(2));
  Outcome o;
  o.pass = g1.n_subkernels() == 2 && g2.n_subkernels() == 4;
  o.detail = "g1 " + std::to_string(g1.n_subkernels()) + ", g2 " +
             std::to_string(g2.n_subkernels());
  return o;
}

// 3. One level of 2600 gates on 1000 DSP slots.
Outcome WideLevelPartition() {
  GateNetlist n;
  n.name = "wide";
  for (int i = 0; i < 64; ++i)
    n.primary_inputs.push_back("p" + std::to_string(i));
  for (int g = 0; g < 2600; ++g) {
    n.gates.push_back(
        {"q" + std::to_string(g),
         GateOp::kAnd,
         {n.primary_inputs[g % 64], n.primary_inputs[(g / 64 + g + 1) % 64]}});
    n.primary_outputs.push_back(n.gates.back().output);
  }
  const KernelProgram p = Compile(n, Dsp(1000));
  std::vector<std::size_t> active;
  for (const SubKernel& sk : p.subkernels) active.push_back(sk.ActiveSlots());
  const std::int64_t analytic =
      SubkernelsFromLevels(std::vector<std::int64_t>{2600}, 1000);
  Outcome o;
  o.pass = p.n_subkernels() == 3 && analytic == 3 &&
           active == std::vector<std::size_t>{1000, 1000, 600};
  o.detail = std::to_string(p.n_subkernels()) + " sub-kernels (" +
             std::to_string(active.size() > 2 ? active[2] : 0) +
             " slots in the last)";
  return o;
}

// 4. Packing ratios of the default widths.
Outcome PackingRatios() {
  MachineConfig c;
  c.axi_width = 512;
  c.addr_width = 14;
  c.lane_width = 48;
  c.opcode_width = 6;
  Outcome o;
  o.pass = c.lambda() == 36 && c.delta() == 10 && c.zeta() == 85;
  o.detail = "lambda " + std::to_string(c.lambda()) + ", delta " +
             std::to_string(c.delta()) + ", zeta " + std::to_string(c.zeta());
  return o;
}

// 5. Random netlists against the scalar evaluator.
Outcome OracleEquivalence() {
  const std::int64_t dsp_counts[] = {1, 2, 7, 48, 1000};
  std::size_t mismatches = 0, faults = 0, vectors = 0, exhaustive = 0;
  std::set<GateOp> ops;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    std::mt19937_64 rng(seed * 7919 + 1);
    const auto n_pi = static_cast<std::size_t>(Pick(rng, 4, 16));
    const auto n_gates = static_cast<std::size_t>(Pick(rng, 5, 2000));
    const auto n_po = static_cast<std::size_t>(
        Pick(rng, 1,
             std::min<std::int64_t>(32, static_cast<std::int64_t>(n_gates))));
    const GateNetlist n = RandomNetlist(rng(), n_pi, n_gates, n_po);
    for (const Gate& g : n.gates) ops.insert(g.op);
    const bool all = n_pi <= 12;
    exhaustive += all;
    const InputRows rows =
        all ? ExhaustiveVectors(n_pi) : RandomVectors(n_pi, 10000, rng());
    const InputRows expected = OracleOutputs(n, rows);
    for (std::int64_t k : dsp_counts) {
      const VerifyReport r = VerifyAgainst(
          Compile(n, Dsp(k)), n.primary_outputs, rows, expected, Threads());
      mismatches += r.mismatch_count;
      faults += r.fault.has_value();
      vectors += r.vectors_checked;
    }
  }
  Outcome o;
  o.pass = mismatches == 0 && faults == 0 && ops.size() == 8;
  o.detail = "1000 netlists (" + std::to_string(exhaustive) + " exhaustive), " +
             std::to_string(vectors) + " vector runs, " +
             std::to_string(ops.size()) + " gate types, " +
             std::to_string(mismatches) + " mismatches, " +
             std::to_string(faults) + " faults";
  return o;
}

// 6. Analytical tallies equal simulator events.
Outcome ModelMatchesSimulator() {
  std::size_t agree = 0;
  const std::int64_t axi[] = {256, 512, 1024};
  const std::int64_t opw[] = {4, 6, 8};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed + 424242);
    const auto n_pi = static_cast<std::size_t>(Pick(rng, 2, 16));
    const auto n_gates = static_cast<std::size_t>(Pick(rng, 5, 1500));
    const auto n_po = static_cast<std::size_t>(
        Pick(rng, 1,
             std::min<std::int64_t>(40, static_cast<std::int64_t>(n_gates))));
    const GateNetlist n = RandomNetlist(rng(), n_pi, n_gates, n_po);
    MachineConfig cfg;
    cfg.n_dsp = Pick(rng, 1, 1200);
    cfg.lane_width = Pick(rng, 1, 64);
    cfg.axi_width = axi[Pick(rng, 0, 2)];
    cfg.opcode_width = opw[Pick(rng, 0, 2)];
    cfg.k_ddr_banks = Pick(rng, 2, 8);
    cfg.n_exe_logic_ops = Pick(rng, 1, 4);
    const KernelProgram p = Compile(n, cfg);
    const InputRows rows =
        RandomVectors(n_pi, static_cast<std::size_t>(Pick(rng, 1, 500)), rng());
    const SimResult sim = SimulateStream(
        p, std::span<const std::vector<std::uint8_t>>(rows), Threads());
    const CostBreakdown b = TotalCost(WorkloadFromProgram(p, sim.batches), cfg);
    agree += b.n_copy_mem_in == sim.n_copy_mem_in &&
             b.n_loop_subkernels == sim.n_loop_subkernels &&
             b.n_outputs == sim.n_outputs && b.n_compute == sim.n_compute;
  }
  Outcome o;
  o.pass = agree == 200;
  o.detail = std::to_string(agree) + "/200 pairs agree exactly";
  return o;
}

// 7. Interior minimum of the DSP sweep on a deep workload.
Outcome InteriorMinimum() {
  std::vector<std::int64_t> widths;
  for (int l = 0; l < 24; ++l) widths.push_back(50 + (l * 137) % 2951);
  WorkloadStats w;
  w.gates_per_level = widths;
  w.n_fanin = 256;
  w.n_po = 32;
  w.n_input_vectors = 16;
  const auto points = SweepDsp(w, MachineConfig{}, 1, 4096);
  const SweepPoint* best = &points.front();
  for (const SweepPoint& p : points) {
    if (p.n_cc < best->n_cc) best = &p;
  }
  LayerSpec layer;
  layer.name = "deep";
  layer.stats = w;
  NetworkSpec net;
  net.layers = {layer};
  net.n_dsp_max = 4096;
  const OptimizeResult r = OptimizeDsp(net, SearchMode::kExhaustive);
  const std::int64_t at16 = points[15].n_cc, at4096 = points.back().n_cc;
  Outcome o;
  o.pass = best->n_cc < at16 && best->n_cc < at4096 && r.n_dsp == best->n_dsp;
  o.detail = "argmin n_dsp " + std::to_string(best->n_dsp) + " (" +
             std::to_string(best->n_cc) + " cycles) vs " +
             std::to_string(at16) + " at 16 and " + std::to_string(at4096) +
             " at 4096; optimizer " + std::to_string(r.n_dsp);
  return o;
}

NetworkSpec RandomNetwork(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  NetworkSpec net;
  const std::int64_t n_layers = Pick(rng, 1, 6);
  for (std::int64_t i = 0; i < n_layers; ++i) {
    LayerSpec l;
    l.name = "layer" + std::to_string(i);
    l.n_filter = Pick(rng, 1, 512);
    std::vector<std::int64_t> widths;
    const std::int64_t depth = Pick(rng, 1, 30);
    for (std::int64_t d = 0; d < depth; ++d)
      widths.push_back(Pick(rng, 1, 3000));
    l.stats.gates_per_level = widths;
    l.stats.n_fanin = Pick(rng, 1, 600);
    l.stats.n_po = Pick(rng, 1, 64);
    l.stats.n_input_vectors = Pick(rng, 1, 32);
    net.layers.push_back(l);
  }
  net.n_dsp_max = Pick(rng, 1, 2048);
  net.n_parallel_factor = Pick(rng, 1, 8);
  return net;
}

// 8. Breakpoint scan against a scan of every DSP count.
Outcome OptimizerOracle() {
  std::size_t equal = 0, binary_ok = 0, binary_exact = 0;
  double worst_gap = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const NetworkSpec net = RandomNetwork(seed + 9000);
    std::int64_t best_n = 0, best = std::numeric_limits<std::int64_t>::max();
    for (std::int64_t n = 1; n <= net.n_dsp_max; ++n) {
      const std::int64_t c = NetworkCost(net, n);
      if (c < best) {
        best = c;
        best_n = n;
      }
    }
    const OptimizeResult ex = OptimizeDsp(net, SearchMode::kExhaustive);
    const OptimizeResult bin = OptimizeDsp(net, SearchMode::kBinary);
    equal += ex.n_dsp == best_n && ex.cycles == best;
    binary_ok += bin.cycles >= best;
    binary_exact += bin.cycles == best;
    worst_gap =
        std::max(worst_gap, 100.0 * static_cast<double>(bin.cycles - best) /
                                static_cast<double>(best));
  }
  std::ostringstream detail;
  detail << equal << "/50 exhaustive equal brute force; binary optimal on "
         << binary_exact << "/50, worst gap " << std::fixed
         << std::setprecision(2) << worst_gap << "%";
  Outcome o;
  o.pass = equal == 50 && binary_ok == 50;
  o.detail = detail.str();
  return o;
}

// 9. Program serialization.
Outcome Serialization() {
  std::size_t identity = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed + 31337);
    const auto n_gates = static_cast<std::size_t>(Pick(rng, 1, 800));
    const GateNetlist n = RandomNetlist(
        rng(), static_cast<std::size_t>(Pick(rng, 1, 24)), n_gates,
        static_cast<std::size_t>(
            Pick(rng, 1, static_cast<std::int64_t>(n_gates))));
    const KernelProgram p = Compile(n, Dsp(Pick(rng, 1, 300)));
    const std::string text = SerializeProgram(p);
    const KernelProgram back = DeserializeProgram(text);
    identity += back == p && SerializeProgram(back) == text;
  }
  auto j = nlohmann::json::parse(
      SerializeProgram(Compile(ParseNetlist(testing::kG2Source), Dsp(2))));
  j["subkernels"][1]["in_addrs"][0] = 1 << 14;
  bool rejected = false;
  try {
    DeserializeProgram(j.dump());
  } catch (const ProgramError&) {
    rejected = true;
  }
  Outcome o;
  o.pass = identity == 100 && rejected;
  o.detail = std::to_string(identity) + "/100 round trips exact; address " +
             std::to_string(1 << 14) + (rejected ? " rejected" : " accepted");
  return o;
}

// Net held by buffer slot `s`, adding constant gates to `n` on demand.
std::string NetAtSlot(GateNetlist& n, Address s) {
  const std::size_t n_pi = n.primary_inputs.size();
  if (s == kConst0Slot || s == kConst1Slot) {
    const std::string name = s == kConst0Slot ? "k_zero" : "k_one";
    if (!n.DriverOf(name)) {
      n.gates.push_back(
          {name, s == kConst0Slot ? GateOp::kConst0 : GateOp::kConst1, {}});
    }
    return name;
  }
  if (s < kFirstInputSlot + n_pi) return n.primary_inputs[s - kFirstInputSlot];
  return n.gates[s - kFirstInputSlot - n_pi].output;
}

bool DiffersExhaustively(const GateNetlist& a, const GateNetlist& b) {
  const InputRows rows = ExhaustiveVectors(a.primary_inputs.size());
  return OracleOutputs(a, rows) != OracleOutputs(b, rows);
}

struct FaultTally {
  std::size_t mutants = 0;
  std::size_t expected_caught = 0;
  std::size_t caught = 0;
  std::size_t equivalent = 0;
  std::size_t equivalent_passed = 0;
};

// Every alternative opcode of every active slot, and every single-bit flip
// of every live address field. The expected verdict of each mutant comes
// from the correspondingly mutated netlist.
void InjectFaults(std::string_view source, FaultTally& t) {
  const GateNetlist base = ParseNetlist(source);
  const KernelProgram prog = Compile(base, Dsp(2));
  const InputRows rows = ExhaustiveVectors(base.primary_inputs.size());
  const std::size_t n_pi = base.primary_inputs.size();
  // Sub-kernel that writes each slot; inputs and constants are ready first.
  std::map<Address, std::size_t> writer;
  for (std::size_t i = 0; i < prog.subkernels.size(); ++i) {
    for (std::size_t p = 0; p < prog.subkernels[i].opcodes.size(); ++p) {
      if (prog.subkernels[i].opcodes[p] != Opcode::kNop) {
        writer[prog.subkernels[i].out_addrs[p]] = i;
      }
    }
  }
  auto record = [&](const KernelProgram& mutant, bool expect_fail) {
    const bool failed = !Verify(base, mutant, rows).passed();
    ++t.mutants;
    if (expect_fail) {
      ++t.expected_caught;
      t.caught += failed;
    } else {
      ++t.equivalent;
      t.equivalent_passed += !failed;
    }
  };
  constexpr Opcode kAll[] = {Opcode::kNop,  Opcode::kAnd,  Opcode::kOr,
                             Opcode::kXor,  Opcode::kNand, Opcode::kNor,
                             Opcode::kXnor, Opcode::kNot,  Opcode::kBuf};
  for (std::size_t i = 0; i < prog.subkernels.size(); ++i) {
    const SubKernel& sk = prog.subkernels[i];
    for (std::size_t p = 0; p < sk.opcodes.size(); ++p) {
      if (sk.opcodes[p] == Opcode::kNop) continue;
      const std::size_t gate = sk.out_addrs[p] - kFirstInputSlot - n_pi;
      for (Opcode op : kAll) {
        if (op == sk.opcodes[p]) continue;
        KernelProgram mutant = prog;
        mutant.subkernels[i].opcodes[p] = op;
        if (op == Opcode::kNop) {
          // The slot is never written, so its first reader faults.
          record(mutant, true);
          continue;
        }
        GateNetlist m = base;
        Gate& g = m.gates[gate];
        const std::string a = NetAtSlot(m, sk.in_addrs[2 * p]);
        const std::string b = NetAtSlot(m, sk.in_addrs[2 * p + 1]);
        GateOp gop = GateOp::kAnd;
        for (GateOp cand :
             {GateOp::kAnd, GateOp::kOr, GateOp::kXor, GateOp::kNand,
              GateOp::kNor, GateOp::kXnor, GateOp::kNot, GateOp::kBuf}) {
          if (OpcodeFor(cand) == op) gop = cand;
        }
        g = Gate{g.output, gop,
                 IsUnary(op) ? std::vector<std::string>{a}
                             : std::vector<std::string>{a, b}};
        record(mutant, DiffersExhaustively(base, m));
      }
      const std::size_t addr_bits =
          static_cast<std::size_t>(prog.config.addr_width);
      // Operand addresses.
      const int operands = IsUnary(sk.opcodes[p]) ? 1 : 2;
      for (int k = 0; k < operands; ++k) {
        for (std::size_t bit = 0; bit < addr_bits; ++bit) {
          KernelProgram mutant = prog;
          Address& field = mutant.subkernels[i].in_addrs[2 * p + k];
          field ^= Address{1} << bit;
          const Address s = field;
          const bool ready = s < prog.buffer.size() &&
                             (s < kFirstInputSlot + n_pi || writer.at(s) < i);
          if (!ready) {
            record(mutant, true);
            continue;
          }
          GateNetlist m = base;
          const std::string net = NetAtSlot(m, s);
          m.gates[gate].operands[k] = net;
          record(mutant, DiffersExhaustively(base, m));
        }
      }
      // Result address: the original slot is never written, and every gate
      // in these netlists is read by a later gate or an output.
      for (std::size_t bit = 0; bit < addr_bits; ++bit) {
        KernelProgram mutant = prog;
        mutant.subkernels[i].out_addrs[p] ^= Address{1} << bit;
        record(mutant, true);
      }
    }
  }
}

// 10. Fault injection on the two small examples.
Outcome FaultInjection() {
  FaultTally t;
  InjectFaults(testing::kG1Source, t);
  InjectFaults(testing::kG2Source, t);
  Outcome o;
  o.pass = t.caught == t.expected_caught &&
           t.equivalent_passed == t.equivalent && t.expected_caught > 0;
  o.detail = std::to_string(t.mutants) +
             " mutants: " + std::to_string(t.caught) + "/" +
             std::to_string(t.expected_caught) + " caught, " +
             std::to_string(t.equivalent_passed) + "/" +
             std::to_string(t.equivalent) + " equivalent mutants pass";
  return o;
}

}  // namespace
}  // namespace ffcl

int main(int argc, char** argv) {
  using ffcl::Criterion;
  const std::vector<Criterion> criteria = {
      {1, "golden-table", 1, ffcl::GoldenTable},
      {2, "subkernel-counts", 1, ffcl::SubkernelCounts},
      {3, "wide-level-partition", 1, ffcl::WideLevelPartition},
      {4, "packing-ratios", 1, ffcl::PackingRatios},
      {5, "oracle-equivalence", 120, ffcl::OracleEquivalence},
      {6, "model-matches-simulator", 60, ffcl::ModelMatchesSimulator},
      {7, "interior-minimum", 30, ffcl::InteriorMinimum},
      {8, "optimizer-oracle", 120, ffcl::OptimizerOracle},
      {9, "serialization", 10, ffcl::Serialization},
      {10, "fault-injection", 10, ffcl::FaultInjection},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    ffcl::Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const bool in_time = seconds <= c.limit_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << " [" << std::setw(2) << c.id
              << "] " << c.name << ": " << o.detail << " (" << std::fixed
              << std::setprecision(3) << seconds << " s, limit "
              << std::setprecision(0) << c.limit_seconds << " s"
              << (in_time ? "" : ", too slow") << ")" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
