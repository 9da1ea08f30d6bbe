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

#include "ffcl/spec_io.hpp"

#include <filesystem>
#include <fstream>

#include "ffcl/netlist_parser.hpp"
#include "gtest/gtest.h"
#include "test_netlists.hpp"

namespace ffcl {
namespace {

TEST(VectorFileTest, ParsesAndFormats) {
  const InputRows rows = ParseVectors("# header\n0101\n\n  1110  \n", 4);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::uint8_t>{0, 1, 0, 1}));
  EXPECT_EQ(rows[1], (std::vector<std::uint8_t>{1, 1, 1, 0}));
  EXPECT_EQ(FormatVectors(rows), "0101\n1110\n");
  EXPECT_EQ(ParseVectors(FormatVectors(rows), 4), rows);
}

TEST(VectorFileTest, RejectsBadLines) {
  EXPECT_THROW(ParseVectors("010\n", 4), FormatError);
  EXPECT_THROW(ParseVectors("01x1\n", 4), FormatError);
}

TEST(WorkloadFileTest, ParsesAllKeys) {
  const WorkloadFile f = ParseWorkloadStats(
      "# four-input and\n"
      "gates_per_level = 2, 1\n"
      "n_subkernels = 2\n"
      "n_fanin = 4\n"
      "n_po = 1   # one output\n"
      "n_input_vectors = 3\n"
      "m = 5\n"
      "n_dsp = 2\n");
  EXPECT_EQ(f.stats.gates_per_level, (std::vector<std::int64_t>{2, 1}));
  EXPECT_EQ(f.stats.n_subkernels, 2);
  EXPECT_EQ(f.stats.n_fanin, 4);
  EXPECT_EQ(f.stats.n_po, 1);
  EXPECT_EQ(f.stats.n_input_vectors, 3);
  EXPECT_EQ(f.stats.m, 5);
  EXPECT_EQ(f.n_dsp, 2);
}

TEST(WorkloadFileTest, Defaults) {
  const WorkloadFile f = ParseWorkloadStats("n_subkernels = 7\nn_fanin=2\n");
  EXPECT_FALSE(f.stats.gates_per_level.has_value());
  EXPECT_EQ(f.stats.n_input_vectors, 1);
  EXPECT_EQ(f.stats.m, 1);
  EXPECT_FALSE(f.n_dsp.has_value());
}

TEST(WorkloadFileTest, RejectsMalformed) {
  EXPECT_THROW(ParseWorkloadStats("n_fanin = 4\n"), FormatError);
  EXPECT_THROW(ParseWorkloadStats("n_subkernels 4\n"), FormatError);
  EXPECT_THROW(ParseWorkloadStats("n_subkernels = four\n"), FormatError);
  EXPECT_THROW(ParseWorkloadStats("n_subkernels = -1\n"), FormatError);
  EXPECT_THROW(ParseWorkloadStats("n_subkernels = 1\nwidth = 3\n"),
               FormatError);
  EXPECT_THROW(ParseWorkloadStats("gates_per_level = 1,,2\n"), FormatError);
}

TEST(NetworkSpecTest, InlineLayers) {
  const NetworkSpec net = ParseNetworkSpec(R"({
    "n_parallel_factor": 2,
    "n_dsp_max": 512,
    "config": {"lane_width": 32, "k_ddr_banks": 2},
    "layers": [
      {"name": "conv1", "n_filter": 8, "gates_per_level": [30, 10, 1],
       "n_fanin": 27, "n_po": 1, "n_input_vectors": 16},
      {"gates_per_level": [5]}
    ]
  })");
  EXPECT_EQ(net.n_parallel_factor, 2);
  EXPECT_EQ(net.n_dsp_max, 512);
  EXPECT_EQ(net.machine.lane_width, 32);
  EXPECT_EQ(net.machine.k_ddr_banks, 2);
  EXPECT_EQ(net.machine.axi_width, MachineConfig{}.axi_width);
  ASSERT_EQ(net.layers.size(), 2u);
  EXPECT_EQ(net.layers[0].name, "conv1");
  EXPECT_EQ(net.layers[0].n_filter, 8);
  EXPECT_EQ(net.layers[0].stats.n_fanin, 27);
  EXPECT_EQ(net.layers[0].stats.n_input_vectors, 16);
  EXPECT_EQ(net.layers[1].name, "layer1");
  EXPECT_EQ(net.layers[1].n_filter, 1);
}

TEST(NetworkSpecTest, ProgramLayerUsesLevelWidths) {
  const auto dir = std::filesystem::temp_directory_path() / "ffcl_spec_io_test";
  std::filesystem::create_directories(dir);
  const KernelProgram p =
      Compile(ParseNetlist(testing::kG2Source), MachineConfig{}.WithDsp(2));
  WriteProgramFile(p, (dir / "g2.kp.json").string());
  const NetworkSpec net = ParseNetworkSpec(
      R"({"n_dsp_max": 8, "layers": [{"program": "g2.kp.json",
          "n_filter": 3, "n_input_vectors": 2}]})",
      dir);
  ASSERT_EQ(net.layers.size(), 1u);
  const WorkloadStats& w = net.layers[0].stats;
  EXPECT_FALSE(w.n_subkernels.has_value());
  EXPECT_EQ(w.gates_per_level, (std::vector<std::int64_t>{4, 2, 1}));
  EXPECT_EQ(w.n_fanin, 4);
  EXPECT_EQ(w.n_input_vectors, 2);
  EXPECT_EQ(w.SubkernelsAt(1), 7);
  std::filesystem::remove_all(dir);
}

TEST(NetworkSpecTest, RejectsMalformed) {
  EXPECT_THROW(ParseNetworkSpec("{"), FormatError);
  EXPECT_THROW(ParseNetworkSpec("[]"), FormatError);
  EXPECT_THROW(ParseNetworkSpec(R"({"layers": []})"), FormatError);
  EXPECT_THROW(ParseNetworkSpec(R"({"n_dsp_max": 4})"), FormatError);
  EXPECT_THROW(ParseNetworkSpec(R"({"n_dsp_max": -4, "layers": [{}]})"),
               FormatError);
  EXPECT_THROW(ParseNetworkSpec(R"({"n_dsp_max": 4, "layers": [{}]})"),
               FormatError);
  EXPECT_THROW(
      ParseNetworkSpec(
          R"({"n_dsp_max": 4, "layers": [{"gates_per_level": [1, -2]}]})"),
      FormatError);
  EXPECT_THROW(ParseNetworkSpec(R"({"n_dsp_max": 4, "layers": []})"),
               std::invalid_argument);
}

TEST(TextFileTest, MissingFileThrows) {
  EXPECT_THROW(ReadTextFile("/nonexistent/ffcl/file.v"), std::runtime_error);
}

}  // namespace
}  // namespace ffcl
