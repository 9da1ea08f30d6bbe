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

#include "ffcl/program_io.hpp"

#include <functional>

#include "ffcl/netlist_parser.hpp"
#include "ffcl/random_netlist.hpp"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_netlists.hpp"

namespace ffcl {
namespace {

MachineConfig Dsp(std::int64_t n) { return MachineConfig{}.WithDsp(n); }

std::string Mutate(const std::string& text,
                   const std::function<void(nlohmann::json&)>& edit) {
  nlohmann::json j = nlohmann::json::parse(text);
  edit(j);
  return j.dump();
}

TEST(ProgramIoTest, RoundTripFourInputAnd) {
  const KernelProgram p = Compile(ParseNetlist(testing::kG1Source), Dsp(2));
  const std::string text = SerializeProgram(p);
  EXPECT_EQ(DeserializeProgram(text), p);
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["subkernels"][1]["opcodes"], (nlohmann::json{"AND", "NOP"}));
  EXPECT_EQ(j["buffer"][8]["kind"], "output");
  EXPECT_EQ(j["config"]["addr_width"], 14);
  EXPECT_EQ(j["n_fanin"], 4);
}

TEST(ProgramIoTest, ReserializationIsByteIdentical) {
  const KernelProgram p = Compile(ParseNetlist(testing::kG2Source), Dsp(2));
  const std::string first = SerializeProgram(p);
  const KernelProgram back = DeserializeProgram(first);
  ASSERT_EQ(back.n_subkernels(), 4);
  EXPECT_EQ(SerializeProgram(back), first);
}

TEST(ProgramIoTest, RandomProgramsRoundTrip) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const GateNetlist n =
        RandomNetlist(seed, 1 + seed % 12, 1 + seed * 7 % 300, 1 + seed % 6);
    const KernelProgram p = Compile(n, Dsp(1 + seed % 50));
    EXPECT_EQ(DeserializeProgram(SerializeProgram(p)), p) << seed;
  }
}

TEST(ProgramIoTest, RejectsOutOfRangeAddress) {
  const std::string text =
      SerializeProgram(Compile(ParseNetlist(testing::kG1Source), Dsp(2)));
  EXPECT_THROW(DeserializeProgram(Mutate(text,
                                         [](nlohmann::json& j) {
                                           j["subkernels"][0]["out_addrs"][0] =
                                               1 << 14;
                                         })),
               ProgramError);
  EXPECT_THROW(
      DeserializeProgram(Mutate(
          text,
          [](nlohmann::json& j) { j["subkernels"][1]["in_addrs"][0] = 9; })),
      ProgramError);
  EXPECT_THROW(
      DeserializeProgram(Mutate(
          text,
          [](nlohmann::json& j) { j["subkernels"][0]["in_addrs"][0] = -1; })),
      ProgramError);
}

TEST(ProgramIoTest, RejectsSchemaViolations) {
  const std::string text =
      SerializeProgram(Compile(ParseNetlist(testing::kG1Source), Dsp(2)));
  const std::vector<std::function<void(nlohmann::json&)>> edits = {
      [](nlohmann::json& j) { j.erase("buffer"); },
      [](nlohmann::json& j) { j["config"].erase("n_dsp"); },
      [](nlohmann::json& j) { j["n_fanin"] = "four"; },
      [](nlohmann::json& j) { j["subkernels"][0]["opcodes"][0] = "MUX"; },
      [](nlohmann::json& j) { j["subkernels"][0]["opcodes"][0] = 1; },
      [](nlohmann::json& j) { j["buffer"][3]["kind"] = "wire"; },
      [](nlohmann::json& j) { j["subkernels"][0]["level"] = 0; },
      [](nlohmann::json& j) { j["subkernels"] = nlohmann::json::object(); },
      [](nlohmann::json& j) { j["config"]["n_dsp"] = 2.5; },
      [](nlohmann::json& j) { j["config"]["n_dsp"] = 3; },
      [](nlohmann::json& j) { j["outputs"] = nlohmann::json::array(); },
  };
  for (std::size_t i = 0; i < edits.size(); ++i) {
    EXPECT_THROW(DeserializeProgram(Mutate(text, edits[i])), ProgramError)
        << "edit " << i;
  }
  EXPECT_THROW(DeserializeProgram("{not json"), ProgramError);
  EXPECT_THROW(DeserializeProgram("[]"), ProgramError);
}

}  // namespace
}  // namespace ffcl
