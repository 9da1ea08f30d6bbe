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

// Network-level cycle aggregation and selection of the DSP count.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffcl/cost_model.hpp"

namespace ffcl {

struct LayerSpec {
  std::string name;
  std::int64_t n_filter = 1;
  // One filter's kernel. Level widths are needed for the sub-kernel count
  // to follow n_dsp; m is ignored.
  WorkloadStats stats;
};

struct NetworkSpec {
  std::vector<LayerSpec> layers;
  std::int64_t n_parallel_factor = 1;
  // Device DSP budget, the upper bound of the search.
  std::int64_t n_dsp_max = 1;
  MachineConfig machine;

  void Validate() const {
    if (layers.empty()) throw std::invalid_argument("network has no layers");
    if (n_parallel_factor < 1) {
      throw std::invalid_argument("n_parallel_factor must be >= 1");
    }
    if (n_dsp_max < 1) throw std::invalid_argument("n_dsp_max must be >= 1");
    for (const LayerSpec& l : layers) {
      if (l.n_filter < 1) {
        throw std::invalid_argument("layer '" + l.name +
                                    "' needs n_filter >= 1");
      }
      l.stats.Validate();
    }
  }
};

// Worst pipeline stage of one filter of `layer` at `n_dsp`.
inline std::int64_t LayerStageCycles(const LayerSpec& layer,
                                     const MachineConfig& machine,
                                     std::int64_t n_dsp) {
  WorkloadStats w = layer.stats;
  w.m = 1;
  return TotalCost(w, machine.WithDsp(n_dsp)).StageCycles();
}

struct NetworkCostTerms {
  // ceil(sum_i n_filter_i * stage_i / n_parallel_factor)
  std::int64_t summed = 0;
  // Pipeline fill: max_i stage_i.
  std::int64_t fill = 0;
  std::int64_t total() const { return summed + fill; }
};

// Layers run one after another; within a layer the filters stream through
// the two-stage pipeline.
inline NetworkCostTerms NetworkCostBreakdown(const NetworkSpec& net,
                                             std::int64_t n_dsp) {
  net.Validate();
  if (n_dsp < 1 || n_dsp > net.n_dsp_max) {
    throw std::out_of_range("n_dsp=" + std::to_string(n_dsp) + " outside [1, " +
                            std::to_string(net.n_dsp_max) + "]");
  }
  NetworkCostTerms t;
  std::int64_t sum = 0;
  for (const LayerSpec& layer : net.layers) {
    const std::int64_t stage = LayerStageCycles(layer, net.machine, n_dsp);
    sum += layer.n_filter * stage;
    t.fill = std::max(t.fill, stage);
  }
  t.summed = CeilDiv(sum, net.n_parallel_factor);
  return t;
}

inline std::int64_t NetworkCost(const NetworkSpec& net, std::int64_t n_dsp) {
  return NetworkCostBreakdown(net, n_dsp).total();
}

// DSP counts in [1, n_dsp_max] at which some ceil(width / n_dsp) drops.
// With the sub-kernel count fixed every cost term is nondecreasing in
// n_dsp, so the cheapest point of each interval is its left end and the
// global argmin (smallest on ties) is one of these values.
inline std::vector<std::int64_t> DspBreakpoints(const NetworkSpec& net) {
  std::set<std::int64_t> points{1};
  for (const LayerSpec& layer : net.layers) {
    if (!layer.stats.gates_per_level) continue;
    for (std::int64_t width : *layer.stats.gates_per_level) {
      // ceil(width / n) takes value v on [ceil(width / v), ...); walk the
      // values downwards.
      std::int64_t n = 1;
      while (n <= net.n_dsp_max && width > 0) {
        points.insert(n);
        const std::int64_t v = CeilDiv(width, n);
        if (v == 1) break;
        n = CeilDiv(width, v - 1);
      }
    }
  }
  return {points.begin(), points.end()};
}

enum class SearchMode { kExhaustive, kBinary };

struct OptimizeResult {
  std::int64_t n_dsp = 0;
  std::int64_t cycles = 0;
  // Every (n_dsp, cycles) evaluated, ascending in n_dsp.
  std::map<std::int64_t, std::int64_t> evaluated;
};

// Minimizes NetworkCost over n_dsp in [1, n_dsp_max].
//
// kExhaustive evaluates every breakpoint and returns the exact minimum.
// kBinary narrows an interval over the breakpoints by comparing interior
// thirds, as a quick search of a curve assumed to be unimodal; its answer
// can be worse than the optimum.
inline OptimizeResult OptimizeDsp(const NetworkSpec& net, SearchMode mode) {
  net.Validate();
  const std::vector<std::int64_t> points = DspBreakpoints(net);
  OptimizeResult r;
  auto cost_at = [&](std::size_t i) {
    const std::int64_t n = points[i];
    auto it = r.evaluated.find(n);
    if (it != r.evaluated.end()) return it->second;
    const std::int64_t c = NetworkCost(net, n);
    r.evaluated.emplace(n, c);
    return c;
  };
  std::size_t lo = 0, hi = points.size() - 1;
  if (mode == SearchMode::kBinary) {
    while (hi - lo > 2) {
      const std::size_t m1 = lo + (hi - lo) / 3;
      const std::size_t m2 = hi - (hi - lo) / 3;
      if (cost_at(m1) <= cost_at(m2)) {
        hi = m2;
      } else {
        lo = m1;
      }
    }
  }
  r.cycles = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = lo; i <= hi; ++i) {
    const std::int64_t c = cost_at(i);
    if (c < r.cycles) {
      r.cycles = c;
      r.n_dsp = points[i];
    }
  }
  return r;
}

}  // namespace ffcl
