// Copyright 2026 The curvature-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS-IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Pool-level convexity surveys and the theorem workflows: hypothesis checks
// on the space, a pretangent build from a sequence pool, and conclusion
// checks on the resulting quotient.

#ifndef CURVLAB_WORKFLOW_HPP_
#define CURVLAB_WORKFLOW_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curvlab/convexity.hpp"
#include "curvlab/infinitesimal.hpp"
#include "curvlab/io.hpp"
#include "curvlab/pretangent.hpp"

namespace curvlab {

struct PairMidpoint {
  std::size_t x = 0, y = 0;  // sequence positions
  MidpointSearchResult result;
};

struct MidpointSurvey {
  std::vector<PairMidpoint> pairs;
  // Every pair certified.
  bool evidence = true;
  // Pair with the largest tail defect; pairs.size() when empty.
  std::size_t worst = 0;
};

// Midpoint search for every pair x < y of `sequences`. Pair k draws from
// derive_seed(seed, "midpoint-pair", k).
MidpointSurvey survey_midpoints(const MetricOracle& oracle,
                                const std::vector<PointSequence>& sequences,
                                std::uint64_t seed,
                                const MidpointSearchOptions& opts = {});

struct BusemannTriple {
  std::size_t x0 = 0, x1 = 0, y = 0;
  BusemannProfile profile;
};

struct BusemannSurvey {
  MidpointSurvey midpoints;
  // One entry per certified midpoint pair and every y.
  std::vector<BusemannTriple> triples;
  bool evidence = false;
  std::size_t worst = 0;  // triples.size() when empty
};

// Busemann convexity at p requires midpoint convexity at p, so the verdict
// is negative whenever a pair lacks a certified midpoint.
BusemannSurvey survey_busemann(const MetricOracle& oracle,
                               const std::vector<PointSequence>& sequences,
                               std::uint64_t seed,
                               const MidpointSearchOptions& mid_opts = {},
                               std::optional<double> epsilon_bus = std::nullopt);

Json to_json(const MidpointSurvey& survey,
             const std::vector<PointSequence>& sequences);
Json to_json(const BusemannSurvey& survey,
             const std::vector<PointSequence>& sequences);

enum class TheoremId { kT3, kT5, kT8, kT10 };
std::string_view to_string(TheoremId id);  // "T3", ...
TheoremId parse_theorem(std::string_view text);

struct WorkflowConfig {
  ScaleSchedule schedule = ScaleSchedule::Geometric(0.5, 0.5, 10, 60);
  std::optional<double> liminf_epsilon;
  std::size_t midpoint_budget = 10000;
  std::optional<double> midpoint_epsilon;
  std::optional<double> busemann_epsilon;
  StabilityTolerances stability;
  double tau_zero = kDefaultZeroTolerance;
  double tau_pass = 1e-9;
  unsigned threads = 1;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  Json detail;
};

struct TheoremReport {
  TheoremId theorem = TheoremId::kT3;
  std::vector<CheckResult> hypotheses;
  std::vector<CheckResult> conclusions;
  Json pretangent;
  bool hypotheses_hold = false;
  bool conclusion_holds = false;
  // "consistent", "hypotheses-not-met", "consistent-negative" or
  // "counterexample".
  std::string agreement;
  bool pass() const { return hypotheses_hold && conclusion_holds; }
};

TheoremReport run_theorem_workflow(TheoremId id, const MetricOracle& oracle,
                                   const Pool& pool, std::uint64_t seed,
                                   const WorkflowConfig& config = {});

Json to_json(const TheoremReport& report);

}  // namespace curvlab

#endif  // CURVLAB_WORKFLOW_HPP_
