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

#include "curvlab/four_point.hpp"

#include <algorithm>
#include <array>

#include "curvlab/random.hpp"
#include "quadruple_kernel.hpp"

namespace curvlab {

std::string_view to_string(Functional f) {
  switch (f) {
    case Functional::kQuadrilateral:
      return "quadrilateral";
    case Functional::kLebedevaPetrunin:
      return "lebedeva_petrunin";
    case Functional::kPtolemy:
      return "ptolemy";
  }
  return "unknown";
}

Functional parse_functional(std::string_view name) {
  if (name == "quad" || name == "quadrilateral") {
    return Functional::kQuadrilateral;
  }
  if (name == "lp" || name == "lebedeva_petrunin") {
    return Functional::kLebedevaPetrunin;
  }
  if (name == "ptolemy") return Functional::kPtolemy;
  throw InputError("unknown functional '" + std::string(name) + "'");
}

int orderings_per_subset(Functional f) {
  return f == Functional::kLebedevaPetrunin ? 4 : 3;
}

std::string_view to_string(ScanMode mode) {
  return mode == ScanMode::kExhaustive ? "exhaustive" : "sampled";
}

double evaluate_defect(Functional f, const QuadrupleDistances& q) {
  switch (f) {
    case Functional::kQuadrilateral:
      return quadrilateral_defect(q);
    case Functional::kLebedevaPetrunin:
      return lp_defect(q);
    case Functional::kPtolemy:
      return ptolemy_defect(q);
  }
  return 0.0;
}

namespace {

QuadrupleDefectReport FromKernel(Functional f,
                                 const internal::KernelResult& kr,
                                 std::size_t n, double tolerance) {
  QuadrupleDefectReport report;
  report.functional = f;
  report.points = n;
  report.tolerance = tolerance;
  if (!kr.best.valid) {
    report.vacuous = true;
    return report;
  }
  report.min_defect = kr.best.value;
  for (int i = 0; i < 4; ++i) report.witness[i] = kr.best.tuple[i];
  report.quadruples_examined = kr.examined;
  report.truncated = kr.truncated;
  report.mode = kr.truncated ? ScanMode::kSampled : ScanMode::kExhaustive;
  return report;
}

}  // namespace

QuadrupleDefectReport scan_finite(const FiniteMetricSpace& space,
                                  Functional f, const ScanOptions& opts) {
  const auto validation = validate_metric(space, opts.metric_tolerance, 1);
  if (!validation.pass) {
    const auto& v = validation.violations.front();
    throw InputError("space fails metric validation (" +
                     std::string(to_string(v.kind)) + " at " +
                     std::to_string(v.i) + "," + std::to_string(v.j) + "," +
                     std::to_string(v.k) + ")");
  }
  const std::size_t n = space.size();
  internal::DefectEvaluator eval(f, space.data(), n);
  const auto kr = internal::ScanQuadruples(n, eval, 0, 0, opts.threads);
  auto report = FromKernel(f, kr, n, opts.tolerance);
  report.mode = ScanMode::kExhaustive;
  if (!report.vacuous) {
    for (int i = 0; i < 4; ++i) {
      report.witness_labels[i] = space.label(report.witness[i]);
    }
  }
  return report;
}

QuadrupleDefectReport scan_points(const MetricOracle& oracle,
                                  std::span<const Point> points, Functional f,
                                  std::uint64_t seed,
                                  const ScanOptions& opts) {
  const auto space = sample_space(oracle, points);
  internal::DefectEvaluator eval(f, space.data(), space.size());
  const auto kr = internal::ScanQuadruples(
      space.size(), eval, opts.quadruple_budget,
      derive_seed(seed, "scan-subsets"), opts.threads);
  auto report = FromKernel(f, kr, space.size(), opts.tolerance);
  report.mode = ScanMode::kSampled;
  if (!report.vacuous) {
    for (int i = 0; i < 4; ++i) {
      report.witness_points.push_back(points[report.witness[i]]);
    }
  }
  return report;
}

QuadrupleDefectReport scan_sampled(const MetricOracle& oracle, double t,
                                   std::size_t m, Functional f,
                                   std::uint64_t seed,
                                   const ScanOptions& opts) {
  if (!(t > 0.0)) throw InputError("scan scale must be positive");
  if (m < 4) throw InputError("scan needs at least 4 samples");
  Rng rng(seed, "scan-points");
  std::vector<Point> points;
  points.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    points.push_back(oracle.sample_at_scale(t, rng));
  }
  return scan_points(oracle, points, f, seed, opts);
}

ViolationSearch search_violation(const MetricOracle& oracle, Functional f,
                                 double t, std::uint64_t max_draws,
                                 std::uint64_t seed, double threshold) {
  if (!(t > 0.0)) throw InputError("search scale must be positive");
  ViolationSearch result;
  Rng rng(seed, "violation-search");
  std::array<Point, 4> q;
  for (std::uint64_t draw = 0; draw < max_draws; ++draw) {
    for (auto& point : q) point = oracle.sample_at_scale(t, rng);
    const auto space = sample_space(oracle, q);
    internal::DefectEvaluator eval(f, space.data(), 4);
    const auto best = eval(0, 1, 2, 3);
    result.draws = draw + 1;
    if (best.value < threshold) {
      result.found = true;
      result.defect = best.value;
      for (int i = 0; i < 4; ++i) result.witness[i] = q[best.tuple[i]];
      return result;
    }
  }
  return result;
}

}  // namespace curvlab
