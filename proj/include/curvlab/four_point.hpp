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

// Signed defects of the quadrilateral (CAT(0)), Lebedeva-Petrunin
// (nonnegative curvature) and Ptolemy four-point inequalities, and scanners
// that minimise them over finite spaces or oracle samples.
//
// A defect is >= 0 exactly when its inequality holds for the ordered
// quadruple. All three are homogeneous of degree 2 in the metric.

#ifndef CURVLAB_FOUR_POINT_HPP_
#define CURVLAB_FOUR_POINT_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curvlab/metric_core.hpp"

namespace curvlab {

enum class Functional { kQuadrilateral, kLebedevaPetrunin, kPtolemy };

// "quadrilateral", "lebedeva_petrunin", "ptolemy".
std::string_view to_string(Functional f);
// Accepts the long names and the CLI short forms quad, lp, ptolemy.
Functional parse_functional(std::string_view name);

// Orderings that remain distinct once each functional's symmetry group is
// factored out: quadrilateral 3, lebedeva_petrunin 4, ptolemy 3.
int orderings_per_subset(Functional f);

// Pairwise distances of an ordered quadruple (q0, q1, q2, q3).
struct QuadrupleDistances {
  double d01, d02, d03, d12, d13, d23;
};

template <class P, class Dist>
QuadrupleDistances gather_distances(const P& q0, const P& q1, const P& q2,
                                    const P& q3, const Dist& d) {
  return {d(q0, q1), d(q0, q2), d(q0, q3), d(q1, q2), d(q1, q3), d(q2, q3)};
}

// (w, x, y, z) = (q0, q1, q2, q3):
// d²(w,x) + d²(x,y) + d²(y,z) + d²(z,w) - d²(w,y) - d²(x,z).
inline double quadrilateral_defect(const QuadrupleDistances& q) {
  return q.d01 * q.d01 + q.d12 * q.d12 + q.d23 * q.d23 + q.d03 * q.d03 -
         q.d02 * q.d02 - q.d13 * q.d13;
}

// Apex w = q0, (x, y, z) = (q1, q2, q3):
// d²(w,x) + d²(w,y) + d²(w,z) - (d²(x,y) + d²(y,z) + d²(z,x)) / 3.
inline double lp_defect(const QuadrupleDistances& q) {
  return q.d01 * q.d01 + q.d02 * q.d02 + q.d03 * q.d03 -
         (q.d12 * q.d12 + q.d23 * q.d23 + q.d13 * q.d13) / 3.0;
}

// (x, y, u, v) = (q0, q1, q2, q3):
// d(x,u) d(y,v) + d(x,v) d(y,u) - d(x,y) d(u,v).
inline double ptolemy_defect(const QuadrupleDistances& q) {
  return q.d02 * q.d13 + q.d03 * q.d12 - q.d01 * q.d23;
}

double evaluate_defect(Functional f, const QuadrupleDistances& q);

template <class P, class Dist>
double quadrilateral_defect(const P& w, const P& x, const P& y, const P& z,
                            const Dist& d) {
  return quadrilateral_defect(gather_distances(w, x, y, z, d));
}

template <class P, class Dist>
double lp_defect(const P& w, const P& x, const P& y, const P& z,
                 const Dist& d) {
  return lp_defect(gather_distances(w, x, y, z, d));
}

template <class P, class Dist>
double ptolemy_defect(const P& x, const P& y, const P& u, const P& v,
                      const Dist& d) {
  return ptolemy_defect(gather_distances(x, y, u, v, d));
}

enum class ScanMode { kExhaustive, kSampled };
std::string_view to_string(ScanMode mode);

struct QuadrupleDefectReport {
  Functional functional = Functional::kQuadrilateral;
  ScanMode mode = ScanMode::kExhaustive;
  // Fewer than four points: nothing to check, min_defect is +inf.
  bool vacuous = false;
  double min_defect = std::numeric_limits<double>::infinity();
  // Witness indices into the scanned point set, in the functional's role
  // order; ties go to the lexicographically smallest tuple.
  std::array<std::size_t, 4> witness{};
  std::array<std::string, 4> witness_labels;
  std::vector<Point> witness_points;  // sampled scans only
  std::uint64_t quadruples_examined = 0;
  // Sampled scans above the quadruple budget evaluate a seeded random subset.
  bool truncated = false;
  std::size_t points = 0;
  double tolerance = 1e-9;

  bool pass() const { return vacuous || min_defect >= -tolerance; }
};

inline constexpr std::uint64_t kDefaultQuadrupleBudget = 200000;

struct ScanOptions {
  double tolerance = 1e-9;
  // Metric validation applied before a finite scan.
  double metric_tolerance = kDefaultMetricTolerance;
  unsigned threads = 1;
  // Sampled scans only; 0 disables truncation.
  std::uint64_t quadruple_budget = kDefaultQuadrupleBudget;
};

// Exhaustive scan over all C(n,4) subsets and their distinct orderings.
// Throws InputError when the space fails metric validation.
QuadrupleDefectReport scan_finite(const FiniteMetricSpace& space,
                                  Functional f, const ScanOptions& opts = {});

// Scan over the given oracle points (exhaustive below the budget).
QuadrupleDefectReport scan_points(const MetricOracle& oracle,
                                  std::span<const Point> points, Functional f,
                                  std::uint64_t seed,
                                  const ScanOptions& opts = {});

// Draws m points from B(p, t) and scans them. Deterministic given seed.
QuadrupleDefectReport scan_sampled(const MetricOracle& oracle, double t,
                                   std::size_t m, Functional f,
                                   std::uint64_t seed,
                                   const ScanOptions& opts = {});

struct ViolationSearch {
  bool found = false;
  std::uint64_t draws = 0;
  double defect = 0.0;
  std::array<Point, 4> witness;  // role order of the functional
};

// Draws independent quadruples from B(p, t) until one has defect below
// `threshold` or `max_draws` is exhausted. Each draw checks every ordering.
ViolationSearch search_violation(const MetricOracle& oracle, Functional f,
                                 double t, std::uint64_t max_draws,
                                 std::uint64_t seed, double threshold = 0.0);

}  // namespace curvlab

#endif  // CURVLAB_FOUR_POINT_HPP_
