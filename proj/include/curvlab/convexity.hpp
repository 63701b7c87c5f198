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

// Midpoint convexity and Busemann convexity at the base point, plus the
// finite-space midpoint form of Busemann convexity:
//   d(m, y) <= (d(x0, y) + d(x1, y)) / 2  for every midpoint m of x0, x1.

#ifndef CURVLAB_CONVEXITY_HPP_
#define CURVLAB_CONVEXITY_HPP_

#include <array>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curvlab/metric_core.hpp"
#include "curvlab/pretangent.hpp"

namespace curvlab {

// (|t| + t) / 2.
inline double positive_part(double t) { return (std::abs(t) + t) / 2.0; }

// A nonnegative defect, or the +inf sentinel for the degenerate case where
// x_n = y_n = p but z_n != p.
class ExtendedDefect {
 public:
  ExtendedDefect() = default;
  explicit ExtendedDefect(double value) : value_(value) {}
  static ExtendedDefect Infinite() {
    ExtendedDefect d;
    d.infinite_ = true;
    return d;
  }

  bool is_infinite() const { return infinite_; }
  // Only meaningful when finite.
  double value() const { return value_; }

  bool operator<(const ExtendedDefect& o) const {
    if (infinite_ || o.infinite_) return !infinite_ && o.infinite_;
    return value_ < o.value_;
  }
  bool operator==(const ExtendedDefect& o) const {
    return infinite_ == o.infinite_ && (infinite_ || value_ == o.value_);
  }
  bool at_most(double eps) const { return !infinite_ && value_ <= eps; }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

// max(|d(x,z) - d(x,y)/2|, |d(y,z) - d(x,y)/2|) / delta_p(x, y).
// With delta_p(x, y) = 0: 0 when z = p, the infinite sentinel otherwise.
template <class P, class Dist>
ExtendedDefect midpoint_defect(const P& x, const P& y, const P& z,
                               const P& p, const Dist& d) {
  const double delta = std::max(d(x, p), d(y, p));
  if (delta == 0.0) {
    return d(z, p) == 0.0 ? ExtendedDefect(0.0) : ExtendedDefect::Infinite();
  }
  const double half = 0.5 * d(x, y);
  return ExtendedDefect(
      std::max(std::abs(d(x, z) - half), std::abs(d(y, z) - half)) / delta);
}

ExtendedDefect midpoint_defect(const MetricOracle& oracle, const Point& x,
                               const Point& y, const Point& z);

enum class MidpointMode { kAuto, kAnalytic, kRandomSearch };

inline constexpr double kAnalyticEpsilon = 1e-6;
inline constexpr double kRandomSearchEpsilon = 1e-2;

struct MidpointSearchOptions {
  std::size_t budget = 10000;
  MidpointMode mode = MidpointMode::kAuto;
  double tail_fraction = 0.5;
  // Defaults to 1e-6 for the analytic hook and 1e-2 for random search.
  std::optional<double> epsilon;
  unsigned threads = 1;
};

struct MidpointSearchResult {
  PointSequence midpoints;
  std::vector<ExtendedDefect> profile;
  ExtendedDefect tail_max;
  double epsilon = 0.0;
  bool analytic = false;
  // "midpoint-convex evidence" when true, "counterexample found" otherwise.
  bool evidence = false;
};

// Per index, minimises midpoint_defect over candidate z: the oracle's exact
// midpoint when available (and allowed), otherwise p plus `budget` random
// points of B(p, 2 delta_p(x_n, y_n)). Throws PreconditionError when x or y
// does not approach p, InputError for a zero budget.
MidpointSearchResult search_infinitesimal_midpoint(
    const MetricOracle& oracle, const PointSequence& x, const PointSequence& y,
    std::uint64_t seed, const MidpointSearchOptions& opts = {});

// Nonincreasing tail of d(x_n, p) ending no higher than it starts.
bool approaches_base(const MetricOracle& oracle, const PointSequence& x,
                     double tail_fraction = 0.5);

struct BusemannOptions {
  double epsilon_mid = kAnalyticEpsilon;
  double epsilon_bus = kAnalyticEpsilon;
  double tail_fraction = 0.5;
};

struct BusemannProfile {
  std::vector<ExtendedDefect> profile;
  ExtendedDefect tail_max;
  ExtendedDefect midpoint_tail_max;
  double epsilon = 0.0;
  // "Busemann-convex evidence at p".
  bool evidence = false;
};

// Per index: (d(m_n, y_n) - (d(x0_n, y_n) + d(x1_n, y_n)) / 2)_+ divided by
// delta_p(x0_n, y_n, x1_n). Throws PreconditionError unless m is an
// infinitesimal midpoint of x0, x1 (midpoint tail max <= epsilon_mid).
BusemannProfile busemann_defect_profile(const MetricOracle& oracle,
                                        const PointSequence& x0,
                                        const PointSequence& x1,
                                        const PointSequence& y,
                                        const PointSequence& m,
                                        const BusemannOptions& opts = {});

struct FiniteBusemannReport {
  std::size_t midpoint_triples = 0;
  // max of d(m,y) - (d(x0,y) + d(x1,y)) / 2 over certified midpoints.
  double max_violation = 0.0;
  // (x0, x1, m, y)
  std::array<std::size_t, 4> witness{};
  std::array<std::string, 4> witness_labels;
  double tolerance = 1e-9;
  bool vacuous() const { return midpoint_triples == 0; }
  bool pass() const { return vacuous() || max_violation <= tolerance; }
};

// Discrete midpoints m of x0 < x1 are those with both |d(x_i, m) -
// d(x0, x1)/2| <= tau; each is checked against every y.
FiniteBusemannReport check_finite_busemann(const FiniteMetricSpace& space,
                                           double tau = 1e-9);

}  // namespace curvlab

#endif  // CURVLAB_CONVEXITY_HPP_
