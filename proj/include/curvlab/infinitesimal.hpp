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

// Normalised four-point functionals at a marked point and their liminf as
// the quadruple shrinks to the base point.
//
// A1, A2 and A3 divide the quadrilateral, Lebedeva-Petrunin and Ptolemy
// defects by delta_p(w,x,y,z)², where delta_p is the largest distance of the
// tuple to p. All three are defined to be 0 at (p,p,p,p).

#ifndef CURVLAB_INFINITESIMAL_HPP_
#define CURVLAB_INFINITESIMAL_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curvlab/four_point.hpp"
#include "curvlab/metric_core.hpp"

namespace curvlab {

enum class NormalizedFunctional { kA1, kA2, kA3 };

std::string_view to_string(NormalizedFunctional f);  // "A1", "A2", "A3"
NormalizedFunctional parse_normalized_functional(std::string_view name);
Functional underlying_defect(NormalizedFunctional f);

// max_i d(x_i, p); 0 for an empty tuple.
template <class P, class Dist>
double delta_p(std::span<const P> points, const P& p, const Dist& d) {
  double best = 0.0;
  for (const auto& x : points) best = std::max(best, d(x, p));
  return best;
}

double delta_p(const MetricOracle& oracle, std::span<const Point> points);

template <class P, class Dist>
double evaluate(NormalizedFunctional f, const P& w, const P& x, const P& y,
                const P& z, const P& p, const Dist& d) {
  const double delta =
      std::max(std::max(d(w, p), d(x, p)), std::max(d(y, p), d(z, p)));
  if (delta == 0.0) return 0.0;
  double defect = 0.0;
  switch (f) {
    case NormalizedFunctional::kA1:
      defect = quadrilateral_defect(w, x, y, z, d);
      break;
    case NormalizedFunctional::kA2:
      defect = lp_defect(w, x, y, z, d);
      break;
    case NormalizedFunctional::kA3:
      // d(x,w)d(y,z) + d(x,z)d(y,w) - d(x,y)d(w,z)
      defect = ptolemy_defect(x, y, w, z, d);
      break;
  }
  return defect / (delta * delta);
}

double evaluate(NormalizedFunctional f, const MetricOracle& oracle,
                const Point& w, const Point& x, const Point& y,
                const Point& z);

// Strictly decreasing positive radii t_1 > ... > t_K.
struct ScaleSchedule {
  std::vector<double> radii;
  std::size_t samples_per_scale = 60;

  // start, start*ratio, ..., start*ratio^(count-1).
  static ScaleSchedule Geometric(double start, double ratio, std::size_t count,
                                 std::size_t samples);
  // "t1,t2,...,tK" or "geometric:start,ratio,K".
  static ScaleSchedule Parse(std::string_view text, std::size_t samples);

  // Throws InputError.
  void Validate() const;
};

// A user-supplied defect of an ordered quadruple, homogeneous of `degree`.
// Scanned over all 24 orderings of each subset.
struct CustomFunctional {
  std::string name;
  std::function<double(const QuadrupleDistances&)> defect;
  double degree = 2.0;
};

struct ScaleMinimum {
  double scale = 0.0;
  double min_value = 0.0;
  std::array<Point, 4> witness;  // (w, x, y, z)
  std::uint64_t examined = 0;
  bool truncated = false;
  std::size_t points = 0;
};

struct LiminfEstimate {
  std::string functional;
  std::vector<ScaleMinimum> per_scale;
  // Minimum over the last ceil(K/3) scales.
  double tail_inf = 0.0;
  std::size_t tail_count = 0;
  double epsilon = 1e-6;
  bool anchors = true;
  std::size_t samples_per_scale = 0;
  bool pass = false;
};

// Large enough for an exhaustive scan of 60 samples plus anchors per scale.
inline constexpr std::uint64_t kLiminfQuadrupleBudget = 50000000;

struct LiminfOptions {
  // Defaults to default_liminf_epsilon(oracle).
  std::optional<double> epsilon;
  // Adds oracle.anchor_points(t) to every scale's sample.
  bool anchors = true;
  std::uint64_t quadruple_budget = kLiminfQuadrupleBudget;
  unsigned threads = 1;
};

// 1e-3 for curved model spaces, 1e-6 otherwise.
double default_liminf_epsilon(const MetricOracle& oracle);

std::size_t tail_window(std::size_t scales);

LiminfEstimate estimate_liminf(NormalizedFunctional f,
                               const MetricOracle& oracle,
                               const ScaleSchedule& schedule,
                               std::uint64_t seed,
                               const LiminfOptions& opts = {});

LiminfEstimate estimate_liminf(const CustomFunctional& f,
                               const MetricOracle& oracle,
                               const ScaleSchedule& schedule,
                               std::uint64_t seed,
                               const LiminfOptions& opts = {});

}  // namespace curvlab

#endif  // CURVLAB_INFINITESIMAL_HPP_
