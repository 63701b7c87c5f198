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

// Built-in pointed metric spaces with known curvature behaviour, and the
// greedy net estimator for the doubling constant.

#ifndef CURVLAB_SPACES_HPP_
#define CURVLAB_SPACES_HPP_

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "curvlab/metric_core.hpp"
#include "curvlab/random.hpp"

namespace curvlab {

enum class SpaceKind {
  kEuclidean,
  kL1Plane,
  kLinfPlane,
  kHyperbolicPlane,
  kSphere,
  kTripod,
  kSnowflake,
  kPointCloud,
};

// A finite point set with one of the coordinate metrics, or an explicit
// distance matrix ("custom-matrix"). Points are addressed by index.
struct PointCloud {
  std::string metric = "euclidean";
  std::vector<Point> points;
  FiniteMetricSpace space;
  std::size_t base_point = 0;
};

// Builds the distance matrix for a coordinate cloud and validates it.
PointCloud make_point_cloud(std::string metric, std::vector<Point> points,
                            std::size_t base_point);
PointCloud make_point_cloud(FiniteMetricSpace space, std::size_t base_point);

struct BuiltinSpace {
  SpaceKind kind = SpaceKind::kEuclidean;
  int dim = 2;                                // euclidean
  double radius = 1.0;                        // sphere
  std::array<double, 3> edges{1.0, 1.0, 1.0};  // tripod
  int tripod_base_leaf = -1;                  // -1: branch center
  double alpha = 0.5;                         // snowflake exponent
  std::shared_ptr<const PointCloud> cloud;    // point_cloud

  static BuiltinSpace Euclidean(int dim);
  static BuiltinSpace L1Plane();
  static BuiltinSpace LinfPlane();
  static BuiltinSpace Hyperbolic();
  static BuiltinSpace Sphere(double radius);
  static BuiltinSpace Tripod(double a, double b, double c, int base_leaf = -1);
  static BuiltinSpace Snowflake(double alpha);
  static BuiltinSpace Cloud(PointCloud cloud);
};

// Parses the CLI specifiers euclidean:<dim>, l1, linf, hyperbolic,
// sphere:<radius>, tripod:<a>,<b>,<c>[@leaf<i>], snowflake:<alpha> and
// cloud:<path.json>. Throws InputError.
BuiltinSpace parse_space_spec(std::string_view spec);

std::unique_ptr<MetricOracle> make_oracle(const BuiltinSpace& space);

// Size of a greedy (t/2)-net over `budget` points sampled from B(p, t).
// The net over a prefix of the draws is a subset of the net over all draws,
// so the estimate never decreases as the budget grows.
std::size_t estimate_doubling_constant(const MetricOracle& oracle, double t,
                                       std::size_t budget, Rng& rng);

}  // namespace curvlab

#endif  // CURVLAB_SPACES_HPP_
