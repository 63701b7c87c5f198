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

#include "curvlab/metric_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvlab/random.hpp"

namespace curvlab {

FiniteMetricSpace::FiniteMetricSpace(
    std::vector<std::string> labels,
    const std::vector<std::vector<double>>& dist)
    : labels_(std::move(labels)) {
  const std::size_t n = labels_.size();
  if (dist.size() != n) {
    throw InputError("distance matrix has " + std::to_string(dist.size()) +
                     " rows but there are " + std::to_string(n) + " labels");
  }
  dist_.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i].size() != n) {
      throw InputError("distance matrix row " + std::to_string(i) + " has " +
                       std::to_string(dist[i].size()) + " entries, expected " +
                       std::to_string(n));
    }
    dist_.insert(dist_.end(), dist[i].begin(), dist[i].end());
  }
  Check();
}

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels,
                                     std::vector<double> flat)
    : labels_(std::move(labels)), dist_(std::move(flat)) {
  if (dist_.size() != labels_.size() * labels_.size()) {
    throw InputError("flat distance matrix does not match label count");
  }
  Check();
}

FiniteMetricSpace FiniteMetricSpace::FromMatrix(
    const std::vector<std::vector<double>>& dist) {
  std::vector<std::string> labels;
  labels.reserve(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    labels.push_back(std::to_string(i));
  }
  return FiniteMetricSpace(std::move(labels), dist);
}

void FiniteMetricSpace::Check() {
  const std::size_t n = labels_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = dist_[i * n + j];
      if (std::isnan(v)) {
        throw InputError("NaN distance at (" + std::to_string(i) + ", " +
                         std::to_string(j) + ")");
      }
      if (std::isinf(v)) {
        throw InputError("infinite distance at (" + std::to_string(i) + ", " +
                         std::to_string(j) + ")");
      }
      if (v < 0.0) {
        throw InputError("negative distance at (" + std::to_string(i) + ", " +
                         std::to_string(j) + ")");
      }
    }
  }
  index_.clear();
  for (std::size_t i = 0; i < n; ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw InputError("duplicate label '" + labels_[i] + "'");
    }
  }
}

double FiniteMetricSpace::distance(std::size_t i, std::size_t j) const {
  if (i >= size() || j >= size()) {
    throw InputError("point index out of range");
  }
  return (*this)(i, j);
}

double FiniteMetricSpace::distance(std::string_view a,
                                   std::string_view b) const {
  return (*this)(index_of(a), index_of(b));
}

std::size_t FiniteMetricSpace::index_of(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) {
    throw InputError("unknown point label '" + std::string(label) + "'");
  }
  return it->second;
}

FiniteMetricSpace FiniteMetricSpace::Permuted(
    std::span<const std::size_t> perm) const {
  const std::size_t n = size();
  if (perm.size() != n) throw InputError("permutation has wrong length");
  std::vector<std::string> labels(n);
  std::vector<double> flat(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = labels_.at(perm[i]);
    for (std::size_t j = 0; j < n; ++j) {
      flat[i * n + j] = (*this)(perm[i], perm[j]);
    }
  }
  return FiniteMetricSpace(std::move(labels), std::move(flat));
}

std::string_view to_string(AxiomViolation::Kind kind) {
  switch (kind) {
    case AxiomViolation::Kind::kDiagonal:
      return "diagonal";
    case AxiomViolation::Kind::kSymmetry:
      return "symmetry";
    case AxiomViolation::Kind::kTriangle:
      return "triangle";
  }
  return "unknown";
}

ValidationReport validate_metric(const FiniteMetricSpace& space,
                                 double tolerance, std::size_t max_listed) {
  if (!(tolerance >= 0.0)) throw InputError("tolerance must be nonnegative");
  ValidationReport report;
  auto record = [&](AxiomViolation v) {
    report.pass = false;
    ++report.violation_count;
    if (report.violations.size() < max_listed) report.violations.push_back(v);
  };
  const std::size_t n = space.size();
  const auto& d = space;
  for (std::size_t i = 0; i < n; ++i) {
    if (d(i, i) > tolerance) {
      record({AxiomViolation::Kind::kDiagonal, i, i, i, d(i, i)});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double gap = std::abs(d(i, j) - d(j, i));
      if (gap > tolerance) {
        record({AxiomViolation::Kind::kSymmetry, i, j, j, gap});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double excess = d(i, j) - (d(i, k) + d(k, j));
        if (excess > tolerance) {
          record({AxiomViolation::Kind::kTriangle, i, j, k, excess});
        }
      }
    }
  }
  return report;
}

std::vector<Point> MetricOracle::anchor_points(double /*t*/) const {
  return {base_point()};
}

std::optional<Point> MetricOracle::midpoint(const Point&, const Point&) const {
  return std::nullopt;
}

Point MetricOracle::radial(std::span<const double>, double) const {
  throw InputError("space '" + name() + "' has no radial sequences");
}

std::vector<Point> MetricOracle::default_directions() const { return {}; }

double MetricOracle::checked_distance(const Point& a, const Point& b) const {
  check_point(a);
  check_point(b);
  return distance(a, b);
}

FiniteMetricSpace sample_space(const MetricOracle& oracle,
                               std::span<const Point> points,
                               std::vector<std::string> labels) {
  const std::size_t n = points.size();
  if (labels.empty()) {
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  std::vector<double> flat(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = oracle.distance(points[i], points[j]);
      flat[i * n + j] = v;
      flat[j * n + i] = v;
    }
  }
  return FiniteMetricSpace(std::move(labels), std::move(flat));
}

SpotCheckReport spot_validate(const MetricOracle& oracle, double t,
                              std::size_t triples, Rng& rng,
                              double relative_tolerance) {
  SpotCheckReport report;
  report.triples = triples;
  const Point& p = oracle.base_point();
  report.worst_diagonal = std::abs(oracle.distance(p, p));
  constexpr double kTiny = std::numeric_limits<double>::min();
  for (std::size_t s = 0; s < triples; ++s) {
    const Point a = oracle.sample_at_scale(t, rng);
    const Point b = oracle.sample_at_scale(t, rng);
    const Point c = oracle.sample_at_scale(t, rng);
    for (const Point* q : {&a, &b, &c}) {
      report.worst_ball_excess =
          std::max(report.worst_ball_excess, oracle.distance(*q, p) / t - 1.0);
      report.worst_diagonal =
          std::max(report.worst_diagonal, std::abs(oracle.distance(*q, *q)));
    }
    const double ab = oracle.distance(a, b);
    const double bc = oracle.distance(b, c);
    const double ac = oracle.distance(a, c);
    if (ab < 0.0 || bc < 0.0 || ac < 0.0) report.pass = false;
    report.worst_asymmetry =
        std::max(report.worst_asymmetry, std::abs(ab - oracle.distance(b, a)));
    // Every rotation of the triple.
    const double sides[3][3] = {{ac, ab, bc}, {ab, ac, bc}, {bc, ab, ac}};
    for (const auto& s3 : sides) {
      const double bound = s3[1] + s3[2];
      report.worst_triangle_excess =
          std::max(report.worst_triangle_excess,
                   (s3[0] - bound) / std::max(bound, kTiny));
    }
  }
  if (report.worst_triangle_excess > relative_tolerance ||
      report.worst_asymmetry > 0.0 || report.worst_diagonal > 0.0 ||
      report.worst_ball_excess > relative_tolerance) {
    report.pass = false;
  }
  return report;
}

}  // namespace curvlab
