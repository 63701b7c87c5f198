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

#include "curvlab/spaces.hpp"

#include <algorithm>
#include <charconv>
#include <complex>
#include <cmath>
#include <numbers>
#include <sstream>

#include "curvlab/io.hpp"

namespace curvlab {
namespace {

constexpr double kPi = std::numbers::pi;

void RequireSize(const Point& a, std::size_t n, const std::string& space) {
  if (a.size() != n) {
    throw InputError(space + " points have " + std::to_string(n) +
                     " coordinates, got " + std::to_string(a.size()));
  }
  for (double v : a) {
    if (!std::isfinite(v)) throw InputError(space + " point is not finite");
  }
}

double Norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Six unit directions at 60 degree spacing: any three alternate ones form an
// equilateral triangle around the origin.
std::array<std::array<double, 2>, 6> HexDirections() {
  std::array<std::array<double, 2>, 6> out{};
  for (int k = 0; k < 6; ++k) {
    out[k] = {std::cos(k * kPi / 3.0), std::sin(k * kPi / 3.0)};
  }
  out[3] = {-1.0, 0.0};  // exact antipode of e1
  return out;
}

// Shared behaviour of (R^n, norm) spaces with base point 0.
class NormedSpace : public MetricOracle {
 public:
  explicit NormedSpace(int dim) : dim_(dim), p_(dim, 0.0) {}

  const Point& base_point() const override { return p_; }
  void check_point(const Point& a) const override {
    RequireSize(a, dim_, name());
  }
  std::optional<Point> midpoint(const Point& a, const Point& b) const override {
    Point m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) m[i] = 0.5 * (a[i] + b[i]);
    return m;
  }
  Point radial(std::span<const double> v, double r) const override {
    if (static_cast<int>(v.size()) != dim_) {
      throw InputError("direction has wrong dimension for " + name());
    }
    Point x(v.begin(), v.end());
    for (double& c : x) c *= r;
    return x;
  }
  bool self_similar() const override { return true; }

 protected:
  virtual double Norm(std::span<const double> v) const = 0;

  // Points at norm t along 2D unit-norm rescalings of `dirs`.
  std::vector<Point> PlanarAnchors(
      double t, std::span<const std::array<double, 2>> dirs) const {
    std::vector<Point> out{p_};
    for (const auto& d : dirs) {
      const double n = Norm(d);
      out.push_back({t * d[0] / n, t * d[1] / n});
    }
    return out;
  }

  int dim_;
  Point p_;
};

class EuclideanSpace final : public NormedSpace {
 public:
  using NormedSpace::NormedSpace;

  std::string name() const override {
    return "euclidean:" + std::to_string(dim_);
  }
  double distance(const Point& a, const Point& b) const override {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      s += d * d;
    }
    return std::sqrt(s);
  }
  Point sample_at_scale(double t, Rng& rng) const override {
    if (t <= 0.0) return p_;
    Point x(dim_);
    double n;
    do {
      for (double& c : x) c = rng.normal();
      n = Norm2(x);
    } while (n == 0.0);
    const double rad = t * std::pow(rng.uniform(), 1.0 / dim_);
    for (double& c : x) c *= rad / n;
    return x;
  }
  std::vector<Point> anchor_points(double t) const override {
    std::vector<Point> out{p_};
    if (dim_ == 1) {
      out.push_back({t});
      out.push_back({-t});
      return out;
    }
    for (const auto& d : HexDirections()) {
      Point x(dim_, 0.0);
      x[0] = t * d[0];
      x[1] = t * d[1];
      out.push_back(std::move(x));
    }
    for (int i = 2; i < dim_; ++i) {
      for (double s : {1.0, -1.0}) {
        Point x(dim_, 0.0);
        x[i] = s * t;
        out.push_back(std::move(x));
      }
    }
    return out;
  }
  std::vector<Point> default_directions() const override {
    if (dim_ == 1) return {{1.0}, {-1.0}, {0.5}, {2.0}};
    auto e = [&](int i, double s) {
      Point x(dim_, 0.0);
      x[i] = s;
      return x;
    };
    Point diag(dim_, 0.0), half_diag(dim_, 0.0);
    diag[0] = diag[1] = 1.0;
    half_diag[0] = half_diag[1] = 0.5;
    return {e(0, 1.0), e(1, 1.0), diag, half_diag, e(0, -1.0), e(0, 0.5)};
  }

 protected:
  double Norm(std::span<const double> v) const override { return Norm2(v); }
};

class L1Plane final : public NormedSpace {
 public:
  L1Plane() : NormedSpace(2) {}
  std::string name() const override { return "l1"; }
  double distance(const Point& a, const Point& b) const override {
    return std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]);
  }
  Point sample_at_scale(double t, Rng& rng) const override {
    if (t <= 0.0) return p_;
    for (;;) {
      const double x = rng.uniform(-t, t);
      const double y = rng.uniform(-t, t);
      if (std::abs(x) + std::abs(y) <= t) return {x, y};
    }
  }
  std::vector<Point> anchor_points(double t) const override {
    static constexpr std::array<std::array<double, 2>, 8> kDirs{{
        {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};
    return PlanarAnchors(t, kDirs);
  }
  std::vector<Point> default_directions() const override {
    return {{1, 0}, {0, 1}, {1, 1}, {0.5, 0.5}, {-1, 0}, {0.5, 0}};
  }

 protected:
  double Norm(std::span<const double> v) const override {
    return std::abs(v[0]) + std::abs(v[1]);
  }
};

class LinfPlane final : public NormedSpace {
 public:
  LinfPlane() : NormedSpace(2) {}
  std::string name() const override { return "linf"; }
  double distance(const Point& a, const Point& b) const override {
    return std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1]));
  }
  Point sample_at_scale(double t, Rng& rng) const override {
    if (t <= 0.0) return p_;
    return {rng.uniform(-t, t), rng.uniform(-t, t)};
  }
  std::vector<Point> anchor_points(double t) const override {
    static constexpr std::array<std::array<double, 2>, 8> kDirs{{
        {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};
    return PlanarAnchors(t, kDirs);
  }
  std::vector<Point> default_directions() const override {
    return {{1, 0}, {0, 1}, {1, 1}, {0.5, 0.5}, {-1, 0}, {0.5, 0}};
  }

 protected:
  double Norm(std::span<const double> v) const override {
    return std::max(std::abs(v[0]), std::abs(v[1]));
  }
};

// Poincare disk model, base point at the origin.
class HyperbolicPlane final : public MetricOracle {
 public:
  std::string name() const override { return "hyperbolic"; }
  const Point& base_point() const override { return p_; }
  void check_point(const Point& a) const override {
    RequireSize(a, 2, name());
    if (a[0] * a[0] + a[1] * a[1] >= 1.0) {
      throw InputError("hyperbolic point outside the unit disk");
    }
  }
  // arccosh(1 + 2|u-v|^2 / ((1-|u|^2)(1-|v|^2))), evaluated through the
  // equivalent 2 asinh form which stays accurate for tiny distances.
  double distance(const Point& u, const Point& v) const override {
    const double dx = u[0] - v[0];
    const double dy = u[1] - v[1];
    const double nu = 1.0 - (u[0] * u[0] + u[1] * u[1]);
    const double nv = 1.0 - (v[0] * v[0] + v[1] * v[1]);
    return 2.0 * std::asinh(std::sqrt((dx * dx + dy * dy) / (nu * nv)));
  }
  // Radial inverse CDF of the hyperbolic area element sinh(rho) on B(p, t).
  Point sample_at_scale(double t, Rng& rng) const override {
    if (t <= 0.0) return p_;
    const double rho = 2.0 * std::asinh(std::sqrt(rng.uniform()) *
                                        std::sinh(0.5 * t));
    const double theta = rng.uniform(0.0, 2.0 * kPi);
    return AtDistance(rho, std::cos(theta), std::sin(theta));
  }
  std::vector<Point> anchor_points(double t) const override {
    std::vector<Point> out{p_};
    for (const auto& d : HexDirections()) {
      out.push_back(AtDistance(t, d[0], d[1]));
    }
    return out;
  }
  // Moves a to the origin with a Moebius map, halves, maps back.
  std::optional<Point> midpoint(const Point& a, const Point& b) const override {
    const std::complex<double> za(a[0], a[1]), zb(b[0], b[1]);
    const std::complex<double> w = (zb - za) / (1.0 - std::conj(za) * zb);
    const double r = std::abs(w);
    if (r == 0.0) return a;
    const double half = distance(a, b) * 0.5;
    const std::complex<double> m0 = w / r * std::tanh(0.5 * half);
    const std::complex<double> m = (m0 + za) / (1.0 + std::conj(za) * m0);
    return Point{m.real(), m.imag()};
  }
  Point radial(std::span<const double> v, double r) const override {
    if (v.size() != 2) throw InputError("hyperbolic directions are 2D");
    const double n = Norm2(v);
    if (n == 0.0) return p_;
    return AtDistance(r * n, v[0] / n, v[1] / n);
  }
  std::vector<Point> default_directions() const override {
    return {{1, 0}, {0, 1}, {1, 1}, {0.5, 0.5}, {-1, 0}, {0.5, 0}};
  }
  bool curved() const override { return true; }

 private:
  static Point AtDistance(double rho, double cx, double cy) {
    const double r = std::tanh(0.5 * rho);
    return {r * cx, r * cy};
  }

  Point p_{0.0, 0.0};
};

// Round sphere of radius R; points are (colatitude, longitude) with the base
// point at the north pole.
class Sphere final : public MetricOracle {
 public:
  explicit Sphere(double radius) : radius_(radius) {}

  std::string name() const override {
    std::ostringstream os;
    os << "sphere:" << radius_;
    return os.str();
  }
  const Point& base_point() const override { return p_; }
  void check_point(const Point& a) const override {
    RequireSize(a, 2, name());
    if (a[0] < 0.0 || a[0] > kPi) {
      throw InputError("sphere colatitude outside [0, pi]");
    }
  }
  // Haversine form; accurate at every scale the samplers produce.
  double distance(const Point& a, const Point& b) const override {
    const double s1 = std::sin(0.5 * (a[0] - b[0]));
    const double s2 = std::sin(0.5 * (a[1] - b[1]));
    const double h = s1 * s1 + std::sin(a[0]) * std::sin(b[0]) * s2 * s2;
    return radius_ * 2.0 * std::asin(std::sqrt(std::min(1.0, h)));
  }
  Point sample_at_scale(double t, Rng& rng) const override {
    if (t <= 0.0) return p_;
    const double cap = std::min(t / radius_, kPi);
    const double theta =
        2.0 * std::asin(std::sqrt(rng.uniform()) * std::sin(0.5 * cap));
    return {std::min(theta, cap), rng.uniform(0.0, 2.0 * kPi)};
  }
  std::vector<Point> anchor_points(double t) const override {
    const double cap = std::min(t / radius_, kPi);
    std::vector<Point> out{p_};
    for (int k = 0; k < 6; ++k) out.push_back({cap, k * kPi / 3.0});
    return out;
  }
  std::optional<Point> midpoint(const Point& a, const Point& b) const override {
    const auto va = ToVector(a);
    const auto vb = ToVector(b);
    std::array<double, 3> m{va[0] + vb[0], va[1] + vb[1], va[2] + vb[2]};
    const double n = std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
    if (n < 1e-300) return std::nullopt;  // antipodal: not unique
    const double rho = std::hypot(m[0], m[1]);
    return Point{std::atan2(rho, m[2]), std::atan2(m[1], m[0])};
  }
  Point radial(std::span<const double> v, double r) const override {
    if (v.size() != 2) throw InputError("sphere directions are 2D");
    const double n = Norm2(v);
    if (n == 0.0) return p_;
    return {std::min(r * n / radius_, kPi), std::atan2(v[1], v[0])};
  }
  std::vector<Point> default_directions() const override {
    return {{1, 0}, {0, 1}, {1, 1}, {0.5, 0.5}, {-1, 0}, {0.5, 0}};
  }
  bool curved() const override { return true; }

 private:
  static std::array<double, 3> ToVector(const Point& a) {
    const double s = std::sin(a[0]);
    return {s * std::cos(a[1]), s * std::sin(a[1]), std::cos(a[0])};
  }

  double radius_;
  Point p_{0.0, 0.0};
};

// Three segments glued at a branch center. A point is (leg, offset) with the
// offset measured from the center; offset 0 on any leg is the center.
class Tripod final : public MetricOracle {
 public:
  Tripod(std::array<double, 3> edges, int base_leaf)
      : edges_(edges), base_leaf_(base_leaf) {
    p_ = base_leaf < 0 ? Point{0.0, 0.0}
                       : Point{static_cast<double>(base_leaf),
                               edges_[base_leaf]};
  }

  std::string name() const override {
    std::ostringstream os;
    os << "tripod:" << edges_[0] << "," << edges_[1] << "," << edges_[2];
    if (base_leaf_ >= 0) os << "@leaf" << base_leaf_;
    return os.str();
  }
  const Point& base_point() const override { return p_; }
  void check_point(const Point& a) const override {
    RequireSize(a, 2, name());
    const double leg = a[0];
    if (leg != 0.0 && leg != 1.0 && leg != 2.0) {
      throw InputError("tripod leg must be 0, 1 or 2");
    }
    if (a[1] < 0.0 || a[1] > edges_[static_cast<int>(leg)]) {
      throw InputError("tripod offset outside its edge");
    }
  }
  double distance(const Point& a, const Point& b) const override {
    if (a[0] == b[0]) return std::abs(a[1] - b[1]);
    return a[1] + b[1];
  }
  Point sample_at_scale(double t, Rng& rng) const override {
    if (t <= 0.0) return p_;
    // Offset range [lo, hi] of the ball on each leg.
    std::array<std::array<double, 2>, 3> range{};
    std::array<int, 3> legs{};
    int count = 0;
    for (int leg = 0; leg < 3; ++leg) {
      double lo, hi;
      if (base_leaf_ < 0) {
        lo = 0.0;
        hi = std::min(t, edges_[leg]);
      } else if (leg == base_leaf_) {
        lo = std::max(0.0, edges_[leg] - t);
        hi = edges_[leg];
      } else {
        lo = 0.0;
        hi = std::min(t - edges_[base_leaf_], edges_[leg]);
      }
      if (hi >= lo) {
        range[count] = {lo, hi};
        legs[count++] = leg;
      }
    }
    const auto k = rng.index(count);
    return {static_cast<double>(legs[k]),
            rng.uniform(range[k][0], range[k][1])};
  }
  std::vector<Point> anchor_points(double t) const override {
    std::vector<Point> out{p_};
    if (base_leaf_ < 0) {
      for (int leg = 0; leg < 3; ++leg) {
        out.push_back({static_cast<double>(leg), std::min(t, edges_[leg])});
      }
      return out;
    }
    const double l = edges_[base_leaf_];
    out.push_back({static_cast<double>(base_leaf_), std::max(0.0, l - t)});
    if (t > l) {
      for (int leg = 0; leg < 3; ++leg) {
        if (leg == base_leaf_) continue;
        out.push_back({static_cast<double>(leg), std::min(t - l, edges_[leg])});
      }
    }
    return out;
  }
  std::optional<Point> midpoint(const Point& a, const Point& b) const override {
    if (a[0] == b[0]) return Point{a[0], 0.5 * (a[1] + b[1])};
    const double half = 0.5 * (a[1] + b[1]);
    if (half <= a[1]) return Point{a[0], a[1] - half};
    return Point{b[0], half - a[1]};
  }
  // Direction (leg, speed): the point at offset r * speed on that leg.
  Point radial(std::span<const double> v, double r) const override {
    if (base_leaf_ >= 0) {
      throw InputError("tripod radial sequences need the center base point");
    }
    if (v.size() != 2) throw InputError("tripod directions are (leg, speed)");
    Point x{v[0], std::min(r * v[1], edges_.at(static_cast<int>(v[0])))};
    check_point(x);
    return x;
  }
  std::vector<Point> default_directions() const override {
    if (base_leaf_ >= 0) return {};
    return {{0, 1}, {1, 1}, {2, 1}, {0, 0.5}};
  }
  bool self_similar() const override { return base_leaf_ < 0; }

 private:
  std::array<double, 3> edges_;
  int base_leaf_;
  Point p_;
};

// The line with metric |x - y|^alpha, base point 0.
class Snowflake final : public MetricOracle {
 public:
  explicit Snowflake(double alpha) : alpha_(alpha) {}

  std::string name() const override {
    std::ostringstream os;
    os << "snowflake:" << alpha_;
    return os.str();
  }
  const Point& base_point() const override { return p_; }
  void check_point(const Point& a) const override {
    RequireSize(a, 1, name());
  }
  double distance(const Point& a, const Point& b) const override {
    return std::pow(std::abs(a[0] - b[0]), alpha_);
  }
  Point sample_at_scale(double t, Rng& rng) const override {
    if (t <= 0.0) return p_;
    const double reach = std::pow(t, 1.0 / alpha_);
    return {rng.uniform(-reach, reach)};
  }
  std::vector<Point> anchor_points(double t) const override {
    const double reach = std::pow(t, 1.0 / alpha_);
    return {p_, {reach}, {-reach}};
  }
  Point radial(std::span<const double> v, double r) const override {
    if (v.size() != 1) throw InputError("snowflake directions are 1D");
    return {v[0] * std::pow(r, 1.0 / alpha_)};
  }
  std::vector<Point> default_directions() const override {
    return {{1.0}, {-1.0}, {0.5}, {2.0}};
  }
  bool self_similar() const override { return true; }

 private:
  double alpha_;
  Point p_{0.0};
};

class CloudOracle final : public MetricOracle {
 public:
  explicit CloudOracle(std::shared_ptr<const PointCloud> cloud)
      : cloud_(std::move(cloud)),
        p_{static_cast<double>(cloud_->base_point)} {
    const auto& s = cloud_->space;
    for (std::size_t i = 0; i < s.size(); ++i) by_radius_.push_back(i);
    std::stable_sort(by_radius_.begin(), by_radius_.end(),
                     [&](std::size_t a, std::size_t b) {
                       return s(a, cloud_->base_point) <
                              s(b, cloud_->base_point);
                     });
  }

  std::string name() const override { return "cloud"; }
  const Point& base_point() const override { return p_; }
  void check_point(const Point& a) const override {
    RequireSize(a, 1, name());
    if (a[0] < 0.0 || a[0] != std::floor(a[0]) ||
        a[0] >= static_cast<double>(cloud_->space.size())) {
      throw InputError("cloud point index out of range");
    }
  }
  double distance(const Point& a, const Point& b) const override {
    return cloud_->space(static_cast<std::size_t>(a[0]),
                         static_cast<std::size_t>(b[0]));
  }
  Point sample_at_scale(double t, Rng& rng) const override {
    const auto& s = cloud_->space;
    const std::size_t base = cloud_->base_point;
    const auto end = std::upper_bound(
        by_radius_.begin(), by_radius_.end(), t,
        [&](double r, std::size_t i) { return r < s(i, base); });
    const auto count = static_cast<std::uint64_t>(end - by_radius_.begin());
    if (count == 0) return p_;
    return {static_cast<double>(by_radius_[rng.index(count)])};
  }

 private:
  std::shared_ptr<const PointCloud> cloud_;
  Point p_;
  std::vector<std::size_t> by_radius_;
};

double ParseNumber(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw InputError("cannot parse " + std::string(what) + " from '" +
                     std::string(text) + "'");
  }
  return v;
}

}  // namespace

PointCloud make_point_cloud(std::string metric, std::vector<Point> points,
                            std::size_t base_point) {
  if (points.empty()) throw InputError("point cloud is empty");
  const std::size_t dim = points.front().size();
  for (const auto& q : points) {
    if (q.size() != dim || dim == 0) {
      throw InputError("point cloud coordinates have inconsistent dimension");
    }
  }
  std::unique_ptr<MetricOracle> coord;
  if (metric == "euclidean") {
    coord = std::make_unique<EuclideanSpace>(static_cast<int>(dim));
  } else if (metric == "l1" || metric == "linf") {
    if (dim != 2) throw InputError(metric + " clouds must be planar");
    if (metric == "l1") {
      coord = std::make_unique<L1Plane>();
    } else {
      coord = std::make_unique<LinfPlane>();
    }
  } else {
    throw InputError("unknown point cloud metric '" + metric + "'");
  }
  for (const auto& q : points) coord->check_point(q);
  PointCloud cloud;
  cloud.metric = std::move(metric);
  cloud.space = sample_space(*coord, points);
  cloud.points = std::move(points);
  if (base_point >= cloud.points.size()) {
    throw InputError("base_point index out of range");
  }
  cloud.base_point = base_point;
  return cloud;
}

PointCloud make_point_cloud(FiniteMetricSpace space, std::size_t base_point) {
  if (space.size() == 0) throw InputError("point cloud is empty");
  if (base_point >= space.size()) {
    throw InputError("base_point index out of range");
  }
  const auto report = validate_metric(space);
  if (!report.pass) {
    throw InputError("custom-matrix cloud is not a metric (" +
                     std::to_string(report.violation_count) + " violations)");
  }
  PointCloud cloud;
  cloud.metric = "custom-matrix";
  cloud.space = std::move(space);
  cloud.base_point = base_point;
  return cloud;
}

BuiltinSpace BuiltinSpace::Euclidean(int dim) {
  if (dim < 1) throw InputError("euclidean dimension must be >= 1");
  BuiltinSpace s;
  s.kind = SpaceKind::kEuclidean;
  s.dim = dim;
  return s;
}

BuiltinSpace BuiltinSpace::L1Plane() {
  BuiltinSpace s;
  s.kind = SpaceKind::kL1Plane;
  return s;
}

BuiltinSpace BuiltinSpace::LinfPlane() {
  BuiltinSpace s;
  s.kind = SpaceKind::kLinfPlane;
  return s;
}

BuiltinSpace BuiltinSpace::Hyperbolic() {
  BuiltinSpace s;
  s.kind = SpaceKind::kHyperbolicPlane;
  return s;
}

BuiltinSpace BuiltinSpace::Sphere(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InputError("sphere radius must be positive");
  }
  BuiltinSpace s;
  s.kind = SpaceKind::kSphere;
  s.radius = radius;
  return s;
}

BuiltinSpace BuiltinSpace::Tripod(double a, double b, double c,
                                  int base_leaf) {
  for (double e : {a, b, c}) {
    if (!(e > 0.0) || !std::isfinite(e)) {
      throw InputError("tripod edge lengths must be positive");
    }
  }
  if (base_leaf < -1 || base_leaf > 2) {
    throw InputError("tripod base leaf must be 0, 1 or 2");
  }
  BuiltinSpace s;
  s.kind = SpaceKind::kTripod;
  s.edges = {a, b, c};
  s.tripod_base_leaf = base_leaf;
  return s;
}

BuiltinSpace BuiltinSpace::Snowflake(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InputError("snowflake exponent must lie strictly inside (0, 1)");
  }
  BuiltinSpace s;
  s.kind = SpaceKind::kSnowflake;
  s.alpha = alpha;
  return s;
}

BuiltinSpace BuiltinSpace::Cloud(PointCloud cloud) {
  BuiltinSpace s;
  s.kind = SpaceKind::kPointCloud;
  s.cloud = std::make_shared<const PointCloud>(std::move(cloud));
  return s;
}

BuiltinSpace parse_space_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string_view arg =
      colon == std::string_view::npos ? std::string_view{}
                                      : spec.substr(colon + 1);
  auto need_arg = [&] {
    if (arg.empty()) {
      throw InputError("space '" + std::string(head) + "' needs a parameter");
    }
  };
  auto no_arg = [&] {
    if (colon != std::string_view::npos) {
      throw InputError("space '" + std::string(head) + "' takes no parameter");
    }
  };
  if (head == "euclidean") {
    need_arg();
    const double dim = ParseNumber(arg, "dimension");
    if (dim != std::floor(dim)) throw InputError("dimension must be integral");
    return BuiltinSpace::Euclidean(static_cast<int>(dim));
  }
  if (head == "l1") {
    no_arg();
    return BuiltinSpace::L1Plane();
  }
  if (head == "linf") {
    no_arg();
    return BuiltinSpace::LinfPlane();
  }
  if (head == "hyperbolic") {
    no_arg();
    return BuiltinSpace::Hyperbolic();
  }
  if (head == "sphere") {
    need_arg();
    return BuiltinSpace::Sphere(ParseNumber(arg, "radius"));
  }
  if (head == "tripod") {
    need_arg();
    std::string_view edges = arg;
    int leaf = -1;
    if (const auto at = arg.find('@'); at != std::string_view::npos) {
      edges = arg.substr(0, at);
      const std::string_view base = arg.substr(at + 1);
      if (base.substr(0, 4) != "leaf") {
        throw InputError("tripod base must be written @leaf<i>");
      }
      leaf = static_cast<int>(ParseNumber(base.substr(4), "leaf index"));
    }
    std::array<double, 3> e{};
    std::size_t start = 0;
    for (int i = 0; i < 3; ++i) {
      const auto comma = edges.find(',', start);
      if ((i < 2) == (comma == std::string_view::npos)) {
        throw InputError("tripod needs exactly three edge lengths");
      }
      e[i] = ParseNumber(edges.substr(start, comma - start), "edge length");
      start = comma + 1;
    }
    return BuiltinSpace::Tripod(e[0], e[1], e[2], leaf);
  }
  if (head == "snowflake") {
    need_arg();
    return BuiltinSpace::Snowflake(ParseNumber(arg, "exponent"));
  }
  if (head == "cloud") {
    need_arg();
    return BuiltinSpace::Cloud(load_point_cloud(std::string(arg)));
  }
  throw InputError("unknown space '" + std::string(spec) + "'");
}

std::unique_ptr<MetricOracle> make_oracle(const BuiltinSpace& space) {
  switch (space.kind) {
    case SpaceKind::kEuclidean:
      if (space.dim < 1) throw InputError("euclidean dimension must be >= 1");
      return std::make_unique<EuclideanSpace>(space.dim);
    case SpaceKind::kL1Plane:
      return std::make_unique<L1Plane>();
    case SpaceKind::kLinfPlane:
      return std::make_unique<LinfPlane>();
    case SpaceKind::kHyperbolicPlane:
      return std::make_unique<HyperbolicPlane>();
    case SpaceKind::kSphere:
      if (!(space.radius > 0.0)) throw InputError("sphere radius must be > 0");
      return std::make_unique<Sphere>(space.radius);
    case SpaceKind::kTripod:
      for (double e : space.edges) {
        if (!(e > 0.0)) throw InputError("tripod edges must be > 0");
      }
      return std::make_unique<Tripod>(space.edges, space.tripod_base_leaf);
    case SpaceKind::kSnowflake:
      if (!(space.alpha > 0.0 && space.alpha < 1.0)) {
        throw InputError("snowflake exponent must lie in (0, 1)");
      }
      return std::make_unique<Snowflake>(space.alpha);
    case SpaceKind::kPointCloud:
      if (!space.cloud) throw InputError("point cloud space without data");
      return std::make_unique<CloudOracle>(space.cloud);
  }
  throw InputError("unknown space kind");
}

std::size_t estimate_doubling_constant(const MetricOracle& oracle, double t,
                                       std::size_t budget, Rng& rng) {
  if (!(t > 0.0)) throw InputError("doubling scale must be positive");
  if (budget < 1) throw InputError("doubling sample budget must be >= 1");
  std::vector<Point> net;
  for (std::size_t i = 0; i < budget; ++i) {
    Point q = oracle.sample_at_scale(t, rng);
    const bool covered = std::any_of(net.begin(), net.end(), [&](const Point& c) {
      return oracle.distance(c, q) <= 0.5 * t;
    });
    if (!covered) net.push_back(std::move(q));
  }
  return net.size();
}

}  // namespace curvlab
