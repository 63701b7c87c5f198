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

// Finite metric spaces, pointed metric oracles and metric-axiom validation.
// Every other module reads distances through the types declared here.

#ifndef CURVLAB_METRIC_CORE_HPP_
#define CURVLAB_METRIC_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace curvlab {

class Rng;

// Malformed user input: bad dimensions, NaN entries, unknown labels.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An operation was called outside its documented domain.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline constexpr double kDefaultMetricTolerance = 1e-9;

// Coordinates of a point in an oracle's carrier. The meaning of the
// coordinates is owned by the oracle (Cartesian, leg/offset, cloud index...).
using Point = std::vector<double>;

// Symmetric distance matrix over n labeled points. Immutable once built.
// Construction rejects non-square input, NaN, negative and infinite entries;
// symmetry and the triangle inequality are checked by validate_metric().
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;
  FiniteMetricSpace(std::vector<std::string> labels,
                    const std::vector<std::vector<double>>& dist);
  FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> flat);

  // Labels default to "0", "1", ...
  static FiniteMetricSpace FromMatrix(
      const std::vector<std::vector<double>>& dist);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  // Unchecked access; the hot path of every scan.
  double operator()(std::size_t i, std::size_t j) const {
    return dist_[i * labels_.size() + j];
  }
  double distance(std::size_t i, std::size_t j) const;
  double distance(std::string_view a, std::string_view b) const;
  std::size_t index_of(std::string_view label) const;

  std::span<const double> data() const { return dist_; }

  // Same space with point i of the result equal to point perm[i] of this.
  FiniteMetricSpace Permuted(std::span<const std::size_t> perm) const;

 private:
  void Check();

  std::vector<std::string> labels_;
  std::vector<double> dist_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct AxiomViolation {
  enum class Kind { kDiagonal, kSymmetry, kTriangle };
  Kind kind;
  // Diagonal: (i, i, i). Symmetry: (i, j, j). Triangle: d(i,j) > d(i,k)+d(k,j).
  std::size_t i = 0, j = 0, k = 0;
  double excess = 0.0;
};

struct ValidationReport {
  bool pass = true;
  std::size_t violation_count = 0;
  // At most the first `max_listed` violations, in (i, j, k) scan order.
  std::vector<AxiomViolation> violations;
};

ValidationReport validate_metric(const FiniteMetricSpace& space,
                                 double tolerance = kDefaultMetricTolerance,
                                 std::size_t max_listed = 64);

std::string_view to_string(AxiomViolation::Kind kind);

// A pointed metric space (X, d, p) given by a pure distance function and a
// scale-conditioned sampler. Implementations are immutable and must be safe
// to call concurrently; all randomness comes from the caller's stream.
class MetricOracle {
 public:
  virtual ~MetricOracle() = default;

  virtual std::string name() const = 0;
  virtual double distance(const Point& a, const Point& b) const = 0;
  virtual const Point& base_point() const = 0;

  // A point q with d(q, p) <= t. t == 0 returns p.
  virtual Point sample_at_scale(double t, Rng& rng) const = 0;

  // Deterministic points of B(p, t): p plus points at distance t along the
  // oracle's canonical directions. Used to seed infimum searches with the
  // self-similar extremal configurations.
  virtual std::vector<Point> anchor_points(double t) const;

  // Exact metric midpoint when the oracle has a closed form.
  virtual std::optional<Point> midpoint(const Point& a, const Point& b) const;

  // Point reached from p along `direction` at parameter r; on self-similar
  // spaces d(radial(v, r), radial(w, r)) / r does not depend on r.
  virtual Point radial(std::span<const double> direction, double r) const;

  // Directions used to build the shipped sequence pools.
  virtual std::vector<Point> default_directions() const;

  // Curved models get looser liminf tolerances.
  virtual bool curved() const { return false; }
  virtual bool self_similar() const { return false; }

  // Throws InputError when `a` is not a member of the carrier.
  virtual void check_point(const Point& a) const = 0;

  double checked_distance(const Point& a, const Point& b) const;
};

// Distance matrix of `points` under `oracle`. Labels default to indices.
FiniteMetricSpace sample_space(const MetricOracle& oracle,
                               std::span<const Point> points,
                               std::vector<std::string> labels = {});

struct SpotCheckReport {
  bool pass = true;
  std::size_t triples = 0;
  // max over triples of (d(a,c) - d(a,b) - d(b,c)) / max(d(a,b)+d(b,c), tiny)
  double worst_triangle_excess = 0.0;
  double worst_asymmetry = 0.0;
  double worst_diagonal = 0.0;
  double worst_ball_excess = 0.0;  // max d(q,p)/t - 1 over sampled q
};

// Spot validation of the metric axioms and of the sampler ball constraint on
// random triples drawn at scale t.
SpotCheckReport spot_validate(const MetricOracle& oracle, double t,
                              std::size_t triples, Rng& rng,
                              double relative_tolerance = 1e-12);

}  // namespace curvlab

#endif  // CURVLAB_METRIC_CORE_HPP_
