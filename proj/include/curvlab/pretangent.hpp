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

// Finite-window approximations of pretangent spaces: mutual stability of
// point sequences under a normalising sequence, greedy maximal self-stable
// families, metric identification into a finite quotient, and subsequence
// restriction.
//
// Infinite sequences are replaced by windows of length N. A pair is
// certified stable when d(x_n, y_n) / r_n oscillates by at most tau_stab over
// the tail window; the limit is the tail mean.

#ifndef CURVLAB_PRETANGENT_HPP_
#define CURVLAB_PRETANGENT_HPP_

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "curvlab/four_point.hpp"
#include "curvlab/metric_core.hpp"

namespace curvlab {

inline constexpr std::size_t kDefaultWindow = 512;

// Positive reals r_1, ..., r_N. For N >= 2 the window must show r_N < r_1
// and a nonincreasing tail over its last N/2 entries.
class NormalizingSequence {
 public:
  explicit NormalizingSequence(std::vector<double> values);

  static NormalizingSequence OneOverN(std::size_t n);
  static NormalizingSequence Geometric(double start, double ratio,
                                       std::size_t n);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

struct PointSequence {
  std::string label;
  std::vector<Point> points;

  std::size_t size() const { return points.size(); }
};

PointSequence constant_sequence(const Point& p, std::size_t n,
                                std::string label = "p");

// x_n = oracle.radial(direction, r_n); with `alternate` the direction is
// negated at odd n (1-based), i.e. x_n = radial((-1)^n direction, r_n).
PointSequence radial_sequence(const MetricOracle& oracle,
                              const Point& direction,
                              const NormalizingSequence& r, std::string label,
                              bool alternate = false);

enum class Stability { kStable, kUnstable, kUndecided };
std::string_view to_string(Stability s);

struct StabilityTolerances {
  double stable = 1e-6;
  double unstable = 1e-3;
  double tail_fraction = 0.5;
};

struct StabilityEstimate {
  Stability status = Stability::kUndecided;
  double limit = 0.0;        // tail mean of d(x_n, y_n) / r_n
  double oscillation = 0.0;  // tail max - tail min
};

std::size_t tail_begin(std::size_t n, double tail_fraction);

StabilityEstimate estimate_mutual_limit(const MetricOracle& oracle,
                                        const PointSequence& x,
                                        const PointSequence& y,
                                        const NormalizingSequence& r,
                                        const StabilityTolerances& tol = {});

struct SelfStableFamily {
  struct Rejection {
    std::size_t candidate = 0;
    std::size_t blocker = 0;  // first accepted sequence it is not stable with
    Stability status = Stability::kUndecided;
  };

  // Pool with the constant base sequence prepended at index 0.
  std::vector<PointSequence> pool;
  // Accepted pool indices, in pool order; always starts with 0.
  std::vector<std::size_t> accepted;
  std::vector<Rejection> rejected;
  // pool.size() x pool.size(), symmetric.
  std::vector<StabilityEstimate> pairwise;
  StabilityTolerances tolerances;

  const StabilityEstimate& pair(std::size_t i, std::size_t j) const {
    return pairwise[i * pool.size() + j];
  }
  std::vector<std::string> accepted_labels() const;
  // Limits among accepted sequences, accepted.size() squared.
  std::vector<std::vector<double>> accepted_limits() const;
};

// Greedy pass in pool order: a sequence joins iff it is stable with every
// sequence accepted before it. The base sequence is always accepted first.
SelfStableFamily build_self_stable_family(const MetricOracle& oracle,
                                          std::vector<PointSequence> pool,
                                          const NormalizingSequence& r,
                                          const StabilityTolerances& tol = {},
                                          unsigned threads = 1);

// Quotient that fails validate_metric at 3 * tau_zero.
class CertificateError : public std::runtime_error {
 public:
  CertificateError(const std::string& what, std::array<std::size_t, 3> triple,
                   double excess)
      : std::runtime_error(what), triple_(triple), excess_(excess) {}
  const std::array<std::size_t, 3>& triple() const { return triple_; }
  double excess() const { return excess_; }

 private:
  std::array<std::size_t, 3> triple_;
  double excess_;
};

struct PretangentApproximation {
  FiniteMetricSpace quotient;
  // Accepted position -> quotient point.
  std::vector<std::size_t> projection;
  std::vector<std::string> accepted_labels;
  double tau_stab = 1e-6;
  double tau_zero = 1e-6;
  bool contains_base_class = false;
  std::size_t base_class = 0;
  // max |quotient distance - pairwise limit| over accepted pairs in
  // different classes.
  double max_limit_deviation = 0.0;
};

inline constexpr double kDefaultZeroTolerance = 1e-6;

// Single-linkage classes of `limit <= tau_zero`; the quotient distance of two
// classes is the mean of their cross-class limits. Classes are numbered by
// first member, so the class of accepted sequence `base_index` comes first
// when base_index is 0. Throws CertificateError.
PretangentApproximation metric_identify(
    std::vector<std::string> labels,
    const std::vector<std::vector<double>>& limits, double tau_zero,
    double tau_stab = 1e-6, std::size_t base_index = 0);

PretangentApproximation metric_identify(const SelfStableFamily& family,
                                        double tau_zero);

// Windows restricted to the given zero-based indices (strictly increasing).
std::pair<PointSequence, NormalizingSequence> restrict_to_subsequence(
    const PointSequence& x, const NormalizingSequence& r,
    std::span<const std::size_t> indices);

// Zero-based positions of the even (or odd) 1-based terms n = 1..window.
std::vector<std::size_t> parity_indices(std::size_t window, bool even);

struct PretangentVerdicts {
  QuadrupleDefectReport quadrilateral;
  QuadrupleDefectReport lebedeva_petrunin;
  QuadrupleDefectReport ptolemy;

  bool all_pass() const {
    return quadrilateral.pass() && lebedeva_petrunin.pass() && ptolemy.pass();
  }
};

// Runs the three finite scans on the quotient.
PretangentVerdicts analyze_pretangent(const PretangentApproximation& approx,
                                      double tau_pass = 1e-9,
                                      unsigned threads = 1);

}  // namespace curvlab

#endif  // CURVLAB_PRETANGENT_HPP_
