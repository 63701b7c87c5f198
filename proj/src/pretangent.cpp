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

#include "curvlab/pretangent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "curvlab/parallel.hpp"

namespace curvlab {

NormalizingSequence::NormalizingSequence(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw InputError("normalizing sequence is empty");
  for (double v : values_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InputError("normalizing sequence entries must be positive");
    }
  }
  const std::size_t n = values_.size();
  if (n >= 2) {
    if (!(values_.back() < values_.front())) {
      throw InputError("normalizing sequence does not decrease (r_N >= r_1)");
    }
    for (std::size_t i = n - n / 2; i + 1 < n; ++i) {
      if (values_[i + 1] > values_[i]) {
        throw InputError("normalizing sequence tail is not monotone");
      }
    }
  }
}

NormalizingSequence NormalizingSequence::OneOverN(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 / static_cast<double>(i + 1);
  return NormalizingSequence(std::move(v));
}

NormalizingSequence NormalizingSequence::Geometric(double start, double ratio,
                                                   std::size_t n) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw InputError("geometric normalizing ratio must lie in (0, 1)");
  }
  std::vector<double> v(n);
  double r = start;
  for (auto& x : v) {
    x = r;
    r *= ratio;
  }
  return NormalizingSequence(std::move(v));
}

PointSequence constant_sequence(const Point& p, std::size_t n,
                                std::string label) {
  return {std::move(label), std::vector<Point>(n, p)};
}

PointSequence radial_sequence(const MetricOracle& oracle,
                              const Point& direction,
                              const NormalizingSequence& r, std::string label,
                              bool alternate) {
  PointSequence seq{std::move(label), {}};
  seq.points.reserve(r.size());
  Point negated = direction;
  for (double& c : negated) c = -c;
  for (std::size_t i = 0; i < r.size(); ++i) {
    // 1-based n = i + 1 is odd when i is even.
    const bool flip = alternate && i % 2 == 0;
    seq.points.push_back(oracle.radial(flip ? negated : direction, r[i]));
  }
  return seq;
}

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::kStable:
      return "stable";
    case Stability::kUnstable:
      return "unstable";
    case Stability::kUndecided:
      return "undecided";
  }
  return "unknown";
}

std::size_t tail_begin(std::size_t n, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw InputError("tail fraction must lie in (0, 1]");
  }
  const auto len = static_cast<std::size_t>(
      std::ceil(tail_fraction * static_cast<double>(n)));
  return n - std::clamp<std::size_t>(len, 1, n);
}

StabilityEstimate estimate_mutual_limit(const MetricOracle& oracle,
                                        const PointSequence& x,
                                        const PointSequence& y,
                                        const NormalizingSequence& r,
                                        const StabilityTolerances& tol) {
  if (x.size() != r.size() || y.size() != r.size()) {
    throw InputError("sequence windows differ in length ('" + x.label +
                     "' " + std::to_string(x.size()) + ", '" + y.label +
                     "' " + std::to_string(y.size()) + ", normalizing " +
                     std::to_string(r.size()) + ")");
  }
  if (tol.unstable < tol.stable) {
    throw InputError("tau_unstab must be >= tau_stab");
  }
  const std::size_t begin = tail_begin(r.size(), tol.tail_fraction);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  for (std::size_t i = begin; i < r.size(); ++i) {
    const double q = oracle.distance(x.points[i], y.points[i]) / r[i];
    lo = std::min(lo, q);
    hi = std::max(hi, q);
    sum += q;
  }
  StabilityEstimate est;
  est.limit = sum / static_cast<double>(r.size() - begin);
  est.oscillation = hi - lo;
  if (est.oscillation <= tol.stable) {
    est.status = Stability::kStable;
  } else if (est.oscillation > tol.unstable) {
    est.status = Stability::kUnstable;
  } else {
    est.status = Stability::kUndecided;
  }
  return est;
}

std::vector<std::string> SelfStableFamily::accepted_labels() const {
  std::vector<std::string> out;
  for (std::size_t i : accepted) out.push_back(pool[i].label);
  return out;
}

std::vector<std::vector<double>> SelfStableFamily::accepted_limits() const {
  const std::size_t k = accepted.size();
  std::vector<std::vector<double>> out(k, std::vector<double>(k, 0.0));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (a != b) out[a][b] = pair(accepted[a], accepted[b]).limit;
    }
  }
  return out;
}

SelfStableFamily build_self_stable_family(const MetricOracle& oracle,
                                          std::vector<PointSequence> pool,
                                          const NormalizingSequence& r,
                                          const StabilityTolerances& tol,
                                          unsigned threads) {
  SelfStableFamily family;
  family.tolerances = tol;
  family.pool.reserve(pool.size() + 1);
  family.pool.push_back(constant_sequence(oracle.base_point(), r.size()));
  for (auto& s : pool) {
    if (s.size() != r.size()) {
      throw InputError("sequence '" + s.label + "' has window " +
                       std::to_string(s.size()) + ", expected " +
                       std::to_string(r.size()));
    }
    for (const auto& q : s.points) oracle.check_point(q);
    family.pool.push_back(std::move(s));
  }
  const std::size_t n = family.pool.size();
  family.pairwise.assign(n * n, StabilityEstimate{Stability::kStable, 0, 0});
  std::vector<std::array<std::size_t, 2>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.push_back({i, j});
  }
  parallel_for(pairs.size(), threads, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    const auto est = estimate_mutual_limit(oracle, family.pool[i],
                                           family.pool[j], r, tol);
    family.pairwise[i * n + j] = est;
    family.pairwise[j * n + i] = est;
  });
  family.accepted.push_back(0);
  for (std::size_t c = 1; c < n; ++c) {
    bool ok = true;
    for (std::size_t a : family.accepted) {
      const auto& est = family.pair(c, a);
      if (est.status != Stability::kStable) {
        family.rejected.push_back({c, a, est.status});
        ok = false;
        break;
      }
    }
    if (ok) family.accepted.push_back(c);
  }
  return family;
}

PretangentApproximation metric_identify(
    std::vector<std::string> labels,
    const std::vector<std::vector<double>>& limits, double tau_zero,
    double tau_stab, std::size_t base_index) {
  const std::size_t k = labels.size();
  if (k == 0) throw InputError("no accepted sequences to identify");
  if (limits.size() != k) throw InputError("limit matrix size mismatch");
  for (const auto& row : limits) {
    if (row.size() != k) throw InputError("limit matrix is not square");
  }
  if (base_index >= k) throw InputError("base index out of range");

  // Single linkage: connected components of the graph limit <= tau_zero.
  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      if (limits[a][b] <= tau_zero && limits[b][a] <= tau_zero) {
        const std::size_t ra = find(a), rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
    }
  }
  PretangentApproximation approx;
  approx.tau_stab = tau_stab;
  approx.tau_zero = tau_zero;
  approx.projection.assign(k, 0);
  std::vector<std::size_t> class_of_root(k, k);
  std::vector<std::string> class_labels;
  for (std::size_t a = 0; a < k; ++a) {
    const std::size_t root = find(a);
    if (class_of_root[root] == k) {
      class_of_root[root] = class_labels.size();
      class_labels.push_back(labels[a]);
    }
    approx.projection[a] = class_of_root[root];
  }
  const std::size_t m = class_labels.size();
  std::vector<double> sum(m * m, 0.0);
  std::vector<std::size_t> count(m * m, 0);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      const std::size_t ca = approx.projection[a], cb = approx.projection[b];
      if (ca == cb) continue;
      sum[ca * m + cb] += limits[a][b];
      ++count[ca * m + cb];
    }
  }
  std::vector<double> flat(m * m, 0.0);
  for (std::size_t i = 0; i < m * m; ++i) {
    if (count[i] > 0) flat[i] = sum[i] / static_cast<double>(count[i]);
  }
  // Symmetrise exactly; the mean over ordered pairs may differ in rounding.
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v = 0.5 * (flat[i * m + j] + flat[j * m + i]);
      flat[i * m + j] = flat[j * m + i] = v;
    }
  }
  approx.quotient = FiniteMetricSpace(class_labels, std::move(flat));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      const std::size_t ca = approx.projection[a], cb = approx.projection[b];
      if (ca == cb) continue;
      approx.max_limit_deviation =
          std::max(approx.max_limit_deviation,
                   std::abs(approx.quotient(ca, cb) - limits[a][b]));
    }
  }
  approx.accepted_labels = std::move(labels);
  approx.base_class = approx.projection[base_index];
  approx.contains_base_class = true;

  const auto report = validate_metric(approx.quotient, 3.0 * tau_zero, 1);
  if (!report.pass) {
    const auto& v = report.violations.front();
    throw CertificateError(
        "pretangent quotient is not a metric within 3*tau_zero: " +
            std::string(to_string(v.kind)) + " violation at (" +
            class_labels[v.i] + ", " + class_labels[v.j] + ", " +
            class_labels[v.k] + ")",
        {v.i, v.j, v.k}, v.excess);
  }
  return approx;
}

PretangentApproximation metric_identify(const SelfStableFamily& family,
                                        double tau_zero) {
  return metric_identify(family.accepted_labels(), family.accepted_limits(),
                         tau_zero, family.tolerances.stable, 0);
}

std::pair<PointSequence, NormalizingSequence> restrict_to_subsequence(
    const PointSequence& x, const NormalizingSequence& r,
    std::span<const std::size_t> indices) {
  if (indices.empty()) throw InputError("empty subsequence index set");
  if (x.size() != r.size()) throw InputError("window length mismatch");
  PointSequence xs{x.label, {}};
  std::vector<double> rs;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const std::size_t i = indices[k];
    if (i >= r.size()) throw InputError("subsequence index outside window");
    if (k > 0 && i <= indices[k - 1]) {
      throw InputError("subsequence indices must be strictly increasing");
    }
    xs.points.push_back(x.points[i]);
    rs.push_back(r[i]);
  }
  return {std::move(xs), NormalizingSequence(std::move(rs))};
}

std::vector<std::size_t> parity_indices(std::size_t window, bool even) {
  std::vector<std::size_t> out;
  for (std::size_t n = even ? 2 : 1; n <= window; n += 2) out.push_back(n - 1);
  return out;
}

PretangentVerdicts analyze_pretangent(const PretangentApproximation& approx,
                                      double tau_pass, unsigned threads) {
  if (approx.quotient.size() == 0) throw InputError("empty quotient");
  ScanOptions opts;
  opts.tolerance = tau_pass;
  opts.metric_tolerance = 3.0 * approx.tau_zero;
  opts.threads = threads;
  return {scan_finite(approx.quotient, Functional::kQuadrilateral, opts),
          scan_finite(approx.quotient, Functional::kLebedevaPetrunin, opts),
          scan_finite(approx.quotient, Functional::kPtolemy, opts)};
}

}  // namespace curvlab
