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

#include "curvlab/infinitesimal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "curvlab/random.hpp"
#include "quadruple_kernel.hpp"

namespace curvlab {

std::string_view to_string(NormalizedFunctional f) {
  switch (f) {
    case NormalizedFunctional::kA1:
      return "A1";
    case NormalizedFunctional::kA2:
      return "A2";
    case NormalizedFunctional::kA3:
      return "A3";
  }
  return "unknown";
}

NormalizedFunctional parse_normalized_functional(std::string_view name) {
  if (name == "a1" || name == "A1") return NormalizedFunctional::kA1;
  if (name == "a2" || name == "A2") return NormalizedFunctional::kA2;
  if (name == "a3" || name == "A3") return NormalizedFunctional::kA3;
  throw InputError("unknown normalized functional '" + std::string(name) +
                   "'");
}

Functional underlying_defect(NormalizedFunctional f) {
  switch (f) {
    case NormalizedFunctional::kA1:
      return Functional::kQuadrilateral;
    case NormalizedFunctional::kA2:
      return Functional::kLebedevaPetrunin;
    case NormalizedFunctional::kA3:
      return Functional::kPtolemy;
  }
  return Functional::kQuadrilateral;
}

double delta_p(const MetricOracle& oracle, std::span<const Point> points) {
  const Point& p = oracle.base_point();
  return delta_p(points, p, [&](const Point& a, const Point& b) {
    return oracle.distance(a, b);
  });
}

double evaluate(NormalizedFunctional f, const MetricOracle& oracle,
                const Point& w, const Point& x, const Point& y,
                const Point& z) {
  return evaluate(f, w, x, y, z, oracle.base_point(),
                  [&](const Point& a, const Point& b) {
                    return oracle.distance(a, b);
                  });
}

namespace {

double ParseDouble(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw InputError("cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

std::vector<double> SplitNumbers(std::string_view s) {
  std::vector<double> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    out.push_back(ParseDouble(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// All 24 orderings of each subset.
class CustomEvaluator {
 public:
  CustomEvaluator(const CustomFunctional& f, std::span<const double> dist,
                  std::size_t n, std::span<const double> base)
      : f_(f), d_(dist.data()), n_(n), base_(base) {}

  int orderings() const { return 24; }

  internal::Candidate operator()(std::uint32_t a, std::uint32_t b,
                                 std::uint32_t c, std::uint32_t d) const {
    internal::Tuple t{a, b, c, d};
    const double delta =
        std::max(std::max(base_[a], base_[b]), std::max(base_[c], base_[d]));
    if (delta == 0.0) return {0.0, t, true};
    const double scale = std::pow(delta, -f_.degree);
    internal::Candidate best;
    do {
      const QuadrupleDistances q{D(t[0], t[1]), D(t[0], t[2]), D(t[0], t[3]),
                                 D(t[1], t[2]), D(t[1], t[3]), D(t[2], t[3])};
      const internal::Candidate cand{f_.defect(q) * scale, t, true};
      if (internal::Better(cand, best)) best = cand;
    } while (std::next_permutation(t.begin(), t.end()));
    return best;
  }

 private:
  double D(std::uint32_t i, std::uint32_t j) const { return d_[i * n_ + j]; }

  const CustomFunctional& f_;
  const double* d_;
  std::size_t n_;
  std::span<const double> base_;
};

struct ScalePoints {
  std::vector<Point> points;
  FiniteMetricSpace space;
  std::vector<double> base;
};

ScalePoints DrawScale(const MetricOracle& oracle, double t, std::size_t m,
                      bool anchors, std::uint64_t seed, std::size_t k) {
  ScalePoints sp;
  if (anchors) sp.points = oracle.anchor_points(t);
  Rng rng(seed, "liminf-scale", k);
  for (std::size_t i = 0; i < m; ++i) {
    sp.points.push_back(oracle.sample_at_scale(t, rng));
  }
  sp.space = sample_space(oracle, sp.points);
  sp.base.reserve(sp.points.size());
  for (const auto& q : sp.points) {
    sp.base.push_back(oracle.distance(q, oracle.base_point()));
  }
  return sp;
}

template <class MakeEval, class MapTuple>
LiminfEstimate Estimate(std::string name, const MetricOracle& oracle,
                        const ScaleSchedule& schedule, std::uint64_t seed,
                        const LiminfOptions& opts, MakeEval make_eval,
                        MapTuple map_tuple) {
  schedule.Validate();
  LiminfEstimate est;
  est.functional = std::move(name);
  est.epsilon = opts.epsilon.value_or(default_liminf_epsilon(oracle));
  est.anchors = opts.anchors;
  est.samples_per_scale = schedule.samples_per_scale;
  const std::size_t count = schedule.radii.size();
  for (std::size_t k = 0; k < count; ++k) {
    const double t = schedule.radii[k];
    const ScalePoints sp = DrawScale(oracle, t, schedule.samples_per_scale,
                                     opts.anchors, seed, k);
    const auto eval = make_eval(sp);
    const auto kr = internal::ScanQuadruples(
        sp.points.size(), eval, opts.quadruple_budget,
        derive_seed(seed, "liminf-subsets", k), opts.threads);
    ScaleMinimum sm;
    sm.scale = t;
    sm.points = sp.points.size();
    sm.examined = kr.examined;
    sm.truncated = kr.truncated;
    sm.min_value = kr.best.value;
    const internal::Tuple roles = map_tuple(kr.best.tuple);
    for (int i = 0; i < 4; ++i) sm.witness[i] = sp.points[roles[i]];
    est.per_scale.push_back(std::move(sm));
  }
  est.tail_count = tail_window(count);
  est.tail_inf = std::numeric_limits<double>::infinity();
  for (std::size_t k = count - est.tail_count; k < count; ++k) {
    est.tail_inf = std::min(est.tail_inf, est.per_scale[k].min_value);
  }
  est.pass = est.tail_inf >= -est.epsilon;
  return est;
}

}  // namespace

ScaleSchedule ScaleSchedule::Geometric(double start, double ratio,
                                       std::size_t count,
                                       std::size_t samples) {
  if (!(start > 0.0) || !(ratio > 0.0 && ratio < 1.0) || count == 0) {
    throw InputError("geometric schedule needs start > 0, 0 < ratio < 1, K >= 1");
  }
  ScaleSchedule s;
  s.samples_per_scale = samples;
  double t = start;
  for (std::size_t k = 0; k < count; ++k) {
    s.radii.push_back(t);
    t *= ratio;
  }
  return s;
}

ScaleSchedule ScaleSchedule::Parse(std::string_view text,
                                   std::size_t samples) {
  constexpr std::string_view kGeometric = "geometric:";
  if (text.substr(0, kGeometric.size()) == kGeometric) {
    const auto v = SplitNumbers(text.substr(kGeometric.size()));
    if (v.size() != 3 || v[2] != std::floor(v[2]) || v[2] < 1) {
      throw InputError("geometric schedule is geometric:<start>,<ratio>,<K>");
    }
    return Geometric(v[0], v[1], static_cast<std::size_t>(v[2]), samples);
  }
  ScaleSchedule s;
  s.radii = SplitNumbers(text);
  s.samples_per_scale = samples;
  s.Validate();
  return s;
}

void ScaleSchedule::Validate() const {
  if (radii.empty()) throw InputError("schedule has no scales");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0) || !std::isfinite(radii[k])) {
      throw InputError("schedule radii must be positive and finite");
    }
    if (k > 0 && !(radii[k] < radii[k - 1])) {
      throw InputError("schedule radii must be strictly decreasing");
    }
  }
  if (samples_per_scale < 4) {
    throw InputError("need at least 4 samples per scale");
  }
}

double default_liminf_epsilon(const MetricOracle& oracle) {
  return oracle.curved() ? 1e-3 : 1e-6;
}

std::size_t tail_window(std::size_t scales) { return (scales + 2) / 3; }

LiminfEstimate estimate_liminf(NormalizedFunctional f,
                               const MetricOracle& oracle,
                               const ScaleSchedule& schedule,
                               std::uint64_t seed, const LiminfOptions& opts) {
  const Functional defect = underlying_defect(f);
  return Estimate(
      std::string(to_string(f)), oracle, schedule, seed, opts,
      [&](const ScalePoints& sp) {
        return internal::DefectEvaluator(defect, sp.space.data(),
                                         sp.points.size(), sp.base);
      },
      [&](internal::Tuple t) -> internal::Tuple {
        // Ptolemy order (x, y, u, v) is A3 order (u, x, y, v).
        if (f == NormalizedFunctional::kA3) return {t[2], t[0], t[1], t[3]};
        return t;
      });
}

LiminfEstimate estimate_liminf(const CustomFunctional& f,
                               const MetricOracle& oracle,
                               const ScaleSchedule& schedule,
                               std::uint64_t seed, const LiminfOptions& opts) {
  if (!f.defect) throw InputError("custom functional has no defect function");
  if (!(f.degree > 0.0)) throw InputError("homogeneity degree must be > 0");
  return Estimate(
      f.name, oracle, schedule, seed, opts,
      [&](const ScalePoints& sp) {
        return CustomEvaluator(f, sp.space.data(), sp.points.size(), sp.base);
      },
      [](internal::Tuple t) { return t; });
}

}  // namespace curvlab
