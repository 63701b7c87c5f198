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

#include "curvlab/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvlab/parallel.hpp"
#include "curvlab/random.hpp"

namespace curvlab {
namespace {

ExtendedDefect TailMax(const std::vector<ExtendedDefect>& profile,
                       double tail_fraction) {
  ExtendedDefect worst(0.0);
  for (std::size_t i = tail_begin(profile.size(), tail_fraction);
       i < profile.size(); ++i) {
    if (worst < profile[i]) worst = profile[i];
  }
  return worst;
}

void RequireSameWindow(std::initializer_list<const PointSequence*> seqs) {
  const std::size_t n = (*seqs.begin())->size();
  if (n == 0) throw InputError("empty sequence window");
  for (const auto* s : seqs) {
    if (s->size() != n) {
      throw InputError("sequence '" + s->label + "' has window " +
                       std::to_string(s->size()) + ", expected " +
                       std::to_string(n));
    }
  }
}

}  // namespace

ExtendedDefect midpoint_defect(const MetricOracle& oracle, const Point& x,
                               const Point& y, const Point& z) {
  return midpoint_defect(x, y, z, oracle.base_point(),
                         [&](const Point& a, const Point& b) {
                           return oracle.distance(a, b);
                         });
}

bool approaches_base(const MetricOracle& oracle, const PointSequence& x,
                     double tail_fraction) {
  const Point& p = oracle.base_point();
  const std::size_t n = x.size();
  if (n == 0) return false;
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = oracle.distance(x.points[i], p);
  if (r.back() > r.front()) return false;
  for (std::size_t i = tail_begin(n, tail_fraction); i + 1 < n; ++i) {
    if (r[i + 1] > r[i] * (1.0 + 1e-12)) return false;
  }
  return true;
}

MidpointSearchResult search_infinitesimal_midpoint(
    const MetricOracle& oracle, const PointSequence& x, const PointSequence& y,
    std::uint64_t seed, const MidpointSearchOptions& opts) {
  if (opts.budget == 0) throw InputError("midpoint search budget must be >= 1");
  RequireSameWindow({&x, &y});
  for (const auto* s : {&x, &y}) {
    if (!approaches_base(oracle, *s, opts.tail_fraction)) {
      throw PreconditionError("sequence '" + s->label +
                              "' does not approach the base point");
    }
  }
  const std::size_t n = x.size();
  const Point& p = oracle.base_point();

  bool analytic = false;
  if (opts.mode != MidpointMode::kRandomSearch) {
    analytic = oracle.midpoint(x.points[0], y.points[0]).has_value();
    if (opts.mode == MidpointMode::kAnalytic && !analytic) {
      throw InputError("space '" + oracle.name() +
                       "' has no analytic midpoint");
    }
  }

  MidpointSearchResult result;
  result.analytic = analytic;
  result.epsilon = opts.epsilon.value_or(analytic ? kAnalyticEpsilon
                                                  : kRandomSearchEpsilon);
  result.midpoints.label = "mid(" + x.label + "," + y.label + ")";
  result.midpoints.points.assign(n, p);
  result.profile.assign(n, ExtendedDefect(0.0));

  parallel_for(n, opts.threads, [&](std::size_t i) {
    const Point& xi = x.points[i];
    const Point& yi = y.points[i];
    const double delta =
        std::max(oracle.distance(xi, p), oracle.distance(yi, p));
    if (delta == 0.0) {
      result.midpoints.points[i] = p;
      result.profile[i] = midpoint_defect(oracle, xi, yi, p);
      return;
    }
    if (analytic) {
      if (auto m = oracle.midpoint(xi, yi)) {
        result.profile[i] = midpoint_defect(oracle, xi, yi, *m);
        result.midpoints.points[i] = std::move(*m);
        return;
      }
    }
    Rng rng(seed, "midpoint-search", i);
    Point best = p;
    ExtendedDefect best_defect = midpoint_defect(oracle, xi, yi, p);
    for (std::size_t c = 0; c < opts.budget; ++c) {
      Point z = oracle.sample_at_scale(2.0 * delta, rng);
      const ExtendedDefect dz = midpoint_defect(oracle, xi, yi, z);
      if (dz < best_defect) {
        best_defect = dz;
        best = std::move(z);
      }
    }
    result.profile[i] = best_defect;
    result.midpoints.points[i] = std::move(best);
  });

  result.tail_max = TailMax(result.profile, opts.tail_fraction);
  result.evidence = result.tail_max.at_most(result.epsilon);
  return result;
}

BusemannProfile busemann_defect_profile(const MetricOracle& oracle,
                                        const PointSequence& x0,
                                        const PointSequence& x1,
                                        const PointSequence& y,
                                        const PointSequence& m,
                                        const BusemannOptions& opts) {
  RequireSameWindow({&x0, &x1, &y, &m});
  const std::size_t n = x0.size();
  const Point& p = oracle.base_point();
  auto d = [&](const Point& a, const Point& b) {
    return oracle.distance(a, b);
  };

  std::vector<ExtendedDefect> mid(n);
  for (std::size_t i = 0; i < n; ++i) {
    mid[i] = midpoint_defect(x0.points[i], x1.points[i], m.points[i], p, d);
  }
  BusemannProfile out;
  out.midpoint_tail_max = TailMax(mid, opts.tail_fraction);
  if (!out.midpoint_tail_max.at_most(opts.epsilon_mid)) {
    throw PreconditionError("'" + m.label +
                            "' is not a certified infinitesimal midpoint of '" +
                            x0.label + "' and '" + x1.label + "'");
  }
  out.epsilon = opts.epsilon_bus;
  out.profile.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = x0.points[i];
    const Point& b = x1.points[i];
    const Point& yi = y.points[i];
    const double excess = positive_part(
        d(m.points[i], yi) - 0.5 * (d(a, yi) + d(b, yi)));
    const double delta = std::max({d(a, p), d(yi, p), d(b, p)});
    if (delta == 0.0) {
      out.profile[i] =
          excess == 0.0 ? ExtendedDefect(0.0) : ExtendedDefect::Infinite();
    } else {
      out.profile[i] = ExtendedDefect(excess / delta);
    }
  }
  out.tail_max = TailMax(out.profile, opts.tail_fraction);
  out.evidence = out.tail_max.at_most(opts.epsilon_bus);
  return out;
}

FiniteBusemannReport check_finite_busemann(const FiniteMetricSpace& space,
                                           double tau) {
  FiniteBusemannReport report;
  report.tolerance = tau;
  const std::size_t n = space.size();
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double half = 0.5 * space(a, b);
      for (std::size_t m = 0; m < n; ++m) {
        if (std::abs(space(a, m) - half) > tau ||
            std::abs(space(b, m) - half) > tau) {
          continue;
        }
        ++report.midpoint_triples;
        for (std::size_t y = 0; y < n; ++y) {
          const double v = space(m, y) - 0.5 * (space(a, y) + space(b, y));
          if (v > worst) {
            worst = v;
            report.witness = {a, b, m, y};
          }
        }
      }
    }
  }
  if (report.midpoint_triples > 0) {
    report.max_violation = worst;
    for (int i = 0; i < 4; ++i) {
      report.witness_labels[i] = space.label(report.witness[i]);
    }
  }
  return report;
}

}  // namespace curvlab
