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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "curvlab/spaces.hpp"
#include "oracles.hpp"

namespace curvlab {
namespace {

std::unique_ptr<MetricOracle> Space(const char* spec) {
  return make_oracle(parse_space_spec(spec));
}

std::vector<PointSequence> RadialPool(const MetricOracle& o,
                                      const std::vector<Point>& dirs,
                                      const NormalizingSequence& r) {
  std::vector<PointSequence> pool;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    pool.push_back(radial_sequence(o, dirs[i], r, "v" + std::to_string(i)));
  }
  return pool;
}

TEST(Normalizing, Validation) {
  EXPECT_THROW(NormalizingSequence({}), InputError);
  EXPECT_THROW(NormalizingSequence({1.0, 0.0}), InputError);
  EXPECT_THROW(NormalizingSequence({1.0, 2.0}), InputError);
  EXPECT_THROW(NormalizingSequence({1.0, 0.5, 0.25, 0.3}), InputError);
  EXPECT_THROW(NormalizingSequence::Geometric(1.0, 1.0, 8), InputError);
  EXPECT_NO_THROW(NormalizingSequence({1.0}));
  const auto r = NormalizingSequence::OneOverN(4);
  EXPECT_EQ(r.values(), (std::vector<double>{1.0, 0.5, 1.0 / 3.0, 0.25}));
}

TEST(Normalizing, TailBegin) {
  EXPECT_EQ(tail_begin(512, 0.5), 256u);
  EXPECT_EQ(tail_begin(5, 0.5), 2u);  // last ceil(2.5) = 3 entries
  EXPECT_EQ(tail_begin(7, 1.0), 0u);
}

TEST(MutualLimit, IdenticalSequences) {
  auto o = Space("euclidean:2");
  const auto r = NormalizingSequence::OneOverN(64);
  const auto x = radial_sequence(*o, {0.3, 0.4}, r, "x");
  const auto e = estimate_mutual_limit(*o, x, x, r);
  EXPECT_EQ(e.status, Stability::kStable);
  EXPECT_EQ(e.limit, 0.0);
  EXPECT_EQ(e.oscillation, 0.0);
}

TEST(MutualLimit, EuclideanRadialPairs) {
  auto o = Space("euclidean:2");
  const auto r = NormalizingSequence::OneOverN(kDefaultWindow);
  const Point v{1.0, 2.0}, w{-0.5, 0.25};
  const auto e = estimate_mutual_limit(*o, radial_sequence(*o, v, r, "v"),
                                       radial_sequence(*o, w, r, "w"), r);
  EXPECT_EQ(e.status, Stability::kStable);
  EXPECT_NEAR(e.limit, curvlab_oracle::EuclideanDistance(v, w), 1e-12);
  EXPECT_LE(e.oscillation, 1e-12);
}

TEST(MutualLimit, AlternatingSequenceIsUnstable) {
  auto o = Space("euclidean:1");
  const auto r = NormalizingSequence::OneOverN(kDefaultWindow);
  const auto alt = radial_sequence(*o, {1.0}, r, "alt", true);
  const auto z = radial_sequence(*o, {1.0}, r, "z");
  EXPECT_DOUBLE_EQ(alt.points[0][0], -1.0);
  EXPECT_DOUBLE_EQ(alt.points[1][0], 0.5);
  const auto base = constant_sequence(o->base_point(), kDefaultWindow);
  const auto vs_base = estimate_mutual_limit(*o, alt, base, r);
  EXPECT_EQ(vs_base.status, Stability::kStable);
  EXPECT_NEAR(vs_base.limit, 1.0, 1e-12);
  const auto vs_z = estimate_mutual_limit(*o, alt, z, r);
  EXPECT_EQ(vs_z.status, Stability::kUnstable);
  EXPECT_NEAR(vs_z.oscillation, 2.0, 1e-12);
}

TEST(MutualLimit, UndecidedBand) {
  auto o = Space("euclidean:1");
  const auto r = NormalizingSequence::OneOverN(100);
  // q_n = 1 + 1e-4 * (-1)^n: oscillation 2e-4 sits between the thresholds.
  PointSequence x{"x", {}}, y{"y", {}};
  for (std::size_t n = 1; n <= 100; ++n) {
    const double q = 1.0 + 1e-4 * (n % 2 == 0 ? 1.0 : -1.0);
    x.points.push_back({0.0});
    y.points.push_back({q / static_cast<double>(n)});
  }
  const auto e = estimate_mutual_limit(*o, x, y, r);
  EXPECT_EQ(e.status, Stability::kUndecided);
  EXPECT_NEAR(e.oscillation, 2e-4, 1e-12);
}

TEST(MutualLimit, Errors) {
  auto o = Space("euclidean:1");
  const auto r = NormalizingSequence::OneOverN(10);
  const auto x = radial_sequence(*o, {1.0}, r, "x");
  const auto y = constant_sequence(o->base_point(), 9);
  EXPECT_THROW(estimate_mutual_limit(*o, x, y, r), InputError);
  StabilityTolerances bad;
  bad.tail_fraction = 0.0;
  EXPECT_THROW(estimate_mutual_limit(*o, x, x, r, bad), InputError);
  bad = {};
  bad.unstable = 1e-9;
  EXPECT_THROW(estimate_mutual_limit(*o, x, x, r, bad), InputError);
}

TEST(Family, BaseOnly) {
  auto o = Space("euclidean:2");
  const auto r = NormalizingSequence::OneOverN(32);
  const auto fam = build_self_stable_family(*o, {}, r);
  EXPECT_EQ(fam.accepted, (std::vector<std::size_t>{0}));
  const auto q = metric_identify(fam, kDefaultZeroTolerance);
  EXPECT_EQ(q.quotient.size(), 1u);
  EXPECT_TRUE(q.contains_base_class);
  const auto v = analyze_pretangent(q);
  EXPECT_TRUE(v.quadrilateral.vacuous);
  EXPECT_TRUE(v.lebedeva_petrunin.vacuous);
  EXPECT_TRUE(v.ptolemy.vacuous);
  EXPECT_TRUE(v.all_pass());
}

TEST(Family, EuclideanVectorsAllAccepted) {
  auto o = Space("euclidean:2");
  const auto r = NormalizingSequence::OneOverN(kDefaultWindow);
  const std::vector<Point> dirs = {{1, 0}, {0, 1}, {1, 1}, {-2, 0.5}, {3, -1}};
  const auto fam = build_self_stable_family(*o, RadialPool(*o, dirs, r), r);
  EXPECT_EQ(fam.accepted.size(), dirs.size() + 1);
  EXPECT_TRUE(fam.rejected.empty());
  EXPECT_EQ(fam.accepted_labels().front(), "p");
}

TEST(Family, GreedyKeepsOneOfTwo) {
  auto o = Space("euclidean:1");
  const auto r = NormalizingSequence::OneOverN(kDefaultWindow);
  const auto alt = radial_sequence(*o, {1.0}, r, "alt", true);
  const auto z = radial_sequence(*o, {1.0}, r, "z");
  const auto f1 = build_self_stable_family(*o, {alt, z}, r);
  EXPECT_EQ(f1.accepted_labels(), (std::vector<std::string>{"p", "alt"}));
  ASSERT_EQ(f1.rejected.size(), 1u);
  EXPECT_EQ(f1.rejected[0].candidate, 2u);
  EXPECT_EQ(f1.rejected[0].blocker, 1u);
  EXPECT_EQ(f1.rejected[0].status, Stability::kUnstable);
  const auto f2 = build_self_stable_family(*o, {z, alt}, r);
  EXPECT_EQ(f2.accepted_labels(), (std::vector<std::string>{"p", "z"}));
}

TEST(Family, RejectsWindowMismatch) {
  auto o = Space("euclidean:1");
  const auto r = NormalizingSequence::OneOverN(16);
  const auto x =
      radial_sequence(*o, {1.0}, NormalizingSequence::OneOverN(8), "x");
  EXPECT_THROW(build_self_stable_family(*o, {x}, r), InputError);
}

TEST(Family, LimitTriangleInequality) {
  for (const char* spec : {"euclidean:3", "l1", "hyperbolic", "sphere:1",
                           "tripod:1,1,1", "snowflake:0.5"}) {
    auto o = Space(spec);
    const auto r = NormalizingSequence::Geometric(1.0, 0.95, kDefaultWindow);
    const auto fam =
        build_self_stable_family(*o, RadialPool(*o, o->default_directions(), r),
                                 r);
    const auto lim = fam.accepted_limits();
    const std::size_t k = lim.size();
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        for (std::size_t c = 0; c < k; ++c)
          EXPECT_LE(lim[a][b], lim[a][c] + lim[c][b] + 3 * 1e-6) << spec;
  }
}

TEST(Family, DeterministicAcrossThreads) {
  auto o = Space("hyperbolic");
  const auto r = NormalizingSequence::Geometric(1.0, 0.95, 256);
  auto pool = RadialPool(*o, o->default_directions(), r);
  const auto a = build_self_stable_family(*o, pool, r, {}, 1);
  const auto b = build_self_stable_family(*o, pool, r, {}, 4);
  const auto c = build_self_stable_family(*o, pool, r, {}, 1);
  EXPECT_EQ(a.accepted, b.accepted);
  EXPECT_EQ(a.accepted_limits(), b.accepted_limits());
  EXPECT_EQ(a.accepted_limits(), c.accepted_limits());
}

TEST(Identify, UnitSquare) {
  auto o = Space("euclidean:2");
  const auto r = NormalizingSequence::OneOverN(kDefaultWindow);
  const std::vector<Point> dirs = {{1, 0}, {0, 1}, {1, 1}};
  const auto fam = build_self_stable_family(*o, RadialPool(*o, dirs, r), r);
  const auto q = metric_identify(fam, kDefaultZeroTolerance);
  ASSERT_EQ(q.quotient.size(), 4u);
  const std::vector<Point> square = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      EXPECT_NEAR(q.quotient(q.projection[i], q.projection[j]),
                  curvlab_oracle::EuclideanDistance(square[i], square[j]),
                  1e-9);
  EXPECT_TRUE(validate_metric(q.quotient, 3e-6).pass);
  EXPECT_LE(q.max_limit_deviation, kDefaultZeroTolerance);
  EXPECT_TRUE(analyze_pretangent(q).all_pass());
}

TEST(Identify, ZeroVectorJoinsBaseClass) {
  auto o = Space("euclidean:2");
  const auto r = NormalizingSequence::OneOverN(64);
  const auto fam = build_self_stable_family(
      *o, RadialPool(*o, {{0, 0}, {1, 0}}, r), r);
  const auto q = metric_identify(fam, kDefaultZeroTolerance);
  EXPECT_EQ(q.quotient.size(), 2u);
  EXPECT_EQ(q.projection[0], q.projection[1]);
  EXPECT_EQ(q.base_class, 0u);
}

TEST(Identify, QuadraticPerturbationIsGlued) {
  auto o = Space("euclidean:1");
  // Tail oscillation of 1/n over [N/2, N] must drop below 1e-6.
  const std::size_t window = std::size_t{1} << 21;
  const auto r = NormalizingSequence::OneOverN(window);
  const auto x = radial_sequence(*o, {1.0}, r, "x");
  PointSequence y{"y", x.points};
  for (std::size_t i = 0; i < window; ++i) {
    const double n = static_cast<double>(i + 1);
    y.points[i][0] += 1.0 / (n * n);
  }
  const auto base = constant_sequence(o->base_point(), window);
  const auto xy = estimate_mutual_limit(*o, x, y, r);
  ASSERT_EQ(xy.status, Stability::kStable);
  EXPECT_LE(xy.limit, kDefaultZeroTolerance);
  const double px = estimate_mutual_limit(*o, base, x, r).limit;
  const double py = estimate_mutual_limit(*o, base, y, r).limit;
  const auto q = metric_identify({"p", "x", "y"},
                                 {{0, px, py}, {px, 0, xy.limit},
                                  {py, xy.limit, 0}},
                                 kDefaultZeroTolerance);
  EXPECT_EQ(q.quotient.size(), 2u);
  EXPECT_EQ(q.projection[1], q.projection[2]);
  EXPECT_NEAR(q.quotient(0, 1), 1.0, 1e-6);
}

TEST(Identify, QuadraticPerturbationAtDefaultWindowIsNotStable) {
  auto o = Space("euclidean:1");
  const auto r = NormalizingSequence::OneOverN(kDefaultWindow);
  const auto x = radial_sequence(*o, {1.0}, r, "x");
  PointSequence y{"y", x.points};
  for (std::size_t i = 0; i < kDefaultWindow; ++i) {
    const double n = static_cast<double>(i + 1);
    y.points[i][0] += 1.0 / (n * n);
  }
  EXPECT_NE(estimate_mutual_limit(*o, x, y, r).status, Stability::kStable);
}

TEST(Identify, SingleLinkageChains) {
  // a ~ b ~ c under tau but a, c further apart: one class.
  const double t = 1e-6;
  const auto q = metric_identify(
      {"a", "b", "c", "d"},
      {{0, 0.8 * t, 1.6 * t, 1}, {0.8 * t, 0, 0.8 * t, 1},
       {1.6 * t, 0.8 * t, 0, 1}, {1, 1, 1, 0}},
      t);
  EXPECT_EQ(q.quotient.size(), 2u);
  EXPECT_EQ(q.projection, (std::vector<std::size_t>{0, 0, 0, 1}));
}

TEST(Identify, MeanOfCrossClassLimits) {
  const auto q = metric_identify(
      {"a", "b", "c"}, {{0, 0, 1.0}, {0, 0, 1.0 + 1e-7}, {1.0, 1.0 + 1e-7, 0}},
      1e-6);
  ASSERT_EQ(q.quotient.size(), 2u);
  EXPECT_DOUBLE_EQ(q.quotient(0, 1), 1.0 + 0.5e-7);
  EXPECT_NEAR(q.max_limit_deviation, 0.5e-7, 1e-15);
}

TEST(Identify, CertificateFailureNamesTriple) {
  try {
    metric_identify({"a", "b", "c"}, {{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}, 1e-6);
    FAIL() << "expected CertificateError";
  } catch (const CertificateError& e) {
    EXPECT_NEAR(e.excess(), 1.0, 1e-12);
    EXPECT_EQ(e.triple()[0], 0u);
    EXPECT_EQ(e.triple()[1], 2u);
    EXPECT_EQ(e.triple()[2], 1u);
  }
}

TEST(Identify, Errors) {
  EXPECT_THROW(metric_identify({}, {}, 1e-6), InputError);
  EXPECT_THROW(metric_identify({"a", "b"}, {{0, 1}}, 1e-6), InputError);
  EXPECT_THROW(metric_identify({"a"}, {{0}}, 1e-6, 1e-6, 3), InputError);
}

TEST(Identify, TripodStarQuotient) {
  auto o = Space("tripod:1,1,1");
  const auto r = NormalizingSequence::OneOverN(kDefaultWindow);
  const auto fam = build_self_stable_family(
      *o, RadialPool(*o, {{0, 1}, {1, 1}, {2, 1}}, r), r);
  const auto q = metric_identify(fam, kDefaultZeroTolerance);
  ASSERT_EQ(q.quotient.size(), 4u);
  const auto v = analyze_pretangent(q);
  EXPECT_TRUE(v.quadrilateral.pass());
  EXPECT_NEAR(v.lebedeva_petrunin.min_defect, -1.0, 1e-9);
  EXPECT_FALSE(v.lebedeva_petrunin.pass());
  EXPECT_EQ(v.lebedeva_petrunin.witness_labels[0], "p");
}

TEST(Restrict, IdentityAndParity) {
  auto o = Space("euclidean:2");
  const auto r = NormalizingSequence::OneOverN(kDefaultWindow);
  const auto x = radial_sequence(*o, {1, 2}, r, "x");
  const auto y = radial_sequence(*o, {-1, 0}, r, "y");
  std::vector<std::size_t> all(kDefaultWindow);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto [x1, r1] = restrict_to_subsequence(x, r, all);
  const auto [y1, r1b] = restrict_to_subsequence(y, r, all);
  EXPECT_EQ(estimate_mutual_limit(*o, x1, y1, r1).limit,
            estimate_mutual_limit(*o, x, y, r).limit);
  const auto even = parity_indices(kDefaultWindow, true);
  ASSERT_EQ(even.size(), kDefaultWindow / 2);
  EXPECT_EQ(even[0], 1u);
  const auto [x2, r2] = restrict_to_subsequence(x, r, even);
  const auto [y2, r2b] = restrict_to_subsequence(y, r, even);
  const auto before = estimate_mutual_limit(*o, x, y, r);
  const auto after = estimate_mutual_limit(*o, x2, y2, r2);
  EXPECT_EQ(after.status, Stability::kStable);
  EXPECT_LE(std::abs(before.limit - after.limit), 2e-6);
  EXPECT_LE(after.oscillation, before.oscillation + 1e-6);
}

TEST(Restrict, ParityRemovesAlternation) {
  auto o = Space("euclidean:1");
  const auto r = NormalizingSequence::OneOverN(kDefaultWindow);
  const auto alt = radial_sequence(*o, {1.0}, r, "alt", true);
  const auto z = radial_sequence(*o, {1.0}, r, "z");
  const auto even = parity_indices(kDefaultWindow, true);
  const auto [a2, r2] = restrict_to_subsequence(alt, r, even);
  const auto [z2, r2b] = restrict_to_subsequence(z, r, even);
  const auto e = estimate_mutual_limit(*o, a2, z2, r2);
  EXPECT_EQ(e.status, Stability::kStable);
  EXPECT_EQ(e.limit, 0.0);
  const auto odd = parity_indices(kDefaultWindow, false);
  const auto [a3, r3] = restrict_to_subsequence(alt, r, odd);
  const auto [z3, r3b] = restrict_to_subsequence(z, r, odd);
  EXPECT_NEAR(estimate_mutual_limit(*o, a3, z3, r3).limit, 2.0, 1e-12);
}

TEST(Restrict, Errors) {
  auto o = Space("euclidean:1");
  const auto r = NormalizingSequence::OneOverN(8);
  const auto x = radial_sequence(*o, {1.0}, r, "x");
  EXPECT_THROW(restrict_to_subsequence(x, r, std::vector<std::size_t>{}),
               InputError);
  EXPECT_THROW(restrict_to_subsequence(x, r, std::vector<std::size_t>{2, 1}),
               InputError);
  EXPECT_THROW(restrict_to_subsequence(x, r, std::vector<std::size_t>{8}),
               InputError);
}

}  // namespace
}  // namespace curvlab
