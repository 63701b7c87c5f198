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

#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "curvlab/random.hpp"
#include "oracles.hpp"

namespace curvlab {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::string> AllSpecs() {
  return {"euclidean:1", "euclidean:2", "euclidean:5",   "l1",
          "linf",        "hyperbolic",  "sphere:1",      "sphere:2.5",
          "tripod:1,1,1", "tripod:1,2,0.5", "tripod:1,1,1@leaf0",
          "snowflake:0.5", "snowflake:0.25"};
}

TEST(MakeOracle, HyperbolicOriginDistanceIsZero) {
  auto h = make_oracle(BuiltinSpace::Hyperbolic());
  EXPECT_EQ(h->distance({0, 0}, {0, 0}), 0.0);
}

TEST(MakeOracle, SphereAntipodes) {
  auto s = make_oracle(BuiltinSpace::Sphere(1.0));
  EXPECT_NEAR(s->distance({0, 0}, {kPi, 0}), kPi, 1e-15);
  EXPECT_NEAR(s->distance({kPi / 2, 0}, {kPi / 2, kPi}), kPi, 1e-15);
  auto s3 = make_oracle(BuiltinSpace::Sphere(3.0));
  EXPECT_NEAR(s3->distance({0, 0}, {kPi, 0}), 3 * kPi, 1e-14);
}

TEST(MakeOracle, TripodLeavesAreTwoApart) {
  auto t = make_oracle(BuiltinSpace::Tripod(1, 1, 1));
  EXPECT_EQ(t->distance({0, 1}, {1, 1}), 2.0);
  EXPECT_EQ(t->distance({0, 1}, {2, 1}), 2.0);
  EXPECT_EQ(t->distance({0, 0.25}, {0, 1}), 0.75);
  EXPECT_EQ(t->distance({0, 0}, {2, 0}), 0.0);
}

TEST(MakeOracle, SnowflakeDistance) {
  auto s = make_oracle(BuiltinSpace::Snowflake(0.5));
  EXPECT_DOUBLE_EQ(s->distance({0.0}, {4.0}), 2.0);
  EXPECT_DOUBLE_EQ(s->distance({-1.0}, {1.0}), std::sqrt(2.0));
}

TEST(MakeOracle, HyperbolicMatchesArccoshFormula) {
  auto h = make_oracle(BuiltinSpace::Hyperbolic());
  Rng rng(2);
  for (int i = 0; i < 2000; ++i) {
    const Point u = h->sample_at_scale(4.0, rng);
    const Point v = h->sample_at_scale(4.0, rng);
    const double ref = curvlab_oracle::PoincareDistance(u, v);
    if (ref < 1e-3) continue;  // arccosh loses digits near 1
    EXPECT_NEAR(h->distance(u, v), ref, 1e-9 * std::max(1.0, ref));
  }
}

TEST(MakeOracle, SphereMatchesGreatCircle) {
  auto s = make_oracle(BuiltinSpace::Sphere(2.0));
  Rng rng(4);
  for (int i = 0; i < 2000; ++i) {
    const Point a = s->sample_at_scale(2.0 * kPi, rng);
    const Point b = s->sample_at_scale(2.0 * kPi, rng);
    EXPECT_NEAR(s->distance(a, b), curvlab_oracle::GreatCircle(2.0, a, b),
                1e-7);
  }
}

TEST(MakeOracle, RejectsInvalidParameters) {
  EXPECT_THROW(BuiltinSpace::Sphere(0.0), InputError);
  EXPECT_THROW(BuiltinSpace::Sphere(-1.0), InputError);
  EXPECT_THROW(BuiltinSpace::Snowflake(1.0), InputError);
  EXPECT_THROW(BuiltinSpace::Snowflake(0.0), InputError);
  EXPECT_THROW(BuiltinSpace::Tripod(1, 0, 1), InputError);
  EXPECT_THROW(BuiltinSpace::Euclidean(0), InputError);
  BuiltinSpace bad;
  bad.kind = SpaceKind::kSphere;
  bad.radius = -2.0;
  EXPECT_THROW(make_oracle(bad), InputError);
}

TEST(ParseSpaceSpec, AcceptsDocumentedForms) {
  EXPECT_EQ(parse_space_spec("euclidean:3").dim, 3);
  EXPECT_EQ(parse_space_spec("l1").kind, SpaceKind::kL1Plane);
  EXPECT_EQ(parse_space_spec("linf").kind, SpaceKind::kLinfPlane);
  EXPECT_EQ(parse_space_spec("hyperbolic").kind, SpaceKind::kHyperbolicPlane);
  EXPECT_DOUBLE_EQ(parse_space_spec("sphere:2.5").radius, 2.5);
  const auto t = parse_space_spec("tripod:1,2,3");
  EXPECT_EQ(t.edges[1], 2.0);
  EXPECT_EQ(t.tripod_base_leaf, -1);
  EXPECT_EQ(parse_space_spec("tripod:1,2,3@leaf2").tripod_base_leaf, 2);
  EXPECT_DOUBLE_EQ(parse_space_spec("snowflake:0.5").alpha, 0.5);
}

TEST(ParseSpaceSpec, RejectsMalformedSpecs) {
  for (const char* bad :
       {"", "euclid", "euclidean", "euclidean:x", "euclidean:1.5", "l1:2",
        "sphere", "sphere:-1", "tripod:1,2", "tripod:1,2,3,4",
        "tripod:1,1,1@root", "snowflake:2", "cloud:/nonexistent.json"}) {
    EXPECT_THROW(parse_space_spec(bad), InputError) << bad;
  }
}

TEST(BuiltinOracles, SpotValidationAtTightTolerance) {
  for (const auto& spec : AllSpecs()) {
    auto oracle = make_oracle(parse_space_spec(spec));
    for (double t : {1e-4, 0.5, 2.0}) {
      Rng rng(derive_seed(1, spec, static_cast<std::uint64_t>(t * 1e4)));
      const auto r = spot_validate(*oracle, t, 10000, rng, 1e-12);
      EXPECT_TRUE(r.pass) << spec << " t=" << t
                          << " triangle=" << r.worst_triangle_excess
                          << " ball=" << r.worst_ball_excess;
    }
  }
}

TEST(BuiltinOracles, SamplesRespectTheBall) {
  for (const auto& spec : AllSpecs()) {
    auto oracle = make_oracle(parse_space_spec(spec));
    Rng rng(derive_seed(2, spec));
    for (double t : {1e-6, 0.3, 1.0}) {
      for (int i = 0; i < 10000; ++i) {
        const Point q = oracle->sample_at_scale(t, rng);
        oracle->check_point(q);
        ASSERT_LE(oracle->distance(q, oracle->base_point()),
                  t * (1.0 + 1e-12))
            << spec;
      }
    }
    EXPECT_EQ(oracle->sample_at_scale(0.0, rng), oracle->base_point());
    for (const auto& a : oracle->anchor_points(0.25)) {
      EXPECT_LE(oracle->distance(a, oracle->base_point()),
                0.25 * (1.0 + 1e-12))
          << spec;
    }
  }
}

TEST(BuiltinOracles, SelfSimilarRadialRatiosAreScaleFree) {
  for (const char* spec : {"euclidean:2", "l1", "linf", "tripod:1,1,1",
                           "snowflake:0.5", "snowflake:0.3"}) {
    auto oracle = make_oracle(parse_space_spec(spec));
    const auto dirs = oracle->default_directions();
    ASSERT_GE(dirs.size(), 2u) << spec;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      for (std::size_t j = 0; j < dirs.size(); ++j) {
        const double ref = oracle->distance(oracle->radial(dirs[i], 0.5),
                                            oracle->radial(dirs[j], 0.5)) /
                           0.5;
        for (double r : {0.25, 1e-3, 1e-7}) {
          const double q = oracle->distance(oracle->radial(dirs[i], r),
                                            oracle->radial(dirs[j], r)) /
                           r;
          EXPECT_NEAR(q, ref, 1e-12 * std::max(1.0, ref)) << spec;
        }
      }
    }
  }
}

TEST(BuiltinOracles, MidpointHooksAreExact) {
  for (const char* spec :
       {"euclidean:2", "l1", "linf", "hyperbolic", "sphere:1", "tripod:1,1,1"}) {
    auto oracle = make_oracle(parse_space_spec(spec));
    Rng rng(derive_seed(3, spec));
    for (int i = 0; i < 500; ++i) {
      const Point a = oracle->sample_at_scale(0.8, rng);
      const Point b = oracle->sample_at_scale(0.8, rng);
      const auto m = oracle->midpoint(a, b);
      ASSERT_TRUE(m.has_value()) << spec;
      const double half = 0.5 * oracle->distance(a, b);
      EXPECT_NEAR(oracle->distance(a, *m), half, 1e-12) << spec;
      EXPECT_NEAR(oracle->distance(b, *m), half, 1e-12) << spec;
    }
  }
  auto snow = make_oracle(BuiltinSpace::Snowflake(0.5));
  EXPECT_FALSE(snow->midpoint({1.0}, {-1.0}).has_value());
}

TEST(DoublingConstant, SinglePointCarrier) {
  auto cloud = make_oracle(BuiltinSpace::Cloud(
      make_point_cloud("euclidean", {{0.0, 0.0}}, 0)));
  Rng rng(1);
  EXPECT_EQ(estimate_doubling_constant(*cloud, 1.0, 100, rng), 1u);
}

TEST(DoublingConstant, EuclideanLineIsAtMostFour) {
  auto line = make_oracle(BuiltinSpace::Euclidean(1));
  for (double t : {1e-3, 1.0, 50.0}) {
    for (std::size_t budget : {10u, 100u, 1000u, 10000u}) {
      Rng rng(derive_seed(4, "line", budget));
      const auto c = estimate_doubling_constant(*line, t, budget, rng);
      EXPECT_GE(c, 1u);
      EXPECT_LE(c, 4u) << "t=" << t << " budget=" << budget;
    }
  }
}

TEST(DoublingConstant, SnowflakeStaysBounded) {
  auto snow = make_oracle(BuiltinSpace::Snowflake(0.5));
  for (double t : {1e-2, 1.0, 10.0}) {
    Rng rng(derive_seed(5, "snowflake"));
    // A (t/2)-separated set in [-t^2, t^2] under sqrt|x-y| has at most 8 points.
    EXPECT_LE(estimate_doubling_constant(*snow, t, 10000, rng), 8u);
  }
}

TEST(DoublingConstant, MonotoneInBudgetAndDeterministic) {
  auto plane = make_oracle(BuiltinSpace::Euclidean(2));
  std::size_t prev = 0;
  for (std::size_t budget : {1u, 10u, 100u, 1000u, 5000u}) {
    Rng rng(77);
    const auto c = estimate_doubling_constant(*plane, 1.0, budget, rng);
    EXPECT_GE(c, prev);
    prev = c;
    Rng again(77);
    EXPECT_EQ(estimate_doubling_constant(*plane, 1.0, budget, again), c);
  }
  Rng rng(1);
  EXPECT_THROW(estimate_doubling_constant(*plane, 0.0, 10, rng), InputError);
  EXPECT_THROW(estimate_doubling_constant(*plane, 1.0, 0, rng), InputError);
}

TEST(PointCloud, CoordinateAndMatrixClouds) {
  const auto c = make_point_cloud("l1", {{0, 0}, {3, 4}, {1, 1}}, 2);
  EXPECT_EQ(c.space(0, 1), 7.0);
  auto oracle = make_oracle(BuiltinSpace::Cloud(c));
  EXPECT_EQ(oracle->base_point(), Point{2.0});
  EXPECT_EQ(oracle->distance({0.0}, {1.0}), 7.0);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const Point q = oracle->sample_at_scale(2.0, rng);
    EXPECT_LE(oracle->distance(q, oracle->base_point()), 2.0);
  }
  EXPECT_THROW(make_point_cloud("l1", {{0, 0, 0}}, 0), InputError);
  EXPECT_THROW(make_point_cloud("euclidean", {{0, 0}, {1}}, 0), InputError);
  EXPECT_THROW(make_point_cloud("euclidean", {{0, 0}}, 1), InputError);
  EXPECT_THROW(make_point_cloud("chebyshev", {{0, 0}}, 0), InputError);
  EXPECT_THROW(
      make_point_cloud(
          FiniteMetricSpace::FromMatrix({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}), 0),
      InputError);
}

}  // namespace
}  // namespace curvlab
