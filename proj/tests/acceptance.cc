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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "curvlab/commands.hpp"
#include "curvlab/convexity.hpp"
#include "curvlab/four_point.hpp"
#include "curvlab/infinitesimal.hpp"
#include "curvlab/io.hpp"
#include "curvlab/pretangent.hpp"
#include "curvlab/random.hpp"
#include "curvlab/spaces.hpp"
#include "oracles.hpp"

namespace curvlab {
namespace {

const std::string kSource = CURVLAB_SOURCE_DIR;

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void Note(const std::string& what) {
    if (pass) detail += (detail.empty() ? "" : "; ") + what;
  }
};

std::string Num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::unique_ptr<MetricOracle> Space(const char* spec) {
  return make_oracle(parse_space_spec(spec));
}

Pool LoadPool(const char* file, const MetricOracle& o) {
  const auto path = kSource + "/pools/" + file;
  return pool_from_json(parse_json(read_file(path), path), o);
}

Outcome EuclideanSoundness() {
  Outcome o;
  auto e = Space("euclidean:2");
  Rng rng(2026);
  std::vector<Point> pts;
  for (int i = 0; i < 30; ++i) pts.push_back(e->sample_at_scale(1.0, rng));
  const auto space = sample_space(*e, pts);
  const auto start = Clock::now();
  for (auto f : {Functional::kQuadrilateral, Functional::kLebedevaPetrunin,
                 Functional::kPtolemy}) {
    const auto r = scan_finite(space, f);
    o.Require(r.min_defect >= -1e-9,
              std::string(to_string(f)) + " min " + Num(r.min_defect));
    o.Note(std::string(to_string(f)) + " min " + Num(r.min_defect));
  }
  const double secs = Seconds(start);
  o.Require(secs < 5.0, "runtime " + Num(secs) + " s");
  o.Note(Num(secs) + " s");
  return o;
}

Outcome TripodNegativeControl() {
  Outcome o;
  const FiniteMetricSpace star(
      {"c", "a", "b", "d"},
      std::vector<std::vector<double>>{
          {0, 1, 1, 1}, {1, 0, 2, 2}, {1, 2, 0, 2}, {1, 2, 2, 0}});
  auto d = [&](std::size_t i, std::size_t j) { return star(i, j); };
  const double lp = lp_defect<std::size_t>(0, 1, 2, 3, d);
  o.Require(std::abs(lp + 1.0) <= 1e-12, "lp_defect " + Num(lp));
  auto t = Space("tripod:1,1,1");
  for (const char* sched : {"geometric:0.5,0.5,10", "geometric:1,0.8,12",
                            "geometric:0.3,0.25,6"}) {
    const auto s = ScaleSchedule::Parse(sched, 60);
    const auto a2 = estimate_liminf(NormalizedFunctional::kA2, *t, s, 1);
    const auto a1 = estimate_liminf(NormalizedFunctional::kA1, *t, s, 1);
    o.Require(a2.tail_inf <= -1.0 + 1e-6,
              std::string(sched) + " A2 tail " + Num(a2.tail_inf));
    o.Require(a1.tail_inf >= -1e-6,
              std::string(sched) + " A1 tail " + Num(a1.tail_inf));
  }
  o.Note("lp_defect -1, A2 tail <= -1 + 1e-6, A1 tail >= -1e-6 on 3 schedules");
  return o;
}

Outcome HyperbolicScaleSeparation() {
  Outcome o;
  auto h = Space("hyperbolic");
  const auto s = ScaleSchedule::Parse("geometric:0.5,0.5,10", 60);
  const auto start = Clock::now();
  const auto a2 = estimate_liminf(NormalizedFunctional::kA2, *h, s, 1);
  const auto a1 = estimate_liminf(NormalizedFunctional::kA1, *h, s, 1);
  const double secs = Seconds(start);
  const double first = a2.per_scale.front().min_value;
  const double last = a2.per_scale.back().min_value;
  o.Require(first <= -0.01, "A2 at 2^-1 " + Num(first));
  o.Require(last >= -1e-3, "A2 at 2^-10 " + Num(last));
  o.Require(a1.tail_inf >= -1e-6, "A1 tail " + Num(a1.tail_inf));
  // Re-evaluate the large-scale witness with the closed-form distance.
  const auto& w = a2.per_scale.front().witness;
  auto d = [&](int i, int j) {
    return curvlab_oracle::PoincareDistance(w[i], w[j]);
  };
  double delta = 0.0;
  for (const auto& x : w) {
    delta = std::max(delta, curvlab_oracle::PoincareDistance(x, {0.0, 0.0}));
  }
  const double ref =
      curvlab_oracle::LowerCurvature(d, 0, 1, 2, 3) / (delta * delta);
  o.Require(std::abs(ref - first) <= 1e-9, "oracle disagrees: " + Num(ref));
  o.Require(secs < 30.0, "runtime " + Num(secs) + " s");
  o.Note("A2 " + Num(first) + " at 2^-1, " + Num(last) + " at 2^-10; A1 tail " +
         Num(a1.tail_inf) + "; " + Num(secs) + " s");
  return o;
}

Outcome L1PtolemyFailure() {
  Outcome o;
  auto l1 = Space("l1");
  const std::array<Point, 4> pinned = {
      Point{-0.63394394809810972, -0.17936908408125563},
      Point{0.55796034423842666, 0.3677686243835403},
      Point{-0.61722304857316046, -0.0017277734837319869},
      Point{0.0043279361779871017, -0.3574451946051953}};
  const auto found =
      search_violation(*l1, Functional::kPtolemy, 1.0, 100000, 2024);
  o.Require(found.found, "no violation in 1e5 draws");
  if (found.found) {
    o.Require(found.witness == pinned, "witness differs from pinned fixture");
    auto d = [&](int i, int j) {
      return std::abs(found.witness[i][0] - found.witness[j][0]) +
             std::abs(found.witness[i][1] - found.witness[j][1]);
    };
    const double ref = curvlab_oracle::Ptolemy(d, 0, 1, 2, 3);
    o.Require(ref < 0.0, "oracle defect " + Num(ref));
    o.Note("violation after " + std::to_string(found.draws) +
           " draws, defect " + Num(ref));
  }
  const auto s = ScaleSchedule::Parse("geometric:0.5,0.5,10", 60);
  const auto a3 = estimate_liminf(NormalizedFunctional::kA3, *l1, s, 1);
  o.Require(a3.tail_inf < -1e-3, "A3 tail " + Num(a3.tail_inf));
  o.Note("A3 tail " + Num(a3.tail_inf));
  return o;
}

Outcome PretangentReconstruction() {
  Outcome o;
  auto e = Space("euclidean:2");
  const auto pool = LoadPool("euclidean_eight.json", *e);
  o.Require(pool.normalizing.size() == 512, "window is not 512");
  const auto fam = build_self_stable_family(*e, pool.sequences,
                                            pool.normalizing);
  const auto approx = metric_identify(fam, kDefaultZeroTolerance);
  o.Require(approx.quotient.size() == 8,
            "quotient has " + std::to_string(approx.quotient.size()) +
                " points");
  // Accepted sequence i sits at r_n * vec[i]; p is the zero vector.
  std::vector<Point> vec;
  for (std::size_t idx : fam.accepted) {
    vec.push_back(idx == 0 ? Point{0.0, 0.0}
                           : Point{fam.pool[idx].points[0][0],
                                   fam.pool[idx].points[0][1]});
  }
  double err = 0.0;
  for (std::size_t i = 0; i < vec.size(); ++i)
    for (std::size_t j = 0; j < vec.size(); ++j) {
      err = std::max(err,
                     std::abs(approx.quotient(approx.projection[i],
                                              approx.projection[j]) -
                              curvlab_oracle::EuclideanDistance(vec[i],
                                                                vec[j])));
    }
  o.Require(err <= 1e-9, "max distance error " + Num(err));
  const auto even = parity_indices(pool.normalizing.size(), true);
  double shift = 0.0;
  for (std::size_t a : fam.accepted)
    for (std::size_t b : fam.accepted) {
      const auto [xa, ra] =
          restrict_to_subsequence(fam.pool[a], pool.normalizing, even);
      const auto [xb, rb] =
          restrict_to_subsequence(fam.pool[b], pool.normalizing, even);
      const auto after = estimate_mutual_limit(*e, xa, xb, ra);
      shift = std::max(shift, std::abs(after.limit - fam.pair(a, b).limit));
    }
  o.Require(shift <= 1e-9, "restriction shift " + Num(shift));
  const auto v = analyze_pretangent(approx);
  o.Require(v.all_pass(), "quotient scans failed");
  o.Note("8 points, distance error " + Num(err) + ", even-index shift " +
         Num(shift));
  return o;
}

Outcome GluingMergesClasses() {
  Outcome o;
  auto e = Space("euclidean:2");
  const auto pool = LoadPool("euclidean_glued.json", *e);
  o.Require(pool.sequences.size() == 9, "glued pool needs 9 sequences");
  const auto fam = build_self_stable_family(*e, pool.sequences,
                                            pool.normalizing);
  o.Require(fam.accepted.size() == 10,
            "accepted " + std::to_string(fam.accepted.size()));
  const auto approx = metric_identify(fam, kDefaultZeroTolerance);
  o.Require(approx.quotient.size() == 8,
            "quotient has " + std::to_string(approx.quotient.size()) +
                " points");
  const auto report = validate_metric(approx.quotient);
  o.Require(report.pass, "quotient fails validate_metric");
  o.Note("9 sequences plus p, 8-point metric quotient");
  return o;
}

Outcome SnowflakeMidpointFailure() {
  Outcome o;
  // Pinned infimum: a grid brute force over B(p, 2 delta) at step 1e-4.
  const double grid =
      curvlab_oracle::SnowflakeGridMinimum(0.5, 1.0, -1.0, -4.0, 4.0, 1e-4);
  o.Require(grid >= 0.2, "grid minimum " + Num(grid));
  auto s = Space("snowflake:0.5");
  const auto r = NormalizingSequence::OneOverN(kDefaultWindow);
  const auto x = radial_sequence(*s, {1.0}, r, "x");
  const auto y = radial_sequence(*s, {-1.0}, r, "y");
  MidpointSearchOptions opts;
  opts.budget = 10000;
  const auto res = search_infinitesimal_midpoint(*s, x, y, 1, opts);
  o.Require(!res.tail_max.is_infinite() && res.tail_max.value() >= 0.2,
            "tail defect below 0.2");
  o.Require(!res.evidence, "search reported midpoint evidence");
  double tail_min = 1e300;
  for (std::size_t n = tail_begin(kDefaultWindow, 0.5); n < res.profile.size();
       ++n) {
    tail_min = std::min(tail_min, res.profile[n].value());
  }
  o.Require(tail_min >= grid - 1e-12, "search beat the grid infimum");
  o.Note("tail max " + Num(res.tail_max.value()) + ", grid infimum " +
         Num(grid));
  return o;
}

Outcome BusemannPositiveControl() {
  Outcome o;
  auto e = Space("euclidean:2");
  const auto r = NormalizingSequence::OneOverN(kDefaultWindow);
  Rng rng(8);
  double worst = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    const Point u{rng.normal(), rng.normal()}, v{rng.normal(), rng.normal()},
        w{rng.normal(), rng.normal()};
    const auto x0 = radial_sequence(*e, u, r, "u");
    const auto x1 = radial_sequence(*e, v, r, "v");
    const auto y = radial_sequence(*e, w, r, "w");
    MidpointSearchOptions mo;
    mo.mode = MidpointMode::kAnalytic;
    const auto m = search_infinitesimal_midpoint(*e, x0, x1, 1, mo).midpoints;
    const auto prof = busemann_defect_profile(*e, x0, x1, y, m);
    o.Require(prof.tail_max.at_most(1e-9), "triple tail above 1e-9");
    if (!prof.tail_max.is_infinite()) {
      worst = std::max(worst, prof.tail_max.value());
    }
  }
  Rng prng(9);
  std::size_t bad = 0;
  for (int i = 0; i < 1000000; ++i) {
    const double t = prng.normal() * std::exp(prng.uniform(-30.0, 30.0));
    if (positive_part(t) + positive_part(-t) != std::abs(t)) ++bad;
  }
  o.Require(bad == 0, std::to_string(bad) + " positive_part mismatches");
  o.Note("worst tail " + Num(worst) + "; 1e6 positive_part identities exact");
  return o;
}

std::string CliStripped(std::vector<std::string> args, int* code) {
  args.insert(args.begin(), "curvature-lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  *code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out.str().empty()) return err.str();
  return strip_duration(parse_json(out.str(), "stdout")).dump();
}

Outcome Determinism() {
  Outcome o;
  const std::string pools = kSource + "/pools/";
  const std::vector<std::vector<std::string>> commands = {
      {"validate", "--space", "sphere:1"},
      {"scan", "--space", "hyperbolic", "--functional", "quad", "--samples",
       "50"},
      {"scan", "--space", "l1", "--functional", "ptolemy", "--samples", "24",
       "--budget", "0"},
      {"liminf", "--space", "tripod:1,1,1", "--functional", "a2", "--samples",
       "30"},
      {"liminf", "--space", "hyperbolic", "--functional", "a1", "--samples",
       "30", "--budget", "20000"},
      {"pretangent", "--space", "euclidean:2", "--pool",
       pools + "euclidean_eight.json", "--restrict", "even"},
      {"pretangent", "--space", "tripod:1,1,1"},
      {"convexity", "--space", "snowflake:0.5", "--mode", "midpoint",
       "--window", "128", "--budget", "500"},
      {"convexity", "--space", "hyperbolic", "--mode", "busemann", "--window",
       "128"},
      {"theorem", "--space", "euclidean:2", "--theorem", "T3", "--window",
       "128", "--samples", "20"},
      {"theorem", "--space", "l1", "--theorem", "T10", "--window", "128",
       "--samples", "20", "--budget", "300"}};
  for (const auto& cmd : commands) {
    auto one = cmd, eight = cmd;
    one.insert(one.begin(), {"--seed", "42", "--threads", "1"});
    eight.insert(eight.begin(), {"--seed", "42", "--threads", "8"});
    int c1 = 0, c8 = 0;
    const auto a = CliStripped(one, &c1);
    const auto b = CliStripped(eight, &c8);
    std::string name = cmd[0] + " " + cmd[2];
    o.Require(c1 != kExitInputError, name + " input error: " + a);
    o.Require(c1 == c8 && a == b, name + " differs across thread counts");
  }
  o.Note(std::to_string(commands.size()) +
         " seeded commands byte-identical at 1 and 8 threads");
  return o;
}

Outcome DegenerateConventions() {
  Outcome o;
  for (const char* spec : {"euclidean:2", "l1", "linf", "hyperbolic",
                           "sphere:1", "tripod:1,1,1", "snowflake:0.5"}) {
    auto s = Space(spec);
    const Point& p = s->base_point();
    for (auto f : {NormalizedFunctional::kA1, NormalizedFunctional::kA2,
                   NormalizedFunctional::kA3}) {
      const double v = evaluate(f, *s, p, p, p, p);
      o.Require(v == 0.0,
                std::string(spec) + " " + std::string(to_string(f)) + " = " +
                    Num(v));
    }
    Rng rng(1);
    Point z = s->sample_at_scale(0.5, rng);
    while (s->distance(z, p) == 0.0) z = s->sample_at_scale(0.5, rng);
    o.Require(midpoint_defect(*s, p, p, p) == ExtendedDefect(0.0),
              std::string(spec) + " midpoint_defect(p, p, p) != 0");
    o.Require(midpoint_defect(*s, p, p, z).is_infinite(),
              std::string(spec) + " z != p is not the infinite sentinel");
  }
  o.Note("A1/A2/A3 exactly 0 at (p,p,p,p); midpoint 0 / inf branches on 7 "
         "spaces");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

int Main() {
  const std::vector<Criterion> criteria = {
      {1, "euclidean soundness", EuclideanSoundness},
      {2, "tripod negative control", TripodNegativeControl},
      {3, "hyperbolic scale separation", HyperbolicScaleSeparation},
      {4, "l1 ptolemy failure", L1PtolemyFailure},
      {5, "pretangent reconstruction", PretangentReconstruction},
      {6, "metric identification gluing", GluingMergesClasses},
      {7, "snowflake midpoint failure", SnowflakeMidpointFailure},
      {8, "busemann positive control", BusemannPositiveControl},
      {9, "thread determinism", Determinism},
      {10, "degenerate conventions", DegenerateConventions},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    if (!out.pass) ++failures;
    std::printf("%s %2d %s: %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace curvlab

int main() { return curvlab::Main(); }
