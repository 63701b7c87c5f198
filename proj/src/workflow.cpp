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

#include "curvlab/workflow.hpp"

#include <utility>

#include "curvlab/random.hpp"

namespace curvlab {
namespace {

CheckResult LiminfCheck(NormalizedFunctional f, const MetricOracle& oracle,
                        std::uint64_t seed, const WorkflowConfig& config) {
  LiminfOptions opts;
  opts.epsilon = config.liminf_epsilon;
  opts.threads = config.threads;
  const auto est = estimate_liminf(f, oracle, config.schedule,
                                   derive_seed(seed, "theorem-liminf"), opts);
  return {"liminf_" + std::string(to_string(f)) + "_nonnegative", est.pass,
          to_json(est)};
}

CheckResult ScanCheck(const char* name, const QuadrupleDefectReport& r) {
  return {name, r.pass(), to_json(r)};
}

bool AllPass(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

Json ChecksJson(const std::vector<CheckResult>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) {
    out.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  return out;
}

}  // namespace

MidpointSurvey survey_midpoints(const MetricOracle& oracle,
                                const std::vector<PointSequence>& sequences,
                                std::uint64_t seed,
                                const MidpointSearchOptions& opts) {
  MidpointSurvey survey;
  std::size_t k = 0;
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    for (std::size_t j = i + 1; j < sequences.size(); ++j, ++k) {
      survey.pairs.push_back(
          {i, j,
           search_infinitesimal_midpoint(oracle, sequences[i], sequences[j],
                                         derive_seed(seed, "midpoint-pair", k),
                                         opts)});
    }
  }
  survey.worst = survey.pairs.size();
  for (std::size_t k2 = 0; k2 < survey.pairs.size(); ++k2) {
    const auto& r = survey.pairs[k2].result;
    if (!r.evidence) survey.evidence = false;
    if (survey.worst == survey.pairs.size() ||
        survey.pairs[survey.worst].result.tail_max < r.tail_max) {
      survey.worst = k2;
    }
  }
  return survey;
}

BusemannSurvey survey_busemann(const MetricOracle& oracle,
                               const std::vector<PointSequence>& sequences,
                               std::uint64_t seed,
                               const MidpointSearchOptions& mid_opts,
                               std::optional<double> epsilon_bus) {
  BusemannSurvey survey;
  survey.midpoints = survey_midpoints(oracle, sequences, seed, mid_opts);
  bool all_pass = true;
  for (const auto& pair : survey.midpoints.pairs) {
    if (!pair.result.evidence) continue;
    BusemannOptions opts;
    opts.epsilon_mid = pair.result.epsilon;
    opts.epsilon_bus = epsilon_bus.value_or(pair.result.epsilon);
    opts.tail_fraction = mid_opts.tail_fraction;
    for (std::size_t y = 0; y < sequences.size(); ++y) {
      BusemannTriple t{pair.x, pair.y, y,
                       busemann_defect_profile(oracle, sequences[pair.x],
                                               sequences[pair.y], sequences[y],
                                               pair.result.midpoints, opts)};
      if (!t.profile.evidence) all_pass = false;
      survey.triples.push_back(std::move(t));
    }
  }
  survey.worst = survey.triples.size();
  for (std::size_t k = 0; k < survey.triples.size(); ++k) {
    if (survey.worst == survey.triples.size() ||
        survey.triples[survey.worst].profile.tail_max <
            survey.triples[k].profile.tail_max) {
      survey.worst = k;
    }
  }
  survey.evidence = survey.midpoints.evidence && all_pass;
  return survey;
}

Json to_json(const MidpointSurvey& survey,
             const std::vector<PointSequence>& sequences) {
  Json pairs = Json::array();
  for (const auto& p : survey.pairs) {
    Json e = to_json(p.result);
    e["x"] = sequences[p.x].label;
    e["y"] = sequences[p.y].label;
    pairs.push_back(std::move(e));
  }
  Json out = {{"verdict", survey.evidence ? "midpoint-convex evidence"
                                          : "counterexample found"},
              {"evidence", survey.evidence},
              {"pair_count", survey.pairs.size()}};
  if (survey.worst < survey.pairs.size()) {
    const auto& w = survey.pairs[survey.worst];
    out["worst_pair"] = {sequences[w.x].label, sequences[w.y].label};
    out["worst_tail_max"] = to_json(w.result.tail_max);
  }
  out["pairs"] = std::move(pairs);
  return out;
}

Json to_json(const BusemannSurvey& survey,
             const std::vector<PointSequence>& sequences) {
  Json triples = Json::array();
  for (const auto& t : survey.triples) {
    Json e = to_json(t.profile);
    e["x0"] = sequences[t.x0].label;
    e["x1"] = sequences[t.x1].label;
    e["y"] = sequences[t.y].label;
    triples.push_back(std::move(e));
  }
  Json out = {{"verdict", survey.evidence ? "Busemann-convex evidence at p"
                                          : "counterexample found"},
              {"evidence", survey.evidence},
              {"midpoint_evidence", survey.midpoints.evidence},
              {"triple_count", survey.triples.size()}};
  if (survey.worst < survey.triples.size()) {
    const auto& w = survey.triples[survey.worst];
    out["worst_triple"] = {sequences[w.x0].label, sequences[w.x1].label,
                           sequences[w.y].label};
    out["worst_tail_max"] = to_json(w.profile.tail_max);
  }
  out["midpoints"] = to_json(survey.midpoints, sequences);
  out["triples"] = std::move(triples);
  return out;
}

std::string_view to_string(TheoremId id) {
  switch (id) {
    case TheoremId::kT3:
      return "T3";
    case TheoremId::kT5:
      return "T5";
    case TheoremId::kT8:
      return "T8";
    case TheoremId::kT10:
      return "T10";
  }
  return "?";
}

TheoremId parse_theorem(std::string_view text) {
  for (auto id : {TheoremId::kT3, TheoremId::kT5, TheoremId::kT8,
                  TheoremId::kT10}) {
    if (text == to_string(id)) return id;
  }
  throw InputError("unknown theorem '" + std::string(text) +
                   "' (expected T3, T5, T8 or T10)");
}

TheoremReport run_theorem_workflow(TheoremId id, const MetricOracle& oracle,
                                   const Pool& pool, std::uint64_t seed,
                                   const WorkflowConfig& config) {
  config.schedule.Validate();
  TheoremReport report;
  report.theorem = id;

  auto family = build_self_stable_family(oracle, pool.sequences,
                                         pool.normalizing, config.stability,
                                         config.threads);
  const auto& all = family.pool;

  MidpointSearchOptions mid;
  mid.budget = config.midpoint_budget;
  mid.epsilon = config.midpoint_epsilon;
  mid.threads = config.threads;
  mid.tail_fraction = config.stability.tail_fraction;

  if (id == TheoremId::kT3 || id == TheoremId::kT5) {
    const auto survey = survey_midpoints(
        oracle, all, derive_seed(seed, "theorem-midpoint"), mid);
    report.hypotheses.push_back(
        {"midpoint_convexity_at_p", survey.evidence, to_json(survey, all)});
    report.hypotheses.push_back(LiminfCheck(
        id == TheoremId::kT3 ? NormalizedFunctional::kA1
                             : NormalizedFunctional::kA2,
        oracle, seed, config));
  } else {
    const auto survey =
        survey_busemann(oracle, all, derive_seed(seed, "theorem-busemann"),
                        mid, config.busemann_epsilon);
    report.hypotheses.push_back(
        {"busemann_convexity_at_p", survey.evidence, to_json(survey, all)});
    if (id == TheoremId::kT10) {
      report.hypotheses.push_back(
          LiminfCheck(NormalizedFunctional::kA3, oracle, seed, config));
    }
  }

  const auto approx = metric_identify(family, config.tau_zero);
  const auto verdicts =
      analyze_pretangent(approx, config.tau_pass, config.threads);
  const auto busemann =
      check_finite_busemann(approx.quotient, 3.0 * approx.tau_zero);
  report.pretangent = {{"family", to_json(family)},
                       {"approximation", to_json(approx)},
                       {"verdicts", to_json(verdicts)},
                       {"finite_busemann", to_json(busemann)}};

  switch (id) {
    case TheoremId::kT3:
    case TheoremId::kT10:
      report.conclusions.push_back(
          ScanCheck("quotient_quadrilateral", verdicts.quadrilateral));
      break;
    case TheoremId::kT5:
      report.conclusions.push_back(
          ScanCheck("quotient_lebedeva_petrunin", verdicts.lebedeva_petrunin));
      break;
    case TheoremId::kT8:
      report.conclusions.push_back(
          {"quotient_finite_busemann", busemann.pass(), to_json(busemann)});
      break;
  }

  report.hypotheses_hold = AllPass(report.hypotheses);
  report.conclusion_holds = AllPass(report.conclusions);
  const bool h = report.hypotheses_hold, c = report.conclusion_holds;
  if (id == TheoremId::kT10) {
    report.agreement =
        h == c ? (h ? "consistent" : "consistent-negative") : "counterexample";
  } else if (h) {
    report.agreement = c ? "consistent" : "counterexample";
  } else {
    report.agreement = c ? "hypotheses-not-met" : "consistent-negative";
  }
  return report;
}

Json to_json(const TheoremReport& report) {
  return {{"theorem", to_string(report.theorem)},
          {"pass", report.pass()},
          {"agreement", report.agreement},
          {"hypotheses_hold", report.hypotheses_hold},
          {"conclusion_holds", report.conclusion_holds},
          {"hypotheses", ChecksJson(report.hypotheses)},
          {"conclusions", ChecksJson(report.conclusions)},
          {"pretangent", report.pretangent}};
}

}  // namespace curvlab
