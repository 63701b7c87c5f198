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

#include "curvlab/io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace curvlab {
namespace {

const Json& Field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(where + ": missing field '" + key + "'");
  }
  return j.at(key);
}

double Number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

std::size_t Index(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw InputError(where + ": expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

Point Vector(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  Point out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(Number(x, where));
  return out;
}

std::vector<Point> Matrix(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of arrays");
  std::vector<Point> out;
  out.reserve(j.size());
  for (const auto& row : j) out.push_back(Vector(row, where));
  return out;
}

std::vector<std::string> Labels(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (x.is_string()) {
      out.push_back(x.get<std::string>());
    } else if (x.is_number_integer()) {
      out.push_back(std::to_string(x.get<long long>()));
    } else {
      throw InputError(where + ": labels must be strings");
    }
  }
  return out;
}

std::vector<std::string> IndexLabels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

NormalizingSequence NormalizingFromJson(const Json& j,
                                        std::optional<std::size_t> window) {
  const std::string where = "normalizing";
  const Json& kind = Field(j, "kind", where);
  if (!kind.is_string()) throw InputError(where + ": kind must be a string");
  const auto k = kind.get<std::string>();
  if (k == "explicit") {
    auto values = Vector(Field(j, "values", where), where + ".values");
    if (window) {
      if (*window > values.size()) {
        throw InputError("window " + std::to_string(*window) +
                         " exceeds the explicit normalizing length " +
                         std::to_string(values.size()));
      }
      values.resize(*window);
    }
    return NormalizingSequence(std::move(values));
  }
  const std::size_t n = window.value_or(kDefaultWindow);
  if (k == "one_over_n") return NormalizingSequence::OneOverN(n);
  if (k == "geometric") {
    return NormalizingSequence::Geometric(
        Number(Field(j, "start", where), where + ".start"),
        Number(Field(j, "ratio", where), where + ".ratio"), n);
  }
  throw InputError("unknown normalizing kind '" + k + "'");
}

PointSequence SequenceFromJson(const Json& j, const MetricOracle& oracle,
                               const NormalizingSequence& r,
                               std::size_t position) {
  std::string where = "sequences[" + std::to_string(position) + "]";
  const Json& label = Field(j, "label", where);
  if (!label.is_string()) throw InputError(where + ": label must be a string");
  where += " '" + label.get<std::string>() + "'";
  const Json& kind = Field(j, "kind", where);
  const std::string k = kind.is_string() ? kind.get<std::string>() : "";
  PointSequence seq;
  if (k == "radial") {
    const Point dir = Vector(Field(j, "direction", where), where);
    bool alternate = false;
    if (j.contains("alternate")) {
      if (!j.at("alternate").is_boolean()) {
        throw InputError(where + ": alternate must be a boolean");
      }
      alternate = j.at("alternate").get<bool>();
    }
    seq = radial_sequence(oracle, dir, r, label.get<std::string>(), alternate);
    if (j.contains("perturbation")) {
      const Json& pert = j.at("perturbation");
      const Point v = Vector(Field(pert, "vector", where), where);
      const double power = Number(Field(pert, "power", where), where);
      for (std::size_t n = 0; n < seq.size(); ++n) {
        Point& x = seq.points[n];
        if (x.size() != v.size()) {
          throw InputError(where + ": perturbation dimension mismatch");
        }
        const double scale = std::pow(r[n], power);
        for (std::size_t c = 0; c < x.size(); ++c) x[c] += scale * v[c];
        oracle.check_point(x);
      }
    }
  } else if (k == "explicit") {
    auto points = Matrix(Field(j, "points", where), where);
    if (points.size() < r.size()) {
      throw InputError(where + ": " + std::to_string(points.size()) +
                       " points for a window of " + std::to_string(r.size()));
    }
    points.resize(r.size());
    for (const auto& x : points) oracle.check_point(x);
    seq.label = label.get<std::string>();
    seq.points = std::move(points);
  } else {
    throw InputError(where + ": unknown sequence kind '" + k + "'");
  }
  return seq;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(source + ": malformed JSON: " + e.what());
  }
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

FiniteMetricSpace finite_space_from_json(const Json& j) {
  const auto dist = Matrix(Field(j, "dist", "finite space"), "dist");
  auto labels = j.contains("labels") ? Labels(j.at("labels"), "labels")
                                     : IndexLabels(dist.size());
  return FiniteMetricSpace(std::move(labels), dist);
}

PointCloud point_cloud_from_json(const Json& j) {
  const Json& metric = Field(j, "metric", "point cloud");
  if (!metric.is_string()) throw InputError("point cloud: metric must be a string");
  const std::size_t base =
      j.contains("base_point") ? Index(j.at("base_point"), "base_point") : 0;
  const auto m = metric.get<std::string>();
  if (m == "custom-matrix") {
    return make_point_cloud(finite_space_from_json(j), base);
  }
  return make_point_cloud(m, Matrix(Field(j, "points", "point cloud"),
                                    "points"),
                          base);
}

PointCloud load_point_cloud(const std::string& path) {
  return point_cloud_from_json(parse_json(read_file(path), path));
}

FiniteMetricSpace finite_space_from_any_json(const Json& j) {
  if (j.is_object() && j.contains("metric")) {
    return point_cloud_from_json(j).space;
  }
  return finite_space_from_json(j);
}

Pool pool_from_json(const Json& j, const MetricOracle& oracle,
                    std::optional<std::size_t> window) {
  if (window && *window == 0) throw InputError("window must be >= 1");
  Pool pool;
  pool.normalizing =
      NormalizingFromJson(Field(j, "normalizing", "pool"), window);
  const Json& seqs = Field(j, "sequences", "pool");
  if (!seqs.is_array()) throw InputError("pool: sequences must be an array");
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    pool.sequences.push_back(
        SequenceFromJson(seqs[i], oracle, pool.normalizing, i));
  }
  return pool;
}

Json default_pool_json(const MetricOracle& oracle) {
  Json pool;
  pool["normalizing"] = {{"kind", "geometric"}, {"start", 1.0}, {"ratio", 0.95}};
  Json seqs = Json::array();
  const auto dirs = oracle.default_directions();
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    seqs.push_back({{"label", "v" + std::to_string(i + 1)},
                    {"kind", "radial"},
                    {"direction", dirs[i]}});
  }
  pool["sequences"] = std::move(seqs);
  return pool;
}

Json real_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json to_json(const std::vector<Point>& points) {
  Json out = Json::array();
  for (const auto& q : points) {
    Json row = Json::array();
    for (double c : q) row.push_back(real_json(c));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const FiniteMetricSpace& space) {
  Json dist = Json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < space.size(); ++j) row.push_back(space(i, j));
    dist.push_back(std::move(row));
  }
  return {{"labels", space.labels()}, {"dist", std::move(dist)}};
}

Json to_json(const ValidationReport& report) {
  Json v = Json::array();
  for (const auto& a : report.violations) {
    v.push_back({{"kind", to_string(a.kind)},
                 {"i", a.i},
                 {"j", a.j},
                 {"k", a.k},
                 {"excess", real_json(a.excess)}});
  }
  return {{"pass", report.pass},
          {"violation_count", report.violation_count},
          {"violations", std::move(v)}};
}

Json to_json(const SpotCheckReport& report) {
  return {{"pass", report.pass},
          {"triples", report.triples},
          {"worst_triangle_excess", real_json(report.worst_triangle_excess)},
          {"worst_asymmetry", real_json(report.worst_asymmetry)},
          {"worst_diagonal", real_json(report.worst_diagonal)},
          {"worst_ball_excess", real_json(report.worst_ball_excess)}};
}

Json to_json(const QuadrupleDefectReport& report) {
  Json out = {{"functional", to_string(report.functional)},
              {"mode", to_string(report.mode)},
              {"pass", report.pass()},
              {"vacuous", report.vacuous},
              {"min_defect", real_json(report.min_defect)},
              {"tolerance", report.tolerance},
              {"points", report.points},
              {"quadruples_examined", report.quadruples_examined},
              {"truncated", report.truncated}};
  if (!report.vacuous) {
    out["witness"] = report.witness;
    out["witness_labels"] = report.witness_labels;
    if (!report.witness_points.empty()) {
      out["witness_points"] = to_json(report.witness_points);
    }
  }
  return out;
}

Json to_json(const LiminfEstimate& estimate) {
  Json scales = Json::array();
  for (const auto& s : estimate.per_scale) {
    scales.push_back(
        {{"scale", s.scale},
         {"min_value", real_json(s.min_value)},
         {"witness", to_json(std::vector<Point>(s.witness.begin(),
                                                s.witness.end()))},
         {"examined", s.examined},
         {"truncated", s.truncated},
         {"points", s.points}});
  }
  return {{"functional", estimate.functional},
          {"pass", estimate.pass},
          {"tail_inf", real_json(estimate.tail_inf)},
          {"tail_count", estimate.tail_count},
          {"epsilon", estimate.epsilon},
          {"samples_per_scale", estimate.samples_per_scale},
          {"anchors", estimate.anchors},
          {"per_scale", std::move(scales)}};
}

Json to_json(const StabilityEstimate& estimate) {
  return {{"status", to_string(estimate.status)},
          {"limit", real_json(estimate.limit)},
          {"oscillation", real_json(estimate.oscillation)}};
}

Json to_json(const SelfStableFamily& family) {
  Json pool = Json::array();
  for (const auto& s : family.pool) pool.push_back(s.label);
  Json rejected = Json::array();
  for (const auto& r : family.rejected) {
    rejected.push_back({{"candidate", family.pool[r.candidate].label},
                        {"blocker", family.pool[r.blocker].label},
                        {"status", to_string(r.status)},
                        {"estimate", to_json(family.pair(r.candidate,
                                                         r.blocker))}});
  }
  Json pairs = Json::array();
  for (std::size_t a = 0; a < family.accepted.size(); ++a) {
    for (std::size_t b = a + 1; b < family.accepted.size(); ++b) {
      const std::size_t i = family.accepted[a], j = family.accepted[b];
      Json e = to_json(family.pair(i, j));
      e["pair"] = {family.pool[i].label, family.pool[j].label};
      pairs.push_back(std::move(e));
    }
  }
  return {{"pool_order", std::move(pool)},
          {"accepted", family.accepted_labels()},
          {"rejected", std::move(rejected)},
          {"accepted_pairs", std::move(pairs)},
          {"tolerances",
           {{"tau_stab", family.tolerances.stable},
            {"tau_unstab", family.tolerances.unstable},
            {"tail_fraction", family.tolerances.tail_fraction}}}};
}

Json to_json(const PretangentApproximation& approx) {
  Json proj = Json::object();
  for (std::size_t i = 0; i < approx.projection.size(); ++i) {
    proj[approx.accepted_labels[i]] = approx.projection[i];
  }
  return {{"quotient", to_json(approx.quotient)},
          {"projection", std::move(proj)},
          {"contains_base_class", approx.contains_base_class},
          {"base_class", approx.base_class},
          {"max_limit_deviation", real_json(approx.max_limit_deviation)},
          {"tau_stab", approx.tau_stab},
          {"tau_zero", approx.tau_zero},
          {"certificate_tolerance", 3.0 * approx.tau_zero}};
}

Json to_json(const PretangentVerdicts& verdicts) {
  return {{"all_pass", verdicts.all_pass()},
          {"quadrilateral", to_json(verdicts.quadrilateral)},
          {"lebedeva_petrunin", to_json(verdicts.lebedeva_petrunin)},
          {"ptolemy", to_json(verdicts.ptolemy)}};
}

Json to_json(const ExtendedDefect& defect) {
  if (defect.is_infinite()) return "inf";
  return defect.value();
}

Json to_json(const std::vector<ExtendedDefect>& profile) {
  Json out = Json::array();
  for (const auto& d : profile) out.push_back(to_json(d));
  return out;
}

Json to_json(const MidpointSearchResult& result) {
  return {{"verdict", result.evidence ? "midpoint-convex evidence"
                                      : "counterexample found"},
          {"evidence", result.evidence},
          {"analytic", result.analytic},
          {"epsilon", result.epsilon},
          {"tail_max", to_json(result.tail_max)},
          {"profile", to_json(result.profile)}};
}

Json to_json(const BusemannProfile& profile) {
  return {{"verdict", profile.evidence ? "Busemann-convex evidence at p"
                                       : "counterexample found"},
          {"evidence", profile.evidence},
          {"epsilon", profile.epsilon},
          {"tail_max", to_json(profile.tail_max)},
          {"midpoint_tail_max", to_json(profile.midpoint_tail_max)},
          {"profile", to_json(profile.profile)}};
}

Json to_json(const FiniteBusemannReport& report) {
  Json out = {{"pass", report.pass()},
              {"vacuous", report.vacuous()},
              {"midpoint_triples", report.midpoint_triples},
              {"max_violation", real_json(report.max_violation)},
              {"tolerance", report.tolerance}};
  if (!report.vacuous()) {
    out["witness"] = {{"x0", report.witness_labels[0]},
                      {"x1", report.witness_labels[1]},
                      {"m", report.witness_labels[2]},
                      {"y", report.witness_labels[3]}};
  }
  return out;
}

}  // namespace curvlab
