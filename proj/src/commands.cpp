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

#include "curvlab/commands.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "curvlab/random.hpp"
#include "curvlab/spaces.hpp"
#include "curvlab/workflow.hpp"

namespace curvlab {
namespace {

struct Global {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out;
};

// Execution-only options; they never change a report.
bool IsExecutionFlag(const std::string& name) {
  return name == "help" || name == "threads" || name == "out" ||
         name == "csv" || name == "csv-dir";
}

class Run {
 public:
  Run(std::string command, const CLI::App& sub, const Global& global)
      : command_(std::move(command)),
        sub_(sub),
        global_(global),
        start_(std::chrono::steady_clock::now()) {}

  const Global& global() const { return global_; }

  std::string ReadInput(const std::string& role, const std::string& path) {
    std::string bytes = read_file(path);
    digests_.push_back(
        {{"role", role}, {"path", path}, {"sha256", sha256_hex(bytes)}});
    return bytes;
  }

  Json Finish(Json tolerances, Json result, int exit_code) const {
    Json flags = Json::object();
    for (const CLI::Option* o : sub_.get_options()) {
      const std::string name = o->get_single_name();
      if (IsExecutionFlag(name)) continue;
      if (o->count() > 0) {
        std::string v;
        for (const auto& r : o->results()) v += (v.empty() ? "" : ",") + r;
        flags[name] = v;
      } else if (o->get_default_str().empty()) {
        flags[name] = nullptr;
      } else {
        flags[name] = o->get_default_str();
      }
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start_)
                            .count();
    Json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = command_;
    report["manifest"] = {{"command", command_},
                          {"flags", std::move(flags)},
                          {"seed", global_.seed},
                          {"tool_version", kToolVersion},
                          {"input_digests", digests_},
                          {"duration_seconds", secs}};
    report["tolerances"] = std::move(tolerances);
    report["exit_code"] = exit_code;
    report["result"] = std::move(result);
    return report;
  }

 private:
  std::string command_;
  const CLI::App& sub_;
  const Global& global_;
  Json digests_ = Json::array();
  std::chrono::steady_clock::time_point start_;
};

struct LoadedSpace {
  BuiltinSpace spec;
  std::unique_ptr<MetricOracle> oracle;
};

LoadedSpace LoadSpace(Run& run, const std::string& spec) {
  if (spec.rfind("cloud:", 0) == 0) run.ReadInput("cloud", spec.substr(6));
  LoadedSpace s{parse_space_spec(spec), nullptr};
  s.oracle = make_oracle(s.spec);
  return s;
}

Pool LoadPool(Run& run, const MetricOracle& oracle, const std::string& path,
              std::optional<std::size_t> window) {
  if (path.empty()) {
    return pool_from_json(default_pool_json(oracle), oracle, window);
  }
  return pool_from_json(parse_json(run.ReadInput("pool", path), path), oracle,
                        window);
}

std::optional<std::size_t> Window(std::size_t w) {
  if (w == 0) return std::nullopt;
  return w;
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
}

void Emit(const Json& report, const Global& g, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (g.out.empty()) {
    out << text;
  } else {
    WriteText(g.out, text);
  }
}

std::string Real(const Json& v) {
  if (v.is_number()) {
    std::ostringstream ss;
    ss << std::setprecision(17) << v.get<double>();
    return ss.str();
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::vector<std::size_t> ParseRestriction(const std::string& text,
                                          std::size_t window) {
  if (text == "even") return parity_indices(window, true);
  if (text == "odd") return parity_indices(window, false);
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    long long n = 0;
    try {
      n = std::stoll(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size() || n < 1 || static_cast<std::size_t>(n) > window) {
      throw InputError("bad restriction term '" + item + "' (1.." +
                       std::to_string(window) + ")");
    }
    out.push_back(static_cast<std::size_t>(n - 1));
  }
  if (out.empty()) throw InputError("empty restriction");
  return out;
}

Json StabilityJson(const StabilityTolerances& t) {
  return {{"tau_stab", t.stable},
          {"tau_unstab", t.unstable},
          {"tail_fraction", t.tail_fraction}};
}

// --- validate ---------------------------------------------------------------

struct ValidateArgs {
  std::string input, space;
  double tol = kDefaultMetricTolerance;
  double scale = 1.0;
  std::size_t triples = 10000;
};

int DoValidate(Run& run, const ValidateArgs& a, std::ostream& out) {
  if (a.input.empty() == a.space.empty()) {
    throw InputError("validate needs exactly one of --input and --space");
  }
  if (!a.input.empty()) {
    const auto space = finite_space_from_any_json(
        parse_json(run.ReadInput("input", a.input), a.input));
    const auto report = validate_metric(space, a.tol);
    Json result = to_json(report);
    result["points"] = space.size();
    const int code = report.pass ? kExitPass : kExitViolation;
    Emit(run.Finish({{"metric", a.tol}}, std::move(result), code),
         run.global(), out);
    return code;
  }
  auto s = LoadSpace(run, a.space);
  Rng rng(run.global().seed, "validate-spot");
  const auto report = spot_validate(*s.oracle, a.scale, a.triples, rng);
  Json result = to_json(report);
  result["space"] = s.oracle->name();
  result["scale"] = a.scale;
  const int code = report.pass ? kExitPass : kExitViolation;
  Emit(run.Finish({{"relative", 1e-12}}, std::move(result), code),
       run.global(), out);
  return code;
}

// --- scan -------------------------------------------------------------------

struct ScanArgs {
  std::string space, input, functional;
  double scale = 1.0;
  std::size_t samples = 30;
  double tol = 1e-9;
  double metric_tol = kDefaultMetricTolerance;
  std::uint64_t budget = kDefaultQuadrupleBudget;
};

int DoScan(Run& run, const ScanArgs& a, std::ostream& out) {
  if (a.input.empty() == a.space.empty()) {
    throw InputError("scan needs exactly one of --input and --space");
  }
  const Functional f = parse_functional(a.functional);
  ScanOptions opts;
  opts.tolerance = a.tol;
  opts.metric_tolerance = a.metric_tol;
  opts.threads = run.global().threads;
  opts.quadruple_budget = a.budget;
  QuadrupleDefectReport report;
  Json tolerances = {{"pass", a.tol}};
  if (!a.input.empty()) {
    const auto space = finite_space_from_any_json(
        parse_json(run.ReadInput("input", a.input), a.input));
    report = scan_finite(space, f, opts);
    tolerances["metric"] = a.metric_tol;
  } else {
    auto s = LoadSpace(run, a.space);
    report = scan_sampled(*s.oracle, a.scale, a.samples, f, run.global().seed,
                          opts);
  }
  const int code = report.pass() ? kExitPass : kExitViolation;
  Emit(run.Finish(std::move(tolerances), to_json(report), code), run.global(),
       out);
  return code;
}

// --- liminf -----------------------------------------------------------------

struct LiminfArgs {
  std::string space, functional, scales = "geometric:0.5,0.5,10", csv;
  std::size_t samples = 60;
  std::optional<double> eps;
  bool no_anchors = false;
  std::uint64_t budget = kLiminfQuadrupleBudget;
};

int DoLiminf(Run& run, const LiminfArgs& a, std::ostream& out) {
  const auto f = parse_normalized_functional(a.functional);
  auto s = LoadSpace(run, a.space);
  const auto schedule = ScaleSchedule::Parse(a.scales, a.samples);
  LiminfOptions opts;
  opts.epsilon = a.eps;
  opts.anchors = !a.no_anchors;
  opts.quadruple_budget = a.budget;
  opts.threads = run.global().threads;
  const auto est =
      estimate_liminf(f, *s.oracle, schedule, run.global().seed, opts);
  Json result = to_json(est);
  if (!a.csv.empty()) WriteText(a.csv, liminf_csv(result));
  const int code = est.pass ? kExitPass : kExitViolation;
  Emit(run.Finish({{"epsilon", est.epsilon}}, std::move(result), code),
       run.global(), out);
  return code;
}

// --- pretangent -------------------------------------------------------------

struct PretangentArgs {
  std::string space, pool, restrict;
  std::size_t window = 0;
  StabilityTolerances stability;
  double tau_zero = kDefaultZeroTolerance;
  double tau_pass = 1e-9;
};

Json PretangentTolerances(const PretangentArgs& a) {
  Json t = StabilityJson(a.stability);
  t["tau_zero"] = a.tau_zero;
  t["certificate"] = 3.0 * a.tau_zero;
  t["tau_pass"] = a.tau_pass;
  return t;
}

int DoPretangent(Run& run, const PretangentArgs& a, std::ostream& out) {
  auto s = LoadSpace(run, a.space);
  Pool pool = LoadPool(run, *s.oracle, a.pool, Window(a.window));
  const unsigned threads = run.global().threads;
  Json result;
  result["pool_source"] = a.pool.empty() ? "default" : a.pool;
  result["window"] = pool.normalizing.size();

  auto full = build_self_stable_family(*s.oracle, pool.sequences,
                                       pool.normalizing, a.stability, threads);
  const SelfStableFamily* family = &full;
  std::optional<SelfStableFamily> restricted;
  bool restriction_ok = true;
  if (!a.restrict.empty()) {
    const auto idx = ParseRestriction(a.restrict, pool.normalizing.size());
    std::vector<PointSequence> seqs;
    NormalizingSequence r = pool.normalizing;
    for (const auto& x : pool.sequences) {
      auto [xr, rr] = restrict_to_subsequence(x, pool.normalizing, idx);
      seqs.push_back(std::move(xr));
      r = std::move(rr);
    }
    restricted = build_self_stable_family(*s.oracle, std::move(seqs), r,
                                          a.stability, threads);
    double shift = 0.0;
    std::size_t compared = 0;
    const std::size_t n = full.pool.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto& before = full.pair(i, j);
        const auto& after = restricted->pair(i, j);
        if (before.status != Stability::kStable ||
            after.status != Stability::kStable) {
          continue;
        }
        ++compared;
        shift = std::max(shift, std::abs(before.limit - after.limit));
      }
    }
    restriction_ok = shift <= 2.0 * a.stability.stable;
    result["restriction"] = {{"spec", a.restrict},
                             {"terms", idx.size()},
                             {"pairs_compared", compared},
                             {"max_limit_shift", shift},
                             {"bound", 2.0 * a.stability.stable},
                             {"pass", restriction_ok}};
    family = &*restricted;
  }
  result["family"] = to_json(*family);
  int code = kExitPass;
  try {
    const auto approx = metric_identify(*family, a.tau_zero);
    const auto verdicts = analyze_pretangent(approx, a.tau_pass, threads);
    result["approximation"] = to_json(approx);
    result["verdicts"] = to_json(verdicts);
    if (!verdicts.all_pass() || !restriction_ok) code = kExitViolation;
  } catch (const CertificateError& e) {
    const auto& t = e.triple();
    result["certificate_failure"] = {{"message", e.what()},
                                     {"triple", t},
                                     {"excess", e.excess()}};
    code = kExitViolation;
  }
  Emit(run.Finish(PretangentTolerances(a), std::move(result), code),
       run.global(), out);
  return code;
}

// --- convexity --------------------------------------------------------------

struct ConvexityArgs {
  std::string space, mode, pool, search = "auto", csv;
  std::size_t window = 0;
  std::size_t budget = 10000;
  std::optional<double> eps, eps_bus;
  double tail_fraction = 0.5;
};

MidpointMode ParseSearch(const std::string& s) {
  if (s == "auto") return MidpointMode::kAuto;
  if (s == "analytic") return MidpointMode::kAnalytic;
  if (s == "random") return MidpointMode::kRandomSearch;
  throw InputError("unknown --search '" + s + "'");
}

Json ConvexityTolerances(std::optional<double> eps,
                         std::optional<double> eps_bus, double tail) {
  Json t;
  t["epsilon_mid_analytic"] = eps.value_or(kAnalyticEpsilon);
  t["epsilon_mid_random"] = eps.value_or(kRandomSearchEpsilon);
  t["epsilon_bus"] = eps_bus ? Json(*eps_bus) : Json("epsilon_mid of the pair");
  t["tail_fraction"] = tail;
  return t;
}

int DoConvexity(Run& run, const ConvexityArgs& a, std::ostream& out) {
  if (a.mode != "midpoint" && a.mode != "busemann") {
    throw InputError("--mode must be midpoint or busemann");
  }
  auto s = LoadSpace(run, a.space);
  Pool pool = LoadPool(run, *s.oracle, a.pool, Window(a.window));
  std::vector<PointSequence> seqs;
  seqs.push_back(
      constant_sequence(s.oracle->base_point(), pool.normalizing.size()));
  for (auto& x : pool.sequences) seqs.push_back(std::move(x));

  MidpointSearchOptions opts;
  opts.budget = a.budget;
  opts.mode = ParseSearch(a.search);
  opts.epsilon = a.eps;
  opts.tail_fraction = a.tail_fraction;
  opts.threads = run.global().threads;

  Json result;
  result["pool_source"] = a.pool.empty() ? "default" : a.pool;
  result["mode"] = a.mode;
  bool evidence = false;
  Json worst_profile = Json::array();
  if (a.mode == "midpoint") {
    const auto survey = survey_midpoints(*s.oracle, seqs, run.global().seed,
                                         opts);
    evidence = survey.evidence;
    result["survey"] = to_json(survey, seqs);
    if (survey.worst < survey.pairs.size()) {
      worst_profile = to_json(survey.pairs[survey.worst].result.profile);
    }
  } else {
    const auto survey = survey_busemann(*s.oracle, seqs, run.global().seed,
                                        opts, a.eps_bus);
    evidence = survey.evidence;
    result["survey"] = to_json(survey, seqs);
    if (survey.worst < survey.triples.size()) {
      worst_profile = to_json(survey.triples[survey.worst].profile.profile);
    }
  }
  if (!a.csv.empty()) WriteText(a.csv, profile_csv(worst_profile));
  const int code = evidence ? kExitPass : kExitViolation;
  Emit(run.Finish(ConvexityTolerances(a.eps, a.eps_bus, a.tail_fraction),
                  std::move(result), code),
       run.global(), out);
  return code;
}

// --- theorem ----------------------------------------------------------------

struct TheoremArgs {
  std::string space, theorem, pool, scales = "geometric:0.5,0.5,10";
  std::size_t window = 0;
  std::size_t samples = 60;
  std::size_t budget = 10000;
  std::optional<double> eps, eps_mid, eps_bus;
  StabilityTolerances stability;
  double tau_zero = kDefaultZeroTolerance;
  double tau_pass = 1e-9;
};

int DoTheorem(Run& run, const TheoremArgs& a, std::ostream& out) {
  const TheoremId id = parse_theorem(a.theorem);
  auto s = LoadSpace(run, a.space);
  Pool pool = LoadPool(run, *s.oracle, a.pool, Window(a.window));
  WorkflowConfig config;
  config.schedule = ScaleSchedule::Parse(a.scales, a.samples);
  config.liminf_epsilon = a.eps;
  config.midpoint_budget = a.budget;
  config.midpoint_epsilon = a.eps_mid;
  config.busemann_epsilon = a.eps_bus;
  config.stability = a.stability;
  config.tau_zero = a.tau_zero;
  config.tau_pass = a.tau_pass;
  config.threads = run.global().threads;
  Json result;
  int code = kExitPass;
  try {
    const auto report =
        run_theorem_workflow(id, *s.oracle, pool, run.global().seed, config);
    result = to_json(report);
    code = report.pass() ? kExitPass : kExitViolation;
  } catch (const CertificateError& e) {
    result = {{"theorem", to_string(id)},
              {"pass", false},
              {"certificate_failure",
               {{"message", e.what()},
                {"triple", e.triple()},
                {"excess", e.excess()}}}};
    code = kExitViolation;
  }
  result["pool_source"] = a.pool.empty() ? "default" : a.pool;
  Json tol = StabilityJson(a.stability);
  tol["tau_zero"] = a.tau_zero;
  tol["certificate"] = 3.0 * a.tau_zero;
  tol["tau_pass"] = a.tau_pass;
  tol["liminf_epsilon"] =
      a.eps ? Json(*a.eps) : Json(default_liminf_epsilon(*s.oracle));
  const Json conv =
      ConvexityTolerances(a.eps_mid, a.eps_bus, a.stability.tail_fraction);
  for (const auto& [k, v] : conv.items()) {
    if (k != "tail_fraction") tol[k] = v;
  }
  Emit(run.Finish(std::move(tol), std::move(result), code), run.global(),
       out);
  return code;
}

// --- render -----------------------------------------------------------------

struct RenderArgs {
  std::string report, csv_dir;
};

int DoRender(Run& run, const RenderArgs& a, std::ostream& out) {
  const Json report = parse_json(run.ReadInput("report", a.report), a.report);
  std::vector<CsvFile> csv;
  const std::string text = render_report(report, &csv);
  if (!a.csv_dir.empty()) {
    std::filesystem::create_directories(a.csv_dir);
    for (const auto& f : csv) {
      WriteText((std::filesystem::path(a.csv_dir) / f.name).string(),
                f.content);
    }
  }
  if (run.global().out.empty()) {
    out << text;
  } else {
    WriteText(run.global().out, text);
  }
  return kExitPass;
}

// --- rendering helpers ------------------------------------------------------

const char* PassWord(bool pass) { return pass ? "pass" : "FAIL"; }

std::string ScanLine(const Json& r) {
  const std::string f = r.value("functional", std::string("?"));
  if (r.value("vacuous", false)) return f + ": vacuous pass\n";
  std::string line = f + ": " + PassWord(r.value("pass", false)) +
                     ", min_defect = " + Real(r.value("min_defect", Json())) +
                     " (tolerance " + Real(r.value("tolerance", Json())) + ")";
  if (r.contains("witness_labels")) {
    line += ", witness (";
    bool first = true;
    for (const auto& l : r.at("witness_labels")) {
      line += (first ? "" : ", ") + l.get<std::string>();
      first = false;
    }
    line += ")";
  }
  return line + "\n";
}

std::string LiminfText(const Json& r) {
  std::ostringstream ss;
  ss << r.value("functional", std::string("?"))
     << " liminf: " << PassWord(r.value("pass", false))
     << ", tail_inf = " << Real(r.value("tail_inf", Json())) << " over the last "
     << r.value("tail_count", 0) << " of "
     << r.value("per_scale", Json::array()).size() << " scales (epsilon "
     << Real(r.value("epsilon", Json())) << ")\n";
  return ss.str();
}

std::string Require(const Json& report, const char* key) {
  if (!report.contains(key)) {
    throw InputError(std::string("malformed report: missing '") + key + "'");
  }
  return report.at(key).is_string() ? report.at(key).get<std::string>()
                                    : report.at(key).dump();
}

}  // namespace

std::string liminf_csv(const Json& liminf_result) {
  std::string out = "scale,min_defect\n";
  for (const auto& s : liminf_result.value("per_scale", Json::array())) {
    out += Real(s.at("scale")) + "," + Real(s.at("min_value")) + "\n";
  }
  return out;
}

std::string profile_csv(const Json& profile) {
  std::string out = "index,defect\n";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out += std::to_string(i + 1) + "," + Real(profile[i]) + "\n";
  }
  return out;
}

std::string render_report(const Json& report, std::vector<CsvFile>* csv) {
  if (!report.is_object() || !report.contains("schema_version") ||
      !report.at("schema_version").is_number_integer()) {
    throw InputError("malformed report: missing schema_version");
  }
  if (report.at("schema_version").get<int>() != kSchemaVersion) {
    throw InputError("unsupported schema_version " +
                     report.at("schema_version").dump());
  }
  const std::string command = Require(report, "command");
  if (!report.contains("result") || !report.at("result").is_object()) {
    throw InputError("malformed report: missing 'result'");
  }
  const Json& r = report.at("result");
  std::ostringstream ss;
  ss << "curvature-lab " << command << " report (schema "
     << kSchemaVersion << ")\n";
  auto add_csv = [&](std::string name, std::string content) {
    if (csv) csv->push_back({std::move(name), std::move(content)});
  };
  if (command == "validate") {
    if (r.contains("violation_count")) {
      ss << "metric axioms: " << PassWord(r.value("pass", false)) << " ("
         << r.value("violation_count", 0) << " violations)\n";
    } else {
      ss << "spot validation: " << PassWord(r.value("pass", false)) << " ("
         << r.value("triples", 0) << " triples)\n";
    }
  } else if (command == "scan") {
    ss << ScanLine(r);
  } else if (command == "liminf") {
    ss << LiminfText(r);
    add_csv("liminf.csv", liminf_csv(r));
  } else if (command == "pretangent") {
    if (r.contains("certificate_failure")) {
      ss << "quotient certificate: FAIL, "
         << r.at("certificate_failure").value("message", std::string()) << "\n";
    }
    if (r.contains("approximation")) {
      ss << "quotient: "
         << r.at("approximation").at("quotient").at("labels").size()
         << " points\n";
    }
    if (r.contains("verdicts")) {
      for (const char* k : {"quadrilateral", "lebedeva_petrunin", "ptolemy"}) {
        ss << ScanLine(r.at("verdicts").at(k));
      }
    }
    if (r.contains("restriction")) {
      ss << "restriction " << Require(r.at("restriction"), "spec") << ": "
         << PassWord(r.at("restriction").value("pass", false))
         << ", max limit shift "
         << Real(r.at("restriction").value("max_limit_shift", Json())) << "\n";
    }
  } else if (command == "convexity") {
    const Json& s = r.value("survey", Json::object());
    ss << r.value("mode", std::string("?")) << ": "
       << s.value("verdict", std::string("?"));
    if (s.contains("worst_tail_max")) {
      ss << ", worst tail max " << Real(s.at("worst_tail_max"));
    }
    ss << "\n";
    const char* list = s.contains("triples") ? "triples" : "pairs";
    const Json items = s.value(list, Json::array());
    if (s.contains("worst_tail_max")) {
      for (const auto& item : items) {
        if (item.value("tail_max", Json()) == s.at("worst_tail_max")) {
          add_csv("profile.csv", profile_csv(item.at("profile")));
          break;
        }
      }
    }
  } else if (command == "theorem") {
    ss << "theorem " << r.value("theorem", std::string("?")) << ": "
       << r.value("agreement", std::string("?")) << "\n";
    for (const char* part : {"hypotheses", "conclusions"}) {
      const char* word =
          std::string(part) == "hypotheses" ? "hypothesis" : "conclusion";
      for (const auto& c : r.value(part, Json::array())) {
        ss << word << " " << c.value("name", std::string("?")) << ": "
           << (c.value("pass", false) ? "pass" : "FAILED") << "\n";
        const Json& d = c.value("detail", Json::object());
        if (d.contains("per_scale")) {
          ss << "  " << LiminfText(d);
          add_csv("liminf.csv", liminf_csv(d));
        } else if (d.contains("min_defect") || d.contains("vacuous")) {
          ss << "  " << ScanLine(d);
        }
      }
    }
    if (r.contains("certificate_failure")) {
      ss << "quotient certificate: FAIL\n";
    }
  } else {
    throw InputError("malformed report: unknown command '" + command + "'");
  }
  return ss.str();
}

Json strip_duration(Json report) {
  if (report.is_object() && report.contains("manifest") &&
      report.at("manifest").is_object()) {
    report.at("manifest").erase("duration_seconds");
  }
  return report;
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Infinitesimal curvature diagnostics for pointed metric spaces",
               "curvature-lab"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kToolVersion));
  Global g;
  app.add_option("--seed", g.seed, "Master random seed");
  app.add_option("--threads", g.threads, "Worker threads")
      ->check(CLI::Range(1u, 1024u));
  app.add_option("--out", g.out, "Write the report to this file");

  auto add_stability = [](CLI::App* sub, StabilityTolerances& t,
                          double& tau_zero) {
    sub->add_option("--tau-stab", t.stable);
    sub->add_option("--tau-unstab", t.unstable);
    sub->add_option("--tail-fraction", t.tail_fraction);
    sub->add_option("--tau-zero", tau_zero);
  };

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check metric axioms");
  validate->add_option("--input", va.input, "Finite space or point cloud JSON");
  validate->add_option("--space", va.space, "Built-in space (spot check)");
  validate->add_option("--tol", va.tol);
  validate->add_option("--scale", va.scale);
  validate->add_option("--triples", va.triples);

  ScanArgs sa;
  auto* scan = app.add_subcommand("scan", "Four-point defect scan");
  scan->add_option("--space", sa.space);
  scan->add_option("--input", sa.input);
  scan->add_option("--functional", sa.functional, "quad|lp|ptolemy")
      ->required();
  scan->add_option("--scale", sa.scale);
  scan->add_option("--samples", sa.samples);
  scan->add_option("--tol", sa.tol);
  scan->add_option("--metric-tol", sa.metric_tol);
  scan->add_option("--budget", sa.budget, "Quadruple budget (0: unlimited)");

  LiminfArgs la;
  double liminf_eps = 0.0;
  auto* liminf = app.add_subcommand("liminf", "Normalized liminf estimate");
  liminf->add_option("--space", la.space)->required();
  liminf->add_option("--functional", la.functional, "a1|a2|a3")->required();
  liminf->add_option("--scales", la.scales);
  liminf->add_option("--samples", la.samples);
  auto* liminf_eps_opt = liminf->add_option("--eps", liminf_eps)
      ->default_str("");
  liminf->add_flag("--no-anchors", la.no_anchors);
  liminf->add_option("--budget", la.budget);
  liminf->add_option("--csv", la.csv, "scale,min_defect CSV");

  PretangentArgs pa;
  auto* pretangent =
      app.add_subcommand("pretangent", "Pretangent approximation from a pool");
  pretangent->add_option("--space", pa.space)->required();
  pretangent->add_option("--pool", pa.pool);
  pretangent->add_option("--window", pa.window, "0: pool default");
  pretangent->add_option("--restrict", pa.restrict, "even|odd|n1,n2,...");
  pretangent->add_option("--tau-pass", pa.tau_pass);
  add_stability(pretangent, pa.stability, pa.tau_zero);

  ConvexityArgs ca;
  double conv_eps = 0.0, conv_eps_bus = 0.0;
  auto* convexity =
      app.add_subcommand("convexity", "Midpoint or Busemann convexity at p");
  convexity->add_option("--space", ca.space)->required();
  convexity->add_option("--mode", ca.mode, "midpoint|busemann")->required();
  convexity->add_option("--pool", ca.pool);
  convexity->add_option("--window", ca.window);
  convexity->add_option("--budget", ca.budget);
  convexity->add_option("--search", ca.search, "auto|analytic|random");
  auto* conv_eps_opt = convexity->add_option("--eps", conv_eps)
      ->default_str("");
  auto* conv_eps_bus_opt = convexity->add_option("--eps-bus", conv_eps_bus)
      ->default_str("");
  convexity->add_option("--tail-fraction", ca.tail_fraction);
  convexity->add_option("--csv", ca.csv, "index,defect CSV");

  TheoremArgs ta;
  double thm_eps = 0.0, thm_eps_mid = 0.0, thm_eps_bus = 0.0;
  auto* theorem = app.add_subcommand("theorem", "Theorem-level workflow");
  theorem->add_option("--space", ta.space)->required();
  theorem->add_option("--theorem", ta.theorem, "T3|T5|T8|T10")->required();
  theorem->add_option("--pool", ta.pool);
  theorem->add_option("--window", ta.window);
  theorem->add_option("--scales", ta.scales);
  theorem->add_option("--samples", ta.samples);
  theorem->add_option("--budget", ta.budget);
  auto* thm_eps_opt = theorem->add_option("--eps", thm_eps)
      ->default_str("");
  auto* thm_eps_mid_opt = theorem->add_option("--eps-mid", thm_eps_mid)
      ->default_str("");
  auto* thm_eps_bus_opt = theorem->add_option("--eps-bus", thm_eps_bus)
      ->default_str("");
  theorem->add_option("--tau-pass", ta.tau_pass);
  add_stability(theorem, ta.stability, ta.tau_zero);

  RenderArgs ra;
  auto* render = app.add_subcommand("render", "Render a report as text");
  render->add_option("--report", ra.report)->required();
  render->add_option("--csv-dir", ra.csv_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitInputError;
  }

  auto opt = [](CLI::Option* o, double v) -> std::optional<double> {
    if (o->count() == 0) return std::nullopt;
    return v;
  };

  try {
    if (validate->parsed()) {
      Run run("validate", *validate, g);
      return DoValidate(run, va, out);
    }
    if (scan->parsed()) {
      Run run("scan", *scan, g);
      return DoScan(run, sa, out);
    }
    if (liminf->parsed()) {
      la.eps = opt(liminf_eps_opt, liminf_eps);
      Run run("liminf", *liminf, g);
      return DoLiminf(run, la, out);
    }
    if (pretangent->parsed()) {
      Run run("pretangent", *pretangent, g);
      return DoPretangent(run, pa, out);
    }
    if (convexity->parsed()) {
      ca.eps = opt(conv_eps_opt, conv_eps);
      ca.eps_bus = opt(conv_eps_bus_opt, conv_eps_bus);
      Run run("convexity", *convexity, g);
      return DoConvexity(run, ca, out);
    }
    if (theorem->parsed()) {
      ta.eps = opt(thm_eps_opt, thm_eps);
      ta.eps_mid = opt(thm_eps_mid_opt, thm_eps_mid);
      ta.eps_bus = opt(thm_eps_bus_opt, thm_eps_bus);
      Run run("theorem", *theorem, g);
      return DoTheorem(run, ta, out);
    }
    if (render->parsed()) {
      Run run("render", *render, g);
      return DoRender(run, ra, out);
    }
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace curvlab
