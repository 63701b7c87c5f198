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

// JSON ingestion of finite spaces, point clouds and sequence pools; JSON
// serialization of every report; SHA-256 input digests.

#ifndef CURVLAB_IO_HPP_
#define CURVLAB_IO_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curvlab/convexity.hpp"
#include "curvlab/four_point.hpp"
#include "curvlab/infinitesimal.hpp"
#include "curvlab/metric_core.hpp"
#include "curvlab/pretangent.hpp"
#include "curvlab/spaces.hpp"
#include "json.hpp"

namespace curvlab {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kToolVersion = "0.1.0";

// Throws InputError when the file cannot be read or parsed.
std::string read_file(const std::string& path);
Json parse_json(std::string_view text, const std::string& source);

std::string sha256_hex(std::string_view bytes);

// {"labels": [...], "dist": [[...], ...]}
FiniteMetricSpace finite_space_from_json(const Json& j);
// {"metric": "euclidean"|"l1"|"linf"|"custom-matrix", "points": [[...]],
//  "base_point": i}; custom-matrix clouds carry "dist" and optional
// "labels" instead of "points".
PointCloud point_cloud_from_json(const Json& j);
PointCloud load_point_cloud(const std::string& path);

// Finite-space or point-cloud JSON, whichever the document holds.
FiniteMetricSpace finite_space_from_any_json(const Json& j);

struct Pool {
  NormalizingSequence normalizing{std::vector<double>{1.0}};
  std::vector<PointSequence> sequences;
};

// Pool document:
//   {"normalizing": {"kind": "one_over_n"} |
//                   {"kind": "geometric", "start": s, "ratio": q} |
//                   {"kind": "explicit", "values": [...]},
//    "sequences": [{"label": l, "kind": "radial", "direction": [...],
//                   "alternate": false,
//                   "perturbation": {"vector": [...], "power": k}} |
//                  {"label": l, "kind": "explicit", "points": [[...]]}]}
// Windows of N terms; N defaults to the explicit normalizing length or
// kDefaultWindow.
Pool pool_from_json(const Json& j, const MetricOracle& oracle,
                    std::optional<std::size_t> window = std::nullopt);

// Geometric(1, 0.95) normalization and one radial sequence per default
// direction of the oracle.
Json default_pool_json(const MetricOracle& oracle);

// +inf, -inf and NaN become the strings "inf", "-inf", "nan".
Json real_json(double x);

Json to_json(const std::vector<Point>& points);
Json to_json(const FiniteMetricSpace& space);
Json to_json(const ValidationReport& report);
Json to_json(const SpotCheckReport& report);
Json to_json(const QuadrupleDefectReport& report);
Json to_json(const LiminfEstimate& estimate);
Json to_json(const StabilityEstimate& estimate);
Json to_json(const SelfStableFamily& family);
Json to_json(const PretangentApproximation& approx);
Json to_json(const PretangentVerdicts& verdicts);
Json to_json(const ExtendedDefect& defect);
Json to_json(const std::vector<ExtendedDefect>& profile);
Json to_json(const MidpointSearchResult& result);
Json to_json(const BusemannProfile& profile);
Json to_json(const FiniteBusemannReport& report);

}  // namespace curvlab

#endif  // CURVLAB_IO_HPP_
