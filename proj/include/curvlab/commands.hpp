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

// The curvature-lab command line: validate, scan, liminf, pretangent,
// convexity, theorem and render.

#ifndef CURVLAB_COMMANDS_HPP_
#define CURVLAB_COMMANDS_HPP_

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "curvlab/io.hpp"

namespace curvlab {

enum ExitCode : int {
  kExitPass = 0,
  kExitViolation = 1,
  kExitInputError = 2,
};

// Parses argv and runs one subcommand. The JSON report goes to `out` unless
// --out names a file; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

// Copy of a report without manifest.duration_seconds.
Json strip_duration(Json report);

struct CsvFile {
  std::string name;
  std::string content;
};

// Text rendering of any report, plus its CSV extracts. Throws InputError on
// a malformed report.
std::string render_report(const Json& report, std::vector<CsvFile>* csv);

std::string liminf_csv(const Json& liminf_result);
std::string profile_csv(const Json& profile);

}  // namespace curvlab

#endif  // CURVLAB_COMMANDS_HPP_
