//
// Copyright 2026 The mrqa-prep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef MRQA_CLI_H_
#define MRQA_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "mrqa/error.h"

namespace mrqa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Bad command-line input detected after parsing (exit code 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

// args excludes the program name. Output and diagnostics go to the given
// streams; progress lines ("progress stage=... items=... rate=...") go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// One stage of a pipeline run: a subcommand and its argument vector.
struct PipelineStage {
  std::string label;    // e.g. "segment" or "segment:squad"
  std::string command;  // subcommand name
  std::vector<std::string> args;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

struct PipelineConfig {
  std::vector<PipelineStage> stages;
  std::string seed;
  std::string jobs;
};

// Parses the flat "key = value" pipeline document. Keys are "seed", "jobs",
// "stages" (space-separated stage labels) and "<label>.<flag>".
PipelineConfig parse_pipeline_config(const std::string& text);
// Throws UsageError when stage wiring is inconsistent.
void check_pipeline(const PipelineConfig& config);

int run_pipeline(const std::string& config_path, std::ostream& out, std::ostream& err);

}  // namespace mrqa::cli

#endif  // MRQA_CLI_H_
