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

#ifndef MRQA_EVALUATOR_H_
#define MRQA_EVALUATOR_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "mrqa/format.h"

namespace mrqa {

// Shared-task answer normalization: lowercase, drop ASCII punctuation, drop
// the standalone words a/an/the, collapse whitespace.
std::string normalize_text(std::string_view s);

struct QuestionScore {
  std::string qid;
  std::string dataset;
  int em = 0;
  double f1 = 0.0;
};

// Max over golds of exact match and of token-multiset F1 on normalized text.
QuestionScore score_question(std::string_view prediction, std::span<const std::string> golds);

struct DatasetScore {
  std::string dataset;
  std::size_t questions = 0;
  std::size_t missing = 0;
  double em = 0.0;  // mean x 100
  double f1 = 0.0;
};

struct EvalReport {
  std::vector<QuestionScore> per_question;
  std::vector<DatasetScore> per_dataset;  // in order of first appearance
  double macro_em = 0.0;  // unweighted mean over datasets
  double macro_f1 = 0.0;
  std::size_t missing_predictions = 0;
  std::size_t unknown_predictions = 0;
};

using Predictions = std::unordered_map<std::string, std::string>;

Predictions read_predictions(const std::string& path);

// Questions without a prediction score zero; predictions for unknown qids are
// counted and ignored.
EvalReport evaluate(const Predictions& predictions, std::span<const Example> gold);

// Per-dataset means and macro averages from already-scored questions.
EvalReport summarize(std::vector<QuestionScore> scores);

std::string format_report_table(const EvalReport& report);
nlohmann::ordered_json report_to_json(const EvalReport& report);

// One {"qid", "f1"} line per question.
void export_difficulty(const EvalReport& report, const std::string& path);

}  // namespace mrqa

#endif  // MRQA_EVALUATOR_H_
