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

#ifndef MRQA_SPAN_SELECT_H_
#define MRQA_SPAN_SELECT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mrqa/segmenter.h"

namespace mrqa {

// Per-segment start/end scores from an external model, one entry per packed
// position.
struct LogitsRecord {
  std::string segment_uid;
  std::string qid;
  std::vector<double> start_logits;
  std::vector<double> end_logits;
  std::int64_t abstain_index = kAbstainIndex;
};

// Rejects non-finite values and shape errors with the line number.
LogitsRecord logits_from_json(const nlohmann::json& j, const std::string& path, std::size_t line);
nlohmann::ordered_json logits_to_json(const LogitsRecord& r);
std::vector<LogitsRecord> read_logits(const std::string& path);

struct SpanCandidate {
  std::string segment_uid;
  std::int64_t window_token_start = 0;
  std::int64_t start_pos = 0;  // packed positions, inclusive
  std::int64_t end_pos = 0;
  double score = 0.0;
  std::string text;
};

struct Prediction {
  std::string qid;
  std::string example_uid;
  std::string text;
  double score = 0.0;
  std::vector<SpanCandidate> n_best;
};

inline constexpr std::size_t kDefaultBeam = 5;
inline constexpr std::int64_t kDefaultMaxAnswerLen = 30;

struct SelectOptions {
  std::size_t beam = kDefaultBeam;
  std::int64_t max_answer_len = kDefaultMaxAnswerLen;
  // Sum raw logits instead of per-segment log-softmax scores.
  bool raw_logit_scores = false;
};

// Top `beam` spans (s, e) with s <= e < s + max_answer_len, both inside the
// context window and neither at the abstain position. Sorted by score, then
// start, then end.
std::vector<SpanCandidate> best_spans_in_segment(const LogitsRecord& rec, const Segment& seg,
                                                 const SelectOptions& options);

// Global best across an example's segments. Ties go to the smaller window
// start, then the smaller start position. n_best keeps the first (best)
// candidate per distinct text.
Prediction aggregate_example(std::string qid, std::vector<SpanCandidate> candidates,
                             std::size_t beam);

// Joins segments with logits by segment_uid and aggregates per example, in
// order of first appearance in `segments`. Throws when a logits record has
// no segment or an example ends up with no candidates.
std::vector<Prediction> select_predictions(std::span<const Segment> segments,
                                           std::span<const LogitsRecord> logits,
                                           const SelectOptions& options, int jobs = 1);

// {qid: text}; throws InvalidArgument on a duplicate qid.
nlohmann::ordered_json predictions_to_json(std::span<const Prediction> predictions);
nlohmann::ordered_json nbest_to_json(std::span<const Prediction> predictions);

std::vector<Segment> read_segments(const std::string& path);

}  // namespace mrqa

#endif  // MRQA_SPAN_SELECT_H_
