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

#ifndef MRQA_SEGMENTER_H_
#define MRQA_SEGMENTER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mrqa/format.h"

namespace mrqa {

// Half-open [start, end) over context token indices.
struct TokenRange {
  std::int64_t start = 0;
  std::int64_t end = 0;
  std::int64_t size() const { return end - start; }
  bool operator==(const TokenRange&) const = default;
};

// Sliding windows window_i = [i*stride, min(i*stride + window_len, L)) for
// i = 0..=last_index, where last_index is the smallest k with
// k*stride + window_len >= L (0 when L <= window_len).
struct WindowPlan {
  std::vector<TokenRange> windows;
  std::int64_t window_len = 0;
  std::int64_t stride = 0;
  std::int64_t last_index = 0;
};

// Throws InvalidArgument when window_len < 1, stride < 1 or stride > window_len.
WindowPlan plan_windows(std::int64_t context_len, std::int64_t window_len, std::int64_t stride);

enum class WindowMode {
  kLiteral,      // window_len = max_seq_len
  kModelBudget,  // window_len = max_seq_len - question_len - special_budget
};

enum class AnswersPerExample { kOne, kAll };

inline constexpr std::int64_t kSpecialBudget = 3;  // [CLS] q [SEP] c [SEP]
inline constexpr std::int64_t kAbstainIndex = 0;

std::int64_t effective_window(std::int64_t max_seq_len, std::int64_t question_len,
                              std::int64_t special_budget, WindowMode mode);

struct SegmentOptions {
  std::int64_t max_seq_len = 512;
  std::int64_t doc_stride = 128;
  WindowMode mode = WindowMode::kModelBudget;
  std::int64_t special_budget = kSpecialBudget;
  bool include_negatives = true;
  AnswersPerExample answers = AnswersPerExample::kOne;
};

struct SegmentLabel {
  enum class Kind { kSpan, kNoAnswer };
  Kind kind = Kind::kNoAnswer;
  std::int64_t start = kAbstainIndex;  // packed positions
  std::int64_t end = kAbstainIndex;

  static SegmentLabel no_answer() { return {}; }
  bool is_span() const { return kind == Kind::kSpan; }
  bool operator==(const SegmentLabel&) const = default;
};

// Packed layout: [abstain sentinel] question [SEP] context-window [SEP].
struct Segment {
  std::string segment_uid;
  std::string example_uid;
  std::string qid;
  std::string dataset;
  std::int64_t window_index = 0;
  TokenRange window;
  std::int64_t packed_length = 0;
  SegmentLabel label;
  std::vector<Token> question_tokens;
  std::vector<Token> context_window_tokens;  // original-context offsets
  // Raw context bytes from the first window token to the end of the last,
  // so any token range can be sliced back out byte-exactly.
  std::string context_window_text;

  std::int64_t context_offset() const {
    return 1 + static_cast<std::int64_t>(question_tokens.size()) + 1;
  }
  std::int64_t window_char_start() const {
    return context_window_tokens.empty() ? 0 : context_window_tokens.front().char_start;
  }
  bool operator==(const Segment&) const = default;
};

std::int64_t packed_length(std::int64_t question_len, std::int64_t window_len);

// Number of question tokens kept: in model-budget mode questions longer than
// max_seq_len / 2 are cut to their first max_seq_len / 2 tokens.
std::int64_t kept_question_len(std::int64_t question_len, const SegmentOptions& options);

std::vector<Segment> segment_example(const Example& e, const SegmentOptions& options);

// Label of every window without materializing segments.
struct WindowLabels {
  WindowPlan plan;
  std::int64_t question_len = 0;
  std::vector<SegmentLabel> labels;
};
WindowLabels label_windows(const Example& e, const SegmentOptions& options);

// Counts under answers = all with negatives included, whatever `options` says.
void accumulate_stats(DatasetStats& stats, const Example& e, const SegmentOptions& options);
void finalize_stats(DatasetStats& stats);
DatasetStats dataset_stats(std::span<const Example> examples, const SegmentOptions& options);

// Segments-file codec (one JSON object per line).
nlohmann::ordered_json segment_to_json(const Segment& s);
Segment segment_from_json(const nlohmann::json& j, const std::string& path, std::size_t line);

}  // namespace mrqa

#endif  // MRQA_SEGMENTER_H_
