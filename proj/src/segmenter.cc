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

#include "mrqa/segmenter.h"

#include <algorithm>

#include "mrqa/error.h"

namespace mrqa {

WindowPlan plan_windows(std::int64_t context_len, std::int64_t window_len, std::int64_t stride) {
  if (window_len < 1) throw InvalidArgument("window length must be positive");
  if (stride < 1) throw InvalidArgument("stride must be positive");
  if (stride > window_len) throw InvalidArgument("stride exceeds window (coverage gap)");
  if (context_len < 0) throw InvalidArgument("context length must be non-negative");

  WindowPlan plan;
  plan.window_len = window_len;
  plan.stride = stride;
  plan.last_index =
      context_len <= window_len ? 0 : (context_len - window_len + stride - 1) / stride;
  plan.windows.reserve(static_cast<std::size_t>(plan.last_index + 1));
  for (std::int64_t i = 0; i <= plan.last_index; ++i) {
    const std::int64_t start = i * stride;
    plan.windows.push_back({start, std::min(start + window_len, context_len)});
  }
  return plan;
}

std::int64_t effective_window(std::int64_t max_seq_len, std::int64_t question_len,
                              std::int64_t special_budget, WindowMode mode) {
  const std::int64_t w =
      mode == WindowMode::kLiteral ? max_seq_len : max_seq_len - question_len - special_budget;
  if (w <= 0) {
    throw InvalidArgument(mode == WindowMode::kLiteral ? "max sequence length must be positive"
                                                       : "question exhausts sequence budget");
  }
  return w;
}

std::int64_t packed_length(std::int64_t question_len, std::int64_t window_len) {
  return 1 + question_len + 1 + window_len + 1;
}

std::int64_t kept_question_len(std::int64_t question_len, const SegmentOptions& options) {
  if (options.mode == WindowMode::kModelBudget && question_len > options.max_seq_len / 2) {
    return options.max_seq_len / 2;
  }
  return question_len;
}

WindowLabels label_windows(const Example& e, const SegmentOptions& options) {
  WindowLabels out;
  out.question_len =
      kept_question_len(static_cast<std::int64_t>(e.qa.question_tokens.size()), options);
  const std::int64_t w =
      effective_window(options.max_seq_len, out.question_len, options.special_budget, options.mode);
  // A long question can shrink the window below the stride; step by the
  // window instead so no context token is skipped.
  const auto context_len = static_cast<std::int64_t>(e.context_tokens.size());
  out.plan = plan_windows(context_len, w, std::min(options.doc_stride, w));

  std::vector<Span> answers;
  answers.reserve(e.qa.detected_answers.size());
  for (const DetectedAnswer& d : e.qa.detected_answers) {
    const Span& s = d.token_span;
    if (s.start >= 0 && s.start <= s.end && s.end < context_len) answers.push_back(s);
  }
  std::stable_sort(answers.begin(), answers.end(),
                   [](const Span& a, const Span& b) { return a.start < b.start; });
  if (options.answers == AnswersPerExample::kOne && answers.size() > 1) answers.resize(1);

  const std::int64_t offset = 1 + out.question_len + 1;
  out.labels.reserve(out.plan.windows.size());
  for (const TokenRange& win : out.plan.windows) {
    SegmentLabel label;
    for (const Span& a : answers) {
      if (a.start >= win.start && a.end < win.end) {
        label.kind = SegmentLabel::Kind::kSpan;
        label.start = a.start - win.start + offset;
        label.end = a.end - win.start + offset;
        break;
      }
    }
    out.labels.push_back(label);
  }
  return out;
}

std::vector<Segment> segment_example(const Example& e, const SegmentOptions& options) {
  const WindowLabels wl = label_windows(e, options);
  const auto q_begin = e.qa.question_tokens.begin();
  const auto q_end = q_begin + wl.question_len;

  std::vector<Segment> out;
  out.reserve(wl.plan.windows.size());
  for (std::size_t i = 0; i < wl.plan.windows.size(); ++i) {
    const SegmentLabel& label = wl.labels[i];
    if (!label.is_span() && !options.include_negatives) continue;
    const TokenRange& win = wl.plan.windows[i];
    Segment s;
    s.segment_uid = e.example_uid + "#" + std::to_string(i);
    s.example_uid = e.example_uid;
    s.qid = e.qa.qid;
    s.dataset = e.dataset;
    s.window_index = static_cast<std::int64_t>(i);
    s.window = win;
    s.packed_length = packed_length(wl.question_len, win.size());
    s.label = label;
    s.question_tokens.assign(q_begin, q_end);
    s.context_window_tokens.assign(e.context_tokens.begin() + win.start,
                                   e.context_tokens.begin() + win.end);
    if (!s.context_window_tokens.empty()) {
      const std::int64_t from = s.context_window_tokens.front().char_start;
      const std::int64_t to = s.context_window_tokens.back().char_end();
      s.context_window_text = e.context.substr(static_cast<std::size_t>(from),
                                               static_cast<std::size_t>(to - from));
    }
    out.push_back(std::move(s));
  }
  return out;
}

void accumulate_stats(DatasetStats& stats, const Example& e, const SegmentOptions& options) {
  SegmentOptions all = options;
  all.answers = AnswersPerExample::kAll;
  all.include_negatives = true;
  const WindowLabels wl = label_windows(e, all);
  ++stats.n_examples;
  stats.n_segments += static_cast<std::int64_t>(wl.labels.size());
  for (const SegmentLabel& l : wl.labels) stats.na_segments += l.is_span() ? 0 : 1;
}

void finalize_stats(DatasetStats& stats) {
  stats.na_fraction = stats.n_segments > 0 ? static_cast<double>(stats.na_segments) /
                                                 static_cast<double>(stats.n_segments)
                                           : 0.0;
}

DatasetStats dataset_stats(std::span<const Example> examples, const SegmentOptions& options) {
  DatasetStats stats;
  if (!examples.empty()) stats.dataset = examples.front().dataset;
  for (const Example& e : examples) accumulate_stats(stats, e, options);
  finalize_stats(stats);
  return stats;
}

nlohmann::ordered_json segment_to_json(const Segment& s) {
  using nlohmann::ordered_json;
  auto tokens = [](const std::vector<Token>& ts) {
    ordered_json arr = ordered_json::array();
    for (const Token& t : ts) arr.push_back(ordered_json::array({t.text, t.char_start}));
    return arr;
  };
  ordered_json j = ordered_json::object();
  j["segment_uid"] = s.segment_uid;
  j["example_uid"] = s.example_uid;
  j["qid"] = s.qid;
  j["dataset"] = s.dataset;
  j["window_index"] = s.window_index;
  j["window_token_start"] = s.window.start;
  j["window_token_end"] = s.window.end;
  j["label_kind"] = s.label.is_span() ? "span" : "no_answer";
  j["label_start"] = s.label.start;
  j["label_end"] = s.label.end;
  j["question_tokens"] = tokens(s.question_tokens);
  j["context_window_tokens"] = tokens(s.context_window_tokens);
  j["context_window_text"] = s.context_window_text;
  return j;
}

Segment segment_from_json(const nlohmann::json& j, const std::string& path, std::size_t line) {
  auto field = [&](const char* key) -> const nlohmann::json& {
    auto it = j.find(key);
    if (it == j.end()) {
      throw ValidationError(path, line, std::string("missing required field '") + key + "'");
    }
    return *it;
  };
  try {
    Segment s;
    s.segment_uid = field("segment_uid").get<std::string>();
    s.example_uid = field("example_uid").get<std::string>();
    s.qid = field("qid").get<std::string>();
    s.dataset = field("dataset").get<std::string>();
    s.window_index = field("window_index").get<std::int64_t>();
    s.window = {field("window_token_start").get<std::int64_t>(),
                field("window_token_end").get<std::int64_t>()};
    const std::string kind = field("label_kind").get<std::string>();
    if (kind == "span") {
      s.label.kind = SegmentLabel::Kind::kSpan;
    } else if (kind != "no_answer") {
      throw ValidationError(path, line, "label_kind must be 'span' or 'no_answer'");
    }
    s.label.start = field("label_start").get<std::int64_t>();
    s.label.end = field("label_end").get<std::int64_t>();
    s.question_tokens = tokens_from_json(field("question_tokens"));
    s.context_window_tokens = tokens_from_json(field("context_window_tokens"));
    if (auto it = j.find("context_window_text"); it != j.end()) {
      s.context_window_text = it->get<std::string>();
    }
    s.packed_length = packed_length(static_cast<std::int64_t>(s.question_tokens.size()),
                                    static_cast<std::int64_t>(s.context_window_tokens.size()));
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path, line, std::string("bad segment record: ") + e.what());
  } catch (const ValidationError& e) {
    if (e.line() != 0) throw;
    throw ValidationError(path, line, e.what());
  }
}

}  // namespace mrqa
