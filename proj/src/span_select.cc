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

#include "mrqa/span_select.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "mrqa/error.h"
#include "mrqa/jsonl.h"
#include "mrqa/kernels.h"
#include "mrqa/parallel.h"

namespace mrqa {
namespace {

bool better_global(const SpanCandidate& a, const SpanCandidate& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.window_token_start != b.window_token_start) return a.window_token_start < b.window_token_start;
  if (a.start_pos != b.start_pos) return a.start_pos < b.start_pos;
  if (a.end_pos != b.end_pos) return a.end_pos < b.end_pos;
  return a.segment_uid < b.segment_uid;
}

std::vector<double> finite_list(const nlohmann::json& j, const char* key, const std::string& path,
                                std::size_t line) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_array()) {
    throw ValidationError(path, line, std::string("missing array field '") + key + "'");
  }
  std::vector<double> out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_number()) throw ValidationError(path, line, std::string(key) + " holds a non-number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ValidationError(path, line, std::string(key) + " holds a non-finite value");
    out.push_back(d);
  }
  return out;
}

std::string span_text(const Segment& seg, std::int64_t first, std::int64_t last) {
  const Token& a = seg.context_window_tokens[static_cast<std::size_t>(first)];
  const Token& b = seg.context_window_tokens[static_cast<std::size_t>(last)];
  if (seg.context_window_text.empty()) {
    std::string out;
    for (std::int64_t k = first; k <= last; ++k) {
      if (k > first) out.push_back(' ');
      out += seg.context_window_tokens[static_cast<std::size_t>(k)].text;
    }
    return out;
  }
  return seg.context_window_text.substr(static_cast<std::size_t>(a.char_start - seg.window_char_start()),
                                        static_cast<std::size_t>(b.char_end() - a.char_start));
}

}  // namespace

LogitsRecord logits_from_json(const nlohmann::json& j, const std::string& path, std::size_t line) {
  if (!j.is_object()) throw ValidationError(path, line, "logits record is not an object");
  LogitsRecord r;
  try {
    r.segment_uid = j.at("segment_uid").get<std::string>();
    r.qid = j.value("qid", std::string());
    r.abstain_index = j.value("abstain_index", kAbstainIndex);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path, line, std::string("bad logits record: ") + e.what());
  }
  r.start_logits = finite_list(j, "start_logits", path, line);
  r.end_logits = finite_list(j, "end_logits", path, line);
  if (r.start_logits.size() != r.end_logits.size()) {
    throw ValidationError(path, line, "start_logits and end_logits differ in length");
  }
  if (r.abstain_index < 0 || r.abstain_index >= static_cast<std::int64_t>(r.start_logits.size())) {
    throw ValidationError(path, line, "abstain_index out of range");
  }
  return r;
}

nlohmann::ordered_json logits_to_json(const LogitsRecord& r) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["segment_uid"] = r.segment_uid;
  j["qid"] = r.qid;
  j["start_logits"] = r.start_logits;
  j["end_logits"] = r.end_logits;
  j["abstain_index"] = r.abstain_index;
  return j;
}

std::vector<LogitsRecord> read_logits(const std::string& path) {
  std::vector<LogitsRecord> out;
  LineReader reader(path);
  while (auto line = reader.next()) {
    if (line->find_first_not_of(" \t") == std::string_view::npos) continue;
    out.push_back(logits_from_json(parse_json_line(*line, path, reader.line_number()), path,
                                   reader.line_number()));
  }
  return out;
}

std::vector<Segment> read_segments(const std::string& path) {
  std::vector<Segment> out;
  LineReader reader(path);
  while (auto line = reader.next()) {
    if (line->find_first_not_of(" \t") == std::string_view::npos) continue;
    out.push_back(segment_from_json(parse_json_line(*line, path, reader.line_number()), path,
                                    reader.line_number()));
  }
  return out;
}

std::vector<SpanCandidate> best_spans_in_segment(const LogitsRecord& rec, const Segment& seg,
                                                 const SelectOptions& options) {
  const auto n = static_cast<std::int64_t>(rec.start_logits.size());
  if (rec.segment_uid != seg.segment_uid || n != seg.packed_length ||
      rec.end_logits.size() != rec.start_logits.size()) {
    throw InvalidArgument("logits misaligned with segment '" + seg.segment_uid + "': expected " +
                          std::to_string(seg.packed_length) + " positions, got " +
                          std::to_string(rec.start_logits.size()) + "/" +
                          std::to_string(rec.end_logits.size()));
  }
  if (options.max_answer_len < 1) throw InvalidArgument("max answer length must be positive");

  std::vector<double> ls(rec.start_logits), le(rec.end_logits);
  if (!options.raw_logit_scores && n > 0) {
    kernels::log_softmax(ls, ls);
    kernels::log_softmax(le, le);
  }

  const std::int64_t ctx_begin = seg.context_offset();
  const std::int64_t ctx_end = ctx_begin + static_cast<std::int64_t>(seg.context_window_tokens.size());
  struct Pair {
    double score;
    std::int64_t start, end;
  };
  std::vector<Pair> pairs;
  std::vector<double> row(static_cast<std::size_t>(options.max_answer_len));
  for (std::int64_t s = ctx_begin; s < ctx_end; ++s) {
    if (s == rec.abstain_index) continue;
    const std::int64_t e_end = std::min(ctx_end, s + options.max_answer_len);
    const auto len = static_cast<std::size_t>(e_end - s);
    kernels::add_scalar(std::span<const double>(le.data() + s, len), ls[static_cast<std::size_t>(s)],
                        std::span<double>(row.data(), len));
    for (std::size_t k = 0; k < len; ++k) {
      const std::int64_t e = s + static_cast<std::int64_t>(k);
      if (e != rec.abstain_index) pairs.push_back({row[k], s, e});
    }
  }

  const std::size_t keep = std::min(options.beam, pairs.size());
  std::partial_sort(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(keep), pairs.end(),
                    [](const Pair& a, const Pair& b) {
                      if (a.score != b.score) return a.score > b.score;
                      if (a.start != b.start) return a.start < b.start;
                      return a.end < b.end;
                    });
  std::vector<SpanCandidate> cands;
  cands.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    SpanCandidate c;
    c.segment_uid = seg.segment_uid;
    c.window_token_start = seg.window.start;
    c.start_pos = pairs[i].start;
    c.end_pos = pairs[i].end;
    c.score = pairs[i].score;
    c.text = span_text(seg, c.start_pos - ctx_begin, c.end_pos - ctx_begin);
    cands.push_back(std::move(c));
  }
  return cands;
}

Prediction aggregate_example(std::string qid, std::vector<SpanCandidate> candidates,
                             std::size_t beam) {
  if (candidates.empty()) throw InvalidArgument("no candidate spans for qid '" + qid + "'");
  std::sort(candidates.begin(), candidates.end(), better_global);
  Prediction p;
  p.qid = std::move(qid);
  std::unordered_set<std::string> seen;
  for (SpanCandidate& c : candidates) {
    if (p.n_best.size() >= std::max<std::size_t>(beam, 1)) break;
    if (!seen.insert(c.text).second) continue;
    p.n_best.push_back(std::move(c));
  }
  p.text = p.n_best.front().text;
  p.score = p.n_best.front().score;
  return p;
}

std::vector<Prediction> select_predictions(std::span<const Segment> segments,
                                           std::span<const LogitsRecord> logits,
                                           const SelectOptions& options, int jobs) {
  std::unordered_map<std::string_view, std::size_t> by_uid;
  by_uid.reserve(segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (!by_uid.emplace(segments[i].segment_uid, i).second) {
      throw InvalidArgument("duplicate segment_uid '" + segments[i].segment_uid + "'");
    }
  }
  std::vector<std::size_t> seg_of(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    auto it = by_uid.find(logits[i].segment_uid);
    if (it == by_uid.end()) {
      throw InvalidArgument("logits for unknown segment '" + logits[i].segment_uid + "'");
    }
    seg_of[i] = it->second;
  }

  std::vector<std::vector<SpanCandidate>> per_record(logits.size());
  parallel_for(logits.size(), jobs, [&](std::size_t i) {
    per_record[i] = best_spans_in_segment(logits[i], segments[seg_of[i]], options);
  });

  // Example order follows first appearance in the segments file.
  std::vector<std::string_view> order;
  std::unordered_map<std::string_view, std::size_t> slot;
  for (const Segment& s : segments) {
    if (slot.emplace(s.example_uid, order.size()).second) order.push_back(s.example_uid);
  }
  std::vector<std::vector<SpanCandidate>> grouped(order.size());
  std::vector<const Segment*> first_seg(order.size(), nullptr);
  for (const Segment& s : segments) {
    auto& f = first_seg[slot[s.example_uid]];
    if (f == nullptr) f = &s;
  }
  for (std::size_t i = 0; i < logits.size(); ++i) {
    auto& g = grouped[slot[segments[seg_of[i]].example_uid]];
    for (SpanCandidate& c : per_record[i]) g.push_back(std::move(c));
  }

  std::vector<Prediction> out;
  out.reserve(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Segment& s = *first_seg[k];
    if (grouped[k].empty()) {
      throw InvalidArgument("example '" + s.example_uid + "' (qid '" + s.qid +
                            "') has no scored segments");
    }
    Prediction p = aggregate_example(s.qid, std::move(grouped[k]), options.beam);
    p.example_uid = s.example_uid;
    out.push_back(std::move(p));
  }
  return out;
}

nlohmann::ordered_json predictions_to_json(std::span<const Prediction> predictions) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const Prediction& p : predictions) {
    if (j.contains(p.qid)) throw InvalidArgument("duplicate prediction for qid '" + p.qid + "'");
    j[p.qid] = p.text;
  }
  return j;
}

nlohmann::ordered_json nbest_to_json(std::span<const Prediction> predictions) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const Prediction& p : predictions) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const SpanCandidate& c : p.n_best) {
      nlohmann::ordered_json cj = nlohmann::ordered_json::object();
      cj["text"] = c.text;
      cj["score"] = c.score;
      cj["segment_uid"] = c.segment_uid;
      cj["start_pos"] = c.start_pos;
      cj["end_pos"] = c.end_pos;
      list.push_back(std::move(cj));
    }
    j[p.qid] = std::move(list);
  }
  return j;
}

}  // namespace mrqa
