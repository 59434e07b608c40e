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

#include "mrqa/format.h"

#include <utility>

#include "mrqa/error.h"

namespace mrqa {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Context for error messages while walking one JSONL line.
struct Where {
  const std::string& path;
  std::size_t line;
};

const json& require(const json& obj, const char* key, const std::string& field_path,
                    const Where& at) {
  if (!obj.is_object()) {
    throw ValidationError(at.path, at.line, "field '" + field_path + "' parent is not an object");
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError(at.path, at.line, "missing required field '" + field_path + "'");
  }
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& field_path,
                           const Where& at) {
  const json& v = require(obj, key, field_path, at);
  if (!v.is_string()) {
    throw ValidationError(at.path, at.line, "field '" + field_path + "' must be a string");
  }
  return v.get<std::string>();
}

const json& require_array(const json& obj, const char* key, const std::string& field_path,
                          const Where& at) {
  const json& v = require(obj, key, field_path, at);
  if (!v.is_array()) {
    throw ValidationError(at.path, at.line, "field '" + field_path + "' must be an array");
  }
  return v;
}

std::vector<Token> parse_tokens(const json& arr, const std::string& field_path, const Where& at) {
  std::vector<Token> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& t = arr[i];
    if (!t.is_array() || t.size() < 2 || !t[0].is_string() || !t[1].is_number_integer()) {
      throw ValidationError(at.path, at.line,
                            "field '" + field_path + "[" + std::to_string(i) +
                                "]' must be a [text, offset] pair");
    }
    out.push_back(Token{t[0].get<std::string>(), t[1].get<std::int64_t>()});
  }
  return out;
}

Span parse_span(const json& s, const std::string& field_path, const Where& at) {
  if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer()) {
    throw ValidationError(at.path, at.line, "field '" + field_path + "' must be an integer pair");
  }
  return Span{s[0].get<std::int64_t>(), s[1].get<std::int64_t>()};
}

// Byte offset of every code point boundary, plus one past the end.
std::vector<std::int64_t> codepoint_starts(std::string_view s) {
  std::vector<std::int64_t> starts;
  starts.reserve(s.size() + 1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto c = static_cast<unsigned char>(s[i]);
    if ((c & 0xC0) != 0x80) starts.push_back(static_cast<std::int64_t>(i));
  }
  starts.push_back(static_cast<std::int64_t>(s.size()));
  return starts;
}

std::int64_t cp_to_byte(const std::vector<std::int64_t>& starts, std::int64_t cp) {
  if (cp < 0) return cp;
  const auto n = static_cast<std::int64_t>(starts.size()) - 1;
  if (cp > n) return starts.back() + (cp - n);  // stays out of range for validation
  return starts[static_cast<std::size_t>(cp)];
}

void convert_tokens(std::vector<Token>& tokens, const std::vector<std::int64_t>& starts) {
  for (Token& t : tokens) t.char_start = cp_to_byte(starts, t.char_start);
}

bool is_ascii(std::string_view s) {
  for (char c : s) {
    if (static_cast<unsigned char>(c) >= 0x80) return false;
  }
  return true;
}

void check_tokens(const std::vector<Token>& tokens, std::string_view source,
                  const std::string& field, std::vector<std::string>& out) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    const std::string at = field + "[" + std::to_string(i) + "]";
    if (t.text.empty()) out.push_back(at + ": token text is empty");
    if (i > 0 && t.char_start <= tokens[i - 1].char_start) {
      out.push_back(field + ": tokens not monotonic at index " + std::to_string(i));
    }
    if (t.char_start < 0 || t.char_end() > static_cast<std::int64_t>(source.size())) {
      out.push_back(at + ": offset out of range");
    } else if (source.substr(static_cast<std::size_t>(t.char_start), t.text.size()) != t.text) {
      out.push_back(at + ": text does not match source at offset " +
                    std::to_string(t.char_start));
    }
  }
}

ordered_json span_json(const Span& s) { return ordered_json::array({s.start, s.end}); }

}  // namespace

std::string make_example_uid(std::string_view dataset, std::string_view qid) {
  std::string uid;
  uid.reserve(dataset.size() + qid.size() + 1);
  uid.append(dataset).push_back('/');
  uid.append(qid);
  return uid;
}

nlohmann::json tokens_to_json(const std::vector<Token>& tokens) {
  json arr = json::array();
  for (const Token& t : tokens) arr.push_back(json::array({t.text, t.char_start}));
  return arr;
}

std::vector<Token> tokens_from_json(const nlohmann::json& j) {
  static const std::string kPath = "<tokens>";
  if (!j.is_array()) throw ValidationError(kPath, 0, "tokens must be an array");
  return parse_tokens(j, "tokens", Where{kPath, 0});
}

DatasetReader::DatasetReader(const std::string& path, ReadOptions options)
    : reader_(path), options_(std::move(options)) {
  if (options_.expect_gzip && !reader_.is_gzip()) {
    throw FormatError(path, 0, "expected gzip-compressed input");
  }
  std::optional<std::string_view> first;
  while ((first = reader_.next()) && first->find_first_not_of(" \t") == std::string_view::npos) {
  }
  if (!first) throw FormatError(path, reader_.line_number(), "missing header line");
  const json doc = parse_json_line(*first, path, reader_.line_number());
  const Where at{path, reader_.line_number()};
  const json* h = &doc;
  if (doc.is_object() && doc.contains("header")) h = &doc["header"];
  header_.dataset = require_string(*h, "dataset", "header.dataset", at);
  for (auto it = h->begin(); it != h->end(); ++it) {
    if (it.key() != "dataset") header_.extra[it.key()] = it.value();
  }
  if (options_.dataset_override) header_.dataset = *options_.dataset_override;
}

void DatasetReader::load_record(std::string_view line) {
  const std::string& path = reader_.path();
  const Where at{path, reader_.line_number()};
  const json rec = parse_json_line(line, path, at.line);
  if (!rec.is_object()) throw FormatError(path, at.line, "record is not a JSON object");

  std::string context = require_string(rec, "context", "context", at);
  std::vector<Token> context_tokens =
      parse_tokens(require_array(rec, "context_tokens", "context_tokens", at), "context_tokens", at);
  const json& qas = require_array(rec, "qas", "qas", at);

  const bool convert = options_.offsets == OffsetUnit::kCodepoint && !is_ascii(context);
  std::vector<std::int64_t> ctx_starts;
  if (convert) {
    ctx_starts = codepoint_starts(context);
    convert_tokens(context_tokens, ctx_starts);
  }

  pending_.clear();
  pending_pos_ = 0;
  pending_.reserve(qas.size());
  for (std::size_t qi = 0; qi < qas.size(); ++qi) {
    const json& q = qas[qi];
    const std::string base = "qas[" + std::to_string(qi) + "]";
    Example e;
    e.dataset = header_.dataset;
    e.qa.qid = require_string(q, "qid", base + ".qid", at);
    e.qa.question = require_string(q, "question", base + ".question", at);
    e.qa.question_tokens = parse_tokens(
        require_array(q, "question_tokens", base + ".question_tokens", at),
        base + ".question_tokens", at);
    if (options_.offsets == OffsetUnit::kCodepoint && !is_ascii(e.qa.question)) {
      convert_tokens(e.qa.question_tokens, codepoint_starts(e.qa.question));
    }

    const json& dets = require_array(q, "detected_answers", base + ".detected_answers", at);
    for (std::size_t di = 0; di < dets.size(); ++di) {
      const std::string dbase = base + ".detected_answers[" + std::to_string(di) + "]";
      const std::string text = require_string(dets[di], "text", dbase + ".text", at);
      const json& cs = require_array(dets[di], "char_spans", dbase + ".char_spans", at);
      const json& ts = require_array(dets[di], "token_spans", dbase + ".token_spans", at);
      if (cs.size() != ts.size()) {
        throw ValidationError(path, at.line,
                              "field '" + dbase + "' has different char_spans and token_spans counts");
      }
      // Each occurrence becomes its own DetectedAnswer.
      for (std::size_t k = 0; k < cs.size(); ++k) {
        DetectedAnswer d;
        d.text = text;
        d.char_span = parse_span(cs[k], dbase + ".char_spans", at);
        d.token_span = parse_span(ts[k], dbase + ".token_spans", at);
        if (convert) {
          d.char_span.start = cp_to_byte(ctx_starts, d.char_span.start);
          d.char_span.end = cp_to_byte(ctx_starts, d.char_span.end + 1) - 1;
        }
        e.qa.detected_answers.push_back(std::move(d));
      }
    }

    if (auto it = q.find("answers"); it != q.end()) {
      if (!it->is_array()) {
        throw ValidationError(path, at.line, "field '" + base + ".answers' must be an array");
      }
      for (const json& a : *it) {
        if (!a.is_string()) {
          throw ValidationError(path, at.line, "field '" + base + ".answers' must hold strings");
        }
        e.qa.gold_answers.push_back(a.get<std::string>());
      }
    } else {
      for (const DetectedAnswer& d : e.qa.detected_answers) {
        bool dup = false;
        for (const auto& g : e.qa.gold_answers) dup = dup || g == d.text;
        if (!dup) e.qa.gold_answers.push_back(d.text);
      }
    }

    if (!seen_qids_.insert(e.qa.qid).second) {
      throw ValidationError(path, at.line, "duplicate qid '" + e.qa.qid + "'");
    }
    e.example_uid = make_example_uid(e.dataset, e.qa.qid);
    e.context = context;
    e.context_tokens = context_tokens;
    pending_.push_back(std::move(e));
  }
}

std::optional<Example> DatasetReader::next() {
  while (pending_pos_ >= pending_.size()) {
    auto line = reader_.next();
    if (!line) return std::nullopt;
    if (line->find_first_not_of(" \t") == std::string_view::npos) continue;
    load_record(*line);
  }
  return std::move(pending_[pending_pos_++]);
}

std::vector<Example> read_dataset(const std::string& path, ReadOptions options) {
  DatasetReader reader(path, std::move(options));
  std::vector<Example> out;
  while (auto e = reader.next()) out.push_back(std::move(*e));
  return out;
}

DatasetWriter::DatasetWriter(const std::string& path, DatasetHeader header)
    : writer_(path), header_(std::move(header)) {
  ordered_json h = ordered_json::object();
  h["dataset"] = header_.dataset;
  for (auto it = header_.extra.begin(); it != header_.extra.end(); ++it) h[it.key()] = it.value();
  ordered_json line = ordered_json::object();
  line["header"] = std::move(h);
  writer_.write(line.dump());
}

DatasetWriter::~DatasetWriter() {
  try {
    close();
  } catch (...) {
  }
}

void DatasetWriter::write(const Example& example) {
  if (example.dataset != header_.dataset) {
    throw InvalidArgument(writer_.path() + ": example '" + example.example_uid +
                          "' belongs to dataset '" + example.dataset + "', file holds '" +
                          header_.dataset + "'");
  }
  if (!seen_qids_.insert(example.qa.qid).second) {
    throw InvalidArgument(writer_.path() + ": duplicate qid '" + example.qa.qid + "'");
  }
  if (!group_storage_.empty() && (group_storage_.front().context != example.context ||
                                  group_storage_.front().context_tokens != example.context_tokens)) {
    flush_record();
  }
  group_storage_.push_back(example);
}

void DatasetWriter::flush_record() {
  if (group_storage_.empty()) return;
  const Example& first = group_storage_.front();
  ordered_json rec = ordered_json::object();
  rec["id"] = first.example_uid;
  rec["context"] = first.context;
  ordered_json ctx_tokens = ordered_json::array();
  for (const Token& t : first.context_tokens) ctx_tokens.push_back(ordered_json::array({t.text, t.char_start}));
  rec["context_tokens"] = std::move(ctx_tokens);
  ordered_json qas = ordered_json::array();
  for (const Example& e : group_storage_) {
    ordered_json q = ordered_json::object();
    q["qid"] = e.qa.qid;
    q["question"] = e.qa.question;
    ordered_json qt = ordered_json::array();
    for (const Token& t : e.qa.question_tokens) qt.push_back(ordered_json::array({t.text, t.char_start}));
    q["question_tokens"] = std::move(qt);
    q["answers"] = e.qa.gold_answers;
    ordered_json dets = ordered_json::array();
    for (const DetectedAnswer& d : e.qa.detected_answers) {
      ordered_json dj = ordered_json::object();
      dj["text"] = d.text;
      dj["char_spans"] = ordered_json::array({span_json(d.char_span)});
      dj["token_spans"] = ordered_json::array({span_json(d.token_span)});
      dets.push_back(std::move(dj));
    }
    q["detected_answers"] = std::move(dets);
    qas.push_back(std::move(q));
  }
  rec["qas"] = std::move(qas);
  writer_.write(rec.dump());
  count_ += group_storage_.size();
  group_storage_.clear();
}

std::size_t DatasetWriter::close() {
  if (!closed_) {
    flush_record();
    writer_.close();
    closed_ = true;
  }
  return count_;
}

std::size_t write_dataset(const std::vector<Example>& examples, const std::string& path,
                          DatasetHeader header) {
  DatasetWriter writer(path, std::move(header));
  for (const Example& e : examples) writer.write(e);
  return writer.close();
}

std::vector<std::string> validate_example(const Example& e) {
  std::vector<std::string> out;
  if (e.dataset.empty()) out.push_back("dataset: empty");
  if (e.qa.qid.empty()) out.push_back("qa.qid: empty");
  if (e.example_uid != make_example_uid(e.dataset, e.qa.qid)) {
    out.push_back("example_uid: expected '" + make_example_uid(e.dataset, e.qa.qid) + "'");
  }
  check_tokens(e.context_tokens, e.context, "context_tokens", out);
  if (e.qa.question_tokens.empty()) out.push_back("qa.question_tokens: empty");
  check_tokens(e.qa.question_tokens, e.qa.question, "qa.question_tokens", out);
  if (e.qa.gold_answers.empty()) out.push_back("qa.gold_answers: empty");
  if (e.qa.detected_answers.empty()) out.push_back("qa.detected_answers: empty");

  const auto n_tokens = static_cast<std::int64_t>(e.context_tokens.size());
  const auto n_chars = static_cast<std::int64_t>(e.context.size());
  for (std::size_t i = 0; i < e.qa.detected_answers.size(); ++i) {
    const DetectedAnswer& d = e.qa.detected_answers[i];
    const std::string at = "qa.detected_answers[" + std::to_string(i) + "]";
    const Span& ts = d.token_span;
    if (ts.start < 0 || ts.start > ts.end || ts.end >= n_tokens) {
      out.push_back(at + ".token_span: [" + std::to_string(ts.start) + ", " +
                    std::to_string(ts.end) + "] invalid for " + std::to_string(n_tokens) +
                    " context tokens");
    } else {
      const Token& first = e.context_tokens[static_cast<std::size_t>(ts.start)];
      const Token& last = e.context_tokens[static_cast<std::size_t>(ts.end)];
      if (first.char_start >= 0 && last.char_end() <= n_chars && last.char_end() >= first.char_start &&
          e.context.compare(static_cast<std::size_t>(first.char_start),
                            static_cast<std::size_t>(last.char_end() - first.char_start),
                            d.text) != 0) {
        out.push_back(at + ".token_span: covered tokens do not decode to answer text");
      }
    }
    const Span& cs = d.char_span;
    if (cs.start < 0 || cs.start > cs.end || cs.end >= n_chars) {
      out.push_back(at + ".char_span: [" + std::to_string(cs.start) + ", " +
                    std::to_string(cs.end) + "] out of range");
    } else if (e.context.compare(static_cast<std::size_t>(cs.start),
                                 static_cast<std::size_t>(cs.end - cs.start + 1), d.text) != 0) {
      out.push_back(at + ".char_span: context text differs from answer text");
    }
  }
  return out;
}

}  // namespace mrqa
