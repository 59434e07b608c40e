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

#ifndef MRQA_FORMAT_H_
#define MRQA_FORMAT_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "mrqa/jsonl.h"

namespace mrqa {

// A pre-tokenized token. char_start is a byte offset into the string the
// token was cut from (context or question).
struct Token {
  std::string text;
  std::int64_t char_start = 0;

  std::int64_t char_end() const {  // exclusive
    return char_start + static_cast<std::int64_t>(text.size());
  }
  bool operator==(const Token&) const = default;
};

// Inclusive [start, end] pair.
struct Span {
  std::int64_t start = 0;
  std::int64_t end = 0;
  bool operator==(const Span&) const = default;
};

// One occurrence of an answer in the context.
struct DetectedAnswer {
  std::string text;
  Span token_span;
  Span char_span;
  bool operator==(const DetectedAnswer&) const = default;
};

struct QA {
  std::string qid;
  std::string question;
  std::vector<Token> question_tokens;
  std::vector<DetectedAnswer> detected_answers;
  std::vector<std::string> gold_answers;
  bool operator==(const QA&) const = default;
};

// One (question, context) pair. Records holding several questions are
// flattened into one Example per question.
struct Example {
  std::string example_uid;
  std::string dataset;
  std::string context;
  std::vector<Token> context_tokens;
  QA qa;
  bool operator==(const Example&) const = default;
};

struct DatasetStats {
  std::string dataset;
  std::int64_t n_examples = 0;
  std::int64_t n_segments = 0;
  std::int64_t na_segments = 0;
  double na_fraction = 0.0;
};

std::string make_example_uid(std::string_view dataset, std::string_view qid);

struct DatasetHeader {
  std::string dataset;
  // Any other header fields (e.g. "split"), preserved on rewrite.
  nlohmann::json extra = nlohmann::json::object();
};

enum class OffsetUnit {
  kByte,
  // Offsets count Unicode code points, as in the files published by the
  // shared task. Converted to byte offsets while reading.
  kCodepoint,
};

struct ReadOptions {
  bool expect_gzip = false;
  std::optional<std::string> dataset_override;
  OffsetUnit offsets = OffsetUnit::kByte;
};

// Streams Examples out of an MRQA JSONL file. Holds at most one context
// record in memory, plus the set of qids seen so far for duplicate detection.
class DatasetReader {
 public:
  explicit DatasetReader(const std::string& path, ReadOptions options = {});

  const DatasetHeader& header() const { return header_; }
  const std::string& dataset() const { return header_.dataset; }

  std::optional<Example> next();

 private:
  void load_record(std::string_view line);

  LineReader reader_;
  ReadOptions options_;
  DatasetHeader header_;
  std::vector<Example> pending_;
  std::size_t pending_pos_ = 0;
  std::unordered_set<std::string> seen_qids_;
};

// Convenience: reads a whole file into memory.
std::vector<Example> read_dataset(const std::string& path, ReadOptions options = {});

// Writes examples to MRQA JSONL. Consecutive examples sharing a context are
// grouped into a single record. Throws InvalidArgument when an example
// belongs to a dataset other than header.dataset or repeats a qid.
class DatasetWriter {
 public:
  DatasetWriter(const std::string& path, DatasetHeader header);
  ~DatasetWriter();

  void write(const Example& example);
  // Flushes and closes; returns the number of examples written.
  std::size_t close();

 private:
  void flush_record();

  LineWriter writer_;
  DatasetHeader header_;
  std::vector<Example> group_storage_;
  std::unordered_set<std::string> seen_qids_;
  std::size_t count_ = 0;
  bool closed_ = false;
};

std::size_t write_dataset(const std::vector<Example>& examples, const std::string& path,
                          DatasetHeader header);

// Returns one human-readable description per violated invariant. Each
// message starts with the offending field path.
std::vector<std::string> validate_example(const Example& e);

// Field codecs shared by the other file formats.
nlohmann::json tokens_to_json(const std::vector<Token>& tokens);
std::vector<Token> tokens_from_json(const nlohmann::json& j);

}  // namespace mrqa

#endif  // MRQA_FORMAT_H_
