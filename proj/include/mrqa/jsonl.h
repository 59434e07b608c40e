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

#ifndef MRQA_JSONL_H_
#define MRQA_JSONL_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace mrqa {

// Line-at-a-time reader over plain or gzip-compressed files. Compression is
// detected from the magic bytes, so callers never need to know which one
// they were handed.
class LineReader {
 public:
  explicit LineReader(std::string path);
  ~LineReader();
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  // Next line without its terminator; nullopt at end of file.
  std::optional<std::string_view> next();

  bool is_gzip() const { return gzip_; }
  std::size_t line_number() const { return line_; }
  const std::string& path() const { return path_; }

 private:
  bool fill();

  std::string path_;
  void* file_ = nullptr;  // gzFile
  bool gzip_ = false;
  bool eof_ = false;
  std::string buffer_;
  std::size_t pos_ = 0;
  std::string line_buf_;
  std::size_t line_ = 0;
};

// Writes LF-terminated lines. Paths ending in ".gz" are gzip-compressed.
class LineWriter {
 public:
  explicit LineWriter(std::string path);
  ~LineWriter();
  LineWriter(const LineWriter&) = delete;
  LineWriter& operator=(const LineWriter&) = delete;

  void write(std::string_view line);
  void close();
  const std::string& path() const { return path_; }

 private:
  void flush_buffer();

  std::string path_;
  void* file_ = nullptr;
  std::string buffer_;
};

// Parses one JSONL line, turning parser failures into FormatError.
nlohmann::json parse_json_line(std::string_view line, const std::string& path,
                               std::size_t line_number);

// Reads a whole JSON document (not JSONL) from a plain or gzip file.
nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view contents);

bool has_gzip_suffix(std::string_view path);

}  // namespace mrqa

#endif  // MRQA_JSONL_H_
