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

#include "mrqa/jsonl.h"

#include <zlib.h>

#include <cerrno>
#include <cstring>
#include <fstream>

#include "mrqa/error.h"

namespace mrqa {
namespace {

constexpr std::size_t kChunk = 1 << 16;

gzFile as_gz(void* f) { return static_cast<gzFile>(f); }

bool sniff_gzip(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, std::string("cannot open: ") + std::strerror(errno));
  unsigned char magic[2] = {0, 0};
  in.read(reinterpret_cast<char*>(magic), 2);
  return in.gcount() == 2 && magic[0] == 0x1f && magic[1] == 0x8b;
}

}  // namespace

bool has_gzip_suffix(std::string_view path) {
  return path.size() >= 3 && path.substr(path.size() - 3) == ".gz";
}

LineReader::LineReader(std::string path) : path_(std::move(path)) {
  gzip_ = sniff_gzip(path_);
  file_ = gzopen(path_.c_str(), "rb");
  if (file_ == nullptr) throw IoError(path_, "cannot open for reading");
  gzbuffer(as_gz(file_), kChunk);
}

LineReader::~LineReader() {
  if (file_ != nullptr) gzclose(as_gz(file_));
}

bool LineReader::fill() {
  if (eof_) return false;
  buffer_.erase(0, pos_);
  pos_ = 0;
  const std::size_t old = buffer_.size();
  buffer_.resize(old + kChunk);
  const int n = gzread(as_gz(file_), buffer_.data() + old, kChunk);
  if (n < 0) {
    int errnum = 0;
    const char* msg = gzerror(as_gz(file_), &errnum);
    throw IoError(path_, std::string("read failed: ") + msg);
  }
  buffer_.resize(old + static_cast<std::size_t>(n));
  if (n == 0) eof_ = true;
  return n > 0;
}

std::optional<std::string_view> LineReader::next() {
  for (;;) {
    const std::size_t nl = buffer_.find('\n', pos_);
    if (nl != std::string::npos) {
      line_buf_.assign(buffer_, pos_, nl - pos_);
      pos_ = nl + 1;
      break;
    }
    if (!fill()) {
      if (pos_ >= buffer_.size()) return std::nullopt;
      line_buf_.assign(buffer_, pos_, std::string::npos);
      pos_ = buffer_.size();
      break;
    }
  }
  ++line_;
  if (!line_buf_.empty() && line_buf_.back() == '\r') line_buf_.pop_back();
  return std::string_view(line_buf_);
}

LineWriter::LineWriter(std::string path) : path_(std::move(path)) {
  // "T" selects transparent (uncompressed) output through the same API.
  const char* mode = has_gzip_suffix(path_) ? "wb6" : "wbT";
  file_ = gzopen(path_.c_str(), mode);
  if (file_ == nullptr) {
    throw IoError(path_, std::string("cannot open for writing: ") + std::strerror(errno));
  }
}

LineWriter::~LineWriter() {
  try {
    close();
  } catch (...) {
  }
}

void LineWriter::flush_buffer() {
  if (buffer_.empty()) return;
  const int n = gzwrite(as_gz(file_), buffer_.data(), static_cast<unsigned>(buffer_.size()));
  if (n != static_cast<int>(buffer_.size())) throw IoError(path_, "write failed");
  buffer_.clear();
}

void LineWriter::write(std::string_view line) {
  if (file_ == nullptr) throw IoError(path_, "write after close");
  buffer_.append(line);
  buffer_.push_back('\n');
  if (buffer_.size() >= kChunk) flush_buffer();
}

void LineWriter::close() {
  if (file_ == nullptr) return;
  flush_buffer();
  const int rc = gzclose(as_gz(file_));
  file_ = nullptr;
  if (rc != Z_OK) throw IoError(path_, "close failed");
}

nlohmann::json parse_json_line(std::string_view line, const std::string& path,
                               std::size_t line_number) {
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path, line_number, std::string("malformed JSON: ") + e.what());
  }
}

nlohmann::json read_json_file(const std::string& path) {
  LineReader reader(path);
  std::string all;
  while (auto line = reader.next()) {
    all.append(*line);
    all.push_back('\n');
  }
  try {
    return nlohmann::json::parse(all);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path, 0, std::string("malformed JSON: ") + e.what());
  }
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, std::string("cannot open for writing: ") + std::strerror(errno));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError(path, "write failed");
}

}  // namespace mrqa
