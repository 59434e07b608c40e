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

#ifndef MRQA_ERROR_H_
#define MRQA_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mrqa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that cannot be parsed. Carries the 1-based line number when known.
class FormatError : public Error {
 public:
  FormatError(const std::string& path, std::size_t line, const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": " + what),
        path_(path),
        line_(line) {}

  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

// Parsed input that violates a data contract (missing field, duplicate id).
class ValidationError : public FormatError {
 public:
  using FormatError::FormatError;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Caller supplied arguments outside an operation's preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace mrqa

#endif  // MRQA_ERROR_H_
