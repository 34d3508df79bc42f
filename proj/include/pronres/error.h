// Copyright 2026 The pronres Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRONRES_ERROR_H_
#define PRONRES_ERROR_H_

#include <stdexcept>
#include <string>

namespace pronres {

// Error categories. The numeric values are shared with the C API status codes.
enum class ErrorCode {
  kParse = 1,
  kValidation = 2,
  kIo = 3,
  kConfig = 4,
  kShape = 5,
  kNumeric = 6,
  kUsage = 7,
  kAlignment = 8,
  kInternal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string &m) : Error(ErrorCode::kParse, m) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string &m)
      : Error(ErrorCode::kValidation, m) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string &m) : Error(ErrorCode::kIo, m) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string &m) : Error(ErrorCode::kConfig, m) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string &m) : Error(ErrorCode::kShape, m) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string &m) : Error(ErrorCode::kNumeric, m) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string &m) : Error(ErrorCode::kUsage, m) {}
};

class AlignmentError : public Error {
 public:
  explicit AlignmentError(const std::string &m)
      : Error(ErrorCode::kAlignment, m) {}
};

}  // namespace pronres

#endif  // PRONRES_ERROR_H_
