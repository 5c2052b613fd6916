// Copyright 2026 The memprobe Authors.
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace memprobe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientVocabulary : public Error {
 public:
  using Error::Error;
};

class VocabularyExhausted : public Error {
 public:
  using Error::Error;
};

/// The requested token budget cannot hold the task's mandatory structure,
/// or the core items already overflow it.
class BudgetTooSmall : public Error {
 public:
  using Error::Error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class DegenerateTagging : public Error {
 public:
  using Error::Error;
};

class InvalidSwap : public Error {
 public:
  InvalidSwap(std::size_t step, const std::string& what)
      : Error("invalid swap at step " + std::to_string(step) + ": " + what),
        step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class MalformedLine : public Error {
 public:
  MalformedLine(std::size_t line_no, const std::string& what)
      : Error("malformed line " + std::to_string(line_no) + ": " + what),
        line_no_(line_no) {}
  std::size_t line_no() const noexcept { return line_no_; }

 private:
  std::size_t line_no_;
};

class SchemaVersionMismatch : public Error {
 public:
  using Error::Error;
};

class CaseRecordMismatch : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

class AuthMissing : public Error {
 public:
  using Error::Error;
};

class ResponseMalformed : public Error {
 public:
  using Error::Error;
};

}  // namespace memprobe
