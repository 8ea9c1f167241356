// Copyright 2026 The SemantiX Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace semantix {

// Invalid input data: empty references, malformed records, shape mismatches.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value outside the supported domain of an operation.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class CorpusFormatError : public DataError {
 public:
  CorpusFormatError(std::string path, std::size_t line, std::string msg)
      : DataError(path + ":" + std::to_string(line) + ": " + msg),
        path_(std::move(path)),
        line_(line) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

class CacheError : public DataError {
 public:
  CacheError(std::string path, const std::string& msg)
      : DataError("embedding cache " + path + ": " + msg), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Failure of an embedding backend. Retryable errors (network, 5xx, 429) may
// succeed on a later attempt; permanent ones (bad request, protocol
// violations) will not.
class ProviderError : public std::runtime_error {
 public:
  ProviderError(const std::string& msg, bool retryable)
      : std::runtime_error(msg), retryable_(retryable) {}

  bool retryable() const noexcept { return retryable_; }

 private:
  bool retryable_;
};

}  // namespace semantix
