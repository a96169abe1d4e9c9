// Copyright 2026 The predbench Authors.
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

#ifndef PREDBENCH_ERROR_HPP_
#define PREDBENCH_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace predbench {

// Every library failure derives from Error; `code()` is a stable
// machine-readable tag used by the CLI's one-line error output.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error("invalid_argument", what) {}
};

class NotFound : public Error {
 public:
  explicit NotFound(const std::string& what) : Error("not_found", what) {}
};

class InsufficientData : public Error {
 public:
  explicit InsufficientData(const std::string& what)
      : Error("insufficient_data", what) {}
};

class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what)
      : Error("numerical_failure", what) {}
};

class DuplicateExhaustion : public Error {
 public:
  explicit DuplicateExhaustion(const std::string& what)
      : Error("duplicate_exhaustion", what) {}
};

class ProtocolFailure : public Error {
 public:
  explicit ProtocolFailure(const std::string& what)
      : Error("protocol_failure", what) {}
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& what)
      : Error("budget_exceeded", what) {}
};

class DivergedTraining : public Error {
 public:
  DivergedTraining(std::size_t epoch, const std::string& what)
      : Error("diverged_training", what), epoch_(epoch) {}
  // 1-based epoch whose loss became non-finite.
  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error("format", what) {}
};

// Bad configuration file contents; `line` is 1-based, 0 when unknown.
class ConfigError : public Error {
 public:
  ConfigError(std::size_t line, const std::string& key, const std::string& what)
      : Error("config", (line ? "line " + std::to_string(line) + ": " : std::string()) +
                            (key.empty() ? what : "key '" + key + "': " + what)),
        line_(line),
        key_(key) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  std::size_t line_;
  std::string key_;
};

}  // namespace predbench

#endif  // PREDBENCH_ERROR_HPP_
