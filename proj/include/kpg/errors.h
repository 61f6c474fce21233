// Copyright 2026 The KPG Lab Authors. All rights reserved.
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

#ifndef KPG_ERRORS_H_
#define KPG_ERRORS_H_

#include <optional>
#include <stdexcept>
#include <string>

namespace kpg {

// Caller supplied something the contract rejects (shapes, ranges, keys).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition on the numeric state does not hold, e.g. a
// reference point that is not stationary.
class PreconditionError : public InputError {
 public:
  using InputError::InputError;
};

// Where in the computation a numeric failure happened. Every field is
// optional; only the ones known at the throw site are filled in.
struct NumericContext {
  std::optional<int> update;
  std::optional<int> level;
  std::optional<int> agent;
  std::optional<int> coordinate;

  std::string describe() const;
};

class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, NumericContext context = {});

  const NumericContext& context() const { return context_; }
  const std::string& detail() const { return detail_; }

  // Returns a copy with the update index attached, for errors re-raised by
  // training loops.
  NumericError with_update(int update) const;

 private:
  std::string detail_;
  NumericContext context_;
};

class DegenerateGeometryError : public NumericError {
 public:
  using NumericError::NumericError;
};

class SingularityError : public NumericError {
 public:
  using NumericError::NumericError;
};

class EstimationError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace kpg

#endif  // KPG_ERRORS_H_
