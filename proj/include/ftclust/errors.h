// Copyright 2026 The Authors.
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

#ifndef FTCLUST_ERRORS_H_
#define FTCLUST_ERRORS_H_

#include <stdexcept>
#include <string>

namespace ftclust {

// Malformed input document or an instance that breaks a data invariant.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No solution satisfies the side constraint and the requirement r.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A structural guarantee of the algorithm failed at run time. `check()` names
// the guarantee, e.g. "lemma1.disjoint_balls".
class InvariantError : public std::runtime_error {
 public:
  InvariantError(std::string check, const std::string& detail)
      : std::runtime_error(check + ": " + detail), check_(std::move(check)) {}

  const std::string& check() const { return check_; }

 private:
  std::string check_;
};

}  // namespace ftclust

#endif  // FTCLUST_ERRORS_H_
