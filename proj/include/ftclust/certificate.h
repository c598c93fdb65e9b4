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

#ifndef FTCLUST_CERTIFICATE_H_
#define FTCLUST_CERTIFICATE_H_

#include <map>
#include <string>

#include "ftclust/errors.h"

namespace ftclust {

// Counts evaluated runtime checks per name. A failed check throws
// InvariantError immediately, so a finished certificate means all passed.
class Certificate {
 public:
  void Check(const std::string& name, bool ok, const std::string& detail = "") {
    ++counts_[name];
    if (!ok) throw InvariantError(name, detail.empty() ? "check failed" : detail);
  }
  void Merge(const Certificate& other) {
    for (const auto& [name, n] : other.counts_) counts_[name] += n;
  }
  const std::map<std::string, int>& counts() const { return counts_; }

 private:
  std::map<std::string, int> counts_;
};

}  // namespace ftclust

#endif  // FTCLUST_CERTIFICATE_H_
