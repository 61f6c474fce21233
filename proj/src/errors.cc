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

#include "kpg/errors.h"

#include <sstream>

namespace kpg {

std::string NumericContext::describe() const {
  std::ostringstream out;
  const char* sep = "";
  auto field = [&](const char* name, const std::optional<int>& value) {
    if (!value) return;
    out << sep << name << "=" << *value;
    sep = " ";
  };
  field("update", update);
  field("k", level);
  field("agent", agent);
  field("coordinate", coordinate);
  return out.str();
}

namespace {

std::string compose(const std::string& what, const NumericContext& context) {
  std::string where = context.describe();
  if (where.empty()) return what;
  return what + " [" + where + "]";
}

}  // namespace

NumericError::NumericError(const std::string& what, NumericContext context)
    : std::runtime_error(compose(what, context)),
      detail_(what),
      context_(context) {}

NumericError NumericError::with_update(int update) const {
  NumericContext updated = context_;
  updated.update = update;
  return NumericError(detail_, updated);
}

}  // namespace kpg
