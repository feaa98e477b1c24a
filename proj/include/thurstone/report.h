// Copyright 2026 The Thurstone Authors.
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

#ifndef THURSTONE_REPORT_H_
#define THURSTONE_REPORT_H_

#include <string>

namespace thurstone {

// A checked side condition `value <= limit` (or the named predicate).
struct ConditionFlag {
  std::string name;
  bool satisfied = false;
  double value = 0.0;
  double limit = 0.0;
};

}  // namespace thurstone

#endif  // THURSTONE_REPORT_H_
