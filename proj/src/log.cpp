// Copyright 2026 The mcbench Authors.
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

#include "mcbench/log.hpp"

#include <iostream>
#include <map>
#include <mutex>
#include <string>

namespace mcbench {

void log_warning(std::string_view message) {
  static std::mutex mu;
  static std::map<std::string, int, std::less<>> seen;
  std::lock_guard lock(mu);
  auto it = seen.find(message);
  if (it == seen.end()) it = seen.emplace(std::string(message), 0).first;
  if (++it->second <= 3) std::clog << "[mcbench] warning: " << message << '\n';
}

}  // namespace mcbench
