// Copyright 2026 The Steinkit Authors.
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

#ifndef STEINKIT_ERRORS_HPP_
#define STEINKIT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace stein {

// Thrown when an exact-enumeration or state-space budget is exceeded.
// Distinct from std::domain_error / std::invalid_argument so callers can
// map it to a dedicated exit code.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stein

#endif  // STEINKIT_ERRORS_HPP_
