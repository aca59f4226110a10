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

#ifndef STEINKIT_CERTIFICATE_HPP_
#define STEINKIT_CERTIFICATE_HPP_

#include <string>
#include <utility>
#include <vector>

#include "steinkit/dist_core.hpp"

namespace stein {

// One theorem's computed bound together with the exact (bracketed)
// distance it is supposed to dominate.  pass() is the global correctness
// alarm: a certified bound must never fall below the exact value.
struct BoundCertificate {
  std::string theorem;
  double bound = 0.0;
  // Named intermediate quantities, in a fixed emission order.
  std::vector<std::pair<std::string, double>> components;
  DistanceInterval exact;
  double margin = 0.0;  // bound - exact.hi

  bool pass() const { return margin >= 0.0; }

  double component(const std::string& name) const;
};

}  // namespace stein

#endif  // STEINKIT_CERTIFICATE_HPP_
