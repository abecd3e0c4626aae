// Copyright 2025 The FACPL Workbench authors
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

#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "facpl/ast.hpp"
#include "facpl/evaluator.hpp"

namespace facpl {

// p(d, w, a): d nesting levels, w children per policy set, a attribute names.
struct GenSpec {
  int depth = 1;
  int width = 1;
  int attributes = 1;
  std::uint64_t seed = 0;
};

inline constexpr int kMaxGenDepth = 8;
inline constexpr int kMaxGenWidth = 8;

class GenGuardExceeded : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Σ_{i=1..d} wⁱ.
std::uint64_t subpolicy_count(int d, int w);

struct GenAttribute {
  AttributeName name;
  bool is_set = false;
  std::vector<Value> pool;  // the 4 literals targets compare against
};

// The attribute pool for a spec; deterministic in the seed.
std::vector<GenAttribute> gen_attributes(const GenSpec& spec);

// Throws GenGuardExceeded when d or w is outside 1..8 or a < 1.
Policy gen_policy(const GenSpec& spec);

// A random request over the spec's attribute pool, for benchmarks.
SemanticRequest gen_request(const std::vector<GenAttribute>& attrs,
                            std::mt19937_64& rng);

}  // namespace facpl
