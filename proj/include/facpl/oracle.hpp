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
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "facpl/ast.hpp"
#include "facpl/constraint.hpp"
#include "facpl/evaluator.hpp"

namespace facpl {

// Candidate values per attribute name. Every name in the map ranges over its
// seeds, one wrongly typed probe and ⊥; names outside the map stay ⊥.
using DomainSeed = std::map<AttributeName, std::vector<ExtendedValue>>;

inline constexpr std::uint64_t kDefaultEnumerationBound = 200000;

class EnumerationRefused : public std::runtime_error {
 public:
  explicit EnumerationRefused(std::uint64_t count);
  std::uint64_t count() const { return count_; }

 private:
  std::uint64_t count_;
};

// Probe value of the wrong type for a seed list: a double for strings, a
// string for everything else, a scalar for sets.
ExtendedValue probe_for(const std::vector<ExtendedValue>& seeds);

// The full cross product of the per-name choices, indexed in mixed radix.
class RequestSpace {
 public:
  explicit RequestSpace(const DomainSeed& seeds);

  // Saturates at UINT64_MAX.
  std::uint64_t count() const { return count_; }
  SemanticRequest at(std::uint64_t index) const;
  const std::vector<AttributeName>& names() const { return names_; }

 private:
  std::vector<AttributeName> names_;
  std::vector<std::vector<ExtendedValue>> choices_;
  std::uint64_t count_ = 1;
};

// All requests, or EnumerationRefused when there are more than `bound`.
std::vector<SemanticRequest> enumerate_requests(
    const DomainSeed& seeds, std::uint64_t bound = kDefaultEnumerationBound);

// Indices to visit: all of them within the bound, otherwise `bound` indices
// drawn uniformly with a fixed seed.
std::vector<std::uint64_t> sample_indices(const RequestSpace& space,
                                          std::uint64_t bound,
                                          std::uint64_t seed = 0x5eed);

// Seeds derived from a policy: the literals each name is compared with, plus
// one fresh value of its inferred type; set-typed names get the non-empty
// subsets of size at most 2 of their literals and a fresh singleton.
DomainSeed seed_domains(const Policy& p);

struct OracleReport {
  std::uint64_t space = 0;       // size of the full request space
  std::uint64_t requests = 0;    // requests actually checked
  std::uint64_t agreements = 0;  // decision matched the satisfied component
  std::uint64_t partition_violations = 0;
  bool sampled = false;
  std::vector<std::string> failures;  // first few, human readable

  bool ok() const {
    return partition_violations == 0 && agreements == requests;
  }
};

// Checks partition and correspondence of the constraint tuple against the
// reference evaluator on every enumerated request (sampled past `bound`).
OracleReport check_correspondence(const Policy& p,
                                  std::uint64_t bound = kDefaultEnumerationBound);

}  // namespace facpl
