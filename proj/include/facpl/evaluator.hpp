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

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "facpl/ast.hpp"
#include "facpl/value.hpp"

namespace facpl {

// Supplies values for names the request does not bind (for example the
// current time). Called at most once per name; results are memoized.
using ContextProvider =
    std::function<std::optional<ExtendedValue>(const AttributeName&)>;

// Provider that binds system/time to `now`.
ContextProvider time_provider(Date now);
// Provider that binds system/time to the wall clock at first lookup.
ContextProvider wall_clock_provider();

// A total map from attribute names to Value | ValueSet | ⊥.
class SemanticRequest {
 public:
  SemanticRequest() = default;
  explicit SemanticRequest(std::map<AttributeName, ExtendedValue> bindings,
                           ContextProvider provider = nullptr);

  SemanticRequest(const SemanticRequest& other);
  SemanticRequest& operator=(const SemanticRequest& other);
  SemanticRequest(SemanticRequest&&) noexcept = default;
  SemanticRequest& operator=(SemanticRequest&&) noexcept = default;

  ExtendedValue lookup(const AttributeName& n) const;

  void bind(const AttributeName& n, ExtendedValue v);
  const std::map<AttributeName, ExtendedValue>& bindings() const {
    return bindings_;
  }

 private:
  struct Memo {
    std::mutex mu;
    std::map<AttributeName, ExtendedValue> values;
  };
  std::map<AttributeName, ExtendedValue> bindings_;
  ContextProvider provider_;
  std::unique_ptr<Memo> memo_;
};

// Folds repeated names with the merge operator: v ⋓ v' = {v, v'},
// V ⋓ v' = V ∪ {v'}, ⊥ ⋓ v' = v'.
SemanticRequest build_request(const SyntacticRequest& sr,
                              ContextProvider provider = nullptr);

ExtendedValue eval_expr(const Expr& e, const SemanticRequest& r);

// nullopt stands for the error result: some element was error or ⊥.
std::optional<std::vector<ArgValue>> eval_expr_seq(const std::vector<Expr>& es,
                                                   const SemanticRequest& r);

std::optional<std::vector<InstantiatedObligation>> instantiate_obligations(
    const std::vector<Obligation>& os, const SemanticRequest& r);

PdpResponse eval_policy(const Policy& p, const SemanticRequest& r);

PdpResponse combine_binary(AlgId alg, const PdpResponse& a,
                           const PdpResponse& b);

bool is_final(AlgId alg, const PdpResponse& res);

// Result for a single input under `alg` (p-unless-d and d-unless-p turn
// not-app and indet into their default decision).
PdpResponse combine_single(AlgId alg, PdpResponse res);

PdpResponse combine(AlgId alg, Strategy strategy,
                    const std::vector<Policy>& ps, const SemanticRequest& r);

// Same as combine() but over already computed responses, produced lazily.
PdpResponse combine_responses(
    AlgId alg, Strategy strategy, std::size_t count,
    const std::function<PdpResponse(std::size_t)>& response_at);

PdpResponse eval_pdp(const Pdp& pdp, const SemanticRequest& r);

}  // namespace facpl
