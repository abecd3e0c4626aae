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

#include "facpl/generator.hpp"

#include <array>
#include <string>

namespace facpl {

namespace {

constexpr std::array<const char*, 4> kCategories = {"subject", "resource",
                                                     "action", "environment"};

void check(const GenSpec& s) {
  if (s.depth < 1 || s.depth > kMaxGenDepth || s.width < 1 ||
      s.width > kMaxGenWidth || s.attributes < 1)
    throw GenGuardExceeded("generator spec outside d,w in 1.." +
                           std::to_string(kMaxGenDepth) + ", a >= 1");
}

class Builder {
 public:
  Builder(const GenSpec& spec, std::vector<GenAttribute> attrs)
      : spec_(spec), attrs_(std::move(attrs)), rng_(spec.seed ^ 0x9e37u) {
    for (std::size_t k = 0; k < attrs_.size(); ++k)
      if (attrs_[k].is_set) set_names_.push_back(k);
  }

  Policy node(int level) {
    if (level == spec_.depth) {
      Rule r;
      r.effect = coin(0.5) ? Effect::Permit : Effect::Deny;
      r.target = target(false);
      if (coin(0.3)) r.obligations.push_back(obligation());
      return r;
    }
    PolicySet s;
    s.alg = kAllAlgorithms[pick(kAllAlgorithms.size())];
    s.strategy = Strategy::All;
    s.target = target(true);
    for (int i = 0; i < spec_.width; ++i) s.policies.push_back(node(level + 1));
    if (coin(0.3)) {
      (coin(0.5) ? s.obl_permit : s.obl_deny).push_back(obligation());
    }
    return s;
  }

 private:
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  // Policy-set targets only test membership in set-valued names, so a
  // request carrying a broad set reaches deep into the hierarchy.
  Expr atom(bool set_only) {
    const GenAttribute& a =
        set_only ? attrs_[set_names_[pick(set_names_.size())]]
                 : attrs_[pick(attrs_.size())];
    Expr lit = Expr::literal(a.pool[pick(a.pool.size())]);
    if (a.is_set) return ein(lit, Expr::name(a.name));
    return eequal(Expr::name(a.name), lit);
  }

  Expr target(bool set_only) {
    Expr t = atom(set_only);
    const std::size_t extra = pick(3);
    for (std::size_t i = 0; i < extra; ++i) t = eand(t, atom(set_only));
    return t;
  }

  Obligation obligation() {
    Obligation o;
    o.type = coin(0.7) ? ObType::Mandatory : ObType::Optional;
    o.action = "log";
    const std::size_t n = 1 + pick(2);
    for (std::size_t i = 0; i < n; ++i)
      o.args.push_back(Expr::name(attrs_[pick(attrs_.size())].name));
    return o;
  }

  GenSpec spec_;
  std::vector<GenAttribute> attrs_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> set_names_;
};

}  // namespace

std::uint64_t subpolicy_count(int d, int w) {
  std::uint64_t total = 0, level = 1;
  for (int i = 1; i <= d; ++i) {
    level *= static_cast<std::uint64_t>(w);
    total += level;
  }
  return total;
}

std::vector<GenAttribute> gen_attributes(const GenSpec& spec) {
  check(spec);
  std::mt19937_64 rng(spec.seed);
  std::bernoulli_distribution set_kind(0.25);
  std::vector<GenAttribute> out;
  out.reserve(spec.attributes);
  for (int k = 0; k < spec.attributes; ++k) {
    GenAttribute a;
    a.name = {kCategories[k % kCategories.size()], "attr" + std::to_string(k)};
    a.is_set = k == 0 || set_kind(rng);
    for (int j = 0; j < 4; ++j)
      a.pool.emplace_back("a" + std::to_string(k) + "-v" + std::to_string(j));
    out.push_back(std::move(a));
  }
  return out;
}

Policy gen_policy(const GenSpec& spec) {
  check(spec);
  Builder b(spec, gen_attributes(spec));
  return b.node(0);
}

SemanticRequest gen_request(const std::vector<GenAttribute>& attrs,
                            std::mt19937_64& rng) {
  std::bernoulli_distribution bound(0.9);
  std::bernoulli_distribution member(0.75);
  std::uniform_int_distribution<std::size_t> lit(0, 4);  // 4 means unseen
  std::map<AttributeName, ExtendedValue> b;
  for (const auto& a : attrs) {
    if (!bound(rng)) continue;
    auto value_at = [&](std::size_t i) {
      return i < a.pool.size() ? a.pool[i] : Value("unseen");
    };
    if (a.is_set) {
      std::vector<Value> elems;
      for (const auto& v : a.pool)
        if (member(rng)) elems.push_back(v);
      if (elems.empty()) elems.push_back(Value("unseen"));
      b.emplace(a.name, ValueSet(std::move(elems)));
    } else {
      b.emplace(a.name, value_at(lit(rng)));
    }
  }
  return SemanticRequest(std::move(b));
}

}  // namespace facpl
