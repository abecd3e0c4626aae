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

#include <algorithm>
#include <array>
#include <map>
#include <string>
#include <vector>

#include "facpl/evaluator.hpp"

// Combination matrices and helpers shared by the unit and acceptance tests.
namespace facpl::test {

// Combination matrices, transcribed cell by cell. Rows are the first
// argument and columns the second, both ordered permit, deny, not-app,
// indet. P1/D1 keep the first argument's obligations, P2/D2 the second's,
// P12/D12 concatenate them, Pe/De carry none.
inline const std::map<AlgId, std::array<std::array<const char*, 4>, 4>> kMatrix = {
    {AlgId::POver, {{{"P12", "P1", "P1", "P1"},
                     {"P2", "D12", "D1", "I"},
                     {"P2", "D2", "N", "I"},
                     {"P2", "I", "I", "I"}}}},
    {AlgId::DOver, {{{"P12", "D2", "P1", "I"},
                     {"D1", "D12", "D1", "D1"},
                     {"P2", "D2", "N", "I"},
                     {"I", "D2", "I", "I"}}}},
    {AlgId::DUnlessP, {{{"P12", "P1", "P1", "P1"},
                        {"P2", "D12", "D1", "D1"},
                        {"P2", "D2", "De", "De"},
                        {"P2", "D2", "De", "De"}}}},
    {AlgId::PUnlessD, {{{"P12", "D2", "P1", "P1"},
                        {"D1", "D12", "D1", "D1"},
                        {"P2", "D2", "Pe", "Pe"},
                        {"P2", "D2", "Pe", "Pe"}}}},
    {AlgId::FirstApp, {{{"P1", "P1", "P1", "P1"},
                        {"D1", "D1", "D1", "D1"},
                        {"P2", "D2", "N", "I"},
                        {"I", "I", "I", "I"}}}},
    {AlgId::OneApp, {{{"I", "I", "P1", "I"},
                      {"I", "I", "D1", "I"},
                      {"P2", "D2", "N", "I"},
                      {"I", "I", "I", "I"}}}},
    {AlgId::WeakCon, {{{"P12", "I", "P1", "I"},
                       {"I", "D12", "D1", "I"},
                       {"P2", "D2", "N", "I"},
                       {"I", "I", "I", "I"}}}},
    {AlgId::StrongCon, {{{"P12", "I", "I", "I"},
                         {"I", "D12", "I", "I"},
                         {"I", "I", "N", "I"},
                         {"I", "I", "I", "I"}}}},
};

inline PdpResponse arg(int cls, const std::vector<InstantiatedObligation>& fo) {
  switch (cls) {
    case 0: return {Decision::Permit, fo};
    case 1: return {Decision::Deny, fo};
    case 2: return PdpResponse::not_app();
    default: return PdpResponse::indet();
  }
}

inline PdpResponse expected_cell(const std::string& cell,
                          const std::vector<InstantiatedObligation>& fo1,
                          const std::vector<InstantiatedObligation>& fo2) {
  if (cell == "N") return PdpResponse::not_app();
  if (cell == "I") return PdpResponse::indet();
  const Decision d = cell[0] == 'P' ? Decision::Permit : Decision::Deny;
  std::vector<InstantiatedObligation> obs;
  const std::string recipe = cell.substr(1);
  if (recipe.find('1') != std::string::npos) obs.insert(obs.end(), fo1.begin(), fo1.end());
  if (recipe.find('2') != std::string::npos) obs.insert(obs.end(), fo2.begin(), fo2.end());
  return {d, obs};
}

// A rule whose evaluation lands in the given decision class with one
// obligation named after its position.
inline Policy rule_for(int cls, int position) {
  Rule r;
  const std::string action = "o" + std::to_string(position);
  switch (cls) {
    case 0: r.effect = Effect::Permit; r.obligations = {{ObType::Mandatory, action, {}}}; break;
    case 1: r.effect = Effect::Deny; r.obligations = {{ObType::Mandatory, action, {}}}; break;
    case 2: r.target = elit(false); break;
    default: r.target = enot(elit(5)); break;
  }
  return r;
}

inline bool is_prefix(const std::vector<InstantiatedObligation>& a,
               const std::vector<InstantiatedObligation>& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace facpl::test
