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

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "facpl/evaluator.hpp"
#include "facpl/parser.hpp"

namespace facpl::test {

inline std::string source_path(const std::string& rel) {
  return std::string(FACPL_SOURCE_DIR) + "/" + rel;
}

inline std::string read_text(const std::string& rel) {
  std::ifstream in(source_path(rel), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + rel);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline Policy load_policy(const std::string& rel) {
  auto r = parse_policy(read_text(rel), rel);
  if (!r.ok()) throw std::runtime_error(r.error_text());
  return std::move(*r.value);
}

inline Pas load_pas(const std::string& rel) {
  auto r = parse_pas(read_text(rel), rel);
  if (!r.ok()) throw std::runtime_error(r.error_text());
  return std::move(*r.value);
}

inline SyntacticRequest load_request(const std::string& rel) {
  auto r = parse_request(read_text(rel), rel);
  if (!r.ok()) throw std::runtime_error(r.error_text());
  return std::move(*r.value);
}

inline Policy p1() { return load_policy("policies/ehealth/p1.fpl"); }
inline Policy p2() { return load_policy("policies/ehealth/p2.fpl"); }
inline SyntacticRequest req1() { return load_request("policies/ehealth/req1.req"); }
inline SyntacticRequest req2() { return load_request("policies/ehealth/req2.req"); }
inline SyntacticRequest req2_mail() {
  return load_request("policies/ehealth/req2-mail.req");
}

inline Date ehealth_time() { return *Date::parse("2016-10-22T10:15:12"); }

inline AttributeName attr(const std::string& qualified) {
  return *AttributeName::parse(qualified);
}

inline Policy parse_or_throw(const std::string& text) {
  auto r = parse_policy(text, "<test>");
  if (!r.ok()) throw std::runtime_error(r.error_text());
  return std::move(*r.value);
}

}  // namespace facpl::test
