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

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "facpl/ast.hpp"

namespace facpl {

struct SourceSpan {
  std::string file;
  int start_line = 1;
  int start_col = 1;
  int end_line = 1;
  int end_col = 1;
};

struct ParseDiagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  SourceSpan span;
  std::string message;

  // `file:line:col: error: message`
  std::string to_string() const;
};

template <typename T>
struct ParseResult {
  std::optional<T> value;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return value.has_value(); }
  std::string error_text() const {
    std::string out;
    for (const auto& d : diagnostics) out += d.to_string() + "\n";
    return out;
  }
};

// A policy file holds either a full authorisation system or a bare policy.
using PolicyDocument = std::variant<Pas, Policy>;

ParseResult<PolicyDocument> parse_document(std::string_view text,
                                           std::string_view file = "<input>");
ParseResult<Policy> parse_policy(std::string_view text,
                                 std::string_view file = "<input>");
ParseResult<Pas> parse_pas(std::string_view text,
                           std::string_view file = "<input>");
ParseResult<Expr> parse_expr(std::string_view text,
                             std::string_view file = "<input>");
ParseResult<SyntacticRequest> parse_request(std::string_view text,
                                            std::string_view file = "<input>");

// Canonical concrete syntax; parse(print(x)) == x.
std::string print(const Expr& e);
std::string print(const Obligation& o);
std::string print(const Policy& p);
std::string print(const Pas& pas);
std::string print(const Pdp& pdp);
std::string print(const SyntacticRequest& r);
std::string print(const PolicyDocument& doc);

// The PDP a document denotes: a PAS's PDP, or the bare policy itself.
Pdp document_pdp(const PolicyDocument& doc);

}  // namespace facpl
