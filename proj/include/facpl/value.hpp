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

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace facpl {

// A calendar instant with second precision, stored as seconds since
// 1970-01-01T00:00:00. A date written without a time is midnight.
struct Date {
  std::int64_t seconds = 0;

  static std::optional<Date> from_civil(int year, unsigned month, unsigned day,
                                        unsigned hour = 0, unsigned minute = 0,
                                        unsigned second = 0);
  // Accepts `YYYY-MM-DD` or `YYYY-MM-DDTHH:MM:SS`.
  static std::optional<Date> parse(std::string_view text);
  std::string to_string() const;

  friend auto operator<=>(const Date&, const Date&) = default;
};

enum class ValueType : std::uint8_t { Bool, Double, String, Date };

std::string_view value_type_name(ValueType t);

// A literal value. Doubles are normalized so that -0.0 becomes 0.0.
class Value {
 public:
  Value() : v_(false) {}
  Value(bool b) : v_(b) {}  // NOLINT
  Value(double d) : v_(d == 0.0 ? 0.0 : d) {}  // NOLINT
  Value(int i) : Value(static_cast<double>(i)) {}  // NOLINT
  Value(std::string s) : v_(std::move(s)) {}  // NOLINT
  Value(const char* s) : v_(std::string(s)) {}  // NOLINT
  Value(Date d) : v_(d) {}  // NOLINT

  ValueType type() const { return static_cast<ValueType>(v_.index()); }
  bool is_bool() const { return type() == ValueType::Bool; }
  bool is_double() const { return type() == ValueType::Double; }
  bool is_string() const { return type() == ValueType::String; }
  bool is_date() const { return type() == ValueType::Date; }

  bool as_bool() const { return std::get<bool>(v_); }
  double as_double() const { return std::get<double>(v_); }
  const std::string& as_string() const { return std::get<std::string>(v_); }
  Date as_date() const { return std::get<Date>(v_); }

  // Literal syntax: true, 5, 2.5, "text", 2016-10-22T10:15:12.
  std::string to_string() const;

  friend bool operator==(const Value& a, const Value& b);
  // Total order: by type tag, then by value (doubles by bit pattern order
  // for NaN, numerically otherwise).
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

 private:
  std::variant<bool, double, std::string, Date> v_;
};

std::string format_double(double d);
std::string quote_string(std::string_view s);

// A finite, non-empty set of values kept sorted and duplicate free.
class ValueSet {
 public:
  explicit ValueSet(std::vector<Value> elems);
  const std::vector<Value>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool contains(const Value& v) const;
  ValueSet with(const Value& v) const;
  std::string to_string() const;

  friend bool operator==(const ValueSet&, const ValueSet&) = default;
  friend auto operator<=>(const ValueSet& a, const ValueSet& b) {
    return a.elems_ <=> b.elems_;
  }

 private:
  std::vector<Value> elems_;
};

struct Bottom {
  friend bool operator==(Bottom, Bottom) { return true; }
};
struct ErrorValue {
  friend bool operator==(ErrorValue, ErrorValue) { return true; }
};

// Value ∪ 2^Value ∪ {⊥, error}.
class ExtendedValue {
 public:
  ExtendedValue() : v_(Bottom{}) {}
  ExtendedValue(Value v) : v_(std::move(v)) {}  // NOLINT
  ExtendedValue(bool b) : v_(Value(b)) {}  // NOLINT
  ExtendedValue(ValueSet s) : v_(std::move(s)) {}  // NOLINT
  ExtendedValue(Bottom b) : v_(b) {}  // NOLINT
  ExtendedValue(ErrorValue e) : v_(e) {}  // NOLINT

  static ExtendedValue bottom() { return Bottom{}; }
  static ExtendedValue error() { return ErrorValue{}; }

  bool is_value() const { return v_.index() == 0; }
  bool is_set() const { return v_.index() == 1; }
  bool is_bottom() const { return v_.index() == 2; }
  bool is_error() const { return v_.index() == 3; }
  bool is_bool() const { return is_value() && value().is_bool(); }
  bool is_true() const { return is_bool() && value().as_bool(); }
  bool is_false() const { return is_bool() && !value().as_bool(); }

  const Value& value() const { return std::get<Value>(v_); }
  const ValueSet& set() const { return std::get<ValueSet>(v_); }

  std::string to_string() const;

  friend bool operator==(const ExtendedValue&, const ExtendedValue&) = default;

 private:
  std::variant<Value, ValueSet, Bottom, ErrorValue> v_;
};

// The values an obligation argument may take once instantiated.
using ArgValue = std::variant<Value, ValueSet>;

std::string arg_to_string(const ArgValue& a);

}  // namespace facpl
