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

#include "facpl/value.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace facpl {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date (Hinnant's algorithm).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m,
                     unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2;
}

bool is_leap(std::int64_t y) {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

unsigned days_in_month(std::int64_t y, unsigned m) {
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30,
                                       31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

bool read_digits(std::string_view s, std::size_t pos, std::size_t n,
                 unsigned& out) {
  if (pos + n > s.size()) return false;
  out = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    out = out * 10 + static_cast<unsigned>(s[i] - '0');
  }
  return true;
}

}  // namespace

std::optional<Date> Date::from_civil(int year, unsigned month, unsigned day,
                                     unsigned hour, unsigned minute,
                                     unsigned second) {
  if (month < 1 || month > 12) return std::nullopt;
  if (day < 1 || day > days_in_month(year, month)) return std::nullopt;
  if (hour > 23 || minute > 59 || second > 59) return std::nullopt;
  Date d;
  d.seconds = days_from_civil(year, month, day) * 86400 + hour * 3600 +
              minute * 60 + second;
  return d;
}

std::optional<Date> Date::parse(std::string_view text) {
  unsigned y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  if (text.size() != 10 && text.size() != 19) return std::nullopt;
  if (!read_digits(text, 0, 4, y) || text[4] != '-' ||
      !read_digits(text, 5, 2, mo) || text[7] != '-' ||
      !read_digits(text, 8, 2, d))
    return std::nullopt;
  if (text.size() == 19) {
    if (text[10] != 'T' || !read_digits(text, 11, 2, h) || text[13] != ':' ||
        !read_digits(text, 14, 2, mi) || text[16] != ':' ||
        !read_digits(text, 17, 2, s))
      return std::nullopt;
  }
  return from_civil(static_cast<int>(y), mo, d, h, mi, s);
}

std::string Date::to_string() const {
  std::int64_t days = seconds / 86400;
  std::int64_t rem = seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[40];
  if (rem == 0) {
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02u",
                  static_cast<long long>(y), m, d);
  } else {
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lld",
                  static_cast<long long>(y), m, d,
                  static_cast<long long>(rem / 3600),
                  static_cast<long long>(rem % 3600 / 60),
                  static_cast<long long>(rem % 60));
  }
  return buf;
}

std::string_view value_type_name(ValueType t) {
  switch (t) {
    case ValueType::Bool: return "Bool";
    case ValueType::Double: return "Double";
    case ValueType::String: return "String";
    case ValueType::Date: return "Date";
  }
  return "?";
}

std::string format_double(double d) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, res.ptr);
}

std::string quote_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string Value::to_string() const {
  switch (type()) {
    case ValueType::Bool: return as_bool() ? "true" : "false";
    case ValueType::Double: return format_double(as_double());
    case ValueType::String: return quote_string(as_string());
    case ValueType::Date: return as_date().to_string();
  }
  return {};
}

bool operator==(const Value& a, const Value& b) {
  if (a.type() != b.type()) return false;
  if (a.is_double()) {
    return std::bit_cast<std::uint64_t>(a.as_double()) ==
           std::bit_cast<std::uint64_t>(b.as_double());
  }
  return a.v_ == b.v_;
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (a.type() != b.type()) return a.v_.index() <=> b.v_.index();
  switch (a.type()) {
    case ValueType::Bool: return a.as_bool() <=> b.as_bool();
    case ValueType::Double: {
      double x = a.as_double(), y = b.as_double();
      if (std::isnan(x) || std::isnan(y)) {
        return std::bit_cast<std::uint64_t>(x) <=>
               std::bit_cast<std::uint64_t>(y);
      }
      if (x < y) return std::strong_ordering::less;
      if (x > y) return std::strong_ordering::greater;
      return std::strong_ordering::equal;
    }
    case ValueType::String: return a.as_string() <=> b.as_string();
    case ValueType::Date: return a.as_date() <=> b.as_date();
  }
  return std::strong_ordering::equal;
}

ValueSet::ValueSet(std::vector<Value> elems) : elems_(std::move(elems)) {
  std::sort(elems_.begin(), elems_.end());
  elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

bool ValueSet::contains(const Value& v) const {
  return std::binary_search(elems_.begin(), elems_.end(), v);
}

ValueSet ValueSet::with(const Value& v) const {
  auto copy = elems_;
  copy.push_back(v);
  return ValueSet(std::move(copy));
}

std::string ValueSet::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    if (i) out += ", ";
    out += elems_[i].to_string();
  }
  return out + "}";
}

std::string ExtendedValue::to_string() const {
  if (is_value()) return value().to_string();
  if (is_set()) return set().to_string();
  if (is_bottom()) return "⊥";
  return "error";
}

std::string arg_to_string(const ArgValue& a) {
  if (const auto* v = std::get_if<Value>(&a)) return v->to_string();
  return std::get<ValueSet>(a).to_string();
}

}  // namespace facpl
