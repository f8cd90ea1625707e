#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace meshnet {

/* The nine payload kinds a memory cell can hold.  Decimal is a scaled integer
 * (scaled = 49, places = 1 means 4.9) so equality and ordering never touch
 * floating point. */

struct Integer {
  long long v = 0;
  auto operator<=>(const Integer&) const = default;
};

struct Decimal {
  long long scaled = 0;
  int places = 0;  // digits after the point; 10^places is the denominator
  auto operator<=>(const Decimal&) const = default;
};

struct Month {
  int index = 1;  // 1 = January .. 12 = December
  auto operator<=>(const Month&) const = default;
};

struct DateDM {
  int day = 1;
  int month = 1;
  auto operator<=>(const DateDM&) const = default;
};

struct TimeHM {
  int hour = 0;
  int minute = 0;
  auto operator<=>(const TimeHM&) const = default;
};

struct Category {
  std::string text;
  auto operator<=>(const Category&) const = default;
};

struct ColorCode {
  int code = 0;
  auto operator<=>(const ColorCode&) const = default;
};

struct OperatorSym {
  std::string symbol;
  auto operator<=>(const OperatorSym&) const = default;
};

struct Token {
  std::string text;
  auto operator<=>(const Token&) const = default;
};

using Value = std::variant<Integer, Decimal, Month, DateDM, TimeHM, Category,
                           ColorCode, OperatorSym, Token>;

enum class ValueKind {
  Integer,
  Decimal,
  Month,
  DateDM,
  TimeHM,
  Category,
  ColorCode,
  Operator,
  Token,
};

ValueKind kind_of(const Value& v);
const char* kind_name(ValueKind kind);
ValueKind kind_from_name(const std::string& name);

/* Exact fixed-point scalar used as the position of a value on its axis.
 * Comparisons cross-scale through 128-bit intermediates, so 4.9 vs 49/10 vs
 * 490/100 all behave as the same point and no distance ever goes through a
 * double. */
struct AxisValue {
  long long num = 0;
  int places = 0;

  static AxisValue of(long long num, int places = 0) { return AxisValue{num, places}; }
};

bool axis_equal(const AxisValue& a, const AxisValue& b);
bool axis_less(const AxisValue& a, const AxisValue& b);
AxisValue axis_abs_diff(const AxisValue& a, const AxisValue& b);
std::string axis_text(const AxisValue& a);

/* Position of a value on the shared numeric axis; absent for kinds that have
 * no meaningful order (Category, ColorCode, Operator, Token). */
std::optional<AxisValue> axis_of(const Value& v);

/* |a - b| on the axis.  Month pairs use circular distance (Dec and Jan are one
 * step apart); everything else is plain linear difference.  Absent when either
 * side lacks an axis. */
std::optional<AxisValue> distance_between(const Value& a, const Value& b);

/* Canonical text: "13", "4.9", "Jun", "6-Jun", "08:00", "setosa", "01", "+",
 * "hour".  parse_value accepts the forms the CSV/CLI surface uses; months
 * accept full or three-letter names case-insensitively. */
std::string value_text(const Value& v);
Value parse_value(ValueKind kind, const std::string& text, int places = 0);

}  // namespace meshnet
