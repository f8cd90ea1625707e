#include "meshnet/value.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <map>

#include "meshnet/error.hpp"

namespace meshnet {

namespace {

constexpr std::array<const char*, 12> kMonthShort = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun",
    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

constexpr std::array<const char*, 12> kMonthFull = {
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December"};

// Non-leap year: days in each month and cumulative offset of the month start.
constexpr std::array<int, 12> kMonthDays = {31, 28, 31, 30, 31, 30,
                                            31, 31, 30, 31, 30, 31};
constexpr std::array<int, 12> kMonthOffset = {0,   31,  59,  90,  120, 151,
                                              181, 212, 243, 273, 304, 334};

long long pow10ll(int n) {
  long long r = 1;
  while (n-- > 0) r *= 10;
  return r;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

int parse_month_name(const std::string& raw) {
  const std::string text = lower(raw);
  for (int i = 0; i < 12; ++i) {
    if (text == lower(kMonthShort[i]) || text == lower(kMonthFull[i])) return i + 1;
  }
  fail(Errc::RowParseError, "unknown month name '" + raw + "'");
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

long long to_ll(const std::string& s, const std::string& what) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno != 0 || end == nullptr || *end != '\0') {
    fail(Errc::RowParseError, "bad " + what + " '" + s + "'");
  }
  return v;
}

// Cross-scaled comparison/difference of two fixed-point numbers.  Scales stay
// tiny (<= minutes-per-day precision) so __int128 cannot overflow.
__int128 scaled_to(const AxisValue& a, int places) {
  return static_cast<__int128>(a.num) * pow10ll(places - a.places);
}

}  // namespace

ValueKind kind_of(const Value& v) {
  return static_cast<ValueKind>(v.index());
}

const char* kind_name(ValueKind kind) {
  switch (kind) {
    case ValueKind::Integer: return "int";
    case ValueKind::Decimal: return "dec";
    case ValueKind::Month: return "month";
    case ValueKind::DateDM: return "date-dm";
    case ValueKind::TimeHM: return "time-hm";
    case ValueKind::Category: return "cat";
    case ValueKind::ColorCode: return "color";
    case ValueKind::Operator: return "op";
    case ValueKind::Token: return "token";
  }
  return "?";
}

ValueKind kind_from_name(const std::string& name) {
  static const std::map<std::string, ValueKind> kByName = {
      {"int", ValueKind::Integer},    {"dec", ValueKind::Decimal},
      {"month", ValueKind::Month},    {"date-dm", ValueKind::DateDM},
      {"time-hm", ValueKind::TimeHM}, {"cat", ValueKind::Category},
      {"color", ValueKind::ColorCode}, {"op", ValueKind::Operator},
      {"token", ValueKind::Token}};
  const auto it = kByName.find(name);
  if (it == kByName.end()) {
    fail(Errc::InvalidArgument, "unknown value kind '" + name + "'");
  }
  return it->second;
}

bool axis_equal(const AxisValue& a, const AxisValue& b) {
  const int p = std::max(a.places, b.places);
  return scaled_to(a, p) == scaled_to(b, p);
}

bool axis_less(const AxisValue& a, const AxisValue& b) {
  const int p = std::max(a.places, b.places);
  return scaled_to(a, p) < scaled_to(b, p);
}

AxisValue axis_abs_diff(const AxisValue& a, const AxisValue& b) {
  const int p = std::max(a.places, b.places);
  __int128 d = scaled_to(a, p) - scaled_to(b, p);
  if (d < 0) d = -d;
  return AxisValue{static_cast<long long>(d), p};
}

std::string axis_text(const AxisValue& a) {
  return value_text(Decimal{a.num, a.places});
}

std::optional<AxisValue> axis_of(const Value& v) {
  switch (kind_of(v)) {
    case ValueKind::Integer:
      return AxisValue{std::get<Integer>(v).v, 0};
    case ValueKind::Decimal: {
      const auto& d = std::get<Decimal>(v);
      return AxisValue{d.scaled, d.places};
    }
    case ValueKind::Month:
      return AxisValue{std::get<Month>(v).index, 0};
    case ValueKind::DateDM: {
      const auto& d = std::get<DateDM>(v);
      return AxisValue{kMonthOffset[d.month - 1] + d.day, 0};
    }
    case ValueKind::TimeHM: {
      const auto& t = std::get<TimeHM>(v);
      return AxisValue{static_cast<long long>(t.hour) * 60 + t.minute, 0};
    }
    default:
      return std::nullopt;
  }
}

std::optional<AxisValue> distance_between(const Value& a, const Value& b) {
  // The month cycle is closed: December and January are neighbours.
  if (std::holds_alternative<Month>(a) && std::holds_alternative<Month>(b)) {
    int d = std::abs(std::get<Month>(a).index - std::get<Month>(b).index);
    d = std::min(d, 12 - d);
    return AxisValue{d, 0};
  }
  const auto xa = axis_of(a);
  const auto xb = axis_of(b);
  if (!xa || !xb) return std::nullopt;
  return axis_abs_diff(*xa, *xb);
}

std::string value_text(const Value& v) {
  switch (kind_of(v)) {
    case ValueKind::Integer:
      return std::to_string(std::get<Integer>(v).v);
    case ValueKind::Decimal: {
      const auto& d = std::get<Decimal>(v);
      if (d.places == 0) return std::to_string(d.scaled);
      const long long den = pow10ll(d.places);
      const long long mag = d.scaled < 0 ? -d.scaled : d.scaled;
      std::string frac = std::to_string(mag % den);
      frac.insert(frac.begin(), static_cast<size_t>(d.places) - frac.size(), '0');
      return (d.scaled < 0 ? "-" : "") + std::to_string(mag / den) + "." + frac;
    }
    case ValueKind::Month:
      return kMonthShort[std::get<Month>(v).index - 1];
    case ValueKind::DateDM: {
      const auto& d = std::get<DateDM>(v);
      return std::to_string(d.day) + "-" + kMonthShort[d.month - 1];
    }
    case ValueKind::TimeHM: {
      const auto& t = std::get<TimeHM>(v);
      char buf[8];
      std::snprintf(buf, sizeof buf, "%02d:%02d", t.hour, t.minute);
      return buf;
    }
    case ValueKind::Category:
      return std::get<Category>(v).text;
    case ValueKind::ColorCode: {
      char buf[8];
      std::snprintf(buf, sizeof buf, "%02d", std::get<ColorCode>(v).code);
      return buf;
    }
    case ValueKind::Operator:
      return std::get<OperatorSym>(v).symbol;
    case ValueKind::Token:
      return std::get<Token>(v).text;
  }
  return {};
}

Value parse_value(ValueKind kind, const std::string& text, int places) {
  switch (kind) {
    case ValueKind::Integer: {
      std::string body = text;
      bool neg = false;
      if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
        neg = body[0] == '-';
        body.erase(body.begin());
      }
      if (!all_digits(body)) fail(Errc::RowParseError, "bad integer '" + text + "'");
      const long long v = to_ll(body, "integer");
      return Integer{neg ? -v : v};
    }
    case ValueKind::Decimal: {
      std::string body = text;
      bool neg = false;
      if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
        neg = body[0] == '-';
        body.erase(body.begin());
      }
      std::string whole = body, frac;
      if (const auto dot = body.find('.'); dot != std::string::npos) {
        whole = body.substr(0, dot);
        frac = body.substr(dot + 1);
      }
      if (!all_digits(whole) || (!frac.empty() && !all_digits(frac))) {
        fail(Errc::RowParseError, "bad decimal '" + text + "'");
      }
      if (static_cast<int>(frac.size()) > places) {
        fail(Errc::RowParseError, "decimal '" + text + "' exceeds " +
                                      std::to_string(places) + " place(s)");
      }
      frac.append(static_cast<size_t>(places) - frac.size(), '0');
      long long scaled = to_ll(whole, "decimal") * pow10ll(places);
      if (!frac.empty()) scaled += to_ll(frac, "decimal fraction");
      return Decimal{neg ? -scaled : scaled, places};
    }
    case ValueKind::Month:
      return Month{parse_month_name(text)};
    case ValueKind::DateDM: {
      const auto dash = text.find('-');
      if (dash == std::string::npos || dash == 0 || dash + 1 >= text.size()) {
        fail(Errc::RowParseError, "bad date '" + text + "' (want day-Month)");
      }
      const std::string day_part = text.substr(0, dash);
      if (!all_digits(day_part)) fail(Errc::RowParseError, "bad date '" + text + "'");
      const int day = static_cast<int>(to_ll(day_part, "day"));
      const int month = parse_month_name(text.substr(dash + 1));
      if (day < 1 || day > kMonthDays[month - 1]) {
        fail(Errc::RowParseError, "day out of range in '" + text + "'");
      }
      return DateDM{day, month};
    }
    case ValueKind::TimeHM: {
      const auto colon = text.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 >= text.size()) {
        fail(Errc::RowParseError, "bad time '" + text + "' (want HH:MM)");
      }
      const std::string h = text.substr(0, colon), m = text.substr(colon + 1);
      if (!all_digits(h) || !all_digits(m)) {
        fail(Errc::RowParseError, "bad time '" + text + "'");
      }
      const int hour = static_cast<int>(to_ll(h, "hour"));
      const int minute = static_cast<int>(to_ll(m, "minute"));
      if (hour > 23 || minute > 59) {
        fail(Errc::RowParseError, "time out of range in '" + text + "'");
      }
      return TimeHM{hour, minute};
    }
    case ValueKind::Category: {
      if (text.empty()) fail(Errc::RowParseError, "empty category value");
      return Category{text};
    }
    case ValueKind::ColorCode:
      if (!all_digits(text)) fail(Errc::RowParseError, "bad color code '" + text + "'");
      return ColorCode{static_cast<int>(to_ll(text, "color code"))};
    case ValueKind::Operator:
      if (text.empty()) fail(Errc::RowParseError, "empty operator");
      return OperatorSym{text};
    case ValueKind::Token:
      if (text.empty()) fail(Errc::RowParseError, "empty token");
      return Token{text};
  }
  fail(Errc::RowParseError, "unhandled kind");
}

}  // namespace meshnet
