#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

#include "sdncg/error.hpp"

namespace sdncg {

using Rational = boost::rational<std::int64_t>;

/// "p" when integral, "p/q" otherwise (always lowest terms).
inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

namespace detail {

inline std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw parameter_error("not an exact rational: '" + std::string(whole) +
                          "' (expected an integer or p/q)");
  }
  return value;
}

}  // namespace detail

/// Parses an integer or "p/q". Decimal notation is rejected.
inline Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(detail::parse_int(text, text));
  auto num = detail::parse_int(text.substr(0, slash), text);
  auto den = detail::parse_int(text.substr(slash + 1), text);
  if (den == 0) throw parameter_error("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

/// The edge benefit α: an exact positive rational in lowest terms.
///
/// Every threshold the game cares about compares α against an integer
/// distance change, so the comparison helpers avoid building rationals.
class Alpha {
 public:
  explicit Alpha(Rational value) : value_(value) {
    if (value_ <= Rational(0)) throw parameter_error("alpha must be positive, got " + to_string(value_));
  }
  Alpha(std::int64_t num, std::int64_t den = 1) : Alpha(Rational(num, den)) {}

  static Alpha parse(std::string_view text) { return Alpha(parse_rational(text)); }

  const Rational& value() const noexcept { return value_; }
  std::int64_t num() const noexcept { return value_.numerator(); }
  std::int64_t den() const noexcept { return value_.denominator(); }

  // α > x
  bool exceeds(std::int64_t x) const noexcept { return num() > x * den(); }
  // α < x
  bool below(std::int64_t x) const noexcept { return num() < x * den(); }

  friend bool operator==(const Alpha& a, const Alpha& b) { return a.value_ == b.value_; }

 private:
  Rational value_;
};

inline std::string to_string(const Alpha& a) { return to_string(a.value()); }

}  // namespace sdncg
