#pragma once

/// @file decimal.hpp
/// @brief Signed fixed-point decimal with 18 fractional digits, plus exact rationals.
///
/// Quantities and prices are `Decimal`. Anything produced by multiplying or
/// dividing two decimals (USD values, realized rates, dollar matrices) is a
/// `Rational`, which is exact. A rational only becomes a `Decimal` again through
/// `Decimal::from_rational`, which rounds half-even and can report whether any
/// remainder was discarded.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace cowsettle {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class Rounding { half_even, truncate };

class Decimal {
 public:
  static constexpr int kFractionDigits = 18;
  using Raw = __int128;

  constexpr Decimal() noexcept = default;

  /// Wraps a raw value already scaled by 10^18.
  static constexpr Decimal from_raw(Raw raw) noexcept {
    Decimal d;
    d.raw_ = raw;
    return d;
  }

  static Decimal from_integer(std::int64_t value);

  /// Parses `[+-]digits[.digits]`. More than 18 fractional digits is an error,
  /// never a silent rounding.
  static Decimal parse(std::string_view text);

  /// Converts an exact rational. When `exact` is non-null it is set to false if
  /// rounding discarded a non-zero remainder.
  static Decimal from_rational(const Rational& value, Rounding mode = Rounding::half_even,
                               bool* exact = nullptr);

  constexpr Raw raw() const noexcept { return raw_; }
  constexpr int signum() const noexcept { return raw_ > 0 ? 1 : (raw_ < 0 ? -1 : 0); }
  constexpr bool is_zero() const noexcept { return raw_ == 0; }
  constexpr bool is_positive() const noexcept { return raw_ > 0; }

  Rational to_rational() const;

  /// Shortest exact representation ("0.00008", "3000", "-1.5").
  std::string to_string() const;

  Decimal operator-() const;
  Decimal& operator+=(Decimal rhs);
  Decimal& operator-=(Decimal rhs);
  friend Decimal operator+(Decimal lhs, Decimal rhs) { return lhs += rhs; }
  friend Decimal operator-(Decimal lhs, Decimal rhs) { return lhs -= rhs; }

  friend constexpr bool operator==(Decimal, Decimal) noexcept = default;
  friend constexpr std::strong_ordering operator<=>(Decimal a, Decimal b) noexcept {
    return a.raw_ <=> b.raw_;
  }

 private:
  Raw raw_ = 0;
};

std::ostream& operator<<(std::ostream& os, Decimal value);

BigInt to_bigint(Decimal::Raw raw);
BigInt pow10(int exponent);

/// Rational equal to 10^-exponent.
Rational decimal_epsilon(int exponent);

/// Parses a decimal literal of any precision into an exact rational.
Rational parse_rational(std::string_view text);

/// Formats `value` with exactly `fraction_digits` digits after the point, then
/// optionally strips trailing zeros (and a dangling point).
std::string format_rational(const Rational& value, int fraction_digits, Rounding mode,
                            bool strip_trailing_zeros = false);

/// Shortest exact text for a rational whose denominator divides a power of ten;
/// otherwise falls back to 36 rounded digits.
std::string to_exact_string(const Rational& value);

Rational abs(const Rational& value);

}  // namespace cowsettle
