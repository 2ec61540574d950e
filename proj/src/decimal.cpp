#include "cowsettle/decimal.hpp"

#include <limits>
#include <ostream>

#include "cowsettle/error.hpp"

namespace cowsettle {

namespace {

constexpr Decimal::Raw kMaxRaw = std::numeric_limits<Decimal::Raw>::max();
constexpr Decimal::Raw kMinRaw = std::numeric_limits<Decimal::Raw>::min();

constexpr Decimal::Raw scale_factor() {
  Decimal::Raw f = 1;
  for (int i = 0; i < Decimal::kFractionDigits; ++i) f *= 10;
  return f;
}

Decimal::Raw narrow(const BigInt& value, std::string_view context) {
  static const BigInt lo = to_bigint(kMinRaw);
  static const BigInt hi = to_bigint(kMaxRaw);
  if (value < lo || value > hi) {
    throw DecimalError(std::string("decimal overflow in ") + std::string(context));
  }
  return static_cast<Decimal::Raw>(value);
}

// Divides a non-negative numerator by a positive denominator with the requested rounding.
BigInt divide_rounded(const BigInt& num, const BigInt& den, Rounding mode, bool& exact) {
  BigInt q = num / den;
  BigInt r = num % den;
  exact = r == 0;
  if (mode == Rounding::half_even && r != 0) {
    BigInt twice = r * 2;
    if (twice > den || (twice == den && (q & 1) != 0)) q += 1;
  }
  return q;
}

std::string digits_with_point(std::string digits, int fraction_digits, bool negative,
                              bool strip) {
  if (static_cast<int>(digits.size()) <= fraction_digits) {
    digits.insert(0, static_cast<std::size_t>(fraction_digits) + 1 - digits.size(), '0');
  }
  std::string out;
  if (fraction_digits > 0) {
    out = digits.substr(0, digits.size() - fraction_digits) + "." +
          digits.substr(digits.size() - fraction_digits);
    if (strip) {
      while (out.back() == '0') out.pop_back();
      if (out.back() == '.') out.pop_back();
    }
  } else {
    out = digits;
  }
  bool all_zero = out.find_first_not_of("0.") == std::string::npos;
  if (negative && !all_zero) out.insert(0, "-");
  return out;
}

}  // namespace

BigInt to_bigint(Decimal::Raw raw) {
  // cpp_int converts __int128 directly when the compiler provides it.
  return BigInt(raw);
}

BigInt pow10(int exponent) {
  BigInt r = 1;
  for (int i = 0; i < exponent; ++i) r *= 10;
  return r;
}

Rational decimal_epsilon(int exponent) { return Rational(BigInt(1), pow10(exponent)); }

Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

Decimal Decimal::from_integer(std::int64_t value) {
  return from_raw(narrow(BigInt(value) * pow10(kFractionDigits), "from_integer"));
}

Rational parse_rational(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string int_part;
  std::string frac_part;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c >= '0' && c <= '9') {
      (seen_point ? frac_part : int_part).push_back(c);
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      throw DecimalError("invalid decimal literal '" + std::string(text) + "'");
    }
  }
  if (int_part.empty() && frac_part.empty()) {
    throw DecimalError("invalid decimal literal '" + std::string(text) + "'");
  }
  // Accumulate in base 10: cpp_int's string constructor reads a leading 0 as octal.
  BigInt num = 0;
  for (char c : int_part) num = num * 10 + (c - '0');
  for (char c : frac_part) num = num * 10 + (c - '0');
  Rational r(num, pow10(static_cast<int>(frac_part.size())));
  return negative ? Rational(-r) : r;
}

Decimal Decimal::parse(std::string_view text) {
  auto point = text.find('.');
  if (point != std::string_view::npos && text.size() - point - 1 > kFractionDigits) {
    throw DecimalError("more than 18 fractional digits in '" + std::string(text) + "'");
  }
  return from_rational(parse_rational(text));
}

Decimal Decimal::from_rational(const Rational& value, Rounding mode, bool* exact) {
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  bool negative = num < 0;
  if (negative) num = -num;
  bool was_exact = true;
  BigInt q = divide_rounded(num * pow10(kFractionDigits), den, mode, was_exact);
  if (exact != nullptr) *exact = was_exact;
  if (negative) q = -q;
  return from_raw(narrow(q, "from_rational"));
}

Rational Decimal::to_rational() const {
  return Rational(to_bigint(raw_), pow10(kFractionDigits));
}

std::string Decimal::to_string() const {
  BigInt v = to_bigint(raw_);
  bool negative = v < 0;
  if (negative) v = -v;
  return digits_with_point(v.str(), kFractionDigits, negative, true);
}

Decimal Decimal::operator-() const {
  if (raw_ == kMinRaw) throw DecimalError("decimal overflow in negation");
  return from_raw(-raw_);
}

Decimal& Decimal::operator+=(Decimal rhs) {
  Raw out = 0;
  if (__builtin_add_overflow(raw_, rhs.raw_, &out)) throw DecimalError("decimal overflow in add");
  raw_ = out;
  return *this;
}

Decimal& Decimal::operator-=(Decimal rhs) {
  Raw out = 0;
  if (__builtin_sub_overflow(raw_, rhs.raw_, &out)) throw DecimalError("decimal overflow in sub");
  raw_ = out;
  return *this;
}

std::ostream& operator<<(std::ostream& os, Decimal value) { return os << value.to_string(); }

std::string format_rational(const Rational& value, int fraction_digits, Rounding mode,
                            bool strip_trailing_zeros) {
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  bool negative = num < 0;
  if (negative) num = -num;
  bool exact = true;
  BigInt q = divide_rounded(num * pow10(fraction_digits), den, mode, exact);
  return digits_with_point(q.str(), fraction_digits, negative, strip_trailing_zeros);
}

std::string to_exact_string(const Rational& value) {
  BigInt den = boost::multiprecision::denominator(value);
  int digits = 0;
  while (den % 10 == 0) {
    den /= 10;
    ++digits;
  }
  while (den % 2 == 0 || den % 5 == 0) {
    den /= (den % 2 == 0) ? 2 : 5;
    ++digits;
  }
  if (den != 1) digits = 36;
  return format_rational(value, digits, Rounding::half_even, true);
}

}  // namespace cowsettle
