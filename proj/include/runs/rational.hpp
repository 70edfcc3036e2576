#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace runs {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Thrown when an exact-enumeration or simulation budget would be exceeded.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Floor division for possibly negative numerators (denominator > 0).
inline long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int pow_int(const Int& base, long long e) {
  if (e < 0) throw std::invalid_argument("pow_int: negative exponent");
  Int r = 1, b = base;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

inline Rat pow_rat(const Rat& base, long long e) {
  if (e < 0) {
    if (base == 0) throw std::domain_error("pow_rat: 0 to negative power");
    return Rat(pow_int(denominator(base), -e), pow_int(numerator(base), -e));
  }
  return Rat(pow_int(numerator(base), e), pow_int(denominator(base), e));
}

// Parses "a/b", an integer, or a finite decimal such as "0.25" (converted
// exactly as a/10^d). Anything else is rejected.
namespace detail {

// Decimal integer with optional sign; built digit by digit so that leading
// zeros are never reinterpreted (cpp_int's string constructor treats a
// leading 0 as octal).
inline Int parse_decimal_int(std::string_view s) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
  if (i == s.size()) throw std::invalid_argument("not an integer literal: " + std::string(s));
  Int n = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9')
      throw std::invalid_argument("not an integer literal: " + std::string(s));
    n = n * 10 + (s[i] - '0');
  }
  return neg ? -n : n;
}

}  // namespace detail

inline Rat parse_rational(std::string_view s) {
  auto fail = [&] { throw std::invalid_argument("not a rational literal: " + std::string(s)); };
  if (s.empty()) fail();
  auto slash = s.find('/');
  if (slash != std::string_view::npos) {
    Int n, d;
    try {
      n = detail::parse_decimal_int(s.substr(0, slash));
      d = detail::parse_decimal_int(s.substr(slash + 1));
    } catch (const std::invalid_argument&) {
      fail();
    }
    if (d == 0) throw std::invalid_argument("zero denominator: " + std::string(s));
    return Rat(n, d);
  }
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = (s[i++] == '-');
  Int n = 0;
  bool any_digit = false;
  long long frac_digits = -1;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.') {
      if (frac_digits >= 0) fail();
      frac_digits = 0;
    } else if (c >= '0' && c <= '9') {
      n = n * 10 + (c - '0');
      any_digit = true;
      if (frac_digits >= 0) ++frac_digits;
    } else {
      fail();
    }
  }
  if (!any_digit) fail();
  if (neg) n = -n;
  return Rat(n, pow_int(10, frac_digits < 0 ? 0 : frac_digits));
}

// Canonical exact rendering; parse_rational(to_exact_string(x)) == x.
inline std::string to_exact_string(const Rat& x) {
  return numerator(x).str() + "/" + denominator(x).str();
}

namespace detail {
inline int decimal_digit_count(const Int& a) {
  // a > 0
  return static_cast<int>(a.str().size());
}
}  // namespace detail

// Correctly rounded (half-even) rendering to `sig` significant digits,
// in the style of printf %g.
inline std::string to_decimal_string(const Rat& x, int sig = 12) {
  if (sig < 1) throw std::invalid_argument("to_decimal_string: sig < 1");
  if (x == 0) return "0";
  Int a = numerator(x), b = denominator(x);
  bool neg = a < 0;
  if (neg) a = -a;

  // Normalize e so that 10^e <= a/b < 10^{e+1}.
  int e = detail::decimal_digit_count(a) - detail::decimal_digit_count(b);
  auto cmp_ge_pow = [&](int exp) {
    // a/b >= 10^exp ?
    if (exp >= 0) return a >= b * pow_int(10, exp);
    return a * pow_int(10, -exp) >= b;
  };
  while (!cmp_ge_pow(e)) --e;
  while (cmp_ge_pow(e + 1)) ++e;

  // scaled = round_half_even(a/b * 10^{sig-1-e})
  int shift = sig - 1 - e;
  Int num = a, den = b;
  if (shift >= 0)
    num *= pow_int(10, shift);
  else
    den *= pow_int(10, -shift);
  Int q = num / den, r = num % den;
  Int twice = r * 2;
  if (twice > den || (twice == den && (q & 1) == 1)) ++q;
  Int cap = pow_int(10, sig);
  if (q == cap) {
    q = pow_int(10, sig - 1);
    ++e;
  }

  std::string d = q.str();  // exactly sig digits
  // Strip trailing zeros (but keep at least one digit).
  while (d.size() > 1 && d.back() == '0') d.pop_back();

  std::string out = neg ? "-" : "";
  if (e >= -4 && e < sig + 3) {
    if (e >= 0) {
      if ((int)d.size() > e + 1) {
        out += d.substr(0, e + 1) + "." + d.substr(e + 1);
      } else {
        out += d + std::string(e + 1 - d.size(), '0');
      }
    } else {
      out += "0." + std::string(-e - 1, '0') + d;
    }
  } else {
    out += d.substr(0, 1);
    if (d.size() > 1) out += "." + d.substr(1);
    out += "e" + std::to_string(e);
  }
  return out;
}

inline void check_probability(const Rat& p) {
  if (p <= 0 || p >= 1) throw std::invalid_argument("p must satisfy 0 < p < 1, got " + to_exact_string(p));
}

}  // namespace runs
