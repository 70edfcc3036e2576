#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "runs/combinatorics.hpp"
#include "runs/rational.hpp"

namespace runs {

// Formal power series with rational coefficients, truncated at a fixed order.
// Arithmetic never silently extends past the truncation order: mixed-order
// operands are rejected and coefficient access is bounds-checked.
class TruncatedSeries {
 public:
  explicit TruncatedSeries(std::size_t order) : c_(order + 1) {}

  TruncatedSeries(std::vector<Rat> coeffs, std::size_t order) : c_(std::move(coeffs)) {
    c_.resize(order + 1);
  }

  std::size_t order() const { return c_.size() - 1; }

  const Rat& coeff(std::size_t n) const {
    if (n >= c_.size()) throw std::out_of_range("TruncatedSeries: coefficient beyond truncation order");
    return c_[n];
  }

  void set_coeff(std::size_t n, Rat v) {
    if (n >= c_.size()) throw std::out_of_range("TruncatedSeries: coefficient beyond truncation order");
    c_[n] = std::move(v);
  }

  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    check_same_order(a, b);
    TruncatedSeries r(a.order());
    for (std::size_t i = 0; i < a.c_.size(); ++i) r.c_[i] = a.c_[i] + b.c_[i];
    return r;
  }

  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
    check_same_order(a, b);
    TruncatedSeries r(a.order());
    for (std::size_t i = 0; i < a.c_.size(); ++i) r.c_[i] = a.c_[i] - b.c_[i];
    return r;
  }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    check_same_order(a, b);
    TruncatedSeries r(a.order());
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; i + j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
  }

  friend TruncatedSeries operator*(const Rat& s, const TruncatedSeries& a) {
    TruncatedSeries r(a.order());
    for (std::size_t i = 0; i < a.c_.size(); ++i) r.c_[i] = s * a.c_[i];
    return r;
  }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) { return a.c_ == b.c_; }

 private:
  static void check_same_order(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (a.order() != b.order())
      throw std::invalid_argument("TruncatedSeries: mixed truncation orders");
  }

  std::vector<Rat> c_;
};

// Exact quotient q with q * den == num up to the common truncation order.
// Requires den to have a nonzero constant term.
inline TruncatedSeries series_div(const TruncatedSeries& num, const TruncatedSeries& den) {
  if (num.order() != den.order())
    throw std::invalid_argument("series_div: mixed truncation orders");
  if (den.coeff(0) == 0) throw std::domain_error("series_div: denominator has zero constant term");
  std::size_t n = num.order();
  TruncatedSeries q(n);
  for (std::size_t i = 0; i <= n; ++i) {
    Rat acc = num.coeff(i);
    for (std::size_t j = 1; j <= i; ++j) {
      if (den.coeff(j) == 0) continue;
      acc -= den.coeff(j) * q.coeff(i - j);
    }
    q.set_coeff(i, acc / den.coeff(0));
  }
  return q;
}

// Factorial moments of the distribution with rational pgf num/den: substitute
// z = 1 + w, expand both polynomials in w, divide the series, and return
// s! * [w^s] for s = 0..s_max. Requires den(1) != 0.
inline std::vector<Rat> taylor_shift_at_one(const std::vector<Rat>& num_poly,
                                            const std::vector<Rat>& den_poly, long long s_max) {
  if (s_max < 0) throw std::invalid_argument("taylor_shift_at_one: s_max < 0");
  auto shift = [&](const std::vector<Rat>& poly) {
    // coefficient of w^j in poly(1+w) is sum_i poly[i] * C(i, j)
    TruncatedSeries s(static_cast<std::size_t>(s_max));
    for (long long j = 0; j <= s_max; ++j) {
      Rat acc = 0;
      for (std::size_t i = 0; i < poly.size(); ++i)
        acc += poly[i] * Rat(binom(static_cast<long long>(i), j));
      s.set_coeff(static_cast<std::size_t>(j), acc);
    }
    return s;
  };
  TruncatedSeries num = shift(num_poly), den = shift(den_poly);
  if (den.coeff(0) == 0) throw std::domain_error("taylor_shift_at_one: denominator vanishes at z = 1");
  TruncatedSeries q = series_div(num, den);
  std::vector<Rat> moments(static_cast<std::size_t>(s_max) + 1);
  for (long long s = 0; s <= s_max; ++s)
    moments[static_cast<std::size_t>(s)] = Rat(factorial(s)) * q.coeff(static_cast<std::size_t>(s));
  return moments;
}

}  // namespace runs
