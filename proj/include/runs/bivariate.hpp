#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "runs/rational.hpp"

namespace runs {

// Polynomial in the run-counting variable t, dense coefficient vector.
using TPoly = std::vector<Rat>;

inline TPoly tpoly_trim(TPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

inline TPoly tpoly_add(const TPoly& a, const TPoly& b) {
  TPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return tpoly_trim(std::move(r));
}

inline TPoly tpoly_sub(const TPoly& a, const TPoly& b) {
  TPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return tpoly_trim(std::move(r));
}

inline TPoly tpoly_mul(const TPoly& a, const TPoly& b) {
  if (a.empty() || b.empty()) return {};
  TPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return tpoly_trim(std::move(r));
}

inline TPoly tpoly_scale(const Rat& s, const TPoly& a) {
  if (s == 0) return {};
  TPoly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

inline Rat tpoly_eval(const TPoly& a, const Rat& t) {
  Rat acc = 0;
  for (std::size_t i = a.size(); i-- > 0;) acc = acc * t + a[i];
  return acc;
}

// Series in z truncated at a fixed order, whose coefficients are polynomials
// in t. Division requires the z^0 coefficient of the denominator to be a
// nonzero constant (degree 0 in t), which holds for the double pgf.
class BivariateSeries {
 public:
  explicit BivariateSeries(std::size_t z_order) : c_(z_order + 1) {}

  std::size_t z_order() const { return c_.size() - 1; }

  const TPoly& coeff(std::size_t n) const {
    if (n >= c_.size()) throw std::out_of_range("BivariateSeries: coefficient beyond truncation order");
    return c_[n];
  }

  void set_coeff(std::size_t n, TPoly p) {
    if (n >= c_.size()) throw std::out_of_range("BivariateSeries: coefficient beyond truncation order");
    c_[n] = tpoly_trim(std::move(p));
  }

  friend BivariateSeries operator+(const BivariateSeries& a, const BivariateSeries& b) {
    check_same_order(a, b);
    BivariateSeries r(a.z_order());
    for (std::size_t i = 0; i < a.c_.size(); ++i) r.c_[i] = tpoly_add(a.c_[i], b.c_[i]);
    return r;
  }

  friend BivariateSeries operator-(const BivariateSeries& a, const BivariateSeries& b) {
    check_same_order(a, b);
    BivariateSeries r(a.z_order());
    for (std::size_t i = 0; i < a.c_.size(); ++i) r.c_[i] = tpoly_sub(a.c_[i], b.c_[i]);
    return r;
  }

  friend BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b) {
    check_same_order(a, b);
    BivariateSeries r(a.z_order());
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].empty()) continue;
      for (std::size_t j = 0; i + j < b.c_.size(); ++j) {
        if (b.c_[j].empty()) continue;
        r.c_[i + j] = tpoly_add(r.c_[i + j], tpoly_mul(a.c_[i], b.c_[j]));
      }
    }
    return r;
  }

 private:
  static void check_same_order(const BivariateSeries& a, const BivariateSeries& b) {
    if (a.z_order() != b.z_order())
      throw std::invalid_argument("BivariateSeries: mixed truncation orders");
  }

  std::vector<TPoly> c_;
};

inline BivariateSeries bivariate_div(const BivariateSeries& num, const BivariateSeries& den) {
  if (num.z_order() != den.z_order())
    throw std::invalid_argument("bivariate_div: mixed truncation orders");
  const TPoly& d0 = den.coeff(0);
  if (d0.size() != 1 || d0[0] == 0)
    throw std::domain_error("bivariate_div: z^0 coefficient must be a nonzero constant");
  Rat inv = Rat(1) / d0[0];
  std::size_t n = num.z_order();
  BivariateSeries q(n);
  for (std::size_t i = 0; i <= n; ++i) {
    TPoly acc = num.coeff(i);
    for (std::size_t j = 1; j <= i; ++j) {
      if (den.coeff(j).empty()) continue;
      acc = tpoly_sub(acc, tpoly_mul(den.coeff(j), q.coeff(i - j)));
    }
    q.set_coeff(i, tpoly_scale(inv, acc));
  }
  return q;
}

}  // namespace runs
