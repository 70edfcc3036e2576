#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "runs/combinatorics.hpp"
#include "runs/rational.hpp"
#include "runs/series.hpp"

namespace runs {

// NB_II(k,g,r): number of trials until the r-th success run first attains
// length k. Minimum support point is rk + (r-1)g.
struct NegBinomParams {
  long long k = 1;
  long long g = 1;
  long long r = 1;
  Rat p;

  void validate() const {
    if (k < 1 || g < 1 || r < 1) throw std::invalid_argument("NegBinomParams: k, g, r must be >= 1");
    check_probability(p);
  }

  long long min_support() const { return r * k + (r - 1) * g; }
  long long shift() const { return (r - 1) * (g - 1); }
};

// pmf at n, via the g = 1 form evaluated at nu = n - (r-1)(g-1).
inline Rat nb_pmf(const NegBinomParams& params, long long n) {
  params.validate();
  if (n < 0) throw std::invalid_argument("nb_pmf: n must be >= 0");
  const long long k = params.k, r = params.r;
  const long long nu = n - params.shift();
  const Rat p = params.p, q = Rat(1) - p;
  Rat total = 0;
  long long m_hi = floor_div(nu + 1, k + 1);
  for (long long m = r; m <= m_hi; ++m) {
    Rat term = Rat(binom(m - 1, r - 1)) * pow_rat(p, m * k) * pow_rat(q, m - 1) *
               (Rat(binom(nu - m * k, m - 1)) - p * Rat(binom(nu - m * k - 1, m - 1)));
    total += ((m - r) % 2 == 0) ? term : -term;
  }
  return total;
}

// Mean and variance; the gap enters only as the deterministic shift
// (r-1)(g-1) on the mean, the variance is g-independent.
inline std::pair<Rat, Rat> nb_mean_var(const NegBinomParams& params) {
  params.validate();
  const long long k = params.k, r = params.r;
  const Rat p = params.p, q = Rat(1) - p;
  const Rat pk = pow_rat(p, k);
  Rat mean = (Rat(r) - pk) / (q * pk) + Rat(params.shift());
  Rat var = Rat(r) * (Rat(1) - Rat(2 * k + 1) * q * pk - pow_rat(p, 2 * k + 1)) / (q * pk * q * pk) +
            Rat(r - 1) * p / (q * q);
  return {mean, var};
}

namespace detail {

// pgf of NB_II(k,g,r) as numerator/denominator polynomials in z:
//   z^{(r-1)(g-1)} * p^{rk} q^{r-1} z^{rk+r-1} (1-pz) / (1-z+q p^k z^{k+1})^r
inline void nb_pgf_polys(const NegBinomParams& params, std::vector<Rat>& num, std::vector<Rat>& den) {
  const long long k = params.k, r = params.r;
  const Rat p = params.p, q = Rat(1) - p;
  const Rat lead = pow_rat(p, r * k) * pow_rat(q, r - 1);
  long long zpow = r * k + r - 1 + params.shift();
  num.assign(static_cast<std::size_t>(zpow) + 2, Rat(0));
  num[static_cast<std::size_t>(zpow)] = lead;
  num[static_cast<std::size_t>(zpow) + 1] = -lead * p;
  std::vector<Rat> base(static_cast<std::size_t>(k) + 2, Rat(0));
  base[0] = 1;
  base[1] = -1;
  base[static_cast<std::size_t>(k) + 1] = q * pow_rat(p, k);
  den.assign(1, Rat(1));
  for (long long i = 0; i < r; ++i) {
    std::vector<Rat> next(den.size() + base.size() - 1, Rat(0));
    for (std::size_t a = 0; a < den.size(); ++a)
      for (std::size_t b = 0; b < base.size(); ++b) next[a + b] += den[a] * base[b];
    den = std::move(next);
  }
}

}  // namespace detail

// Series expansion of the pgf; the z^n coefficient equals nb_pmf(n).
inline TruncatedSeries nb_pgf(const NegBinomParams& params, std::size_t order) {
  params.validate();
  std::vector<Rat> num_poly, den_poly;
  detail::nb_pgf_polys(params, num_poly, den_poly);
  TruncatedSeries num(num_poly, order), den(den_poly, order);
  return series_div(num, den);
}

// Factorial moment of the g = 1 waiting time (explicit closed form).
inline Rat nb_factorial_moment_g1(long long k, long long r, const Rat& p, long long s) {
  if (s < 0) throw std::invalid_argument("nb_factorial_moment_g1: s must be >= 0");
  // At s = 0 the j = 0 bracket is C(0,0) - p C(-1,0), which needs the
  // generalized value C(-1,0) = 1 rather than the vanishing convention used
  // everywhere else; that cell is the only one with a negative upper index,
  // so return the normalization directly.
  if (s == 0) return 1;
  const Rat q = Rat(1) - p;
  Rat total = 0;
  for (long long j = 0; j <= s; ++j) {
    Rat term = pow_rat(q, j) * pow_rat(p, j * k) * Rat(binom(s - j + r - 1, r - 1)) *
               (Rat(binom((k + 1) * s - j * k, j)) - p * Rat(binom((k + 1) * s - j * k - 1, j)));
    total += (j % 2 == 0) ? term : -term;
  }
  return Rat(factorial(s)) / (pow_rat(q, s + 1) * pow_rat(p, k * s)) * total;
}

// Factorial moment for general g, combining the g = 1 moments with the
// deterministic shift c = (r-1)(g-1) via the binomial convolution.
inline Rat nb_factorial_moment(const NegBinomParams& params, long long s) {
  params.validate();
  if (s < 0) throw std::invalid_argument("nb_factorial_moment: s must be >= 0");
  const long long c = params.shift();
  if (c == 0) return nb_factorial_moment_g1(params.k, params.r, params.p, s);
  Rat total = 0;
  for (long long j = 0; j <= s; ++j) {
    Int fall = falling_factorial(c, j);
    if (fall == 0) continue;
    total += Rat(binom(s, j)) * Rat(fall) * nb_factorial_moment_g1(params.k, params.r, params.p, s - j);
  }
  return total;
}

}  // namespace runs
