#pragma once

#include <cassert>
#include <stdexcept>
#include <vector>

#include "runs/bivariate.hpp"
#include "runs/combinatorics.hpp"
#include "runs/rational.hpp"
#include "runs/sequence.hpp"

namespace runs {

// --- Closed forms from the double pgf ---------------------------------------

// P(N_s >= r). Depends on n and g only through nu = n - (r-1)(g-1).
inline Rat prob_at_least(const TrialParams& params, long long r) {
  params.validate();
  if (r < 0) throw std::invalid_argument("prob_at_least: r must be >= 0");
  if (r == 0) return 1;
  const long long k = params.k, nu = params.n - (r - 1) * (params.g - 1);
  const Rat p = params.p, q = params.q();
  Rat total = 0;
  long long m_hi = floor_div(nu + 1, k + 1);
  for (long long m = r; m <= m_hi; ++m) {
    Rat term = pow_rat(q, m - 1) * pow_rat(p, m * k) * Rat(binom(m - 1, r - 1)) *
               (Rat(binom(nu - m * k + 1, m)) - p * Rat(binom(nu - m * k, m)));
    total += ((m - r) % 2 == 0) ? term : -term;
  }
  return total;
}

// pmf of the number of success runs, r >= 1 (use pmf_zero_runs for r = 0).
// Two alternating sums; the vanishing-binomial convention keeps stray terms
// at zero, and extending past the stated upper limits is harmless.
inline Rat pmf_run_count(const TrialParams& params, long long r) {
  params.validate();
  if (r < 1) throw std::invalid_argument("pmf_run_count: r must be >= 1 (use pmf_zero_runs)");
  const long long k = params.k, g = params.g, n = params.n;
  const Rat p = params.p, q = params.q();
  Rat total = 0;
  long long hi1 = floor_div(n + 1 - (r - 1) * (g - 1), k + 1);
  for (long long m = r; m <= hi1; ++m) {
    long long shift = (r - 1) * (g - 1);
    Rat term = pow_rat(q, m - 1) * pow_rat(p, m * k) * Rat(binom(m - 1, r - 1)) *
               (Rat(binom(n - m * k + 1 - shift, m)) - p * Rat(binom(n - m * k - shift, m)));
    total += ((m - r) % 2 == 0) ? term : -term;
  }
  long long hi2 = floor_div(n + 1 - r * (g - 1), k + 1);
  for (long long m = r + 1; m <= hi2; ++m) {
    long long shift = r * (g - 1);
    Rat term = pow_rat(q, m - 1) * pow_rat(p, m * k) * Rat(binom(m - 1, r)) *
               (Rat(binom(n - m * k + 1 - shift, m)) - p * Rat(binom(n - m * k - shift, m)));
    total -= ((m - r - 1) % 2 == 0) ? term : -term;
  }
  return total;
}

// Muselli's g = 1 form of the run-count pmf.
inline Rat pmf_run_count_muselli_g1(long long k, long long n, const Rat& p, long long r) {
  if (k < 1 || n < 0 || r < 1) throw std::invalid_argument("pmf_run_count_muselli_g1: bad arguments");
  check_probability(p);
  const Rat q = Rat(1) - p;
  Rat total = 0;
  long long m_hi = floor_div(n + 1, k + 1);
  for (long long m = r; m <= m_hi; ++m) {
    Rat term = pow_rat(q, m - 1) * pow_rat(p, m * k) * Rat(binom(m, r)) *
               (Rat(binom(n - m * k, m - 1)) + q * Rat(binom(n - m * k, m)));
    total += ((m - r) % 2 == 0) ? term : -term;
  }
  return total;
}

namespace detail {

// P(r = 0) via the explicit inclusion-exclusion sum (the g = 1 longest-block
// formula at threshold t = k - 1, which is g-free).
inline Rat zero_runs_sum(long long k, long long n, const Rat& p) {
  const Rat q = Rat(1) - p;
  Rat total = 0;
  for (long long u = 0; u <= n; ++u) {
    long long s_hi = std::min(u + 1, floor_div(n - u, k));
    Rat inner = 0;
    for (long long s = 0; s <= s_hi; ++s) {
      Rat term = Rat(binom(u + 1, s)) * Rat(binom(n - s * k, u));
      inner += (s % 2 == 0) ? term : -term;
    }
    total += pow_rat(p, n - u) * pow_rat(q, u) * inner;
  }
  return total;
}

// P(r = 0) via the recurrence f(n) = f(n-1) - p^k q f(n-k-1).
inline Rat zero_runs_recurrence(long long k, long long n, const Rat& p) {
  if (n < k) return 1;
  const Rat q = Rat(1) - p;
  const Rat pk_q = pow_rat(p, k) * q;
  std::vector<Rat> f(static_cast<std::size_t>(n) + 1);
  for (long long j = 0; j < k; ++j) f[static_cast<std::size_t>(j)] = 1;
  f[static_cast<std::size_t>(k)] = Rat(1) - pow_rat(p, k);
  for (long long j = k + 1; j <= n; ++j) {
    Rat prev_gap = (j - k - 1 >= 0) ? f[static_cast<std::size_t>(j - k - 1)] : Rat(1);
    f[static_cast<std::size_t>(j)] = f[static_cast<std::size_t>(j - 1)] - pk_q * prev_gap;
  }
  return f[static_cast<std::size_t>(n)];
}

}  // namespace detail

// P(no success run of length >= k). Independent of g. Computed three ways
// (complement of P(N_s >= 1), explicit sum, recurrence) which must agree
// exactly.
inline Rat pmf_zero_runs(const TrialParams& params) {
  params.validate();
  Rat via_complement = Rat(1) - prob_at_least(params, 1);
  Rat via_sum = detail::zero_runs_sum(params.k, params.n, params.p);
  Rat via_rec = detail::zero_runs_recurrence(params.k, params.n, params.p);
  if (via_complement != via_sum || via_sum != via_rec)
    throw std::logic_error("pmf_zero_runs: the three computation paths disagree");
  return via_complement;
}

// --- Factorial moments (double-pgf derivation) ------------------------------

// F_n^{(r)} = E[N_s (N_s-1) ... (N_s-r+1)], with the raised second upper
// limit; extraneous terms vanish by the binomial convention (asserted in
// debug builds). For g = 1 the greatly simplified form is cross-checked.
inline Rat factorial_moment(const TrialParams& params, long long r) {
  params.validate();
  if (r < 0) throw std::invalid_argument("factorial_moment: r must be >= 0");
  if (r == 0) return 1;
  const long long k = params.k, g = params.g;
  const long long nu = params.n - (r - 1) * (g - 1);
  const Rat p = params.p, q = params.q();
  Rat total = 0;
  long long m_hi = floor_div(nu + 1, k + 1);
  for (long long m = r; m <= m_hi; ++m) {
    Rat inner = 0;
    for (long long s = 0; s <= m - r; ++s) {
      Rat term = Rat(binom(m - r, s)) * (Rat(binom(nu + 1 - m * k - s * (g - 1), m)) -
                                         p * Rat(binom(nu - m * k - s * (g - 1), m)));
      inner += (s % 2 == 0) ? term : -term;
#ifndef NDEBUG
      // Terms beyond the original (unraised) upper limit of the second sum
      // must vanish; a nonzero one means a transcription error.
      if (m > floor_div(nu, k + 1)) assert(binom(nu - m * k - s * (g - 1), m) == 0);
#endif
    }
    Rat term = pow_rat(q, m - 1) * pow_rat(p, m * k) * Rat(binom(m - 1, r - 1)) * inner;
    total += ((m - r) % 2 == 0) ? term : -term;
  }
  total *= Rat(factorial(r));
  if (g == 1) {
    const long long n = params.n;
    Rat simple = Rat(factorial(r)) * pow_rat(q, r - 1) * pow_rat(p, k * r) *
                 (Rat(binom(n - k * r + 1, r)) - p * Rat(binom(n - k * r, r)));
    if (simple != total) throw std::logic_error("factorial_moment: g = 1 simplification disagrees");
  }
  return total;
}

// --- Inclusion-exclusion derivation (X / Y / M route) ------------------------

// X(k,1,n,r): probability that the r-th success run (g = 1) terminates at
// trial n-1 and trial n is a failure.
inline Rat x_g1(long long k, long long n, long long r, const Rat& p) {
  if (k < 1 || r < 1) throw std::invalid_argument("x_g1: k and r must be >= 1");
  check_probability(p);
  const Rat q = Rat(1) - p;
  Rat total = 0;
  for (long long u = r - 1; u <= n - 1 - k * r; ++u) {
    Rat inner = 0;
    for (long long s = r - 1; s <= u; ++s) {
      Rat term = Rat(binom(u, s)) * Rat(binom(s, r - 1)) * Rat(binom(n - 1 - (s + 1) * k, u));
      inner += ((s - r + 1) % 2 == 0) ? term : -term;
    }
    total += pow_rat(q, u + 1) * pow_rat(p, n - u - 1) * inner;
  }
  return total;
}

// X(k,g,n,r) reduces to g = 1 by collapsing the first r-1 buffers.
inline Rat x_gap(long long k, long long g, long long n, long long r, const Rat& p) {
  if (g < 1) throw std::invalid_argument("x_gap: g must be >= 1");
  return x_g1(k, n - (r - 1) * (g - 1), r, p);
}

// Y(k,n,r) = sum_{m<=n} X(k,1,m,r): at least r completed, F-terminated runs
// by trial n. (The sign is (-1)^{j-r}; the paper's theorem statement has a
// sign typo, its own equivalence derivation uses this form.)
inline Rat y_g1(long long k, long long n, long long r, const Rat& p) {
  if (k < 1 || r < 1) throw std::invalid_argument("y_g1: k and r must be >= 1");
  check_probability(p);
  const Rat q = Rat(1) - p;
  Rat total = 0;
  for (long long u = r - 1; u <= n - r * k; ++u) {
    Rat inner = 0;
    for (long long j = r; j <= u; ++j) {
      Rat term = Rat(binom(j - 1, r - 1)) * Rat(binom(u, j)) * Rat(binom(n - j * k, u));
      inner += ((j - r) % 2 == 0) ? term : -term;
    }
    total += pow_rat(p, n - u) * pow_rat(q, u) * inner;
  }
  return total;
}

// Muselli's g = 1 run-count pmf in slot form.
inline Rat muselli_M_g1(long long k, long long n, long long r, const Rat& p) {
  if (k < 1 || r < 1) throw std::invalid_argument("muselli_M_g1: k and r must be >= 1");
  check_probability(p);
  const Rat q = Rat(1) - p;
  Rat total = 0;
  long long i_hi = floor_div(n + 1, k + 1);
  for (long long i = r; i <= i_hi; ++i) {
    Rat inner = 0;
    for (long long j = i - 1; j <= n - i * k; ++j)
      inner += Rat(binom(j + 1, i)) * Rat(binom(n - i * k, j)) * pow_rat(p, n - j) * pow_rat(q, j);
    total += ((i - r) % 2 == 0) ? Rat(binom(i, r)) * inner : -Rat(binom(i, r)) * inner;
  }
  return total;
}

// Run-count pmf assembled from the X / Y / M decomposition:
// M(k,g,n,r) = P1 + P2 + P4 with
//   P1 = X(k,1,n+1-(r-1)(g-1),r)/q          (r-th run still in progress)
//   P2 = M(k,1,n-r(g-1),r) - P3/q,  P3 = X(k,1,n+1-r(g-1),r)
//   P4 = Y(k,n-(r-1)(g-1),r) - Y(k,n-r(g-1),r)   (buffer begun, incomplete)
// The second Y argument is n - r(g-1); the paper prints n-(r-1)g there, which
// is inconsistent with its own P4 sum.
inline Rat pmf_run_count_via_M(const TrialParams& params, long long r) {
  params.validate();
  if (r < 1) throw std::invalid_argument("pmf_run_count_via_M: r must be >= 1");
  const long long k = params.k, g = params.g, n = params.n;
  const Rat p = params.p, q = params.q();
  const long long c1 = (r - 1) * (g - 1), c2 = r * (g - 1);
  Rat p1 = x_g1(k, n + 1 - c1, r, p) / q;
  Rat p3 = x_g1(k, n + 1 - c2, r, p);
  Rat p2 = muselli_M_g1(k, n - c2, r, p) - p3 / q;
  Rat p4 = y_g1(k, n - c1, r, p) - y_g1(k, n - c2, r, p);
  return p1 + p2 + p4;
}

// P(N_s >= r) from the X / Y route; must equal prob_at_least exactly.
inline Rat prob_at_least_via_XY(const TrialParams& params, long long r) {
  params.validate();
  if (r < 1) throw std::invalid_argument("prob_at_least_via_XY: r must be >= 1");
  const long long c1 = (r - 1) * (params.g - 1);
  return y_g1(params.k, params.n - c1, r, params.p) +
         x_g1(params.k, params.n + 1 - c1, r, params.p) / params.q();
}

// --- Generating-function route ------------------------------------------------

// The double pgf Phi(t,z): numerator and denominator as bivariate series.
namespace detail {

inline void double_pgf_polys(const TrialParams& params, std::size_t order, BivariateSeries& num,
                             BivariateSeries& den) {
  const long long k = params.k, g = params.g;
  const Rat p = params.p, q = params.q();
  const Rat pk = pow_rat(p, k);
  auto add_term = [order](BivariateSeries& s, long long zpow, long long tpow, const Rat& c) {
    if (c == 0 || zpow < 0 || static_cast<std::size_t>(zpow) > order) return;
    TPoly poly = s.coeff(static_cast<std::size_t>(zpow));
    if (poly.size() <= static_cast<std::size_t>(tpow)) poly.resize(static_cast<std::size_t>(tpow) + 1);
    poly[static_cast<std::size_t>(tpow)] += c;
    s.set_coeff(static_cast<std::size_t>(zpow), std::move(poly));
  };
  // num = (1-z)(1 + p^k (t-1) z^k) + p^k q t z^{k+1} (1 - z^{g-1})
  add_term(num, 0, 0, 1);
  add_term(num, 1, 0, -1);
  add_term(num, k, 1, pk);
  add_term(num, k, 0, -pk);
  add_term(num, k + 1, 1, -pk);
  add_term(num, k + 1, 0, pk);
  add_term(num, k + 1, 1, pk * q);
  add_term(num, k + g, 1, -pk * q);
  // den = (1-z)(1 - z + p^k q z^{k+1} (1 - t z^{g-1}))
  add_term(den, 0, 0, 1);
  add_term(den, 1, 0, -2);
  add_term(den, 2, 0, 1);
  add_term(den, k + 1, 0, pk * q);
  add_term(den, k + 2, 0, -pk * q);
  add_term(den, k + g, 1, -pk * q);
  add_term(den, k + g + 1, 1, pk * q);
}

}  // namespace detail

// Expansion of the double pgf Phi(t,z) up to the given z order.
inline BivariateSeries double_pgf_expansion(const TrialParams& params, std::size_t order) {
  BivariateSeries num(order), den(order);
  detail::double_pgf_polys(params, order, num, den);
  return bivariate_div(num, den);
}

// The single pgf phi_n(t): coefficient of z^n in Phi(t,z), a polynomial in t
// whose t^r coefficient is p_{n,r}.
inline TPoly pgf_run_count(const TrialParams& params) {
  params.validate();
  auto expansion = double_pgf_expansion(params, static_cast<std::size_t>(params.n));
  TPoly poly = expansion.coeff(static_cast<std::size_t>(params.n));
  if (poly.empty()) poly.push_back(0);
  return poly;
}

}  // namespace runs
