#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "runs/combinatorics.hpp"
#include "runs/rational.hpp"
#include "runs/run_count.hpp"
#include "runs/sequence.hpp"
#include "runs/series.hpp"

namespace runs {

// Number of ways to distribute v extra successes over r runs with each run's
// excess strictly below i.
inline Int a_coeff(long long r, long long i, long long v) {
  if (r < 1 || i < 1) throw std::invalid_argument("a_coeff: r and i must be >= 1");
  if (v < 0) return 0;
  Int total = 0;
  long long s_hi = std::min(r, v / i);
  for (long long s = 0; s <= s_hi; ++s) {
    Int term = binom(r, s) * binom(v - i * s + r - 1, r - 1);
    if (s % 2 == 0)
      total += term;
    else
      total -= term;
  }
  return total;
}

// Case I of the longest-run theorem: every success run is followed by a
// completed buffer.
inline Rat cdf_longest_case_I(long long r, long long t, const TrialParams& params) {
  const long long k = params.k, g = params.g, n = params.n;
  const Rat p = params.p, q = params.q();
  const long long nu_p = n - r * (g - 1);
  const long long i = t - k + 1;
  Rat total = 0;
  for (long long u = r; u <= nu_p - k * r; ++u) {
    Rat inner = 0;
    for (long long v = 0; v <= nu_p - k * r - u; ++v) {
      Int a1 = a_coeff(r, i, v);
      if (a1 == 0) continue;
      inner += Rat(a1) * Rat(a_coeff(u - r + 1, k, nu_p - k * r - u - v));
    }
    total += pow_rat(q, u) * pow_rat(p, nu_p - u) * Rat(binom(u, r)) * inner;
  }
  return total;
}

// Case II: the final success run occupies the final slot.
inline Rat cdf_longest_case_II(long long r, long long t, long long n_eff, const TrialParams& params) {
  const long long k = params.k, g = params.g, n = n_eff;
  const Rat p = params.p, q = params.q();
  const long long nu = n - (r - 1) * (g - 1);
  const long long i = t - k + 1;
  Rat total = 0;
  long long v0 = n - k * r - (r - 1) * g;
  if (v0 >= 0) total += Rat(a_coeff(r, i, v0)) * pow_rat(q, r - 1) * pow_rat(p, n - (r - 1) * g);
  for (long long u = r; u <= nu - k * r; ++u) {
    Rat inner = 0;
    for (long long v = 0; v <= nu - k * r - u; ++v) {
      Int a1 = a_coeff(r, i, v);
      if (a1 == 0) continue;
      inner += Rat(a1) * Rat(a_coeff(u - r + 1, k, nu - k * r - u - v));
    }
    total += pow_rat(q, u) * pow_rat(p, nu - u) * Rat(binom(u, r - 1)) * inner;
  }
  return total;
}

// P(L <= t) by the three-case inclusion-exclusion theorem. For t < k this is
// P(r = 0), since L is either 0 or at least k.
inline Rat cdf_longest(const TrialParams& params, long long t) {
  params.validate();
  if (t < 0 || t > params.n) throw std::invalid_argument("cdf_longest: t out of range");
  Rat total = pmf_zero_runs(params);
  if (t < params.k) return total;
  const Rat q = params.q();
  for (long long r = 1; r <= params.max_runs(); ++r) {
    total += cdf_longest_case_I(r, t, params) + cdf_longest_case_II(r, t, params.n, params);
    for (long long w = 1; w <= params.g - 1; ++w)
      total += q * cdf_longest_case_II(r, t, params.n - w, params);
  }
  return total;
}

// Muselli's g = 1 distribution of the longest block (k-free statement).
inline Rat cdf_longest_muselli_g1(long long n, long long t, const Rat& p) {
  if (n < 0 || t < 0 || t > n) throw std::invalid_argument("cdf_longest_muselli_g1: bad arguments");
  check_probability(p);
  const Rat q = Rat(1) - p;
  Rat total = 0;
  for (long long u = 0; u <= n; ++u) {
    long long s_hi = std::min(u + 1, floor_div(n - u, t + 1));
    Rat inner = 0;
    for (long long s = 0; s <= s_hi; ++s) {
      Rat term = Rat(binom(u + 1, s)) * Rat(binom(n - s * (t + 1), u));
      inner += (s % 2 == 0) ? term : -term;
    }
    total += pow_rat(p, n - u) * pow_rat(q, u) * inner;
  }
  return total;
}

// f(n,t) = P(L_n >= t) by dynamic programming on the conditioning recurrence.
// Production path for the survival function.
inline Rat surv_longest_recurrence(const TrialParams& params, long long t) {
  params.validate();
  if (t < params.k) throw std::invalid_argument("surv_longest_recurrence: t must be >= k");
  const long long k = params.k, g = params.g, n = params.n;
  if (t > n) return 0;
  const Rat p = params.p, q = params.q();
  const Rat pt = pow_rat(p, t);
  std::vector<Rat> pp(static_cast<std::size_t>(t) + 1);
  pp[0] = 1;
  for (long long i = 1; i <= t; ++i) pp[static_cast<std::size_t>(i)] = pp[static_cast<std::size_t>(i - 1)] * p;
  std::vector<Rat> f(static_cast<std::size_t>(n) + 1);
  auto at = [&](long long m) -> Rat { return m < t ? Rat(0) : f[static_cast<std::size_t>(m)]; };
  f[static_cast<std::size_t>(t)] = pt;
  for (long long m = t + 1; m <= n; ++m) {
    Rat acc = pt;
    for (long long i = 0; i < k; ++i) acc += q * pp[static_cast<std::size_t>(i)] * at(m - i - 1);
    for (long long i = k; i < t; ++i) acc += q * pp[static_cast<std::size_t>(i)] * at(m - i - g);
    f[static_cast<std::size_t>(m)] = acc;
  }
  return f[static_cast<std::size_t>(n)];
}

// Expansion of the generating function F(z,t); the z^n coefficient equals
// f(n,t) exactly.
inline TruncatedSeries surv_longest_genfunc(const TrialParams& params, long long t, std::size_t order) {
  params.validate();
  if (t < params.k) throw std::invalid_argument("surv_longest_genfunc: t must be >= k");
  const long long k = params.k, g = params.g;
  const Rat p = params.p, q = params.q();
  auto add = [order](TruncatedSeries& s, long long pw, const Rat& c) {
    if (pw < 0 || static_cast<std::size_t>(pw) > order || c == 0) return;
    s.set_coeff(static_cast<std::size_t>(pw), s.coeff(static_cast<std::size_t>(pw)) + c);
  };
  // num = (1 - pz) p^t z^t
  TruncatedSeries num(order), den(order);
  const Rat pt = pow_rat(p, t), pk = pow_rat(p, k);
  add(num, t, pt);
  add(num, t + 1, -p * pt);
  // den = (1 - z)(1 - z + q p^k (z^{k+1} - z^{k+g}) + q p^t z^{t+g})
  add(den, 0, 1);
  add(den, 1, -2);
  add(den, 2, 1);
  add(den, k + 1, q * pk);
  add(den, k + 2, -q * pk);
  add(den, k + g, -q * pk);
  add(den, k + g + 1, q * pk);
  add(den, t + g, q * pt);
  add(den, t + g + 1, -q * pt);
  return series_div(num, den);
}

// g = 1 closed form of the survival function (de Moivre's result).
inline Rat surv_longest_sum_g1(long long n, long long t, const Rat& p) {
  check_probability(p);
  const Rat q = Rat(1) - p;
  Rat total = 0;
  long long m_hi = floor_div(n + 1, t + 1);
  for (long long m = 1; m <= m_hi; ++m) {
    Rat term = pow_rat(q, m - 1) * pow_rat(p, m * t) *
               (Rat(binom(n - m * t + 1, m)) - p * Rat(binom(n - m * t, m)));
    total += ((m - 1) % 2 == 0) ? term : -term;
  }
  return total;
}

// f(n,t) as the explicit combinatorial (j1,j2,j3) sum extracted from F(z,t).
// For g = 1 the de Moivre closed form is evaluated too and must agree.
inline Rat surv_longest_sum(const TrialParams& params, long long t) {
  params.validate();
  if (t < params.k) throw std::invalid_argument("surv_longest_sum: t must be >= k");
  const long long k = params.k, g = params.g, n = params.n;
  const Rat p = params.p, q = params.q();
  Rat total = 0;
  for (long long j1 = 0; n - t - j1 * (k + 1) >= 0; ++j1) {
    for (long long j2 = 0; n - t - j1 * (k + 1) - j2 * (k + g) >= 0; ++j2) {
      for (long long j3 = 0;; ++j3) {
        long long s = n - t - j1 * (k + 1) - j2 * (k + g) - j3 * (t + g);
        if (s < 0) break;
        long long r = j1 + j2 + j3;
        Rat term = pow_rat(q, r) * pow_rat(p, (j1 + j2) * k + (j3 + 1) * t) *
                   Rat(multinom(r, j1, j2, j3)) *
                   (Rat(binom(s + r + 1, r + 1)) - p * Rat(binom(s + r, r + 1)));
        total += ((j1 + j3) % 2 == 0) ? term : -term;
      }
    }
  }
  if (g == 1 && total != surv_longest_sum_g1(n, t, p))
    throw std::logic_error("surv_longest_sum: g = 1 closed form disagrees");
  return total;
}

// P(L >= t) dispatcher. The support of L is {0} or [k, n], so queries with
// 1 <= t < k answer at t = k.
inline Rat surv_longest(const TrialParams& params, long long t) {
  params.validate();
  if (t < 0 || t > params.n) throw std::invalid_argument("surv_longest: t out of range");
  if (t == 0) return 1;
  long long tt = std::max(t, params.k);
  if (tt > params.n) return 0;
  return surv_longest_recurrence(params, tt);
}

struct LongestRunDist {
  TrialParams params;
  std::vector<Rat> cdf;  // cdf[t] = P(L <= t), t = 0..n
};

// Full distribution via the survival recurrence: P(L <= t) = 1 - P(L >= t+1).
inline LongestRunDist longest_run_dist(const TrialParams& params) {
  params.validate();
  LongestRunDist d{params, std::vector<Rat>(static_cast<std::size_t>(params.n) + 1)};
  for (long long t = 0; t < params.n; ++t)
    d.cdf[static_cast<std::size_t>(t)] = Rat(1) - surv_longest(params, t + 1);
  d.cdf[static_cast<std::size_t>(params.n)] = 1;
  return d;
}

struct LongestRunMoments {
  Rat mean;
  Rat variance;
  std::vector<Rat> factorial;  // F_(0) .. F_(n)
};

// Mean, variance and factorial moments of L from weighted survival sums.
inline LongestRunMoments moments_longest(const TrialParams& params) {
  params.validate();
  const long long n = params.n;
  std::vector<Rat> surv(static_cast<std::size_t>(n) + 1);
  for (long long t = 1; t <= n; ++t) surv[static_cast<std::size_t>(t)] = surv_longest(params, t);
  LongestRunMoments m;
  Rat s2 = 0;
  m.mean = 0;
  for (long long t = 1; t <= n; ++t) {
    m.mean += surv[static_cast<std::size_t>(t)];
    s2 += Rat(2 * t - 1) * surv[static_cast<std::size_t>(t)];
  }
  m.variance = s2 - m.mean * m.mean;
  m.factorial.assign(static_cast<std::size_t>(n) + 1, Rat(0));
  m.factorial[0] = 1;
  for (long long r = 1; r <= n; ++r) {
    Rat acc = 0;
    for (long long t = r; t <= n; ++t)
      acc += Rat(binom(t - 1, r - 1)) * surv[static_cast<std::size_t>(t)];
    m.factorial[static_cast<std::size_t>(r)] = Rat(factorial(r)) * acc;
  }
  return m;
}

// Closed-form moments in the single-run regime k <= n <= 2k.
inline LongestRunMoments moments_longest_single_run_closed(const TrialParams& params) {
  params.validate();
  const long long k = params.k, n = params.n;
  if (n < k || n > 2 * k)
    throw std::invalid_argument("moments_longest_single_run_closed: requires k <= n <= 2k");
  const Rat p = params.p, q = params.q();
  const Rat pk = pow_rat(p, k);
  LongestRunMoments m;
  m.mean = pk * (Rat(n) + Rat((n - k) * (k - 1)) * q);
  Rat s = Rat(k) * pk * (Rat(k) + Rat(2 * (n - k)) * p + Rat(k * (n - k)) * q) +
          (p / (q * q)) * (Rat(n - k) * q * pk * (Rat(1) + p) - Rat(2) * p * (pk - pow_rat(p, n)));
  m.variance = s - m.mean * m.mean;
  m.factorial = {Rat(1), m.mean, s - m.mean};
  return m;
}

// Schilling's log-scale estimate of E[L_n]; diagnostic only.
struct MeanEstimate {
  double value = 0.0;
  bool in_regime = true;  // false when nq <= 1 and the log goes negative
};

inline MeanEstimate mean_longest_estimate(const TrialParams& params) {
  params.validate();
  double p = numerator(params.p).convert_to<double>() / denominator(params.p).convert_to<double>();
  double nq = static_cast<double>(params.n) * (1.0 - p);
  MeanEstimate e;
  e.in_regime = nq > 1.0;
  e.value = std::log(nq) / std::log(1.0 / p);
  return e;
}

// Exact E[L_n] for k = g = 1, p = 1/2 via an integer-scaled recurrence
// (f(n,t) * 2^n is an integer), then the ratio E[L_n] ln(1/p) / ln(n).
// Used by the asymptotic-order diagnostic at n too large for rational DP.
inline double asymptotic_mean_ratio_half(long long n) {
  if (n < 2) throw std::invalid_argument("asymptotic_mean_ratio_half: n must be >= 2");
  Int total = 0;  // sum over t of f(n,t) * 2^n
  std::vector<Int> scaled(static_cast<std::size_t>(n) + 1);
  for (long long t = 1; t <= n; ++t) {
    // G(m) = f(m,t) 2^m satisfies G(m) = sum_{i=1}^{t} G(m-i) + 2^{m-t}, G(t)=1.
    for (long long m = 0; m < t; ++m) scaled[static_cast<std::size_t>(m)] = 0;
    scaled[static_cast<std::size_t>(t)] = 1;
    Int window = 1;  // sum of the last t values G(m-1)..G(m-t)
    for (long long m = t + 1; m <= n; ++m) {
      Int cur = window + (Int(1) << (m - t));
      scaled[static_cast<std::size_t>(m)] = cur;
      window += cur;
      if (m - t >= 0) window -= scaled[static_cast<std::size_t>(m - t)];
    }
    total += scaled[static_cast<std::size_t>(n)];
  }
  // mean = total / 2^n; scale down before converting so the double never
  // overflows at large n.
  long top_bit = static_cast<long>(boost::multiprecision::msb(total));
  long shift = std::max(0L, top_bit - 52);
  double mantissa = Int(total >> shift).convert_to<double>();
  double mean_d = std::ldexp(mantissa, static_cast<int>(shift - n));
  return mean_d * std::log(2.0) / std::log(static_cast<double>(n));
}

}  // namespace runs
