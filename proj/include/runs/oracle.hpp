#pragma once

#include <cstdint>
#include <vector>

#include "runs/rational.hpp"
#include "runs/sequence.hpp"

namespace runs {

// 2^n sequences is the practical limit for the exact enumeration oracle;
// callers may raise it explicitly.
inline constexpr int kEnumerationBudget = 20;

namespace detail {

inline void check_budget(long long n, int budget) {
  if (n > budget)
    throw budget_error("enumeration oracle: n = " + std::to_string(n) + " exceeds budget " +
                       std::to_string(budget));
}

// Run count and longest run length straight off the bitmask, no allocation.
struct MaskRunStats {
  long long count = 0;
  long long longest = 0;
};

inline MaskRunStats mask_run_stats(std::uint64_t mask, long long n, long long k, long long g) {
  MaskRunStats st;
  detail::scan_runs(
      n, k, g, [&](long long i) { return (mask >> (i - 1)) & 1; },
      [&](long long s, long long e) {
        ++st.count;
        if (e - s + 1 > st.longest) st.longest = e - s + 1;
      });
  return st;
}

// Powers p^s q^{n-s} for s = 0..n.
inline std::vector<Rat> sequence_weights(const Rat& p, long long n) {
  Rat q = Rat(1) - p;
  std::vector<Rat> w(static_cast<std::size_t>(n) + 1);
  std::vector<Rat> pq(static_cast<std::size_t>(n) + 1);
  Rat acc = 1;
  for (long long s = 0; s <= n; ++s) {
    pq[static_cast<std::size_t>(s)] = acc;
    acc *= p;
  }
  acc = 1;
  for (long long s = n; s >= 0; --s) {
    w[static_cast<std::size_t>(s)] = pq[static_cast<std::size_t>(s)] * acc;
    acc *= q;
  }
  return w;
}

}  // namespace detail

// Exact pmf of the number of success runs by enumeration of all 2^n
// sequences; index r = 0..floor((n+g)/(k+g)).
inline std::vector<Rat> brute_run_count_pmf(const TrialParams& params, int budget = kEnumerationBudget) {
  params.validate();
  detail::check_budget(params.n, budget);
  long long n = params.n, rmax = params.max_runs();
  // counts[r][s]: number of sequences with r runs and s successes
  std::vector<std::vector<Int>> counts(static_cast<std::size_t>(rmax) + 1,
                                       std::vector<Int>(static_cast<std::size_t>(n) + 1));
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    auto st = detail::mask_run_stats(mask, n, params.k, params.g);
    long long s = static_cast<long long>(__builtin_popcountll(mask));
    ++counts[static_cast<std::size_t>(st.count)][static_cast<std::size_t>(s)];
  }
  auto w = detail::sequence_weights(params.p, n);
  std::vector<Rat> pmf(static_cast<std::size_t>(rmax) + 1);
  for (long long r = 0; r <= rmax; ++r)
    for (long long s = 0; s <= n; ++s)
      if (counts[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] != 0)
        pmf[static_cast<std::size_t>(r)] +=
            Rat(counts[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)]) * w[static_cast<std::size_t>(s)];
  return pmf;
}

// Exact P(L <= t) for t = 0..n by enumeration.
inline std::vector<Rat> brute_longest_cdf(const TrialParams& params, int budget = kEnumerationBudget) {
  params.validate();
  detail::check_budget(params.n, budget);
  long long n = params.n;
  std::vector<std::vector<Int>> counts(static_cast<std::size_t>(n) + 1,
                                       std::vector<Int>(static_cast<std::size_t>(n) + 1));
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    auto st = detail::mask_run_stats(mask, n, params.k, params.g);
    long long s = static_cast<long long>(__builtin_popcountll(mask));
    ++counts[static_cast<std::size_t>(st.longest)][static_cast<std::size_t>(s)];
  }
  auto w = detail::sequence_weights(params.p, n);
  std::vector<Rat> cdf(static_cast<std::size_t>(n) + 1);
  Rat acc = 0;
  for (long long t = 0; t <= n; ++t) {
    for (long long s = 0; s <= n; ++s)
      if (counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)] != 0)
        acc += Rat(counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)]) * w[static_cast<std::size_t>(s)];
    cdf[static_cast<std::size_t>(t)] = acc;
  }
  return cdf;
}

// Exact probability that the r-th success run attains its k-th success
// exactly at trial n: the r-th run must exist in the length-n prefix and its
// k-th success must be the final trial.
inline Rat brute_negbinom_pmf(long long k, long long g, long long r, const Rat& p, long long n,
                              int budget = kEnumerationBudget) {
  if (k < 1 || g < 1 || r < 1) throw std::invalid_argument("brute_negbinom_pmf: k, g, r must be >= 1");
  if (n < 0) throw std::invalid_argument("brute_negbinom_pmf: n must be >= 0");
  check_probability(p);
  detail::check_budget(n, budget);
  std::vector<Int> counts(static_cast<std::size_t>(n) + 1);
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    long long idx = 0;
    long long hit_start = -1;
    detail::scan_runs(
        n, k, g, [&](long long i) { return (mask >> (i - 1)) & 1; },
        [&](long long s, long long) {
          if (++idx == r) hit_start = s;
        });
    if (idx >= r && hit_start + k - 1 == n)
      ++counts[static_cast<std::size_t>(__builtin_popcountll(mask))];
  }
  auto w = detail::sequence_weights(p, n);
  Rat total = 0;
  for (long long s = 0; s <= n; ++s)
    if (counts[static_cast<std::size_t>(s)] != 0)
      total += Rat(counts[static_cast<std::size_t>(s)]) * w[static_cast<std::size_t>(s)];
  return total;
}

}  // namespace runs
