#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "runs/negative_binomial.hpp"
#include "runs/rational.hpp"
#include "runs/sequence.hpp"

namespace runs {

struct SimReport {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

// Counter-based generator: the splitmix64 finalizer applied to a per-stream
// key plus a counter. Streams derived from (seed, stream-index) are
// independent, so results do not depend on how samples are partitioned
// across workers.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(finalize(seed ^ finalize(stream * 0xD6E8FEB86659FD93ULL + 1))) {}

  std::uint64_t next() { return finalize(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

 private:
  static std::uint64_t finalize(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Exact Bernoulli(p) sampling by integer threshold comparison: success iff
// u * den < num * 2^64 for a uniform 64-bit u. No floating point involved.
class BernoulliSampler {
 public:
  explicit BernoulliSampler(const Rat& p) {
    check_probability(p);
    Int num = numerator(p), den = denominator(p);
    if (num < (Int(1) << 63) && den < (Int(1) << 63)) {
      fast_ = true;
      num_shifted_ = static_cast<unsigned __int128>(num.convert_to<std::uint64_t>()) << 64;
      den64_ = den.convert_to<std::uint64_t>();
    } else {
      fast_ = false;
      big_num_shifted_ = num << 64;
      big_den_ = den;
    }
  }

  bool sample(CounterRng& rng) const {
    std::uint64_t u = rng.next();
    if (fast_) return static_cast<unsigned __int128>(u) * den64_ < num_shifted_;
    return Int(u) * big_den_ < big_num_shifted_;
  }

 private:
  bool fast_ = false;
  unsigned __int128 num_shifted_ = 0;
  std::uint64_t den64_ = 0;
  Int big_num_shifted_;
  Int big_den_;
};

namespace detail {

inline unsigned mc_thread_count() {
  if (const char* env = std::getenv("RUNS_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs `body(sample_index, accumulator)` for every sample, partitioned
// across workers; per-worker accumulators are merged with `merge`. The
// per-sample RNG stream makes the result partition-independent.
template <typename Acc, typename Body, typename Merge>
Acc parallel_samples(std::uint64_t n_samples, Body&& body, Merge&& merge) {
  unsigned workers = mc_thread_count();
  if (workers > 1 && n_samples >= 2 * workers) {
    std::vector<Acc> accs(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        for (std::uint64_t i = w; i < n_samples; i += workers) body(i, accs[w]);
      });
    }
    for (auto& t : threads) t.join();
    Acc total{};
    for (auto& a : accs) merge(total, a);
    return total;
  }
  Acc total{};
  for (std::uint64_t i = 0; i < n_samples; ++i) body(i, total);
  return total;
}

inline SimReport proportion_report(std::uint64_t hits, std::uint64_t n_samples, std::uint64_t seed) {
  double est = static_cast<double>(hits) / static_cast<double>(n_samples);
  double se = std::sqrt(est * (1.0 - est) / static_cast<double>(n_samples));
  return {est, se, n_samples, seed};
}

}  // namespace detail

// Empirical run-count pmf; index r = 0..max_runs.
inline std::vector<SimReport> simulate_run_count(const TrialParams& params, std::uint64_t n_samples,
                                                 std::uint64_t seed) {
  params.validate();
  if (n_samples < 1) throw std::invalid_argument("simulate_run_count: n_samples must be >= 1");
  BernoulliSampler bern(params.p);
  const long long rmax = params.max_runs();
  using Counts = std::vector<std::uint64_t>;
  auto body = [&](std::uint64_t i, Counts& acc) {
    if (acc.empty()) acc.assign(static_cast<std::size_t>(rmax) + 1, 0);
    CounterRng rng(seed, i);
    std::vector<bool> bits(static_cast<std::size_t>(params.n));
    for (auto&& b : bits) b = bern.sample(rng);
    long long count = 0;
    detail::scan_runs(
        params.n, params.k, params.g,
        [&](long long t) { return static_cast<bool>(bits[static_cast<std::size_t>(t - 1)]); },
        [&](long long, long long) { ++count; });
    ++acc[static_cast<std::size_t>(count)];
  };
  auto merge = [&](Counts& total, const Counts& part) {
    if (total.empty()) total.assign(static_cast<std::size_t>(rmax) + 1, 0);
    for (std::size_t j = 0; j < part.size(); ++j) total[j] += part[j];
  };
  Counts counts = detail::parallel_samples<Counts>(n_samples, body, merge);
  if (counts.empty()) counts.assign(static_cast<std::size_t>(rmax) + 1, 0);
  std::vector<SimReport> reports;
  reports.reserve(counts.size());
  for (std::uint64_t c : counts) reports.push_back(detail::proportion_report(c, n_samples, seed));
  return reports;
}

// Empirical P(L >= t); index t = 0..n.
inline std::vector<SimReport> simulate_longest(const TrialParams& params, std::uint64_t n_samples,
                                               std::uint64_t seed) {
  params.validate();
  if (n_samples < 1) throw std::invalid_argument("simulate_longest: n_samples must be >= 1");
  BernoulliSampler bern(params.p);
  using Counts = std::vector<std::uint64_t>;
  auto body = [&](std::uint64_t i, Counts& acc) {
    if (acc.empty()) acc.assign(static_cast<std::size_t>(params.n) + 1, 0);
    CounterRng rng(seed, i);
    std::vector<bool> bits(static_cast<std::size_t>(params.n));
    for (auto&& b : bits) b = bern.sample(rng);
    long long longest = 0;
    detail::scan_runs(
        params.n, params.k, params.g,
        [&](long long t) { return static_cast<bool>(bits[static_cast<std::size_t>(t - 1)]); },
        [&](long long s, long long e) { longest = std::max(longest, e - s + 1); });
    ++acc[static_cast<std::size_t>(longest)];
  };
  auto merge = [&](Counts& total, const Counts& part) {
    if (total.empty()) total.assign(static_cast<std::size_t>(params.n) + 1, 0);
    for (std::size_t j = 0; j < part.size(); ++j) total[j] += part[j];
  };
  Counts hist = detail::parallel_samples<Counts>(n_samples, body, merge);
  if (hist.empty()) hist.assign(static_cast<std::size_t>(params.n) + 1, 0);
  // Convert the histogram of L into tail counts for P(L >= t).
  std::vector<SimReport> reports(hist.size());
  std::uint64_t tail = 0;
  for (std::size_t t = hist.size(); t-- > 0;) {
    tail += hist[t];
    reports[t] = detail::proportion_report(tail, n_samples, seed);
  }
  return reports;
}

struct NegBinomSimReport {
  SimReport report;        // mean waiting time over uncensored samples
  std::uint64_t censored = 0;
};

// Mean waiting time of NB_II(k,g,r). The horizon must be generous enough
// that censoring is negligible, checked a priori by Chebyshev.
inline NegBinomSimReport simulate_negbinom(const NegBinomParams& params, std::uint64_t n_samples,
                                           std::uint64_t seed, long long horizon) {
  params.validate();
  if (n_samples < 1) throw std::invalid_argument("simulate_negbinom: n_samples must be >= 1");
  auto [mean, var] = nb_mean_var(params);
  // Chebyshev bound on P(N > horizon); require < 1e-6.
  Rat slack = Rat(horizon) - mean;
  if (slack <= 0 || var * Rat(1000000) >= slack * slack)
    throw budget_error("simulate_negbinom: horizon " + std::to_string(horizon) +
                       " too small for censoring probability < 1e-6");
  BernoulliSampler bern(params.p);
  struct Acc {
    long double sum = 0, sum_sq = 0;
    std::uint64_t done = 0, censored = 0;
  };
  auto body = [&](std::uint64_t i, Acc& acc) {
    CounterRng rng(seed, i);
    long long streak = 0, runs_done = 0, skip = 0, waited = -1;
    for (long long trial = 1; trial <= horizon; ++trial) {
      bool s = bern.sample(rng);
      if (skip > 0) {
        --skip;
        continue;
      }
      if (s) {
        if (++streak == params.k) {
          if (++runs_done == params.r) {
            waited = trial;
            break;
          }
        }
      } else if (streak >= params.k) {
        // A completed run just terminated; the failure starts the buffer,
        // followed by g-1 arbitrary trials before counting resumes.
        skip = params.g - 1;
        streak = 0;
      } else {
        streak = 0;
      }
    }
    if (waited < 0) {
      ++acc.censored;
    } else {
      ++acc.done;
      acc.sum += static_cast<long double>(waited);
      acc.sum_sq += static_cast<long double>(waited) * static_cast<long double>(waited);
    }
  };
  auto merge = [](Acc& total, const Acc& part) {
    total.sum += part.sum;
    total.sum_sq += part.sum_sq;
    total.done += part.done;
    total.censored += part.censored;
  };
  Acc acc = detail::parallel_samples<Acc>(n_samples, body, merge);
  NegBinomSimReport out;
  out.censored = acc.censored;
  if (acc.done > 0) {
    long double m = acc.sum / acc.done;
    long double v = acc.done > 1 ? (acc.sum_sq - acc.sum * m) / (acc.done - 1) : 0.0L;
    if (v < 0) v = 0;
    out.report = {static_cast<double>(m),
                  static_cast<double>(std::sqrt(v / static_cast<long double>(acc.done))),
                  n_samples, seed};
  } else {
    out.report = {0.0, 0.0, n_samples, seed};
  }
  return out;
}

}  // namespace runs
