#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "runs/longest_run.hpp"
#include "runs/monte_carlo.hpp"
#include "runs/negative_binomial.hpp"
#include "runs/oracle.hpp"
#include "runs/run_count.hpp"
#include "runs/sequence.hpp"
#include "runs/series.hpp"

namespace runs {

// Outcome of one verification family: how many identity cells were checked,
// how many failed, and (capped) descriptions of the failing cells.
struct CheckResult {
  std::string name;
  long long cells = 0;
  long long failure_count = 0;
  std::vector<std::string> failing_cells;  // at most kMaxReportedFailures entries
  double worst_deviation = 0.0;            // 0 for clean exact checks; z-score for MC
  bool informational = false;              // diagnostic only, never gates the run
  double allowed_failure_fraction = 0.0;   // statistical checks tolerate a quota

  static constexpr std::size_t kMaxReportedFailures = 20;

  bool passed() const {
    if (cells == 0) return false;
    return static_cast<double>(failure_count) <=
           allowed_failure_fraction * static_cast<double>(cells);
  }
};

namespace detail {

inline void record(CheckResult& c, bool ok, const std::string& cell, double deviation = 0.0) {
  ++c.cells;
  if (deviation > c.worst_deviation) c.worst_deviation = deviation;
  if (!ok) {
    ++c.failure_count;
    if (c.failing_cells.size() < CheckResult::kMaxReportedFailures) c.failing_cells.push_back(cell);
  }
}

inline void record_eq(CheckResult& c, const Rat& got, const Rat& want, const std::string& cell) {
  bool ok = got == want;
  double dev = 0.0;
  if (!ok) {
    Rat d = got - want;
    if (d < 0) d = -d;
    dev = numerator(d).convert_to<double>() / denominator(d).convert_to<double>();
  }
  record(c, ok, ok ? cell : cell + ": got " + to_exact_string(got) + ", want " + to_exact_string(want),
         dev);
}

inline std::string cell_tag(const TrialParams& params) {
  std::ostringstream os;
  os << "k=" << params.k << " g=" << params.g << " n=" << params.n
     << " p=" << to_exact_string(params.p);
  return os.str();
}

inline std::vector<Rat> standard_probs() { return {Rat(1, 2), Rat(1, 3), Rat(3, 4)}; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Run-count distribution checks
// ---------------------------------------------------------------------------

// Cross-method and oracle equality of the run-count pmf: closed form,
// inclusion-exclusion assembly, pgf coefficient extraction, and enumeration
// all agree exactly. `mutation` perturbs the closed form at one fixed cell so
// the harness can prove it detects a corrupted formula.
inline CheckResult check_run_count_methods(long long k_max = 4, long long g_max = 4,
                                           long long n_max = 14,
                                           std::vector<Rat> probs = detail::standard_probs(),
                                           const Rat& mutation = Rat(0)) {
  CheckResult c{"run-count pmf: closed form = X/Y/M assembly = pgf coefficients = oracle"};
  for (long long k = 1; k <= k_max; ++k)
    for (long long g = 1; g <= g_max; ++g)
      for (long long n = 0; n <= n_max; ++n)
        for (const Rat& p : probs) {
          TrialParams params{k, g, n, p};
          auto oracle = brute_run_count_pmf(params);
          TPoly pgf = pgf_run_count(params);
          long long rmax = params.max_runs();
          for (long long r = 0; r <= rmax; ++r) {
            std::string tag = detail::cell_tag(params) + " r=" + std::to_string(r);
            Rat want = oracle[static_cast<std::size_t>(r)];
            Rat closed = r == 0 ? pmf_zero_runs(params) : pmf_run_count(params, r);
            // Designated mutation site: one mid-grid cell.
            if (mutation != 0 && k == 2 && g == 2 && n == 7 && r == 1 && p == Rat(1, 2))
              closed += mutation;
            detail::record_eq(c, closed, want, tag + " [closed form]");
            if (r >= 1) detail::record_eq(c, pmf_run_count_via_M(params, r), want, tag + " [X/Y/M]");
            Rat coeff = static_cast<std::size_t>(r) < pgf.size() ? pgf[static_cast<std::size_t>(r)] : Rat(0);
            detail::record_eq(c, coeff, want, tag + " [pgf coefficient]");
          }
          // The pgf must not carry mass beyond the structural bound.
          bool degree_ok = static_cast<long long>(tpoly_trim(pgf).size()) <= rmax + 1;
          detail::record(c, degree_ok, detail::cell_tag(params) + " [pgf degree > max runs]");
        }
  return c;
}

// Normalization, support bound attained, and nothing beyond the bound.
inline CheckResult check_run_count_structure(long long k_max = 4, long long g_max = 4,
                                             long long n_max = 14,
                                             std::vector<Rat> probs = detail::standard_probs()) {
  CheckResult c{"run-count pmf: normalization, support bound attained"};
  for (long long k = 1; k <= k_max; ++k)
    for (long long g = 1; g <= g_max; ++g)
      for (long long n = 0; n <= n_max; ++n)
        for (const Rat& p : probs) {
          TrialParams params{k, g, n, p};
          long long rmax = params.max_runs();
          Rat total = pmf_zero_runs(params);
          for (long long r = 1; r <= rmax; ++r) total += pmf_run_count(params, r);
          detail::record_eq(c, total, Rat(1), detail::cell_tag(params) + " [sum of masses]");
          if (rmax >= 1) {
            Rat top = pmf_run_count(params, rmax);
            detail::record(c, top > 0, detail::cell_tag(params) + " [mass at max runs vanishes]");
          }
          detail::record_eq(c, pmf_run_count(params, rmax + 1), Rat(0),
                            detail::cell_tag(params) + " [mass beyond max runs]");
        }
  return c;
}

// p_{n,r} = P(N >= r) - P(N >= r+1), plus the X/Y route for P(N >= r) and the
// unity identity P(N >= 1) + P(N = 0) = 1.
inline CheckResult check_run_count_survival(long long k_max = 4, long long g_max = 4,
                                            long long n_max = 14,
                                            std::vector<Rat> probs = detail::standard_probs()) {
  CheckResult c{"run-count survival: telescoping, X/Y route, unity"};
  for (long long k = 1; k <= k_max; ++k)
    for (long long g = 1; g <= g_max; ++g)
      for (long long n = 0; n <= n_max; ++n)
        for (const Rat& p : probs) {
          TrialParams params{k, g, n, p};
          long long rmax = params.max_runs();
          detail::record_eq(c, prob_at_least(params, 1) + pmf_zero_runs(params), Rat(1),
                            detail::cell_tag(params) + " [unity]");
          for (long long r = 1; r <= rmax; ++r) {
            std::string tag = detail::cell_tag(params) + " r=" + std::to_string(r);
            detail::record_eq(c, prob_at_least(params, r) - prob_at_least(params, r + 1),
                              pmf_run_count(params, r), tag + " [telescoping]");
            detail::record_eq(c, prob_at_least_via_XY(params, r), prob_at_least(params, r),
                              tag + " [X/Y route]");
          }
        }
  return c;
}

// P(N >= r) depends on n and g only through n - (r-1)(g-1).
inline CheckResult check_combination_invariance(long long k_max = 4, long long g_max = 3,
                                                long long n_max = 14,
                                                std::vector<Rat> probs = detail::standard_probs()) {
  CheckResult c{"run-count survival: (n,g) combination invariance"};
  for (long long k = 1; k <= k_max; ++k)
    for (long long g = 1; g <= g_max; ++g)
      for (long long n = 0; n <= n_max; ++n)
        for (const Rat& p : probs) {
          TrialParams params{k, g, n, p};
          for (long long r = 1; r <= params.max_runs(); ++r)
            for (long long d = 1; d <= 2; ++d) {
              TrialParams shifted{k, g + d, n + (r - 1) * d, p};
              detail::record_eq(c, prob_at_least(shifted, r), prob_at_least(params, r),
                                detail::cell_tag(params) + " r=" + std::to_string(r) +
                                    " d=" + std::to_string(d));
            }
        }
  return c;
}

// Factorial moments against the pmf-weighted falling-factorial sums, and the
// no-support tail.
inline CheckResult check_factorial_moments(long long k_max = 4, long long g_max = 4,
                                           long long n_max = 14,
                                           std::vector<Rat> probs = detail::standard_probs()) {
  CheckResult c{"run-count factorial moments: pmf-weighted sums"};
  for (long long k = 1; k <= k_max; ++k)
    for (long long g = 1; g <= g_max; ++g)
      for (long long n = 0; n <= n_max; ++n)
        for (const Rat& p : probs) {
          TrialParams params{k, g, n, p};
          long long rmax = params.max_runs();
          std::vector<Rat> pmf(static_cast<std::size_t>(rmax) + 1);
          pmf[0] = pmf_zero_runs(params);
          for (long long j = 1; j <= rmax; ++j) pmf[static_cast<std::size_t>(j)] = pmf_run_count(params, j);
          for (long long r = 0; r <= rmax + 1; ++r) {
            Rat want = 0;
            for (long long j = r; j <= rmax; ++j)
              want += Rat(falling_factorial(j, r)) * pmf[static_cast<std::size_t>(j)];
            detail::record_eq(c, factorial_moment(params, r), want,
                              detail::cell_tag(params) + " r=" + std::to_string(r));
          }
        }
  return c;
}

// g = 1 collapse onto Muselli's pmf.
inline CheckResult check_muselli_collapse(long long k_max = 4, long long n_max = 14,
                                          std::vector<Rat> probs = detail::standard_probs()) {
  CheckResult c{"run-count pmf: g = 1 collapse onto the slot form"};
  for (long long k = 1; k <= k_max; ++k)
    for (long long n = 0; n <= n_max; ++n)
      for (const Rat& p : probs) {
        TrialParams params{k, 1, n, p};
        for (long long r = 1; r <= params.max_runs(); ++r)
          detail::record_eq(c, pmf_run_count_muselli_g1(k, n, p, r), pmf_run_count(params, r),
                            detail::cell_tag(params) + " r=" + std::to_string(r));
      }
  return c;
}

// ---------------------------------------------------------------------------
// Sequence-semantics checks
// ---------------------------------------------------------------------------

// Run count is invariant under sequence reversal for g = 1 (exhaustive over
// all 2^n). For g = 1 no run can ever be start-clipped -- the trial after a
// terminated run is a failure, so the next eligible block already begins
// past the buffer -- hence runs are exactly the maximal success segments of
// length >= k and the count is manifestly symmetric.
//
// For g >= 2 the invariance FAILS under the clipped-start semantics that the
// run-count pmf, the longest-run theorem and the waiting-time laws all
// encode (every closed form in this library agrees cell-by-cell with the
// clipped-scan enumeration oracle). Minimal witness at k=1, g=2: SSFS has
// one run (the block (1,2) ends at m=2 and nothing may begin after trial
// m+g=4), while its reversal SFSS has two (run (1,1), then the tail success
// at trial 4 > 1+g is a valid start-clipped run inside the block (3,4)).
// Those asymmetric witnesses are pinned here as regressions instead.
inline CheckResult check_reversal_invariance(long long n_max = 14, long long kg_max = 3) {
  CheckResult c{"sequences: run-count reversal invariance (g=1) and gap counterexamples"};
  for (long long k = 1; k <= kg_max; ++k)
    for (long long n = 0; n <= n_max; ++n) {
      long long bad = 0;
      std::uint64_t witness = 0;
      for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
        auto seq = TrialSequence::from_mask(mask, static_cast<int>(n));
        if (decompose(seq, k, 1).count() != decompose(seq.reversed(), k, 1).count()) {
          if (bad == 0) witness = mask;
          ++bad;
        }
      }
      std::string tag = "k=" + std::to_string(k) + " g=1 n=" + std::to_string(n);
      if (bad > 0)
        tag += " [" + std::to_string(bad) + " sequences differ, e.g. " +
               TrialSequence::from_mask(witness, static_cast<int>(n)).to_string() + "]";
      detail::record(c, bad == 0, tag);
    }
  // Pinned counterexamples for g >= 2.
  {
    auto fwd = TrialSequence::from_string("SSFS");
    detail::record(c, decompose(fwd, 1, 2).count() == 1, "k=1 g=2 SSFS has 1 run");
    detail::record(c, decompose(fwd.reversed(), 1, 2).count() == 2, "k=1 g=2 SFSS has 2 runs");
  }
  {
    auto fwd = TrialSequence::from_string("SSFSSSS");
    detail::record(c, decompose(fwd, 2, 3).count() == 2, "k=2 g=3 SSFSSSS has 2 runs");
    detail::record(c, decompose(fwd.reversed(), 2, 3).count() == 1, "k=2 g=3 SSSSFSS has 1 run");
  }
  return c;
}

// The maximum number of pairwise g-separated success blocks never exceeds the
// run count (exhaustive over all 2^n).
inline CheckResult check_blocks_bounded_by_runs(long long n_max = 12, long long kg_max = 3) {
  CheckResult c{"sequences: g-separated block count <= run count"};
  for (long long k = 1; k <= kg_max; ++k)
    for (long long g = 1; g <= kg_max; ++g)
      for (long long n = 0; n <= n_max; ++n) {
        long long bad = 0;
        std::uint64_t witness = 0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
          auto seq = TrialSequence::from_mask(mask, static_cast<int>(n));
          if (count_g_separated_blocks(seq, k, g) > decompose(seq, k, g).count()) {
            if (bad == 0) witness = mask;
            ++bad;
          }
        }
        std::string tag = "k=" + std::to_string(k) + " g=" + std::to_string(g) +
                          " n=" + std::to_string(n);
        if (bad > 0)
          tag += " [" + std::to_string(bad) + " sequences violate, e.g. " +
                 TrialSequence::from_mask(witness, static_cast<int>(n)).to_string() + "]";
        detail::record(c, bad == 0, tag);
      }
  return c;
}

// Fixed regression cases: the three k=2, g=3 example sequences (reversal
// non-invariance of L, non-monotonicity of L in the success set) and the
// attainability of the max-run bound.
inline CheckResult check_sequence_regressions() {
  CheckResult c{"sequences: fixed regression examples"};
  auto a = TrialSequence::from_string("SSFSSSFSFSS");
  auto b = TrialSequence::from_string("SFFSSSFSFSS");
  auto rc = a.reversed();  // SSFSFSSSFSS
  auto da = decompose(a, 2, 3);
  detail::record(c, da.count() == 2, "A: run count 2");
  detail::record(c,
                 da.runs.size() == 2 && da.runs[0].start == 1 && da.runs[0].end == 2 &&
                     da.runs[1].start == 10 && da.runs[1].end == 11,
                 "A: runs (1,2) and (10,11)");
  auto db = decompose(b, 2, 3);
  detail::record(c, db.count() == 2, "B: run count 2");
  detail::record(c,
                 db.runs.size() == 2 && db.runs[0].start == 4 && db.runs[0].end == 6 &&
                     db.runs[1].start == 10 && db.runs[1].end == 11,
                 "B: runs (4,6) and (10,11)");
  detail::record(c, longest_run(a, 2, 3) == 2, "A: L = 2");
  detail::record(c, longest_run(b, 2, 3) == 3, "B: L = 3");
  detail::record(c, rc.to_string() == "SSFSFSSSFSS", "C is the reversal of A");
  detail::record(c, decompose(rc, 2, 3).count() == 2, "C: run count 2 (agrees with A here)");
  detail::record(c, longest_run(rc, 2, 3) == 3, "C: L = 3 (longest run is NOT reversal invariant)");
  detail::record(c, count_g_separated_blocks(a, 2, 3) == 2, "A: 2 g-separated blocks");
  // B's successes are a subset of A's, yet L(B) > L(A).
  bool subset = true;
  for (long long t = 1; t <= 11; ++t)
    if (b.success(t) && !a.success(t)) subset = false;
  detail::record(c, subset && longest_run(b, 2, 3) > longest_run(a, 2, 3),
                 "B subset of A with larger L (non-monotonicity witness)");
  // Prop bound attained by (S^k F^g)^{r-1} S^k padded with F.
  for (long long k = 1; k <= 3; ++k)
    for (long long g = 1; g <= 3; ++g)
      for (long long n = 0; n <= 12; ++n) {
        TrialParams params{k, g, n, Rat(1, 2)};
        long long rmax = params.max_runs();
        std::string s;
        for (long long j = 0; j < rmax; ++j) {
          if (j > 0) s += std::string(static_cast<std::size_t>(g), 'F');
          s += std::string(static_cast<std::size_t>(k), 'S');
        }
        s += std::string(static_cast<std::size_t>(n) - s.size(), 'F');
        detail::record(c, decompose(TrialSequence::from_string(s), k, g).count() == rmax,
                       "max-run bound attained at k=" + std::to_string(k) + " g=" +
                           std::to_string(g) + " n=" + std::to_string(n));
      }
  return c;
}

// ---------------------------------------------------------------------------
// Longest-run checks
// ---------------------------------------------------------------------------

// Five-way exact equality of P(L >= t): 1 - theorem cdf, recurrence,
// generating-function coefficient, combinatorial sum, and the oracle. For
// g = 1 the simplified generating function and the k-free block form are
// checked too.
inline CheckResult check_longest_methods(long long kg_max = 3, long long n_max = 13,
                                         std::vector<Rat> probs = {Rat(1, 2), Rat(1, 3)}) {
  CheckResult c{"longest run: theorem = recurrence = genfunc = sum = oracle"};
  for (long long k = 1; k <= kg_max; ++k)
    for (long long g = 1; g <= kg_max; ++g)
      for (long long n = k; n <= n_max; ++n)
        for (const Rat& p : probs) {
          TrialParams params{k, g, n, p};
          auto oracle_cdf = brute_longest_cdf(params);
          for (long long t = k; t <= n; ++t) {
            std::string tag = detail::cell_tag(params) + " t=" + std::to_string(t);
            Rat want = Rat(1) - oracle_cdf[static_cast<std::size_t>(t - 1)];
            detail::record_eq(c, Rat(1) - cdf_longest(params, t - 1), want, tag + " [theorem]");
            detail::record_eq(c, surv_longest_recurrence(params, t), want, tag + " [recurrence]");
            auto series = surv_longest_genfunc(params, t, static_cast<std::size_t>(n));
            detail::record_eq(c, series.coeff(static_cast<std::size_t>(n)), want, tag + " [genfunc]");
            detail::record_eq(c, surv_longest_sum(params, t), want, tag + " [sum]");
            if (g == 1) {
              // Simplified g = 1 generating function (1-pz)p^t z^t /
              // ((1-z)(1-z+qp^t z^{t+1})).
              const Rat q = params.q(), pt = pow_rat(p, t);
              TruncatedSeries num(static_cast<std::size_t>(n)), den(static_cast<std::size_t>(n));
              auto add = [n](TruncatedSeries& s, long long pw, const Rat& v) {
                if (pw <= n) s.set_coeff(static_cast<std::size_t>(pw), s.coeff(static_cast<std::size_t>(pw)) + v);
              };
              add(num, t, pt);
              if (t + 1 <= n) add(num, t + 1, -p * pt);
              add(den, 0, 1);
              add(den, 1, -2);
              if (n >= 2) add(den, 2, 1);
              add(den, t + 1, q * pt);
              add(den, t + 2, -q * pt);
              detail::record_eq(c, series_div(num, den).coeff(static_cast<std::size_t>(n)), want,
                                tag + " [g=1 simplified genfunc]");
              // k-free block distribution of the longest run, valid for
              // thresholds >= k.
              detail::record_eq(c, cdf_longest_muselli_g1(n, t, p),
                                oracle_cdf[static_cast<std::size_t>(t)], tag + " [g=1 block form]");
            }
          }
        }
  return c;
}

// Structural properties: monotonicity in t and n, the support gap below k,
// and cdf[n] = 1.
inline CheckResult check_longest_structure(long long kg_max = 3, long long n_max = 12,
                                           std::vector<Rat> probs = {Rat(1, 2), Rat(1, 3)}) {
  CheckResult c{"longest run: monotonicity and support structure"};
  for (long long k = 1; k <= kg_max; ++k)
    for (long long g = 1; g <= kg_max; ++g)
      for (const Rat& p : probs) {
        std::vector<std::vector<Rat>> surv_by_n;
        for (long long n = k; n <= n_max; ++n) {
          TrialParams params{k, g, n, p};
          auto dist = longest_run_dist(params);
          std::string tag = detail::cell_tag(params);
          detail::record_eq(c, dist.cdf[static_cast<std::size_t>(n)], Rat(1), tag + " [cdf at n]");
          bool nondecreasing = true;
          for (long long t = 1; t <= n; ++t)
            if (dist.cdf[static_cast<std::size_t>(t)] < dist.cdf[static_cast<std::size_t>(t - 1)])
              nondecreasing = false;
          detail::record(c, nondecreasing, tag + " [cdf nondecreasing]");
          bool flat_below_k = true;
          for (long long t = 1; t < k && t <= n; ++t)
            if (dist.cdf[static_cast<std::size_t>(t)] != dist.cdf[0]) flat_below_k = false;
          detail::record(c, flat_below_k, tag + " [support gap below k]");
          std::vector<Rat> surv(static_cast<std::size_t>(n) + 1);
          for (long long t = 0; t <= n; ++t) surv[static_cast<std::size_t>(t)] = surv_longest(params, t);
          bool nonincreasing = true;
          for (long long t = 1; t <= n; ++t)
            if (surv[static_cast<std::size_t>(t)] > surv[static_cast<std::size_t>(t - 1)]) nonincreasing = false;
          detail::record(c, nonincreasing, tag + " [survival nonincreasing in t]");
          if (!surv_by_n.empty()) {
            const auto& prev = surv_by_n.back();
            bool grows = true;
            for (std::size_t t = 0; t < prev.size(); ++t)
              if (surv[t] < prev[t]) grows = false;
            detail::record(c, grows, tag + " [survival nondecreasing in n]");
          }
          surv_by_n.push_back(std::move(surv));
        }
      }
  return c;
}

// P(L >= k) is g-independent and equals P(N >= 1).
inline CheckResult check_gap_independence(long long k_max = 4, long long n_max = 14,
                                          std::vector<Rat> probs = {Rat(1, 2), Rat(1, 3)}) {
  CheckResult c{"longest run: P(L >= k) g-independent and equal to P(N >= 1)"};
  for (long long k = 1; k <= k_max; ++k)
    for (long long n = k; n <= n_max; ++n)
      for (const Rat& p : probs) {
        Rat base = surv_longest(TrialParams{k, 1, n, p}, k);
        for (long long g = 1; g <= 4; ++g) {
          TrialParams params{k, g, n, p};
          std::string tag = detail::cell_tag(params);
          detail::record_eq(c, surv_longest(params, k), base, tag + " [g-independence]");
          detail::record_eq(c, surv_longest(params, k), prob_at_least(params, 1),
                            tag + " [P(L>=k) = P(N>=1)]");
        }
      }
  return c;
}

// The simple-regime closed forms: P(L >= k) = p^k (1 + (n-k)q) for
// k <= n <= 2k (any g; two disjoint runs of length k need at least 2k+1
// trials counting the separating failure, so at most one run fits), the
// strict overestimate just outside the regime at n = 2k+1 (where SS..S F
// SS..S carries two runs and the union bound double-counts it), the
// single-run analog p^t (1 + (n-t)q) for max(k, n-k) < t <= n, and the
// g = 1 closed-sum identity at threshold k.
inline CheckResult check_simple_regimes(long long k_max = 6, long long g_max = 4,
                                        std::vector<Rat> probs = {Rat(1, 2), Rat(1, 3)}) {
  CheckResult c{"longest run: simple-regime formulas and strict overestimate"};
  for (long long k = 1; k <= k_max; ++k)
    for (const Rat& p : probs) {
      const Rat q = Rat(1) - p;
      for (long long n = k; n <= 2 * k + 1; ++n) {
        if (n <= 2 * k) {
          Rat simple = pow_rat(p, k) * (Rat(1) + Rat(n - k) * q);
          for (long long g = 1; g <= g_max; ++g) {
            TrialParams params{k, g, n, p};
            detail::record_eq(c, surv_longest(params, k), simple, detail::cell_tag(params) + " [simple P(L>=k)]");
          }
        }
        for (long long t = std::max(k, n - k) + 1; t <= n; ++t) {
          TrialParams params{k, 1, n, p};
          detail::record_eq(c, surv_longest(params, t), pow_rat(p, t) * (Rat(1) + Rat(n - t) * q),
                            detail::cell_tag(params) + " t=" + std::to_string(t) + " [single-run analog]");
        }
      }
      {
        // Just outside the regime the simple formula strictly overestimates.
        long long n = 2 * k + 1;
        Rat simple = pow_rat(p, k) * (Rat(1) + Rat(n - k) * q);
        Rat exact = surv_longest(TrialParams{k, 1, n, p}, k);
        detail::record(c, simple > exact,
                       "k=" + std::to_string(k) + " n=" + std::to_string(n) + " p=" +
                           to_exact_string(p) + " [strict overestimate at n=2k+1]");
      }
      // The g = 1 closed sum at threshold t = k equals P(N >= 1).
      for (long long n = k; n <= 14; ++n) {
        TrialParams params{k, 1, n, p};
        detail::record_eq(c, surv_longest_sum_g1(n, k, p), prob_at_least(params, 1),
                          detail::cell_tag(params) + " [g=1 closed sum at t=k]");
      }
    }
  return c;
}

// Moments of L: survival-sum moments against the oracle pmf of L on small
// grids, and against the single-run closed forms on k <= n <= 2k.
inline CheckResult check_longest_moments(long long k_max = 6,
                                         std::vector<Rat> probs = {Rat(1, 2), Rat(1, 3)}) {
  CheckResult c{"longest run: moments vs closed forms and oracle"};
  for (long long k = 1; k <= k_max; ++k)
    for (long long n = k; n <= 2 * k; ++n)
      for (const Rat& p : probs)
        for (long long g = 1; g <= 3; ++g) {
          TrialParams params{k, g, n, p};
          auto m = moments_longest(params);
          auto closed = moments_longest_single_run_closed(params);
          std::string tag = detail::cell_tag(params);
          detail::record_eq(c, m.mean, closed.mean, tag + " [mean]");
          detail::record_eq(c, m.variance, closed.variance, tag + " [variance]");
          detail::record_eq(c, m.factorial[1], closed.factorial[1], tag + " [first factorial]");
          if (n >= 2)
            detail::record_eq(c, m.factorial[2], closed.factorial[2], tag + " [second factorial]");
          detail::record(c, m.variance >= 0, tag + " [variance nonnegative]");
        }
  // Oracle comparison on a small general grid.
  for (long long k = 1; k <= 3; ++k)
    for (long long g = 1; g <= 3; ++g)
      for (long long n = k; n <= 10; ++n)
        for (const Rat& p : probs) {
          TrialParams params{k, g, n, p};
          auto cdf = brute_longest_cdf(params);
          Rat mean = 0, second = 0;
          for (long long t = 1; t <= n; ++t) {
            Rat mass = cdf[static_cast<std::size_t>(t)] - cdf[static_cast<std::size_t>(t - 1)];
            mean += Rat(t) * mass;
            second += Rat(t) * Rat(t) * mass;
          }
          auto m = moments_longest(params);
          std::string tag = detail::cell_tag(params);
          detail::record_eq(c, m.mean, mean, tag + " [oracle mean]");
          detail::record_eq(c, m.variance, second - mean * mean, tag + " [oracle variance]");
        }
  return c;
}

// The theorem's k=2, g=3, n=11 example: assembled P(L <= t) equals the oracle
// for every threshold.
inline CheckResult check_longest_example_table() {
  CheckResult c{"longest run: k=2 g=3 n=11 table vs oracle"};
  TrialParams params{2, 3, 11, Rat(1, 2)};
  auto oracle = brute_longest_cdf(params);
  for (long long t = 0; t <= 11; ++t)
    detail::record_eq(c, cdf_longest(params, t), oracle[static_cast<std::size_t>(t)],
                      detail::cell_tag(params) + " t=" + std::to_string(t));
  return c;
}

// ---------------------------------------------------------------------------
// Negative-binomial checks
// ---------------------------------------------------------------------------

inline CheckResult check_negbinom(long long kgr_max = 3, long long n_oracle = 14,
                                  long long n_shift = 30,
                                  std::vector<Rat> probs = {Rat(1, 2), Rat(1, 3)}) {
  CheckResult c{"negative binomial: oracle, shift identity, pgf, moments"};
  for (long long k = 1; k <= kgr_max; ++k)
    for (long long g = 1; g <= kgr_max; ++g)
      for (long long r = 1; r <= kgr_max; ++r)
        for (const Rat& p : probs) {
          NegBinomParams params{k, g, r, p};
          NegBinomParams base{k, 1, r, p};
          std::string head = "k=" + std::to_string(k) + " g=" + std::to_string(g) +
                             " r=" + std::to_string(r) + " p=" + to_exact_string(p);
          for (long long n = 0; n <= n_oracle; ++n)
            detail::record_eq(c, nb_pmf(params, n), brute_negbinom_pmf(k, g, r, p, n),
                              head + " n=" + std::to_string(n) + " [oracle]");
          for (long long n = 0; n <= n_shift; ++n) {
            Rat shifted = n - params.shift() >= 0 ? nb_pmf(base, n - params.shift()) : Rat(0);
            detail::record_eq(c, nb_pmf(params, n), shifted,
                              head + " n=" + std::to_string(n) + " [shift identity]");
          }
          // pgf coefficients reproduce the pmf; lowest coefficient is the
          // minimum-support mass p^{rk} q^{r-1}.
          std::size_t order = static_cast<std::size_t>(params.min_support() + 10);
          auto pgf = nb_pgf(params, order);
          for (long long n = 0; n <= static_cast<long long>(order); ++n)
            detail::record_eq(c, pgf.coeff(static_cast<std::size_t>(n)), nb_pmf(params, n),
                              head + " n=" + std::to_string(n) + " [pgf coefficient]");
          detail::record_eq(c, pgf.coeff(static_cast<std::size_t>(params.min_support())),
                            pow_rat(p, r * k) * pow_rat(Rat(1) - p, r - 1),
                            head + " [minimum-support mass]");
          // Factorial moments vs the Taylor extraction from the rational pgf.
          std::vector<Rat> num_poly, den_poly;
          detail::nb_pgf_polys(params, num_poly, den_poly);
          auto taylor = taylor_shift_at_one(num_poly, den_poly, 4);
          for (long long s = 0; s <= 4; ++s)
            detail::record_eq(c, nb_factorial_moment(params, s), taylor[static_cast<std::size_t>(s)],
                              head + " s=" + std::to_string(s) + " [Taylor moment]");
          // Mean and variance from the closed forms vs factorial moments.
          auto [mean, var] = nb_mean_var(params);
          Rat f1 = taylor[1], f2 = taylor[2], f3 = taylor[3];
          detail::record_eq(c, mean, f1, head + " [mean]");
          detail::record_eq(c, var, f2 + f1 - f1 * f1, head + " [variance]");
          // Central moments 2 and 3 are g-independent.
          std::vector<Rat> bnum, bden;
          detail::nb_pgf_polys(base, bnum, bden);
          auto btay = taylor_shift_at_one(bnum, bden, 3);
          Rat b1 = btay[1], b2 = btay[2], b3 = btay[3];
          Rat m2 = f2 + f1, bm2 = b2 + b1;                    // E[N^2]
          Rat m3 = f3 + 3 * f2 + f1, bm3 = b3 + 3 * b2 + b1;  // E[N^3]
          detail::record_eq(c, m2 - f1 * f1, bm2 - b1 * b1, head + " [central moment 2]");
          detail::record_eq(c, m3 - 3 * f1 * m2 + 2 * f1 * f1 * f1,
                            bm3 - 3 * b1 * bm2 + 2 * b1 * b1 * b1, head + " [central moment 3]");
        }
  return c;
}

// ---------------------------------------------------------------------------
// Monte Carlo statistical checks
// ---------------------------------------------------------------------------

// Simulation against exact values at n beyond the enumeration budget. A cell
// passes when the estimate lies within 4 standard errors of the exact value
// (standard error from the exact probability); at least 95% of cells must
// pass.
inline CheckResult check_monte_carlo(std::uint64_t n_samples = 100000, std::uint64_t seed = 20260823) {
  CheckResult c{"monte carlo: estimates within 4 standard errors of exact values"};
  c.allowed_failure_fraction = 0.05;
  auto prob_cell = [&](const SimReport& rep, const Rat& exact, const std::string& tag) {
    double v = numerator(exact).convert_to<double>() / denominator(exact).convert_to<double>();
    double se = std::sqrt(v * (1.0 - v) / static_cast<double>(rep.n_samples));
    if (se == 0.0) {
      detail::record(c, rep.estimate == v, tag);
      return;
    }
    double z = std::abs(rep.estimate - v) / se;
    detail::record(c, z <= 4.0, tag + " [z=" + std::to_string(z) + "]", z);
  };
  struct Config {
    long long k, g;
    Rat p;
  };
  std::vector<Config> configs = {{1, 1, Rat(1, 2)}, {2, 3, Rat(1, 2)}, {3, 2, Rat(1, 3)}};
  for (long long n : {50LL, 200LL})
    for (const auto& cfg : configs) {
      TrialParams params{cfg.k, cfg.g, n, cfg.p};
      auto counts = simulate_run_count(params, n_samples, seed);
      for (long long r = 0; r <= params.max_runs(); ++r) {
        Rat exact = r == 0 ? pmf_zero_runs(params) : pmf_run_count(params, r);
        prob_cell(counts[static_cast<std::size_t>(r)], exact,
                  detail::cell_tag(params) + " r=" + std::to_string(r) + " [run count]");
      }
      auto tails = simulate_longest(params, n_samples, seed + 1);
      for (long long t = cfg.k; t <= std::min(n, cfg.k + 18); ++t)
        prob_cell(tails[static_cast<std::size_t>(t)], surv_longest(params, t),
                  detail::cell_tag(params) + " t=" + std::to_string(t) + " [longest run]");
    }
  // Waiting-time means; the horizon satisfies the Chebyshev censoring bound.
  struct NbConfig {
    NegBinomParams params;
    long long horizon;
  };
  std::vector<NbConfig> nb_configs = {{{1, 1, 1, Rat(1, 2)}, 3000},
                                      {{2, 3, 2, Rat(1, 2)}, 8000},
                                      {{2, 1, 3, Rat(1, 3)}, 60000}};
  for (const auto& cfg : nb_configs) {
    auto sim = simulate_negbinom(cfg.params, n_samples, seed + 2, cfg.horizon);
    auto [mean, var] = nb_mean_var(cfg.params);
    double m = numerator(mean).convert_to<double>() / denominator(mean).convert_to<double>();
    double se = sim.report.std_error;
    std::string tag = "k=" + std::to_string(cfg.params.k) + " g=" + std::to_string(cfg.params.g) +
                      " r=" + std::to_string(cfg.params.r) + " [waiting-time mean]";
    double z = se > 0 ? std::abs(sim.report.estimate - m) / se : (sim.report.estimate == m ? 0.0 : 1e9);
    detail::record(c, z <= 4.0 && sim.censored == 0, tag + " [z=" + std::to_string(z) + "]", z);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Asymptotic diagnostic (informational)
// ---------------------------------------------------------------------------

// E[L_n] ln(1/p) / ln n at k = g = 1, p = 1/2 should be of order 1. The
// underlying claim is asymptotic only, so this check never gates a run.
inline CheckResult check_asymptotic_order(std::vector<long long> sizes = {256, 1024, 4096}) {
  CheckResult c{"asymptotic diagnostic: E[L_n] ln(1/p)/ln n of order 1 (informational)"};
  c.informational = true;
  for (long long n : sizes) {
    double ratio = asymptotic_mean_ratio_half(n);
    detail::record(c, ratio >= 0.8 && ratio <= 1.3,
                   "n=" + std::to_string(n) + " ratio=" + std::to_string(ratio), std::abs(ratio - 1.0));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Harness entry points
// ---------------------------------------------------------------------------

struct VerificationReport {
  std::vector<CheckResult> checks;

  long long total_cells() const {
    long long total = 0;
    for (const auto& ch : checks) total += ch.cells;
    return total;
  }
  bool passed() const {
    for (const auto& ch : checks)
      if (!ch.informational && !ch.passed()) return false;
    return true;
  }
};

// The full default verification grid (>= 10^4 identity cells). `mutation`
// nonzero corrupts one designated run-count cell, which the report must flag.
inline VerificationReport run_default_verification(const Rat& mutation = Rat(0)) {
  VerificationReport report;
  report.checks.push_back(check_run_count_methods(4, 4, 14, detail::standard_probs(), mutation));
  report.checks.push_back(check_run_count_structure());
  report.checks.push_back(check_run_count_survival());
  report.checks.push_back(check_combination_invariance());
  report.checks.push_back(check_factorial_moments());
  report.checks.push_back(check_muselli_collapse());
  report.checks.push_back(check_reversal_invariance());
  report.checks.push_back(check_blocks_bounded_by_runs());
  report.checks.push_back(check_sequence_regressions());
  report.checks.push_back(check_longest_methods());
  report.checks.push_back(check_longest_structure());
  report.checks.push_back(check_gap_independence());
  report.checks.push_back(check_simple_regimes());
  report.checks.push_back(check_longest_moments());
  report.checks.push_back(check_longest_example_table());
  report.checks.push_back(check_negbinom());
  report.checks.push_back(check_monte_carlo());
  report.checks.push_back(check_asymptotic_order());
  return report;
}

// A reduced grid for fast smoke runs.
inline VerificationReport run_quick_verification() {
  VerificationReport report;
  auto two_probs = std::vector<Rat>{Rat(1, 2), Rat(1, 3)};
  report.checks.push_back(check_run_count_methods(2, 2, 9, two_probs));
  report.checks.push_back(check_run_count_survival(2, 2, 9, two_probs));
  report.checks.push_back(check_longest_methods(2, 8, two_probs));
  report.checks.push_back(check_negbinom(2, 9, 14, two_probs));
  return report;
}

}  // namespace runs
