#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "runs/bivariate.hpp"
#include "runs/combinatorics.hpp"
#include "runs/longest_run.hpp"
#include "runs/monte_carlo.hpp"
#include "runs/negative_binomial.hpp"
#include "runs/oracle.hpp"
#include "runs/rational.hpp"
#include "runs/run_count.hpp"
#include "runs/sequence.hpp"
#include "runs/series.hpp"
#include "runs/verify.hpp"

#include <cmath>

using namespace runs;

static const Rat kHalf(1, 2);
static const Rat kThird(1, 3);

// ---------------------------------------------------------------------------
// Exact numerics
// ---------------------------------------------------------------------------

TEST_CASE("binomial coefficients use the vanishing convention") {
  CHECK(binom(5, 2) == 10);
  CHECK(binom(3, 5) == 0);
  CHECK(binom(-2, 1) == 0);
  CHECK(binom(0, 0) == 1);
  CHECK(binom(7, -1) == 0);
  for (long long a = 0; a <= 12; ++a) {
    Int row = 0;
    for (long long b = 0; b <= a; ++b) row += binom(a, b);
    CHECK(row == pow_int(2, a));
  }
}

TEST_CASE("multinomial coefficients") {
  CHECK(multinom(3, 1, 1, 1) == 6);
  CHECK(multinom(2, 2, 0, 0) == 1);
  CHECK(multinom(4, 2, 1, 1) == 12);
  CHECK(multinom(1, 2, -1, 0) == 0);
  CHECK_THROWS_AS(multinom(3, 1, 1, 0), std::invalid_argument);
}

TEST_CASE("falling factorials and factorials") {
  CHECK(falling_factorial(5, 0) == 1);
  CHECK(falling_factorial(5, 3) == 60);
  CHECK(falling_factorial(2, 4) == 0);
  CHECK(factorial(0) == 1);
  CHECK(factorial(6) == 720);
}

TEST_CASE("rational parsing and rendering round-trip") {
  CHECK(parse_rational("1/2") == kHalf);
  CHECK(parse_rational("0.25") == Rat(1, 4));
  CHECK(parse_rational("3") == Rat(3));
  CHECK(parse_rational("-0.5") == Rat(-1, 2));
  CHECK_THROWS_AS(parse_rational("1e-3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("a/b"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  for (const Rat& x : {Rat(7, 8), Rat(-233, 2048), Rat(0), Rat(10), Rat(1, 3)})
    CHECK(parse_rational(to_exact_string(x)) == x);
}

TEST_CASE("decimal rendering is correctly rounded") {
  CHECK(to_decimal_string(Rat(1, 2)) == "0.5");
  CHECK(to_decimal_string(Rat(1, 3), 4) == "0.3333");
  CHECK(to_decimal_string(Rat(2, 3), 4) == "0.6667");
  CHECK(to_decimal_string(Rat(1, 8), 3) == "0.125");
  CHECK(to_decimal_string(Rat(0)) == "0");
  CHECK(to_decimal_string(Rat(125, 1000), 2) == "0.12");  // half-even
  CHECK(to_decimal_string(Rat(1, 100000000), 3) == "1e-8");
  CHECK(to_decimal_string(Rat(-7, 8), 3) == "-0.875");
}

TEST_CASE("series arithmetic and division") {
  TruncatedSeries one(6), one_minus_z(6);
  one.set_coeff(0, 1);
  one_minus_z.set_coeff(0, 1);
  one_minus_z.set_coeff(1, -1);
  auto geo = series_div(one, one_minus_z);
  for (std::size_t i = 0; i <= 6; ++i) CHECK(geo.coeff(i) == 1);
  auto ident = series_div(one_minus_z, one_minus_z);
  CHECK(ident.coeff(0) == 1);
  for (std::size_t i = 1; i <= 6; ++i) CHECK(ident.coeff(i) == 0);
  // Exact round trip: (a * den) / den == a.
  TruncatedSeries a(6);
  a.set_coeff(0, Rat(2, 3));
  a.set_coeff(3, Rat(-5, 7));
  a.set_coeff(6, Rat(1));
  CHECK(series_div(a * one_minus_z, one_minus_z) == a);
  TruncatedSeries zero_const(6);
  CHECK_THROWS(series_div(one, zero_const));
}

TEST_CASE("Taylor-at-1 factorial-moment extraction") {
  // Bernoulli pgf q + p z -> moments [1, p, 0].
  auto bern = taylor_shift_at_one({Rat(1, 3), Rat(2, 3)}, {Rat(1)}, 2);
  CHECK(bern[0] == 1);
  CHECK(bern[1] == Rat(2, 3));
  CHECK(bern[2] == 0);
  // Point mass at c = 4: s-th moment is the falling factorial 4_(s).
  auto point = taylor_shift_at_one({Rat(0), Rat(0), Rat(0), Rat(0), Rat(1)}, {Rat(1)}, 3);
  for (long long s = 0; s <= 3; ++s) CHECK(point[(std::size_t)s] == Rat(falling_factorial(4, s)));
  // Geometric (k = 1, r = 1, p = 1/2) waiting-time mean is 2.
  std::vector<Rat> num, den;
  detail::nb_pgf_polys(NegBinomParams{1, 1, 1, kHalf}, num, den);
  auto geo = taylor_shift_at_one(num, den, 1);
  CHECK(geo[0] == 1);
  CHECK(geo[1] == 2);
}

// ---------------------------------------------------------------------------
// Run semantics and the enumeration oracle
// ---------------------------------------------------------------------------

TEST_CASE("decomposition of the k=2, g=3 example sequences") {
  auto a = TrialSequence::from_string("SSFSSSFSFSS");
  auto b = TrialSequence::from_string("SFFSSSFSFSS");
  auto c = a.reversed();
  CHECK(c.to_string() == "SSFSFSSSFSS");

  auto da = decompose(a, 2, 3);
  REQUIRE(da.count() == 2);
  CHECK(da.runs[0].start == 1);
  CHECK(da.runs[0].end == 2);
  CHECK(da.runs[1].start == 10);
  CHECK(da.runs[1].end == 11);

  auto db = decompose(b, 2, 3);
  REQUIRE(db.count() == 2);
  CHECK(db.runs[0].start == 4);
  CHECK(db.runs[0].end == 6);
  CHECK(db.runs[1].start == 10);
  CHECK(db.runs[1].end == 11);

  CHECK(longest_run(a, 2, 3) == 2);
  CHECK(longest_run(b, 2, 3) == 3);
  CHECK(longest_run(c, 2, 3) == 3);
  CHECK(decompose(c, 2, 3).count() == 2);

  CHECK(decompose(TrialSequence::from_string("FFFF"), 2, 3).count() == 0);
  CHECK(longest_run(TrialSequence::from_string("FFFF"), 1, 1) == 0);
}

TEST_CASE("g-separated block counting") {
  CHECK(count_g_separated_blocks(TrialSequence::from_string("SSFSSSFSFSS"), 2, 3) == 2);
  CHECK(count_g_separated_blocks(TrialSequence::from_string("SS"), 2, 3) == 1);
  CHECK(count_g_separated_blocks(TrialSequence::from_string("FFFF"), 1, 1) == 0);
}

TEST_CASE("sequence literals accept both alphabets") {
  CHECK(TrialSequence::from_string("101").to_string() == "SFS");
  CHECK(TrialSequence::from_string("SFS").to_string() == "SFS");
  CHECK_THROWS(TrialSequence::from_string("SFX"));
}

TEST_CASE("enumeration oracle: run-count pmf") {
  auto pmf = brute_run_count_pmf(TrialParams{1, 1, 2, kHalf});
  REQUIRE(pmf.size() == 2);  // r_max = floor(3/2) = 1
  CHECK(pmf[0] == Rat(1, 4));
  CHECK(pmf[1] == Rat(3, 4));

  pmf = brute_run_count_pmf(TrialParams{1, 2, 3, kHalf});
  REQUIRE(pmf.size() == 2);
  CHECK(pmf[0] == Rat(1, 8));
  CHECK(pmf[1] == Rat(7, 8));

  pmf = brute_run_count_pmf(TrialParams{1, 1, 3, kHalf});
  REQUIRE(pmf.size() == 3);
  CHECK(pmf[2] == Rat(1, 8));  // only SFS

  Rat total = 0;
  for (const auto& mass : brute_run_count_pmf(TrialParams{2, 3, 9, kThird})) total += mass;
  CHECK(total == 1);

  CHECK_THROWS_AS(brute_run_count_pmf(TrialParams{1, 1, 21, kHalf}), budget_error);
}

TEST_CASE("enumeration oracle: longest-run cdf") {
  auto cdf = brute_longest_cdf(TrialParams{2, 1, 4, kHalf});
  CHECK(Rat(1) - cdf[1] == kHalf);  // P(L >= 2) = 1/2
  CHECK(cdf[4] == 1);
  cdf = brute_longest_cdf(TrialParams{2, 1, 3, kHalf});
  CHECK(Rat(1) - cdf[1] == Rat(3, 8));  // SSS, SSF, FSS
}

TEST_CASE("enumeration oracle: waiting-time pmf") {
  CHECK(brute_negbinom_pmf(1, 1, 2, kHalf, 3) == Rat(1, 8));  // only S F S
  CHECK(brute_negbinom_pmf(3, 2, 1, kThird, 3) == pow_rat(kThird, 3));
  CHECK(brute_negbinom_pmf(1, 2, 2, kHalf, 3) == 0);  // below support rk+(r-1)g = 4
}

// ---------------------------------------------------------------------------
// Run-count distribution
// ---------------------------------------------------------------------------

TEST_CASE("run-count pmf closed form") {
  CHECK(pmf_run_count(TrialParams{1, 1, 2, kHalf}, 1) == Rat(3, 4));
  CHECK(pmf_run_count(TrialParams{1, 2, 3, kHalf}, 1) == Rat(7, 8));
  for (long long g = 1; g <= 4; ++g)
    CHECK(pmf_run_count(TrialParams{3, g, 3, kThird}, 1) == pow_rat(kThird, 3));
  CHECK(pmf_run_count(TrialParams{1, 1, 3, kHalf}, 99) == 0);
}

TEST_CASE("survival function of the run count") {
  TrialParams params{2, 2, 4, kHalf};
  CHECK(prob_at_least(params, 0) == 1);
  for (long long g = 1; g <= 4; ++g) CHECK(prob_at_least(TrialParams{2, g, 4, kHalf}, 1) == kHalf);
  // Combination invariance: (n, g) enters only through n - (r-1)(g-1).
  CHECK(prob_at_least(TrialParams{1, 2, 5, kThird}, 2) == prob_at_least(TrialParams{1, 3, 6, kThird}, 2));
}

TEST_CASE("zero-run probability: three paths agree") {
  CHECK(pmf_zero_runs(TrialParams{3, 1, 2, kHalf}) == 1);  // n < k
  CHECK(pmf_zero_runs(TrialParams{2, 1, 4, kHalf}) == kHalf);
  CHECK(pmf_zero_runs(TrialParams{1, 1, 3, kHalf}) == Rat(1, 8));
  // g-independence
  for (long long g = 1; g <= 4; ++g)
    CHECK(pmf_zero_runs(TrialParams{2, g, 9, kThird}) == pmf_zero_runs(TrialParams{2, 1, 9, kThird}));
}

TEST_CASE("Muselli g=1 pmf") {
  CHECK(pmf_run_count_muselli_g1(1, 2, kHalf, 1) == Rat(3, 4));
  CHECK(pmf_run_count_muselli_g1(1, 3, kHalf, 2) == Rat(1, 8));
  CHECK(pmf_run_count_muselli_g1(2, 5, kHalf, 2) == Rat(1, 32));  // only SSFSS
  CHECK(pmf_run_count_muselli_g1(2, 5, kHalf, 3) == 0);  // beyond floor((n+1)/(k+1))
}

TEST_CASE("factorial moments of the run count") {
  CHECK(factorial_moment(TrialParams{1, 1, 2, kHalf}, 0) == 1);
  CHECK(factorial_moment(TrialParams{1, 1, 2, kHalf}, 1) == Rat(3, 4));
  TrialParams params{2, 3, 9, kThird};
  CHECK(factorial_moment(params, params.max_runs() + 1) == 0);
}

TEST_CASE("X function (g=1 and the gap shift)") {
  Rat p = Rat(2, 5), q = Rat(3, 5);
  CHECK(x_g1(1, 2, 1, p) == p * q);
  CHECK(x_g1(2, 2, 1, p) == 0);  // n <= rk + r - 1
  // Frozen oracle value: P({SSF, FSF}) at p = 1/2 (sum of two 1/8 sequences).
  CHECK(x_g1(1, 3, 1, kHalf) == Rat(1, 4));
  CHECK(x_gap(1, 1, 3, 1, p) == x_g1(1, 3, 1, p));
  CHECK(x_gap(1, 2, 5, 2, p) == x_g1(1, 4, 2, p));
}

TEST_CASE("Y function") {
  Rat p = Rat(2, 5);
  CHECK(y_g1(1, 2, 1, p) == p * (Rat(1) - p));
  CHECK(y_g1(2, 2, 1, p) == 0);  // needs >= k+1 trials
  // Defining identity Y(k,n,r) = sum_m X(k,1,m,r).
  for (long long k = 1; k <= 2; ++k)
    for (long long r = 1; r <= 2; ++r)
      for (long long n = 0; n <= 8; ++n) {
        Rat sum = 0;
        for (long long m = 1; m <= n; ++m) sum += x_g1(k, m, r, kThird);
        CHECK(y_g1(k, n, r, kThird) == sum);
      }
}

TEST_CASE("X/Y/M assembly of the pmf") {
  CHECK(pmf_run_count_via_M(TrialParams{1, 2, 3, kHalf}, 1) == Rat(7, 8));
  // g = 1 collapse onto the slot form.
  for (long long n = 0; n <= 9; ++n)
    for (long long r = 1; r <= 3; ++r)
      CHECK(pmf_run_count_via_M(TrialParams{2, 1, n, kThird}, r) ==
            pmf_run_count_muselli_g1(2, n, kThird, r));
  TrialParams example{2, 3, 11, kHalf};
  CHECK(pmf_run_count_via_M(example, 2) == pmf_run_count(example, 2));
}

TEST_CASE("survival via the X/Y route") {
  CHECK(prob_at_least_via_XY(TrialParams{3, 2, 3, kThird}, 1) == pow_rat(kThird, 3));
  TrialParams params{2, 2, 6, kThird};
  CHECK(prob_at_least_via_XY(params, 1) == prob_at_least(params, 1));
  CHECK(prob_at_least_via_XY(TrialParams{1, 1, 3, kHalf}, 2) == Rat(1, 8));
}

TEST_CASE("pgf of the run count from the double pgf") {
  TrialParams params{1, 1, 2, kHalf};
  auto poly = pgf_run_count(params);
  REQUIRE(poly.size() >= 2);
  CHECK(poly[0] == Rat(1, 4));
  CHECK(poly[1] == Rat(3, 4));
  CHECK(static_cast<long long>(tpoly_trim(poly).size()) <= params.max_runs() + 1);
  // Normalization: the pgf at t = 1 is 1 for every n.
  for (long long n = 0; n <= 9; ++n)
    CHECK(tpoly_eval(pgf_run_count(TrialParams{2, 3, n, kThird}), Rat(1)) == 1);
}

// ---------------------------------------------------------------------------
// Longest-run distribution
// ---------------------------------------------------------------------------

TEST_CASE("excess-placement coefficients A(r,i,v)") {
  for (long long v = 0; v <= 5; ++v)
    CHECK(a_coeff(1, 3, v) == (v < 3 ? 1 : 0));
  CHECK(a_coeff(2, 1, 0) == 1);
  CHECK(a_coeff(2, 2, 3) == 0);  // no composition of 3 into two parts < 2
}

TEST_CASE("longest-run cdf theorem") {
  CHECK(cdf_longest(TrialParams{2, 1, 4, kHalf}, 4) == 1);
  CHECK(cdf_longest(TrialParams{2, 1, 4, kHalf}, 1) == kHalf);  // = P(r=0)
  CHECK(cdf_longest(TrialParams{2, 3, 11, kHalf}, 2) == kHalf);  // frozen from oracle
}

TEST_CASE("case terms pinned through the oracle-validated theorem (k=2 g=3 n=11 p=1/2)") {
  TrialParams params{2, 3, 11, kHalf};
  CHECK(cdf_longest_case_I(1, 2, params) == Rat(109, 512));
  CHECK(cdf_longest_case_II(1, 2, 11, params) == Rat(55, 2048));
  CHECK(cdf_longest_case_I(2, 2, params) == Rat(1, 32));
  CHECK(cdf_longest_case_II(2, 2, 11, params) == Rat(5, 128));
  CHECK(pmf_zero_runs(params) == Rat(233, 2048));
}

TEST_CASE("k-free g=1 block distribution") {
  CHECK(cdf_longest_muselli_g1(4, 4, kHalf) == 1);
  CHECK(cdf_longest_muselli_g1(4, 1, kHalf) == kHalf);
  CHECK(cdf_longest_muselli_g1(3, 1, kHalf) == Rat(5, 8));
}

TEST_CASE("survival recurrence") {
  for (long long t = 1; t <= 4; ++t) {
    CHECK(surv_longest_recurrence(TrialParams{1, 2, t, kThird}, t) == pow_rat(kThird, t));
    CHECK(surv_longest_recurrence(TrialParams{1, 2, t + 1, kThird}, t) ==
          pow_rat(kThird, t) * (Rat(1) + Rat(2, 3)));
  }
  TrialParams example{2, 3, 11, kHalf};
  CHECK(surv_longest_recurrence(example, 3) == Rat(1) - brute_longest_cdf(example)[2]);
}

TEST_CASE("survival generating function") {
  TrialParams params{2, 3, 9, kThird};
  auto series = surv_longest_genfunc(params, 4, 9);
  for (std::size_t m = 0; m < 4; ++m) CHECK(series.coeff(m) == 0);
  CHECK(series.coeff(4) == pow_rat(kThird, 4));
  for (long long n = 4; n <= 9; ++n)
    CHECK(series.coeff((std::size_t)n) == surv_longest_recurrence(TrialParams{2, 3, n, kThird}, 4));
}

TEST_CASE("survival combinatorial sum") {
  CHECK(surv_longest_sum(TrialParams{2, 2, 3, kHalf}, 4) == 0);  // n < t
  CHECK(surv_longest_sum(TrialParams{2, 2, 4, kHalf}, 4) == pow_rat(kHalf, 4));
  TrialParams params{2, 2, 8, kThird};
  CHECK(surv_longest_sum(params, 3) == surv_longest_recurrence(params, 3));
}

TEST_CASE("survival dispatcher and the support gap") {
  TrialParams params{3, 2, 8, kHalf};
  CHECK(surv_longest(params, 0) == 1);
  CHECK(surv_longest(params, 1) == surv_longest(params, 3));
  // Single-run regime analog: p^t (1 + (n-t) q) for max(k, n-k) < t <= n.
  for (long long t = 6; t <= 8; ++t)
    CHECK(surv_longest(params, t) == pow_rat(kHalf, t) * (Rat(1) + Rat(8 - t) * kHalf));
  CHECK_THROWS_AS(surv_longest(params, 9), std::invalid_argument);
}

TEST_CASE("moments of the longest run") {
  TrialParams nk{3, 1, 3, kThird};
  CHECK(moments_longest(nk).mean == Rat(3) * pow_rat(kThird, 3));
  // k <= n <= 2k closed forms.
  for (long long k = 1; k <= 4; ++k)
    for (long long n = k; n <= 2 * k; ++n) {
      TrialParams params{k, 2, n, kThird};
      auto m = moments_longest(params);
      auto closed = moments_longest_single_run_closed(params);
      CHECK(m.mean == closed.mean);
      CHECK(m.variance == closed.variance);
      CHECK(m.factorial[1] == closed.factorial[1]);
    }
  CHECK_THROWS_AS(moments_longest_single_run_closed(TrialParams{2, 1, 5, kHalf}),
                  std::invalid_argument);
  // Oracle cross-check of the mean at k=2, g=1, n=4.
  TrialParams params{2, 1, 4, kHalf};
  auto cdf = brute_longest_cdf(params);
  Rat mean = 0;
  for (long long t = 1; t <= 4; ++t) mean += Rat(t) * (cdf[(std::size_t)t] - cdf[(std::size_t)t - 1]);
  CHECK(moments_longest(params).mean == mean);
}

TEST_CASE("log-scale mean estimate") {
  auto est = mean_longest_estimate(TrialParams{1, 1, 1024, kHalf});
  CHECK(est.in_regime);
  CHECK(est.value == doctest::Approx(9.0));
  auto low = mean_longest_estimate(TrialParams{1, 1, 2, Rat(99, 100)});
  CHECK(!low.in_regime);
}

TEST_CASE("asymptotic ratio matches a direct rational computation at small n") {
  // Independent small-n value: E[L_n] from the survival recurrence.
  TrialParams params{1, 1, 64, kHalf};
  Rat mean = 0;
  for (long long t = 1; t <= 64; ++t) mean += surv_longest(params, t);
  double expected = numerator(mean).convert_to<double>() /
                    denominator(mean).convert_to<double>() * std::log(2.0) / std::log(64.0);
  CHECK(asymptotic_mean_ratio_half(64) == doctest::Approx(expected).epsilon(1e-12));
}

// ---------------------------------------------------------------------------
// Negative binomial
// ---------------------------------------------------------------------------

TEST_CASE("waiting-time pmf") {
  for (long long g = 1; g <= 3; ++g) CHECK(nb_pmf(NegBinomParams{3, g, 1, kThird}, 3) == pow_rat(kThird, 3));
  CHECK(nb_pmf(NegBinomParams{1, 1, 2, kHalf}, 3) == Rat(1, 8));
  CHECK(nb_pmf(NegBinomParams{2, 3, 2, kHalf}, 6) == 0);  // below support 2*2 + 3 = 7
}

TEST_CASE("waiting-time mean and variance") {
  auto [m1, v1] = nb_mean_var(NegBinomParams{1, 1, 1, Rat(2, 7)});
  CHECK(m1 == Rat(7, 2));
  auto [mk, vk] = nb_mean_var(NegBinomParams{3, 2, 1, kHalf});
  CHECK(mk == (Rat(1) - Rat(1, 8)) / (kHalf * Rat(1, 8)));
  auto [mg3, vg3] = nb_mean_var(NegBinomParams{2, 3, 2, kThird});
  auto [mg1, vg1] = nb_mean_var(NegBinomParams{2, 1, 2, kThird});
  CHECK(mg3 - mg1 == 2);
  CHECK(vg3 == vg1);
}

TEST_CASE("waiting-time pgf expansion") {
  NegBinomParams params{2, 1, 2, kHalf};
  auto pgf = nb_pgf(params, 30);
  CHECK(pgf.coeff((std::size_t)params.min_support()) ==
        pow_rat(kHalf, 4) * kHalf);  // p^{rk} q^{r-1}
  Rat partial = 0, prev = 0;
  for (std::size_t i = 0; i <= 30; ++i) {
    prev = partial;
    partial += pgf.coeff(i);
    CHECK(partial >= prev);
  }
  CHECK(partial < 1);
  // Shift structure: the g > 1 series is the g = 1 series shifted.
  NegBinomParams gapped{2, 3, 2, kHalf};
  auto shifted = nb_pgf(gapped, 30);
  for (std::size_t i = 0; i + 2 <= 30; ++i) CHECK(shifted.coeff(i + 2) == pgf.coeff(i));
}

TEST_CASE("waiting-time factorial moments") {
  CHECK(nb_factorial_moment(NegBinomParams{2, 2, 2, kThird}, 0) == 1);
  CHECK(nb_factorial_moment(NegBinomParams{1, 1, 1, kHalf}, 1) == 2);
  CHECK(nb_factorial_moment(NegBinomParams{2, 3, 2, kHalf}, 1) ==
        nb_factorial_moment(NegBinomParams{2, 1, 2, kHalf}, 1) + 2);
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

TEST_CASE("simulation is deterministic under a fixed seed") {
  TrialParams params{2, 2, 12, kThird};
  auto a = simulate_run_count(params, 2000, 42);
  auto b = simulate_run_count(params, 2000, 42);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].estimate == b[i].estimate);
    CHECK(a[i].std_error == b[i].std_error);
  }
  auto c = simulate_run_count(params, 2000, 43);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].estimate != c[i].estimate) any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("run-count simulation at n=2 is within 4 standard errors of 3/4") {
  TrialParams params{1, 1, 2, kHalf};
  auto reports = simulate_run_count(params, 100000, 7);
  double se = std::sqrt(0.75 * 0.25 / 100000.0);
  CHECK(std::abs(reports[1].estimate - 0.75) <= 4 * se);
}

TEST_CASE("run-count simulation with no trials always reports zero runs") {
  auto reports = simulate_run_count(TrialParams{1, 1, 0, kHalf}, 100, 1);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].estimate == 1.0);
}

TEST_CASE("longest-run simulation") {
  TrialParams params{2, 3, 50, kHalf};
  auto tails = simulate_longest(params, 50000, 11);
  CHECK(tails[0].estimate == 1.0);
  Rat exact = surv_longest(params, 5);
  double v = numerator(exact).convert_to<double>() / denominator(exact).convert_to<double>();
  double se = std::sqrt(v * (1 - v) / 50000.0);
  CHECK(std::abs(tails[5].estimate - v) <= 4 * se);
}

TEST_CASE("waiting-time simulation") {
  NegBinomParams params{1, 1, 1, kHalf};
  auto sim = simulate_negbinom(params, 50000, 5, 3000);
  CHECK(sim.censored == 0);
  CHECK(std::abs(sim.report.estimate - 2.0) <= 4 * sim.report.std_error);
  // Shift identity on the empirical means.
  auto g3 = simulate_negbinom(NegBinomParams{2, 3, 2, kHalf}, 50000, 5, 8000);
  auto g1 = simulate_negbinom(NegBinomParams{2, 1, 2, kHalf}, 50000, 6, 8000);
  double diff = g3.report.estimate - g1.report.estimate;
  CHECK(std::abs(diff - 2.0) <= 4 * (g3.report.std_error + g1.report.std_error));
  // Deterministic reproduction.
  auto again = simulate_negbinom(params, 50000, 5, 3000);
  CHECK(again.report.estimate == sim.report.estimate);
  CHECK_THROWS_AS(simulate_negbinom(params, 100, 1, 10), budget_error);
}

// ---------------------------------------------------------------------------
// Verification harness
// ---------------------------------------------------------------------------

TEST_CASE("quick verification grid passes") {
  auto report = run_quick_verification();
  for (const auto& check : report.checks) {
    INFO(check.name);
    for (const auto& cell : check.failing_cells) INFO(cell);
    CHECK(check.passed());
  }
}

TEST_CASE("mutation mode detects a corrupted formula and locates the cell") {
  auto clean = check_run_count_methods(2, 2, 7, {kHalf});
  CHECK(clean.passed());
  auto corrupted = check_run_count_methods(2, 2, 7, {kHalf}, Rat(1, 1000000));
  CHECK(!corrupted.passed());
  REQUIRE(!corrupted.failing_cells.empty());
  CHECK(corrupted.failing_cells[0].find("k=2 g=2 n=7") != std::string::npos);
  CHECK(corrupted.failing_cells[0].find("r=1") != std::string::npos);
}
