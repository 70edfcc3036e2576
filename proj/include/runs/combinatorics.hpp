#pragma once

#include <algorithm>
#include <stdexcept>

#include "runs/rational.hpp"

namespace runs {

// Binomial coefficient with the vanishing convention: C(a,b) = 0 whenever
// b < 0, a < 0 or a < b. This is the combinatorial convention the closed-form
// sums rely on, not the generalized negative-argument binomial.
inline Int binom(long long a, long long b) {
  if (b < 0 || a < 0 || a < b) return 0;
  b = std::min(b, a - b);
  Int r = 1;
  for (long long i = 1; i <= b; ++i) {
    r *= (a - b + i);
    r /= i;
  }
  return r;
}

// r! / (j1! j2! j3!); zero if any part is negative, rejects j1+j2+j3 != r.
inline Int multinom(long long r, long long j1, long long j2, long long j3) {
  if (j1 + j2 + j3 != r) throw std::invalid_argument("multinom: parts must sum to r");
  if (j1 < 0 || j2 < 0 || j3 < 0) return 0;
  return binom(r, j1) * binom(r - j1, j2);
}

// c(c-1)...(c-s+1); equals 1 for s = 0.
inline Int falling_factorial(long long c, long long s) {
  Int r = 1;
  for (long long i = 0; i < s; ++i) r *= (c - i);
  return r;
}

inline Int factorial(long long n) {
  Int r = 1;
  for (long long i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace runs
