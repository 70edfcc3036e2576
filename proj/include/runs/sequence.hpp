#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "runs/rational.hpp"

namespace runs {

// The quadruple (k, g, n, p) defining a Bernoulli experiment under the
// order-k / gap-g counting scheme.
struct TrialParams {
  long long k = 1;  // minimum run length, >= 1
  long long g = 1;  // gap length, >= 1
  long long n = 0;  // number of trials, >= 0
  Rat p;            // success probability, 0 < p < 1

  void validate() const {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (g < 1) throw std::invalid_argument("g must be >= 1");
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    check_probability(p);
  }

  Rat q() const { return Rat(1) - p; }

  // Maximum possible number of success runs, floor((n+g)/(k+g)).
  long long max_runs() const { return (n + g) / (k + g); }
};

// An ordered sequence of S/F outcomes. Internal storage is 0-based; reported
// trial indices are 1-based to match the usual convention.
class TrialSequence {
 public:
  TrialSequence() = default;
  explicit TrialSequence(std::vector<bool> bits) : bits_(std::move(bits)) {}

  // Accepts literals over {S,F} or {1,0}, case-insensitive.
  static TrialSequence from_string(std::string_view s) {
    std::vector<bool> bits;
    bits.reserve(s.size());
    for (char c : s) {
      if (c == 'S' || c == 's' || c == '1')
        bits.push_back(true);
      else if (c == 'F' || c == 'f' || c == '0')
        bits.push_back(false);
      else
        throw std::invalid_argument(std::string("invalid trial symbol '") + c + "' (expected S/F or 1/0)");
    }
    return TrialSequence(std::move(bits));
  }

  // Bit i of mask is trial i+1 (1 = success).
  static TrialSequence from_mask(std::uint64_t mask, int n) {
    std::vector<bool> bits(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) bits[static_cast<std::size_t>(i)] = (mask >> i) & 1;
    return TrialSequence(std::move(bits));
  }

  long long size() const { return static_cast<long long>(bits_.size()); }

  // 1-based access.
  bool success(long long trial) const { return bits_[static_cast<std::size_t>(trial - 1)]; }

  long long success_count() const {
    long long c = 0;
    for (bool b : bits_) c += b;
    return c;
  }

  TrialSequence reversed() const {
    return TrialSequence(std::vector<bool>(bits_.rbegin(), bits_.rend()));
  }

  std::string to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (bool b : bits_) s.push_back(b ? 'S' : 'F');
    return s;
  }

 private:
  std::vector<bool> bits_;
};

struct RunInterval {
  long long start = 0;  // 1-based, inclusive
  long long end = 0;    // 1-based, inclusive
  long long length() const { return end - start + 1; }
  friend bool operator==(const RunInterval&, const RunInterval&) = default;
};

struct RunDecomposition {
  std::vector<RunInterval> runs;
  long long count() const { return static_cast<long long>(runs.size()); }
};

namespace detail {

// Core inductive scan. `bit(i)` reports trial i (1-based); `emit(start, end)`
// is called once per success run, left to right. After a run terminating at
// trial m, the next run must begin later than trial m + g; a block straddling
// that boundary is clipped on the left.
template <typename BitFn, typename EmitFn>
void scan_runs(long long n, long long k, long long g, BitFn&& bit, EmitFn&& emit) {
  long long lo = 1;  // earliest admissible start for the next run
  long long i = lo;
  while (i <= n) {
    if (!bit(i)) {
      ++i;
      continue;
    }
    long long start = i;
    while (i + 1 <= n && bit(i + 1)) ++i;
    long long end = i;
    if (start < lo) start = lo;
    if (end - start + 1 >= k) {
      emit(start, end);
      lo = end + g + 1;
      i = lo;
    } else {
      ++i;
    }
  }
}

}  // namespace detail

// The unique inductive decomposition into success runs of order k with gap g.
inline RunDecomposition decompose(const TrialSequence& seq, long long k, long long g) {
  if (k < 1 || g < 1) throw std::invalid_argument("decompose: k and g must be >= 1");
  RunDecomposition d;
  detail::scan_runs(
      seq.size(), k, g, [&](long long i) { return seq.success(i); },
      [&](long long s, long long e) { d.runs.push_back({s, e}); });
  return d;
}

// Length of the longest success run under the gap scheme; 0 if there are no
// runs, otherwise >= k.
inline long long longest_run(const TrialSequence& seq, long long k, long long g) {
  if (k < 1 || g < 1) throw std::invalid_argument("longest_run: k and g must be >= 1");
  long long best = 0;
  detail::scan_runs(
      seq.size(), k, g, [&](long long i) { return seq.success(i); },
      [&](long long s, long long e) {
        if (e - s + 1 > best) best = e - s + 1;
      });
  return best;
}

// Maximum cardinality of a set of pairwise g-separated success blocks. A
// block is >= k consecutive successes ending at trial n or followed by a
// failure; its start may be clipped, so only the end of each maximal
// S-segment is forced. Greedy earliest-end selection is optimal here.
inline long long count_g_separated_blocks(const TrialSequence& seq, long long k, long long g) {
  if (k < 1 || g < 1) throw std::invalid_argument("count_g_separated_blocks: k and g must be >= 1");
  long long n = seq.size();
  long long count = 0;
  long long last_end = -(g + 1);  // no separation constraint before the first block
  long long i = 1;
  while (i <= n) {
    if (!seq.success(i)) {
      ++i;
      continue;
    }
    long long start = i;
    while (i + 1 <= n && seq.success(i + 1)) ++i;
    long long end = i;
    long long earliest = std::max(start, last_end + g + 1);
    if (end - earliest + 1 >= k) {
      ++count;
      last_end = end;
    }
    ++i;
  }
  return count;
}

}  // namespace runs
