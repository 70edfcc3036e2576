// Acceptance suite: one line per criterion. Criteria 1-8 gate the exit code;
// criterion 9 is an informational diagnostic.

#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include "runs/verify.hpp"

using namespace runs;

namespace {

int failures = 0;

void report(int criterion, const std::string& label, const std::vector<CheckResult>& checks,
            double seconds) {
  long long cells = 0;
  bool ok = true;
  const CheckResult* bad = nullptr;
  bool informational = true;
  for (const auto& check : checks) {
    cells += check.cells;
    if (!check.informational) informational = false;
    if (!check.passed()) {
      ok = false;
      if (!bad) bad = &check;
    }
  }
  bool gating = !informational;
  if (!ok && gating) ++failures;
  std::cout << (ok ? "PASS" : (gating ? "FAIL" : "WARN")) << "  criterion " << criterion << ": "
            << label << "  [" << cells << " cells, " << seconds << " s]"
            << (gating ? "" : "  (informational)") << "\n";
  if (bad) {
    std::cout << "      first failing check: " << bad->name << "\n";
    for (const auto& cell : bad->failing_cells) std::cout << "      failing cell: " << cell << "\n";
  }
  std::cout.flush();
}

template <typename Fn>
void run(int criterion, const std::string& label, Fn&& fn) {
  auto start = std::chrono::steady_clock::now();
  std::vector<CheckResult> checks = fn();
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(criterion, label, checks, seconds);
}

}  // namespace

int main() {
  const std::vector<Rat> three_probs = {Rat(1, 2), Rat(1, 3), Rat(3, 4)};
  const std::vector<Rat> two_probs = {Rat(1, 2), Rat(1, 3)};

  run(1, "run-count pmf: three methods equal the enumeration oracle", [&] {
    return std::vector<CheckResult>{check_run_count_methods(4, 4, 14, three_probs)};
  });

  run(2, "longest run: four closed-form routes equal the oracle", [&] {
    return std::vector<CheckResult>{check_longest_methods(3, 13, two_probs)};
  });

  run(3, "worked example sequences and the n=11 distribution table", [&] {
    return std::vector<CheckResult>{check_sequence_regressions(), check_longest_example_table()};
  });

  run(4, "simple-regime formulas and the strict overestimate", [&] {
    return std::vector<CheckResult>{check_simple_regimes(6, 4, two_probs)};
  });

  run(5, "factorial moments and single-run moment closed forms", [&] {
    return std::vector<CheckResult>{check_factorial_moments(4, 4, 14, three_probs),
                                    check_longest_moments(6, two_probs)};
  });

  run(6, "negative binomial: oracle, shift, pgf and moment identities", [&] {
    return std::vector<CheckResult>{check_negbinom(3, 14, 30, two_probs)};
  });

  run(7, "normalization, support, reversal and block-count invariants", [&] {
    return std::vector<CheckResult>{check_run_count_structure(4, 4, 14, three_probs),
                                    check_run_count_survival(4, 4, 14, three_probs),
                                    check_reversal_invariance(14, 3),
                                    check_blocks_bounded_by_runs(12, 3)};
  });

  run(8, "Monte Carlo agreement with exact values beyond the oracle budget", [&] {
    return std::vector<CheckResult>{check_monte_carlo(100000, 20260823)};
  });

  run(9, "asymptotic mean ratio of order 1 at n = 2^8, 2^10, 2^12", [&] {
    return std::vector<CheckResult>{check_asymptotic_order({256, 1024, 4096})};
  });

  if (failures > 0) {
    std::cout << failures << " criteria failed\n";
    return 1;
  }
  std::cout << "all gating criteria passed\n";
  return 0;
}
