// Command-line interface: exact run-count / longest-run / waiting-time
// distributions, seeded simulation, and the cross-method verification grid.
//
// Exit codes: 0 success, 1 usage error, 2 verification failure, 3 enumeration
// budget exceeded.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "runs/longest_run.hpp"
#include "runs/monte_carlo.hpp"
#include "runs/negative_binomial.hpp"
#include "runs/oracle.hpp"
#include "runs/rational.hpp"
#include "runs/run_count.hpp"
#include "runs/sequence.hpp"
#include "runs/verify.hpp"

namespace {

using nlohmann::json;
using namespace runs;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFail = 2;
constexpr int kExitBudget = 3;

struct OutputOptions {
  bool csv = false;
  int digits = 12;
  std::string out_path;
};

// Every record carries the same schema: params echo, quantity name, method
// tag, exact value ("num/den", or null for estimates), decimal rendering.
json make_record(json params, const std::string& quantity, const std::string& method,
                 const Rat& exact, int digits) {
  return json{{"params", std::move(params)},
              {"quantity", quantity},
              {"method", method},
              {"exact", to_exact_string(exact)},
              {"decimal", to_decimal_string(exact, digits)}};
}

json make_sim_record(json params, const std::string& quantity, const SimReport& rep) {
  return json{{"params", std::move(params)}, {"quantity", quantity},
              {"method", "monte-carlo"},     {"exact", nullptr},
              {"decimal", rep.estimate},     {"std_error", rep.std_error},
              {"n_samples", rep.n_samples},  {"seed", rep.seed}};
}

void emit_records(const std::vector<json>& records, const OutputOptions& opts) {
  std::ostringstream body;
  if (!opts.csv) {
    body << json(records).dump(2) << "\n";
  } else {
    const std::vector<std::string> param_cols = {"k", "g", "n", "r", "t", "s", "p", "sequence"};
    const std::vector<std::string> cols = {"quantity", "method", "exact",     "decimal",
                                           "std_error", "n_samples", "seed"};
    for (std::size_t i = 0; i < param_cols.size(); ++i) body << param_cols[i] << ",";
    for (std::size_t i = 0; i < cols.size(); ++i) body << cols[i] << (i + 1 < cols.size() ? "," : "\n");
    auto cell = [](const json& v) -> std::string {
      if (v.is_null()) return "";
      if (v.is_string()) return v.get<std::string>();
      return v.dump();
    };
    for (const auto& rec : records) {
      const json& params = rec.at("params");
      for (const auto& col : param_cols)
        body << (params.contains(col) ? cell(params.at(col)) : "") << ",";
      for (std::size_t i = 0; i < cols.size(); ++i)
        body << (rec.contains(cols[i]) ? cell(rec.at(cols[i])) : "") << (i + 1 < cols.size() ? "," : "\n");
    }
  }
  if (opts.out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(opts.out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + opts.out_path);
    out << body.str();
  }
}

json params_json(const TrialParams& params) {
  return json{{"k", params.k}, {"g", params.g}, {"n", params.n}, {"p", to_exact_string(params.p)}};
}

json nb_params_json(const NegBinomParams& params) {
  return json{{"k", params.k}, {"g", params.g}, {"r", params.r}, {"p", to_exact_string(params.p)}};
}

// ---------------------------------------------------------------------------

int cmd_pmf(const TrialParams& params, long long r_query, bool has_r, const OutputOptions& opts) {
  std::vector<json> records;
  auto one = [&](long long r) {
    Rat value = r == 0 ? pmf_zero_runs(params) : pmf_run_count(params, r);
    json pj = params_json(params);
    pj["r"] = r;
    records.push_back(
        make_record(pj, "P(N = " + std::to_string(r) + ")", "closed-form", value, opts.digits));
  };
  if (has_r) {
    if (r_query < 0) throw std::invalid_argument("r must be >= 0");
    one(r_query);
  } else {
    for (long long r = 0; r <= params.max_runs(); ++r) one(r);
  }
  emit_records(records, opts);
  return kExitOk;
}

int cmd_longest(const TrialParams& params, long long t_query, bool has_t, const std::string& mode,
                const OutputOptions& opts) {
  std::vector<json> records;
  if (mode == "moments") {
    auto m = moments_longest(params);
    json pj = params_json(params);
    records.push_back(make_record(pj, "E[L]", "recurrence", m.mean, opts.digits));
    records.push_back(make_record(pj, "Var[L]", "recurrence", m.variance, opts.digits));
    for (std::size_t s = 0; s < m.factorial.size() && s <= 4; ++s) {
      json pf = pj;
      pf["s"] = s;
      records.push_back(make_record(pf, "E[L falling " + std::to_string(s) + "]", "recurrence",
                                    m.factorial[s], opts.digits));
    }
  } else if (mode == "cdf" || mode == "surv") {
    auto one = [&](long long t) {
      Rat value = mode == "cdf" ? (t >= params.n ? Rat(1) : Rat(1) - surv_longest(params, t + 1))
                                : surv_longest(params, t);
      json pj = params_json(params);
      pj["t"] = t;
      std::string quantity = (mode == "cdf" ? "P(L <= " : "P(L >= ") + std::to_string(t) + ")";
      records.push_back(make_record(pj, quantity, "recurrence", value, opts.digits));
    };
    if (has_t) {
      if (t_query < 0 || t_query > params.n) throw std::invalid_argument("t must be in [0, n]");
      one(t_query);
    } else {
      for (long long t = 0; t <= params.n; ++t) one(t);
    }
  } else {
    throw std::invalid_argument("mode must be cdf, surv, or moments");
  }
  emit_records(records, opts);
  return kExitOk;
}

int cmd_negbinom(const NegBinomParams& params, long long n_query, bool has_n, long long s_max,
                 bool has_moments, const OutputOptions& opts) {
  std::vector<json> records;
  if (has_n == has_moments)
    throw std::invalid_argument("exactly one of --n and --moments is required");
  if (has_n) {
    if (n_query < 0) throw std::invalid_argument("n must be >= 0");
    json pj = nb_params_json(params);
    pj["n"] = n_query;
    records.push_back(make_record(pj, "P(W = " + std::to_string(n_query) + ")", "closed-form",
                                  nb_pmf(params, n_query), opts.digits));
  } else {
    if (s_max < 0) throw std::invalid_argument("--moments requires s_max >= 0");
    auto [mean, var] = nb_mean_var(params);
    json pj = nb_params_json(params);
    records.push_back(make_record(pj, "E[W]", "closed-form", mean, opts.digits));
    records.push_back(make_record(pj, "Var[W]", "closed-form", var, opts.digits));
    for (long long s = 0; s <= s_max; ++s) {
      json ps = pj;
      ps["s"] = s;
      records.push_back(make_record(ps, "E[W falling " + std::to_string(s) + "]", "closed-form",
                                    nb_factorial_moment(params, s), opts.digits));
    }
  }
  emit_records(records, opts);
  return kExitOk;
}

int cmd_decompose(const std::string& literal, long long k, long long g, const OutputOptions& opts) {
  auto seq = TrialSequence::from_string(literal);
  auto dec = decompose(seq, k, g);
  json runs_json = json::array();
  for (const auto& run : dec.runs) runs_json.push_back(json{{"start", run.start}, {"end", run.end}});
  json rec{{"params", json{{"k", k}, {"g", g}, {"n", seq.size()}, {"sequence", seq.to_string()}}},
           {"quantity", "run decomposition"},
           {"method", "oracle"},
           {"exact", nullptr},
           {"decimal", nullptr},
           {"runs", runs_json},
           {"run_count", dec.count()},
           {"longest_run", longest_run(seq, k, g)},
           {"g_separated_blocks", count_g_separated_blocks(seq, k, g)}};
  emit_records({rec}, opts);
  return kExitOk;
}

int cmd_simulate(const std::string& kind, const TrialParams& params, const NegBinomParams& nb,
                 std::uint64_t samples, std::uint64_t seed, long long horizon,
                 const OutputOptions& opts) {
  std::vector<json> records;
  if (kind == "run-count") {
    auto reports = simulate_run_count(params, samples, seed);
    for (long long r = 0; r < static_cast<long long>(reports.size()); ++r) {
      json pj = params_json(params);
      pj["r"] = r;
      records.push_back(make_sim_record(pj, "P(N = " + std::to_string(r) + ")",
                                        reports[static_cast<std::size_t>(r)]));
    }
  } else if (kind == "longest") {
    auto reports = simulate_longest(params, samples, seed);
    for (long long t = 0; t < static_cast<long long>(reports.size()); ++t) {
      json pj = params_json(params);
      pj["t"] = t;
      records.push_back(make_sim_record(pj, "P(L >= " + std::to_string(t) + ")",
                                        reports[static_cast<std::size_t>(t)]));
    }
  } else if (kind == "negbinom") {
    auto sim = simulate_negbinom(nb, samples, seed, horizon);
    json pj = nb_params_json(nb);
    pj["n"] = horizon;
    json rec = make_sim_record(pj, "E[W]", sim.report);
    rec["censored"] = sim.censored;
    records.push_back(rec);
  } else {
    throw std::invalid_argument("simulate kind must be run-count, longest, or negbinom");
  }
  emit_records(records, opts);
  return kExitOk;
}

int cmd_verify(bool default_grid, bool quick, bool mutate, const OutputOptions& opts) {
  VerificationReport report;
  if (mutate) {
    // Corrupt one designated run-count cell by 1/10^6; the harness must
    // locate it and fail.
    report.checks.push_back(check_run_count_methods(2, 2, 7, {Rat(1, 2)}, Rat(1, 1000000)));
  } else if (quick) {
    report = run_quick_verification();
  } else if (default_grid) {
    report = run_default_verification();
  } else {
    throw std::invalid_argument("verify requires --default-grid, --quick, or --mutate");
  }
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!opts.out_path.empty()) {
    file.open(opts.out_path);
    if (!file) throw std::runtime_error("cannot open output file: " + opts.out_path);
    os = &file;
  }
  for (const auto& check : report.checks) {
    *os << (check.passed() ? "PASS" : (check.informational ? "WARN" : "FAIL")) << "  "
        << check.name << "  [" << check.cells << " cells";
    if (check.failure_count > 0) *os << ", " << check.failure_count << " failures";
    if (check.worst_deviation > 0) *os << ", worst deviation " << check.worst_deviation;
    *os << "]\n";
    for (const auto& cell : check.failing_cells) *os << "    failing cell: " << cell << "\n";
    if (check.failure_count > static_cast<long long>(check.failing_cells.size()))
      *os << "    ... and "
          << check.failure_count - static_cast<long long>(check.failing_cells.size())
          << " more\n";
  }
  *os << (report.passed() ? "VERIFICATION PASSED" : "VERIFICATION FAILED") << " ("
      << report.total_cells() << " cells)\n";
  return report.passed() ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact distribution theory of gap-separated success runs"};
  app.require_subcommand(1);
  // Let --csv/--digits/--out appear after the subcommand name too.
  app.fallthrough();

  OutputOptions opts;
  app.add_flag("--csv", opts.csv, "emit CSV instead of JSON");
  app.add_option("--digits", opts.digits, "significant digits for decimal rendering")
      ->check(CLI::Range(1, 50));
  app.add_option("--out", opts.out_path, "write output to a file instead of stdout");

  std::string p_str = "1/2";
  long long k = 1, g = 1, n = 0, r = 1;

  auto add_trial_opts = [&](CLI::App* cmd, bool need_n) {
    cmd->add_option("-k,--k", k, "minimum run length (>= 1)");
    cmd->add_option("-g,--g", g, "gap length (>= 1)");
    if (need_n) cmd->add_option("-n,--n", n, "number of trials (>= 0)")->required();
    cmd->add_option("-p,--p", p_str, "success probability, rational a/b or finite decimal");
  };

  // pmf
  auto* pmf_cmd = app.add_subcommand("pmf", "run-count pmf P(N = r)");
  long long pmf_r = 0;
  add_trial_opts(pmf_cmd, true);
  auto* pmf_r_opt = pmf_cmd->add_option("-r,--r", pmf_r, "single run count (default: full table)");

  // longest
  auto* longest_cmd = app.add_subcommand("longest", "longest-run distribution");
  long long longest_t = 0;
  std::string longest_mode = "cdf";
  add_trial_opts(longest_cmd, true);
  auto* longest_t_opt = longest_cmd->add_option("-t,--t", longest_t, "single threshold");
  longest_cmd->add_option("--mode", longest_mode, "cdf | surv | moments");

  // negbinom
  auto* nb_cmd = app.add_subcommand("negbinom", "waiting time of the r-th run");
  long long nb_n = 0, nb_smax = 2;
  nb_cmd->add_option("-k,--k", k, "minimum run length (>= 1)");
  nb_cmd->add_option("-g,--g", g, "gap length (>= 1)");
  nb_cmd->add_option("-r,--r", r, "run index (>= 1)");
  nb_cmd->add_option("-p,--p", p_str, "success probability");
  auto* nb_n_opt = nb_cmd->add_option("--n", nb_n, "pmf at this trial count");
  auto* nb_m_opt = nb_cmd->add_option("--moments", nb_smax, "factorial moments up to s_max");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "seeded Monte Carlo estimates");
  std::string sim_kind;
  std::uint64_t sim_samples = 100000, sim_seed = 1;
  long long sim_horizon = 10000;
  sim_cmd->add_option("kind", sim_kind, "run-count | longest | negbinom")->required();
  sim_cmd->add_option("-k,--k", k, "minimum run length (>= 1)");
  sim_cmd->add_option("-g,--g", g, "gap length (>= 1)");
  sim_cmd->add_option("-n,--n", n, "number of trials (run-count / longest)");
  sim_cmd->add_option("-r,--r", r, "run index (negbinom)");
  sim_cmd->add_option("-p,--p", p_str, "success probability");
  sim_cmd->add_option("--samples", sim_samples, "number of samples");
  sim_cmd->add_option("--seed", sim_seed, "RNG seed");
  sim_cmd->add_option("--horizon", sim_horizon, "trial cap per sample (negbinom)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "cross-method verification grid");
  bool verify_default = false, verify_quick = false, verify_mutate = false;
  verify_cmd->add_flag("--default-grid", verify_default, "full default grid (>= 10^4 cells)");
  verify_cmd->add_flag("--quick", verify_quick, "reduced smoke grid");
  verify_cmd->add_flag("--mutate", verify_mutate,
                       "corrupt one formula cell; the run must FAIL and locate it");

  // decompose
  auto* dec_cmd = app.add_subcommand("decompose", "run decomposition of a sequence literal");
  std::string dec_seq;
  dec_cmd->add_option("sequence", dec_seq, "string over {S,F} or {1,0}")->required();
  dec_cmd->add_option("-k,--k", k, "minimum run length (>= 1)");
  dec_cmd->add_option("-g,--g", g, "gap length (>= 1)");

  CLI11_PARSE(app, argc, argv);

  try {
    Rat p = parse_rational(p_str);
    if (pmf_cmd->parsed()) {
      return cmd_pmf(TrialParams{k, g, n, p}, pmf_r, pmf_r_opt->count() > 0, opts);
    }
    if (longest_cmd->parsed()) {
      return cmd_longest(TrialParams{k, g, n, p}, longest_t, longest_t_opt->count() > 0,
                         longest_mode, opts);
    }
    if (nb_cmd->parsed()) {
      return cmd_negbinom(NegBinomParams{k, g, r, p}, nb_n, nb_n_opt->count() > 0, nb_smax,
                          nb_m_opt->count() > 0, opts);
    }
    if (sim_cmd->parsed()) {
      return cmd_simulate(sim_kind, TrialParams{k, g, n, p}, NegBinomParams{k, g, r, p},
                          sim_samples, sim_seed, sim_horizon, opts);
    }
    if (verify_cmd->parsed()) {
      return cmd_verify(verify_default, verify_quick, verify_mutate, opts);
    }
    if (dec_cmd->parsed()) {
      return cmd_decompose(dec_seq, k, g, opts);
    }
    std::cerr << "no subcommand given\n";
    return kExitUsage;
  } catch (const budget_error& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFail;
  }
}
