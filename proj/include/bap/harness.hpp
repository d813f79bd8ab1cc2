#pragma once

// Monte-Carlo driver: one LP solve, then T independent rounding trials
// spread over a thread pool. Trial t always uses substreams keyed by t, so
// results do not depend on the number of workers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bap/colgen.hpp"
#include "bap/error.hpp"
#include "bap/model.hpp"
#include "bap/random.hpp"
#include "bap/rounding.hpp"
#include "bap/scaling.hpp"

namespace bap {

struct TrialRecord {
  std::uint64_t trial = 0;
  double objective = 0.0;  // 0 for discarded trials
  bool feasible = true;    // false only for discarded trials
  Path path = Path::Direct;

  bool operator==(const TrialRecord&) const = default;
};

struct TrialStats {
  Algorithm algorithm = Algorithm::Alg1;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  double lp_value = 0.0;
  std::vector<TrialRecord> records;

  // filled by summarize()
  double mean = 0.0;        // over non-discarded trials
  double mean_all = 0.0;    // discarded trials count as 0
  double std_error = 0.0;   // of mean_all
  double discard_rate = 0.0;
  std::vector<double> best_so_far;

  void summarize() {
    const std::size_t n = records.size();
    double sum = 0.0, sum_kept = 0.0, best = 0.0;
    std::size_t kept = 0;
    best_so_far.clear();
    for (const auto& r : records) {
      sum += r.objective;
      if (r.path != Path::Discarded) {
        sum_kept += r.objective;
        ++kept;
      }
      best = std::max(best, r.objective);
      best_so_far.push_back(best);
    }
    mean_all = n ? sum / static_cast<double>(n) : 0.0;
    mean = kept ? sum_kept / static_cast<double>(kept) : 0.0;
    discard_rate = n ? static_cast<double>(n - kept) / static_cast<double>(n) : 0.0;
    double ss = 0.0;
    for (const auto& r : records) ss += (r.objective - mean_all) * (r.objective - mean_all);
    std_error = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
  }
};

struct RunOptions {
  unsigned threads = 1;
  ColgenLimits limits;
};

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs f(t) for t in [0, n) on up to `threads` workers; f writes into its
/// own slot, so the outcome is independent of scheduling.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t t = 0; t < n; ++t) f(t);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex mu;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t t = w; t < n; t += threads) f(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

/// Trials over an already solved LP. Every kept solution is re-checked.
inline TrialStats run_trials(const ScaledInstance& si, const FractionalSolution& sol,
                             Algorithm alg, std::size_t trials, std::uint64_t seed,
                             unsigned threads = 1) {
  Rounder rounder(si, sol, alg);
  TrialStats stats;
  stats.algorithm = alg;
  stats.epsilon = sol.mode.epsilon;
  stats.seed = seed;
  stats.lp_value = sol.lp_value;
  stats.records.resize(trials);
  parallel_for(trials, resolve_threads(threads), [&](std::size_t t) {
    RoundingOutcome out = rounder.run(seed, t);
    TrialRecord& r = stats.records[t];
    r.trial = t;
    r.path = out.path;
    if (out.discarded()) {
      r.feasible = false;
      r.objective = 0.0;
      return;
    }
    if (!check_feasible(si.base, out.solution).feasible())
      throw AssertionFailure(std::string(to_string(alg)) + " returned an infeasible solution in trial " +
                             std::to_string(t));
    r.objective = objective(si.base, out.solution);
  });
  stats.summarize();
  return stats;
}

inline RelaxationMode mode_for(Algorithm alg, double eps) {
  return uses_scaled_lp(alg) ? RelaxationMode::scaled(eps) : RelaxationMode::exact();
}

inline TrialStats simulate(const Instance& inst, Algorithm alg, double eps, std::size_t trials,
                           std::uint64_t seed, const RunOptions& opt = {}) {
  if (trials < 1) throw Error("simulate: need at least one trial");
  ScaledInstance si = scale_budget(inst);
  FractionalSolution sol = solve_relaxation(si, mode_for(alg, eps), opt.limits);
  return run_trials(si, sol, alg, trials, seed, opt.threads);
}

struct DominanceCheck {
  Algorithm better, worse;
  std::size_t holds = 0;  // trials with better >= worse
  std::size_t trials = 0;

  bool always() const { return holds == trials; }
};

struct Comparison {
  std::vector<TrialStats> stats;  // in the requested order
  std::vector<DominanceCheck> dominance;  // empty unless shared randomness
};

/// Seed of algorithm i when randomness is not shared.
inline std::uint64_t unshared_seed(std::uint64_t seed, std::size_t i) {
  return splitmix64(seed ^ (0xa0761d6478bd642fULL * (i + 1)));
}

/// Runs each algorithm on the same instance. With shared randomness every
/// algorithm replays the same per-trial draws, and the pairwise orderings
/// alg6 >= baseline and alg1 >= alg3 are counted and asserted.
inline Comparison compare(const Instance& inst, const std::vector<Algorithm>& algs, double eps,
                          std::size_t trials, std::uint64_t seed, bool shared,
                          const RunOptions& opt = {}) {
  if (trials < 1) throw Error("compare: need at least one trial");
  ScaledInstance si = scale_budget(inst);
  std::optional<FractionalSolution> exact_lp, scaled_lp;
  Comparison cmp;
  for (std::size_t i = 0; i < algs.size(); ++i) {
    auto& slot = uses_scaled_lp(algs[i]) ? scaled_lp : exact_lp;
    if (!slot) slot = solve_relaxation(si, mode_for(algs[i], eps), opt.limits);
    cmp.stats.push_back(run_trials(si, *slot, algs[i], trials, shared ? seed : unshared_seed(seed, i),
                                   opt.threads));
  }
  if (!shared) return cmp;

  auto find = [&](Algorithm a) -> const TrialStats* {
    for (const auto& s : cmp.stats)
      if (s.algorithm == a) return &s;
    return nullptr;
  };
  const std::pair<Algorithm, Algorithm> pairs[] = {{Algorithm::Alg6, Algorithm::Baseline},
                                                   {Algorithm::Alg1, Algorithm::Alg3}};
  for (auto [hi, lo] : pairs) {
    const TrialStats* a = find(hi);
    const TrialStats* b = find(lo);
    if (!a || !b) continue;
    DominanceCheck d{hi, lo, 0, trials};
    for (std::size_t t = 0; t < trials; ++t)
      if (a->records[t].objective >= b->records[t].objective - 1e-9) ++d.holds;
    cmp.dominance.push_back(d);
  }
  for (const auto& d : cmp.dominance)
    if (!d.always())
      throw AssertionFailure(std::string(to_string(d.better)) + " fell below " + to_string(d.worse) +
                             " on " + std::to_string(d.trials - d.holds) + " shared trials");
  return cmp;
}

// --- CSV export ---------------------------------------------------------

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string trials_csv(const TrialStats& s) {
  std::string out = "trial,objective,feasible,path\n";
  for (const auto& r : s.records)
    out += std::to_string(r.trial) + "," + format_double(r.objective) + "," +
           (r.feasible ? "1" : "0") + "," + to_string(r.path) + "\n";
  return out;
}

/// Running maximum; the first `skip` trials are left out of the file but
/// still count towards the maximum.
inline std::string best_so_far_csv(const TrialStats& s, std::size_t skip = 0) {
  std::string out = "trial,best_objective\n";
  for (std::size_t t = skip; t < s.best_so_far.size(); ++t)
    out += std::to_string(s.records[t].trial) + "," + format_double(s.best_so_far[t]) + "\n";
  return out;
}

inline std::vector<TrialRecord> parse_trials_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "trial,objective,feasible,path")
    throw Error("trial CSV: unexpected header");
  std::vector<TrialRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string a, b, c, d;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c, ',') ||
        !std::getline(row, d))
      throw Error("trial CSV: malformed row '" + line + "'");
    TrialRecord r;
    r.trial = std::stoull(a);
    r.objective = std::stod(b);
    r.feasible = c == "1";
    r.path = parse_path(d);
    out.push_back(r);
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

/// Writes <prefix>_trials.csv and <prefix>_best.csv.
inline void export_stats(const TrialStats& s, const std::string& prefix, std::size_t skip = 0) {
  write_file(prefix + "_trials.csv", trials_csv(s));
  write_file(prefix + "_best.csv", best_so_far_csv(s, skip));
}

}  // namespace bap
