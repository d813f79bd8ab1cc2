// Command-line front end: instance generation, LP solving, rounding and
// Monte-Carlo experiments.
//
// Exit status: 0 on success, 2 when a feasibility or dominance assertion
// fails, 1 for usage and input errors.

#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "bap/bap.hpp"

using namespace bap;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out_dir = ".";
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    io::write_text_file(out, text);
}

std::string in_dir(const Globals& g, const std::string& name) {
  std::filesystem::create_directories(g.out_dir);
  return (std::filesystem::path(g.out_dir) / name).string();
}

io::Json solution_json(const Instance& inst, const RoundingOutcome& out) {
  io::Json j;
  j["path"] = to_string(out.path);
  j["objective"] = objective(inst, out.solution);
  j["cost"] = total_cost(inst, out.solution);
  io::Json open = io::Json::array(), assigned = io::Json::array();
  for (std::size_t l = 0; l < inst.num_bins(); ++l) {
    if (out.solution.y(l)) open.push_back(l);
    for (std::size_t p = 0; p < inst.num_items(); ++p)
      if (out.solution.x(l, p)) assigned.push_back({l, p});
  }
  j["open"] = std::move(open);
  j["assigned"] = std::move(assigned);
  return j;
}

void print_summary(const TrialStats& s) {
  std::printf("%-9s lp=%.6f mean=%.6f mean_all=%.6f se=%.6f discard=%.4f best=%.6f\n",
              to_string(s.algorithm), s.lp_value, s.mean, s.mean_all, s.std_error, s.discard_rate,
              s.best_so_far.empty() ? 0.0 : s.best_so_far.back());
}

gen::MaxKCoverInstance random_cover(int n, std::size_t sets, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  gen::MaxKCoverInstance mkc;
  mkc.n = n;
  mkc.k = k;
  for (std::size_t s = 0; s < sets; ++s) {
    std::vector<int> members;
    while (members.empty())
      for (int e = 0; e < n; ++e)
        if (rng() % 2) members.push_back(e);
    mkc.sets.push_back(std::move(members));
  }
  return mkc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budgeted assignment with interval items: LP relaxation and randomized rounding"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--threads", g.threads, "Worker threads for trials (0 = all cores)");
  app.add_option("--out-dir", g.out_dir, "Directory for CSV output");

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "Write a random or reduction instance as JSON");
  std::string kind = "random", gen_out;
  gen::RandomInstanceParams rprm;
  gen::GridRlppParams gprm;
  double target_k = 3.0;
  int elements = 6, cover_k = 2;
  std::size_t sets = 4;
  std::string welfare = "car-miles-saved";
  gen_cmd->add_option("--kind", kind, "random | mkc | rlpp-mkc | rlpp-grid")
      ->check(CLI::IsMember({"random", "mkc", "rlpp-mkc", "rlpp-grid"}));
  gen_cmd->add_option("--bins", rprm.bins, "random: number of bins");
  gen_cmd->add_option("--items", rprm.items, "random: number of items");
  gen_cmd->add_option("--max-dims", rprm.max_dims, "random: largest bin dimension count");
  gen_cmd->add_option("--max-capacity", rprm.max_capacity, "random: largest capacity entry");
  gen_cmd->add_option("--max-assign-cost", rprm.max_assign_cost, "random: largest c_lp (0 keeps alg2 usable)");
  gen_cmd->add_option("--max-rho", rprm.max_rho, "random: largest rho_p");
  gen_cmd->add_flag("--uniform-rewards", rprm.uniform_rewards, "random: v_lp independent of l");
  gen_cmd->add_option("--target-k", target_k, "random, rlpp-grid: budget as a multiple of the costliest configuration");
  gen_cmd->add_option("--elements", elements, "mkc: number of elements");
  gen_cmd->add_option("--sets", sets, "mkc: number of sets");
  gen_cmd->add_option("--k", cover_k, "mkc: sets that may be chosen");
  gen_cmd->add_option("--width", gprm.width, "rlpp-grid: grid width");
  gen_cmd->add_option("--height", gprm.height, "rlpp-grid: grid height");
  gen_cmd->add_option("--lines", gprm.lines, "rlpp-grid: candidate lines");
  gen_cmd->add_option("--trips", gprm.trips, "rlpp-grid: passenger trips");
  gen_cmd->add_option("--bus-capacity", gprm.capacity, "rlpp-grid: bus capacity C");
  gen_cmd->add_option("--welfare", welfare, "rlpp-grid: binary | car-miles-saved")
      ->check(CLI::IsMember({"binary", "car-miles-saved"}));
  gen_cmd->add_option("--out", gen_out, "Output file (default stdout)");

  // solve-lp
  auto* lp_cmd = app.add_subcommand("solve-lp", "Solve the configuration LP by column generation");
  std::string lp_in, lp_mode = "exact", lp_out;
  double lp_eps = 0.1;
  ColgenLimits limits;
  lp_cmd->add_option("instance", lp_in, "Instance JSON")->required();
  lp_cmd->add_option("--mode", lp_mode, "exact | scaled")->check(CLI::IsMember({"exact", "scaled"}));
  lp_cmd->add_option("--epsilon", lp_eps, "Budget shrink for --mode scaled");
  lp_cmd->add_option("--max-iters", limits.max_iterations, "Column generation rounds");
  lp_cmd->add_option("--timeout-secs", limits.timeout_seconds, "Wall-clock limit");
  lp_cmd->add_option("--out", lp_out, "Output file (default stdout)");

  // round
  auto* round_cmd = app.add_subcommand("round", "Round the LP solution once");
  std::string round_in, round_alg = "alg1", round_lp, round_out;
  double round_eps = 0.1;
  std::uint64_t round_trial = 0;
  round_cmd->add_option("instance", round_in, "Instance JSON")->required();
  round_cmd->add_option("--alg", round_alg, "alg1 | alg2 | baseline | alg6 | alg3 | alg4");
  round_cmd->add_option("--epsilon", round_eps, "Budget shrink of the scaled LP");
  round_cmd->add_option("--lp", round_lp, "Reuse a solve-lp output instead of solving");
  round_cmd->add_option("--trial", round_trial, "Trial index within the seed's stream");
  round_cmd->add_option("--out", round_out, "Output file (default stdout)");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo trials of one algorithm");
  std::string sim_in, sim_alg = "alg1";
  double sim_eps = 0.1;
  std::size_t sim_trials = 10000, sim_skip = 0;
  sim_cmd->add_option("instance", sim_in, "Instance JSON")->required();
  sim_cmd->add_option("--alg", sim_alg, "Algorithm");
  sim_cmd->add_option("--epsilon", sim_eps, "Budget shrink of the scaled LP");
  sim_cmd->add_option("--trials", sim_trials, "Number of trials");
  sim_cmd->add_option("--skip", sim_skip, "Leading trials left out of the best-so-far CSV");

  // compare
  auto* cmp_cmd = app.add_subcommand("compare", "Run several algorithms on the same instance");
  std::string cmp_in;
  std::vector<std::string> cmp_algs = {"baseline", "alg2", "alg6"};
  double cmp_eps = 0.1;
  std::size_t cmp_trials = 10000, cmp_skip = 0;
  bool cmp_shared = true;
  cmp_cmd->add_option("instance", cmp_in, "Instance JSON")->required();
  cmp_cmd->add_option("--algs", cmp_algs, "Comma-separated algorithms")->delimiter(',');
  cmp_cmd->add_option("--epsilon", cmp_eps, "Budget shrink of the scaled LP");
  cmp_cmd->add_option("--trials", cmp_trials, "Trials per algorithm");
  cmp_cmd->add_option("--skip", cmp_skip, "Leading trials left out of the best-so-far CSVs");
  cmp_cmd->add_flag("--shared,!--no-shared", cmp_shared, "Replay the same draws for every algorithm");

  // exact
  auto* exact_cmd = app.add_subcommand("exact", "Exact optimum of a tiny instance by enumeration");
  std::string exact_in, exact_out;
  exact_cmd->add_option("instance", exact_in, "Instance JSON")->required();
  exact_cmd->add_option("--out", exact_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen_cmd) {
      io::Json j;
      if (kind == "random") {
        rprm.target_k = target_k;
        j = io::to_json(gen::random_instance(rprm, g.seed));
      } else if (kind == "mkc") {
        j = io::to_json(gen::from_max_k_cover(random_cover(elements, sets, cover_k, g.seed)));
      } else if (kind == "rlpp-mkc") {
        j = io::to_json(gen::rlpp_from_max_k_cover(random_cover(elements, sets, cover_k, g.seed)));
      } else {
        gprm.target_k = target_k;
        auto r = gen::rlpp_grid(gprm, g.seed);
        r.welfare = gen::parse_welfare(welfare);
        j = io::to_json(r);
      }
      emit(io::dump(j), gen_out);
    } else if (*lp_cmd) {
      auto si = scale_budget(io::read_instance_file(lp_in));
      auto mode = lp_mode == "exact" ? RelaxationMode::exact() : RelaxationMode::scaled(lp_eps);
      auto sol = solve_relaxation(si, mode, limits);
      if (!sol.converged) std::cerr << "warning: column generation stopped before convergence\n";
      emit(io::dump(io::to_json(sol)), lp_out);
    } else if (*round_cmd) {
      Algorithm alg = parse_algorithm(round_alg);
      auto si = scale_budget(io::read_instance_file(round_in));
      FractionalSolution sol = round_lp.empty()
                                   ? solve_relaxation(si, mode_for(alg, round_eps))
                                   : io::fractional_from_json(io::read_json_file(round_lp), si.base);
      auto out = Rounder(si, sol, alg).run(g.seed, round_trial);
      if (!out.discarded() && !check_feasible(si.base, out.solution).feasible())
        throw AssertionFailure("rounded solution failed the feasibility check");
      emit(io::dump(solution_json(si.base, out)), round_out);
    } else if (*sim_cmd) {
      Algorithm alg = parse_algorithm(sim_alg);
      RunOptions opt;
      opt.threads = g.threads;
      auto s = simulate(io::read_instance_file(sim_in), alg, sim_eps, sim_trials, g.seed, opt);
      export_stats(s, in_dir(g, to_string(alg)), sim_skip);
      print_summary(s);
    } else if (*cmp_cmd) {
      std::vector<Algorithm> algs;
      for (const auto& a : cmp_algs) algs.push_back(parse_algorithm(a));
      RunOptions opt;
      opt.threads = g.threads;
      auto cmp = compare(io::read_instance_file(cmp_in), algs, cmp_eps, cmp_trials, g.seed, cmp_shared, opt);
      for (const auto& s : cmp.stats) {
        export_stats(s, in_dir(g, to_string(s.algorithm)), cmp_skip);
        print_summary(s);
      }
      for (const auto& d : cmp.dominance)
        std::printf("%s >= %s on %zu/%zu shared trials\n", to_string(d.better), to_string(d.worse), d.holds,
                    d.trials);
    } else if (*exact_cmd) {
      Instance inst = io::read_instance_file(exact_in);
      auto sol = exact::brute_force(inst);
      auto j = solution_json(inst, RoundingOutcome{sol, Path::Direct, {}, 0.0});
      j.erase("path");
      emit(io::dump(j), exact_out);
    }
  } catch (const AssertionFailure& e) {
    std::cerr << "assertion failed: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
