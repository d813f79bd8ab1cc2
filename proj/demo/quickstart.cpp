// Loads an instance, solves both LP relaxations and rounds them with each
// algorithm that applies.

#include <cstdio>

#include "bap/bap.hpp"

using namespace bap;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: quickstart <instance.json>\n");
    return 1;
  }
  try {
    Instance inst = io::read_instance_file(argv[1]);
    ScaledInstance si = scale_budget(inst);
    const double eps = 0.25;
    auto exact_lp = solve_relaxation(si, RelaxationMode::exact());
    std::printf("L=%zu P=%zu B=%g k=%g\n", inst.num_bins(), inst.num_items(), inst.budget, si.k);
    std::printf("LP value %.6f after %zu rounds (%zu columns)\n", exact_lp.lp_value, exact_lp.iterations,
                exact_lp.size());

    std::vector<Algorithm> algs = {Algorithm::Baseline};
    if (!inst.has_assignment_costs()) algs.insert(algs.end(), {Algorithm::Alg2, Algorithm::Alg6});
    if (si.k > 1.0) algs.insert(algs.begin(), Algorithm::Alg1);
    for (Algorithm alg : algs) {
      auto s = simulate(inst, alg, eps, 1000, 7);
      std::printf("%-9s mean %.4f  best %.4f  discarded %.1f%%\n", to_string(alg), s.mean_all,
                  s.best_so_far.back(), 100.0 * s.discard_rate);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
