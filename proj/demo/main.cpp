// Small usage sample: build a three-form map on R^3, take a hull point given
// by a witness matrix, and round it with both schemes.

#include <cstdio>

#include "klhull/klhull.hpp"

int main() {
  using namespace klhull;

  const QuadraticMap map({SymMatrix::diagonal(Vector{3.0, 1.0, 0.5}),
                          SymMatrix::from_rows({{2.0, 0.5, 0.0}, {0.5, 1.0, 0.2}, {0.0, 0.2, 1.5}}),
                          SymMatrix::identity(3)});
  Instance inst{map, Witness{}};
  inst.witness->x = SymMatrix::from_rows({{0.5, 0.1, 0.0}, {0.1, 0.3, 0.0}, {0.0, 0.0, 0.2}});

  for (int m : {0, 4, 16}) {
    PipelineOptions opt;
    opt.seed = 42;
    opt.m = m;
    const ResultRecord r = run_pipeline(inst, opt).record;
    std::printf("%-8s m=%-3d kl=%.3e bound=%.3f accepted=%d/%d\n", r.mode.c_str(), r.m, r.kl, r.bound,
                r.accepted_trials, r.trials);
    std::printf("  a = (%.4f, %.4f, %.4f)\n  b = (%.4f, %.4f, %.4f)\n", r.a[0], r.a[1], r.a[2], r.b[0],
                r.b[1], r.b[2]);
  }

  const SdpSolution sol = solve(map, SimplexVector({0.2, 0.3, 0.5}));
  std::printf("relaxation value %.6f, gap %.2e after %d iterations\n", sol.value, sol.fw_gap,
              sol.iterations);
  return 0;
}
