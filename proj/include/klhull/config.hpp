#pragma once

#include <cstddef>

namespace klhull {

// Default numerical tolerances. Every routine that takes a tolerance defaults
// to the matching field here.
struct Tolerances {
  // Jacobi stops once the off-diagonal Frobenius norm is <= eigen * ||A||_F.
  double eigen = 1e-14;
  int jacobi_max_sweeps = 30;

  // Eigenvalues in [-psd_clamp * ||A||_F, 0] are treated as zero.
  double psd_clamp = 1e-10;

  // SimplexVector renormalizes silently up to this deviation of the sum.
  double simplex_sum = 1e-6;

  // SpectahedronPoint acceptance.
  double spectahedron_trace = 1e-9;
  double spectahedron_psd = 1e-9;

  // Entropic relaxation (Frank-Wolfe).
  double fw_gap = 1e-6;
  int fw_max_iters = 5000;
  double line_search = 1e-12;

  // Rank-m decomposition: eigenvalues past the m-th must not exceed this.
  double rank_tail = 1e-9;
};

inline constexpr Tolerances kDefaults{};

}  // namespace klhull
