#pragma once

// Concave relaxation
//
//   maximize  f(X) = sum_i alpha_i ln <Q_i, X>   over X >= 0, trace X = 1
//
// solved by Frank-Wolfe. The linear oracle over the spectahedron is the top
// eigenvector v of the gradient G, so every iterate is a convex combination
// of rank-one projectors and stays feasible. The FW gap <G, vv^T - X> bounds
// the suboptimality f* - f(X) from above.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "klhull/config.hpp"
#include "klhull/error.hpp"
#include "klhull/linalg.hpp"
#include "klhull/quadmap.hpp"

namespace klhull {

namespace detail {

inline void check_alpha(const QuadraticMap& map, const SimplexVector& alpha) {
  if (alpha.size() != map.k()) throw DimensionMismatch("entropic_sdp: alpha has wrong length");
}

// sum_i alpha_i ln(inner_i), skipping alpha_i == 0.
inline double weighted_log(const SimplexVector& alpha, std::span<const double> inner) {
  double f = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == 0.0) continue;
    if (!(inner[i] > 0.0))
      throw InvariantViolation("entropic_sdp: <Q_" + std::to_string(i) +
                               ", X> is not positive");
    f += alpha[i] * std::log(inner[i]);
  }
  return f;
}

}  // namespace detail

inline double objective(const QuadraticMap& map, const SimplexVector& alpha, const SymMatrix& x) {
  detail::check_alpha(map, alpha);
  return detail::weighted_log(alpha, form_inner(map, x));
}

inline double objective(const QuadraticMap& map, const SimplexVector& alpha,
                        const SpectahedronPoint& x) {
  return objective(map, alpha, x.matrix());
}

// G = sum_i (alpha_i / <Q_i, X>) Q_i
inline SymMatrix gradient(const QuadraticMap& map, const SimplexVector& alpha,
                          const SymMatrix& x) {
  detail::check_alpha(map, alpha);
  const Vector inner = form_inner(map, x);
  SymMatrix g = SymMatrix::zero(map.n());
  for (std::size_t i = 0; i < map.k(); ++i) {
    if (alpha[i] == 0.0) continue;
    if (!(inner[i] > 0.0)) throw InvariantViolation("gradient: <Q_i, X> is not positive");
    g.add_scaled(map.form(i), alpha[i] / inner[i]);
  }
  return g;
}

inline SymMatrix gradient(const QuadraticMap& map, const SimplexVector& alpha,
                          const SpectahedronPoint& x) {
  return gradient(map, alpha, x.matrix());
}

struct SolveOptions {
  double tol = kDefaults.fw_gap;
  int max_iters = kDefaults.fw_max_iters;
  double line_search_tol = kDefaults.line_search;
  bool record_history = false;
};

struct SdpSolution {
  SpectahedronPoint x_star;
  double value = 0.0;
  double fw_gap = 0.0;
  int iterations = 0;
  Vector rescale;          // tau_i = 1 / <Q_i, x_star>
  bool converged = false;  // fw_gap <= tol on exit
  std::vector<double> history;  // objective at every iterate, if recorded
};

namespace detail {

// Exact maximizer over [0, gmax] of the concave
//   h(g) = sum alpha_i ln(b_i + g d_i)
// by bisection on h'. Assumes h'(0) > 0.
inline double line_search(const SimplexVector& alpha, const Vector& b, const Vector& d,
                          double gmax, double tol) {
  auto slope = [&](double g) {
    double s = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (alpha[i] == 0.0) continue;
      s += alpha[i] * d[i] / (b[i] + g * d[i]);
    }
    return s;
  };
  if (slope(gmax) >= 0.0) return gmax;
  double lo = 0.0, hi = gmax;
  while (hi - lo > tol * gmax) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Index of the leading eigenvalue; ties go to the first one in output order.
inline std::size_t top_index(const Vector& ascending) {
  const double top = ascending.back();
  for (std::size_t j = 0; j < ascending.size(); ++j)
    if (ascending[j] == top) return j;
  return ascending.size() - 1;
}

// Euclidean projection of a nonnegative-sum vector onto the probability
// simplex (sort-based).
inline Vector project_simplex(const Vector& y) {
  Vector u = y;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0, theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  Vector x(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) x[j] = std::max(y[j] - theta, 0.0);
  return x;
}

// Frobenius projection onto {X >= 0, trace X = 1}.
inline SymMatrix project_spectahedron(const SymMatrix& z) {
  const EigenDecomposition e = sym_eigen(z);
  const Vector mu = project_simplex(e.values);
  EigenDecomposition p{mu, e.vectors};
  return spectral_map(p, [](double m) { return m; });
}

}  // namespace detail

// Each iteration takes a Frank-Wolfe step (exact line search toward the top
// eigenvector of G) followed by a projected gradient step with backtracking.
// Both steps are ascent steps, so the objective is nondecreasing. The PG step
// zeroes small eigenvalues exactly, which lets the iterate settle on a
// low-rank optimal face where plain FW only converges sublinearly.
// Termination is on the FW gap, which certifies f* - f(X) <= gap.
inline SdpSolution solve(const QuadraticMap& map, const SimplexVector& alpha,
                         const SolveOptions& opt = {}) {
  detail::check_alpha(map, alpha);
  if (!(opt.tol > 0.0)) throw InvalidArgument("solve: tol must be positive");
  if (opt.max_iters < 0) throw InvalidArgument("solve: max_iters must be non-negative");

  const std::size_t n = map.n();
  const std::size_t k = map.k();

  SymMatrix x = SymMatrix::scaled_identity(n, 1.0 / static_cast<double>(n));
  Vector b = form_inner(map, x);
  double value = detail::weighted_log(alpha, b);

  SdpSolution sol;
  if (opt.record_history) sol.history.push_back(value);

  auto grad_at = [&](const Vector& inner) {
    SymMatrix g = SymMatrix::zero(n);
    for (std::size_t i = 0; i < k; ++i)
      if (alpha[i] != 0.0) g.add_scaled(map.form(i), alpha[i] / inner[i]);
    return g;
  };
  // Accepts `trial` if it does not decrease the objective.
  auto try_accept = [&](SymMatrix& trial) {
    const Vector tb = form_inner(map, trial);
    for (std::size_t i = 0; i < k; ++i)
      if (alpha[i] != 0.0 && !(tb[i] > 0.0)) return false;
    const double tv = detail::weighted_log(alpha, tb);
    if (tv < value) return false;
    x = std::move(trial);
    b = tb;
    value = tv;
    return true;
  };

  double step = 1.0;  // projected-gradient step, adapted across iterations
  int iter = 0;
  double gap = 0.0;
  for (;; ++iter) {
    SymMatrix g = grad_at(b);
    const EigenDecomposition e = sym_eigen(g);
    const Vector v = e.vectors.column(detail::top_index(e.values));
    const Vector c = evaluate(map, v);

    gap = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      if (alpha[i] != 0.0) gap += alpha[i] * (c[i] - b[i]) / b[i];

    if (gap <= opt.tol || iter >= opt.max_iters) break;

    // Frank-Wolfe step.
    Vector d(k);
    for (std::size_t i = 0; i < k; ++i) d[i] = c[i] - b[i];
    double gamma = detail::line_search(alpha, b, d, 1.0, opt.line_search_tol);
    const SymMatrix vv = outer(v);
    bool moved = false;
    for (int halving = 0; halving < 40 && !moved; gamma *= 0.5, ++halving) {
      SymMatrix trial = (1.0 - gamma) * x;
      trial.add_scaled(vv, gamma);
      moved = try_accept(trial);
    }

    // Projected gradient step: accept Y = P(X + s G) once
    // f(Y) >= f(X) + <G, Y - X> - |Y - X|^2 / (2 s).
    g = grad_at(b);
    step *= 2.0;
    for (int tries = 0; tries < 60; ++tries, step *= 0.5) {
      SymMatrix y = detail::project_spectahedron(x + step * g);
      const SymMatrix diff = y - x;
      const Vector yb = form_inner(map, y);
      bool positive = true;
      for (std::size_t i = 0; i < k; ++i) positive = positive && (alpha[i] == 0.0 || yb[i] > 0.0);
      if (!positive) continue;
      const double yv = detail::weighted_log(alpha, yb);
      const double dn = diff.frobenius_norm();
      if (yv >= value + frobenius_inner(g, diff) - dn * dn / (2.0 * step)) {
        if (try_accept(y)) moved = true;
        break;
      }
    }
    if (!moved) break;  // no representable ascent left
    if (opt.record_history) sol.history.push_back(value);
  }

  // Projection leaves trace 1 up to rounding; renormalize before wrapping.
  sol.x_star = SpectahedronPoint(x / x.trace());
  b = form_inner(map, sol.x_star.matrix());
  sol.value = detail::weighted_log(alpha, b);
  sol.fw_gap = gap > 0.0 ? gap : 0.0;
  sol.iterations = iter;
  sol.converged = gap <= opt.tol;
  sol.rescale.resize(k);
  for (std::size_t i = 0; i < k; ++i) sol.rescale[i] = 1.0 / b[i];
  return sol;
}

// Q_i -> tau_i Q_i so that <Q_i, x_star> = 1 and the objective at x_star is 0.
inline QuadraticMap rescale_to_unit(const QuadraticMap& map, const SdpSolution& sol) {
  if (sol.rescale.size() != map.k()) throw DimensionMismatch("rescale_to_unit: wrong solution");
  std::vector<SymMatrix> forms;
  forms.reserve(map.k());
  for (std::size_t i = 0; i < map.k(); ++i) forms.push_back(sol.rescale[i] * map.form(i));
  return QuadraticMap(std::move(forms));
}

}  // namespace klhull
