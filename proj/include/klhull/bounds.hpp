#pragma once

// Closed-form constants and tail bounds for Gaussian quadratic forms q with
// E q = 1, and the thresholds used by the rounding procedures.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "klhull/error.hpp"

namespace klhull {

// Rank-one rounding accepts a draw x when |Tx|^2 < 6 and the weighted log
// value exceeds -3, giving D(a||b) <= 3 + ln 6 < 4.8.
inline constexpr double kRankOneNormThreshold = 6.0;
inline constexpr double kRankOneLogThreshold = -3.0;
inline constexpr double kBeta = 4.8;

// Rank-m thresholds, all scaled by 1/sqrt(m).
inline double rank_m_norm_threshold(int m) { return 1.0 + 3.0 / std::sqrt(double(m)); }
inline double rank_m_log_threshold(int m) { return -12.0 / std::sqrt(double(m)); }
inline double rank_m_beta(int m) { return 15.0 / std::sqrt(double(m)); }

// What an accepted draw guarantees before adding the solver gap.
inline double rank_one_certificate() { return -kRankOneLogThreshold + std::log(kRankOneNormThreshold); }
inline double rank_m_certificate(int m) {
  return -rank_m_log_threshold(m) + std::log(rank_m_norm_threshold(m));
}

// ln Gamma(x) for x > 0. Lanczos approximation (g = 7, 9 terms) with the
// reflection formula below 1/2.
inline double log_gamma(double x) {
  if (!(x > 0.0)) throw InvalidArgument("log_gamma: x must be positive");
  if (x < 0.5) return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  static constexpr double kCoef[9] = {0.99999999999980993,     676.5203681218851,
                                      -1259.1392167224028,     771.32342877765313,
                                      -176.61502916214059,     12.507343278686905,
                                      -0.13857109526572012,    9.9843695780195716e-6,
                                      1.5056327351493116e-7};
  const double z = x - 1.0;
  double sum = kCoef[0];
  for (int i = 1; i < 9; ++i) sum += kCoef[i] / (z + i);
  const double t = z + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

// ln of 2^a Gamma(a + 1/2) / (t^a sqrt(pi)), the Markov bound on P(q >= t)
// obtained from the a-th moment.
inline double phi_log_expression(double t, double alpha) {
  return alpha * std::log(2.0 / t) + log_gamma(alpha + 0.5) - 0.5 * std::log(std::numbers::pi);
}

inline double phi_expression(double t, double alpha) { return std::exp(phi_log_expression(t, alpha)); }

struct PhiResult {
  double value;
  double alpha;  // minimizer
};

// phi(t) = min over alpha >= 1 of phi_expression(t, alpha), t >= 1. The log
// expression is convex in alpha, so golden-section search on [1, alpha_max]
// finds the minimum. The minimizer sits near (t - 1) / 2.
inline PhiResult phi_minimize(double t, double alpha_tol = 1e-10) {
  if (!(t >= 1.0)) throw InvalidArgument("phi: t must be >= 1");
  const double alpha_max = std::max({1.0, 10.0 * std::log(t) + 10.0, t});
  const double inv_golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 1.0, hi = alpha_max;
  double x1 = hi - inv_golden * (hi - lo), x2 = lo + inv_golden * (hi - lo);
  double f1 = phi_log_expression(t, x1), f2 = phi_log_expression(t, x2);
  while (hi - lo > alpha_tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_golden * (hi - lo);
      f1 = phi_log_expression(t, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_golden * (hi - lo);
      f2 = phi_log_expression(t, x2);
    }
  }
  double best_alpha = 0.5 * (lo + hi);
  double best = phi_log_expression(t, best_alpha);
  for (double a : {1.0, alpha_max}) {
    const double f = phi_log_expression(t, a);
    if (f < best) {
      best = f;
      best_alpha = a;
    }
  }
  return {std::exp(best), best_alpha};
}

inline double phi(double t) { return phi_minimize(t).value; }

// exp((m/2)(1 - t + ln t)): bounds P(q_m >= t) for t >= 1 and P(q_m <= t)
// for 0 < t <= 1, where q_m averages m independent copies of q.
inline double laplace_tail_upper(int m, double t) {
  if (m < 1) throw InvalidArgument("laplace_tail_upper: m must be >= 1");
  if (!(t > 0.0)) throw InvalidArgument("laplace_tail_upper: t must be positive");
  return std::exp(0.5 * m * (1.0 - t + std::log(t)));
}

struct Constants {
  double abs_log_moment = 2.75;      // E|ln q| < 2.75
  double ln2_moment = 7.55;          // E ln^2 q < 7.55
  double ln2_moment_inside = 6.55;   // contribution of {q <= 1}
  double beta = kBeta;
  double markov_092 = 2.75 / 3.0;    // P(weighted log <= -3) <= 2.75/3 < 0.92
  double tail_007 = 0.0;             // phi(6) < 0.07

  static double rank_m_abs_log(int m) { return 6.0 / std::sqrt(double(m)); }
  static double rank_m_beta(int m) { return klhull::rank_m_beta(m); }
  // (6/sqrt m) / (12/sqrt m)
  static double markov_rank_m(int /*m*/) { return 0.5; }
};

inline Constants constants() {
  Constants c;
  c.tail_007 = phi(6.0);
  return c;
}

// Adaptive Simpson on [a, b]; throws NonConvergence past max_depth.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int max_depth = 50) {
  struct Rec {
    const std::function<double(double)>& f;
    int max_depth;
    double run(double a, double b, double fa, double fm, double fb, double whole, double tol,
               int depth) const {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
      if (depth >= max_depth) throw NonConvergence("adaptive_simpson: depth limit reached");
      return run(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
             run(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
  };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Rec{f, max_depth}.run(a, b, fa, fm, fb, whole, tol, 0);
}

struct GaussLogMoments {
  double m1;  // (4/sqrt(2 pi)) int_0^inf |ln x| e^{-x^2/2} dx = E|ln x_1^2|
  double m2;  // (8/sqrt(2 pi)) int_0^inf ln^2 x e^{-x^2/2} dx = E ln^2 x_1^2
};

// Splits at x = 1. On (0, 1] the substitution x = e^{-u} removes the log
// singularity: int_0^1 |ln x|^p e^{-x^2/2} dx = int_0^inf u^p e^{-u} e^{-e^{-2u}/2} du.
inline GaussLogMoments gauss_log_moments(double tol = 1e-12) {
  auto inner = [tol](int p) {
    auto fu = [p](double u) { return std::pow(u, p) * std::exp(-u - 0.5 * std::exp(-2.0 * u)); };
    return adaptive_simpson(fu, 0.0, 60.0, tol);
  };
  auto outer = [tol](int p) {
    auto fx = [p](double x) { return std::pow(std::log(x), p) * std::exp(-0.5 * x * x); };
    return adaptive_simpson(fx, 1.0, 20.0, tol);
  };
  const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  return {4.0 * c * (inner(1) + outer(1)), 8.0 * c * (inner(2) + outer(2))};
}

// One row of a verification table.
struct BoundReport {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  bool satisfied = false;
};

}  // namespace klhull
