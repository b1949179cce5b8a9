#pragma once

// Independent oracles: direct maximization over the unit sphere and Monte
// Carlo estimators for the Gaussian quadratic-form bounds.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "klhull/bounds.hpp"
#include "klhull/entropic_sdp.hpp"
#include "klhull/error.hpp"
#include "klhull/linalg.hpp"
#include "klhull/quadmap.hpp"
#include "klhull/random.hpp"

namespace klhull {

// q(x) = sum lambda_i x_i^2 with lambda on the simplex, so E q = 1.
class DiagonalForm {
 public:
  explicit DiagonalForm(Vector lambda) : lambda_(SimplexVector(std::move(lambda), 1e-12).values()) {}

  static DiagonalForm rank_one(std::size_t n) {
    Vector l(n, 0.0);
    l[0] = 1.0;
    return DiagonalForm(std::move(l));
  }
  static DiagonalForm uniform(std::size_t n) { return DiagonalForm(Vector(n, 1.0 / double(n))); }

  // Uniform on the simplex (normalized exponentials).
  static DiagonalForm random(std::size_t n, GaussianSampler& s) {
    Vector l(n);
    double sum = 0.0;
    for (double& v : l) sum += (v = -std::log(s.uniform()));
    for (double& v : l) v /= sum;
    return DiagonalForm(std::move(l));
  }

  std::size_t n() const { return lambda_.size(); }
  const Vector& lambda() const { return lambda_; }

  double q(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < lambda_.size(); ++i) s += lambda_[i] * x[i] * x[i];
    return s;
  }

  // q_m: average of q over m independent blocks of n normals. Coordinates
  // with lambda_i = 0 are not drawn.
  double sample_qm(GaussianSampler& s, int m) const {
    double total = 0.0;
    for (int j = 0; j < m; ++j)
      for (double l : lambda_)
        if (l != 0.0) {
          const double z = s.normal();
          total += l * z * z;
        }
    return total / m;
  }

 private:
  Vector lambda_;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long samples = 0;

  double upper(double sigmas = 3.0) const { return mean + sigmas * std_error; }
  double lower(double sigmas = 3.0) const { return mean - sigmas * std_error; }
};

inline constexpr long kMinMcSamples = 1000;

namespace detail {

inline McEstimate summarize(const std::vector<double>& v) {
  const auto n = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, sd / std::sqrt(n), static_cast<long>(v.size())};
}

inline void check_samples(long samples) {
  if (samples < kMinMcSamples)
    throw InvalidArgument("Monte Carlo: need at least " + std::to_string(kMinMcSamples) + " samples");
}

// Fills out[j] = f(j) with j split across threads; the result does not
// depend on the thread count.
template <class F>
void parallel_fill(std::vector<double>& out, int threads, F f) {
  const long n = static_cast<long>(out.size());
  threads = std::clamp(threads, 1, 64);
  if (threads == 1) {
    for (long j = 0; j < n; ++j) out[j] = f(j);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (long j = w; j < n; j += threads) out[j] = f(j);
    });
  for (auto& t : pool) t.join();
}

}  // namespace detail

// Per-sample q_m values; sample j uses substream j.
inline std::vector<double> mc_qm_values(const DiagonalForm& form, int m, long samples,
                                        const GaussianSampler& sampler, int threads = 1) {
  if (m < 1) throw InvalidArgument("Monte Carlo: m must be >= 1");
  detail::check_samples(samples);
  std::vector<double> q(static_cast<std::size_t>(samples));
  detail::parallel_fill(q, threads, [&](long j) {
    GaussianSampler s = sampler.substream(static_cast<std::uint64_t>(j));
    return form.sample_qm(s, m);
  });
  return q;
}

inline McEstimate mean_abs_log(const std::vector<double>& q) {
  std::vector<double> v(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) v[j] = std::abs(std::log(q[j]));
  return detail::summarize(v);
}

// Frequency of {q >= t} for t > 1, of {q <= t} for t <= 1.
inline McEstimate tail_frequency(const std::vector<double>& q, double t) {
  if (!(t > 0.0)) throw InvalidArgument("Monte Carlo: t must be positive");
  long hits = 0;
  for (double v : q) hits += (t > 1.0 ? v >= t : v <= t) ? 1 : 0;
  const double n = static_cast<double>(q.size());
  const double p = hits / n;
  return {p, std::sqrt(p * (1.0 - p) / n), static_cast<long>(q.size())};
}

inline McEstimate mc_abs_log_moment(const DiagonalForm& form, long samples,
                                    const GaussianSampler& sampler, int threads = 1) {
  return mean_abs_log(mc_qm_values(form, 1, samples, sampler, threads));
}

inline McEstimate mc_tail(const DiagonalForm& form, int m, double t, long samples,
                          const GaussianSampler& sampler, int threads = 1) {
  if (!(t > 0.0)) throw InvalidArgument("mc_tail: t must be positive");
  return tail_frequency(mc_qm_values(form, m, samples, sampler, threads), t);
}

inline McEstimate mc_rank_m_abs_log(const DiagonalForm& form, int m, long samples,
                                    const GaussianSampler& sampler, int threads = 1) {
  return mean_abs_log(mc_qm_values(form, m, samples, sampler, threads));
}

// P(chi^2_1 >= t) = erfc(sqrt(t / 2)).
inline double chi2_1_survival(double t) { return std::erfc(std::sqrt(0.5 * t)); }

// E ln^2 chi^2_1 = pi^2/2 + (gamma + ln 2)^2, from the digamma and trigamma
// values at 1/2.
inline double chi2_1_log_square_moment() {
  const double c = std::numbers::egamma + std::numbers::ln2;
  return 0.5 * std::numbers::pi * std::numbers::pi + c * c;
}

// E ln chi^2_1 = -(gamma + ln 2).
inline double chi2_1_log_moment() { return -(std::numbers::egamma + std::numbers::ln2); }

// ---------------------------------------------------------------------------
// Sphere oracle

inline double sphere_objective(const QuadraticMap& map, const SimplexVector& alpha,
                               std::span<const double> x) {
  const Vector q = evaluate(map, x);
  double f = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (alpha[i] == 0.0) continue;
    if (!(q[i] > 0.0)) return -std::numeric_limits<double>::infinity();
    f += alpha[i] * std::log(q[i]);
  }
  return f;
}

// n = 2: maximum over `points` equispaced angles in [0, pi).
inline double sphere_max_grid(const QuadraticMap& map, const SimplexVector& alpha,
                              long points = 1000000) {
  if (map.n() != 2) throw DimensionMismatch("sphere_max_grid: requires n = 2");
  double best = -std::numeric_limits<double>::infinity();
  for (long j = 0; j < points; ++j) {
    const double th = std::numbers::pi * static_cast<double>(j) / static_cast<double>(points);
    const double x[2] = {std::cos(th), std::sin(th)};
    best = std::max(best, sphere_objective(map, alpha, x));
  }
  return best;
}

struct AscentOptions {
  int max_iters = 2000;
  double grad_tol = 1e-11;
  double armijo = 1e-4;
};

// Riemannian gradient ascent from one start: tangential part of
// sum 2 (alpha_i / q_i(x)) Q_i x, Armijo backtracking, renormalize.
inline double sphere_ascent_from(const QuadraticMap& map, const SimplexVector& alpha, Vector x,
                                 const AscentOptions& opt = {}) {
  const std::size_t n = map.n();
  x = scaled(x, 1.0 / norm(x));
  double f = sphere_objective(map, alpha, x);
  double step = 1.0;
  for (int it = 0; it < opt.max_iters; ++it) {
    const Vector q = evaluate(map, x);
    Vector g(n, 0.0);
    for (std::size_t i = 0; i < map.k(); ++i) {
      if (alpha[i] == 0.0) continue;
      const Vector qx = map.form(i).apply(x);
      for (std::size_t r = 0; r < n; ++r) g[r] += 2.0 * alpha[i] / q[i] * qx[r];
    }
    const double radial = dot(g, x);
    for (std::size_t r = 0; r < n; ++r) g[r] -= radial * x[r];
    const double gn2 = squared_norm(g);
    if (std::sqrt(gn2) < opt.grad_tol) break;
    step = std::min(step * 2.0, 1e6);
    bool moved = false;
    for (int bt = 0; bt < 80; ++bt, step *= 0.5) {
      Vector y(n);
      for (std::size_t r = 0; r < n; ++r) y[r] = x[r] + step * g[r];
      y = scaled(y, 1.0 / norm(y));
      const double fy = sphere_objective(map, alpha, y);
      if (fy >= f + opt.armijo * step * gn2) {
        x = std::move(y);
        f = fy;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return f;
}

inline double sphere_max_ascent(const QuadraticMap& map, const SimplexVector& alpha, int restarts,
                                const GaussianSampler& sampler, const AscentOptions& opt = {}) {
  if (restarts < 1) throw InvalidArgument("sphere_max_ascent: restarts must be >= 1");
  double best = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    GaussianSampler s = sampler.substream(static_cast<std::uint64_t>(r));
    Vector x;
    do x = s.normals(map.n());
    while (!(squared_norm(x) > 0.0));
    best = std::max(best, sphere_ascent_from(map, alpha, std::move(x), opt));
  }
  return best;
}

// Best value found of sum alpha_i ln q_i(x) over |x| = 1; a lower bound on
// the true maximum. n = 1 is exact and n = 2 uses the angle grid.
inline double sphere_max_oracle(const QuadraticMap& map, const SimplexVector& alpha, int restarts,
                                const GaussianSampler& sampler) {
  if (restarts < 1) throw InvalidArgument("sphere_max_oracle: restarts must be >= 1");
  if (alpha.size() != map.k()) throw DimensionMismatch("sphere_max_oracle: alpha has wrong length");
  if (map.n() == 1) {
    const double x[1] = {1.0};
    return sphere_objective(map, alpha, x);
  }
  if (map.n() == 2) return sphere_max_grid(map, alpha);
  return sphere_max_ascent(map, alpha, restarts, sampler);
}

// Plain-text reproduction record: n, k, alpha, then each Q row by row.
inline std::string dump_instance(const QuadraticMap& map, const SimplexVector& alpha) {
  std::string out = "n " + std::to_string(map.n()) + " k " + std::to_string(map.k()) + "\nalpha";
  char buf[32];
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    std::snprintf(buf, sizeof buf, " %.17g", alpha[i]);
    out += buf;
  }
  for (std::size_t i = 0; i < map.k(); ++i) {
    out += "\nQ" + std::to_string(i);
    for (std::size_t r = 0; r < map.n(); ++r) {
      out += "\n ";
      for (std::size_t c = 0; c < map.n(); ++c) {
        std::snprintf(buf, sizeof buf, " %.17g", map.form(i)(r, c));
        out += buf;
      }
    }
  }
  return out + "\n";
}

struct SandwichReport {
  double sphere = 0.0;     // oracle lower bound on the sphere max
  double sdp_value = 0.0;
  double fw_gap = 0.0;
  bool upper_ok = false;   // sphere <= sdp + fw_gap + 1e-6
  bool lower_ok = false;   // sdp <= sphere + 4.8 + fw_gap
  std::string instance;    // filled when a check fails

  double gap() const { return sdp_value - sphere; }
  bool ok() const { return upper_ok && lower_ok; }

  // Throws InvariantViolation carrying the instance dump on failure.
  void require() const {
    if (ok()) return;
    char buf[160];
    std::snprintf(buf, sizeof buf, "sandwich violated: sphere %.17g, sdp %.17g, fw_gap %.3g\n",
                  sphere, sdp_value, fw_gap);
    throw InvariantViolation(buf + instance);
  }
};

inline SandwichReport check_sandwich(const QuadraticMap& map, const SimplexVector& alpha,
                                     const GaussianSampler& sampler, int restarts = 20,
                                     const SolveOptions& sdp = {}) {
  const SdpSolution sol = solve(map, alpha, sdp);
  SandwichReport r;
  r.sphere = sphere_max_oracle(map, alpha, restarts, sampler);
  r.sdp_value = sol.value;
  r.fw_gap = sol.fw_gap;
  r.upper_ok = r.sphere <= r.sdp_value + r.fw_gap + 1e-6;
  r.lower_ok = r.sdp_value <= r.sphere + kBeta + r.fw_gap;
  if (!r.ok()) r.instance = dump_instance(map, alpha);
  return r;
}

struct ExtremalityReport {
  McEstimate reference;   // rank-one form
  McEstimate max_estimate;
  Vector argmax_lambda;
  bool exceeds = false;   // max_estimate above reference by > 3 combined std_error
};

// Evidence only: whether any random spectrum beats the rank-one value of E|ln q|.
inline ExtremalityReport extremality_probe(std::size_t n, int trials, long samples,
                                           const GaussianSampler& sampler, int threads = 1) {
  if (n < 1 || trials < 0) throw InvalidArgument("extremality_probe: bad arguments");
  ExtremalityReport r;
  r.reference = mc_abs_log_moment(DiagonalForm::rank_one(n), samples, sampler.substream(0), threads);
  r.max_estimate = r.reference;
  r.argmax_lambda = DiagonalForm::rank_one(n).lambda();
  GaussianSampler pick = sampler.substream(1);
  for (int t = 0; t < trials; ++t) {
    const DiagonalForm f = DiagonalForm::random(n, pick);
    const McEstimate e = mc_abs_log_moment(f, samples, sampler.substream(2 + t), threads);
    if (e.mean > r.max_estimate.mean) {
      r.max_estimate = e;
      r.argmax_lambda = f.lambda();
    }
  }
  const double combined =
      std::sqrt(r.max_estimate.std_error * r.max_estimate.std_error + r.reference.std_error * r.reference.std_error);
  r.exceeds = r.max_estimate.mean > r.reference.mean + 3.0 * combined;
  return r;
}

}  // namespace klhull
