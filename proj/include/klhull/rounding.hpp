#pragma once

// Randomized rounding of the relaxation optimum A = T^2 back to the image of
// a preconditioned quadratic map.
//
// Rank one: y = Tx / |Tx| for Gaussian x gives b = psi(y), which sums to 1
// because sum Q_i = I. Rank m: Y = sum_j (Tx_j)(Tx_j)^T / sum_j |Tx_j|^2
// gives b_i = <Q_i, Y>, a uniform combination of m image points.
//
// Both procedures spend the whole budget and keep the draw with the smallest
// D(a||b); the acceptance predicates are evaluated on every draw so the
// empirical acceptance rate is reported alongside.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "klhull/bounds.hpp"
#include "klhull/config.hpp"
#include "klhull/entropic_sdp.hpp"
#include "klhull/error.hpp"
#include "klhull/linalg.hpp"
#include "klhull/quadmap.hpp"
#include "klhull/random.hpp"

namespace klhull {

struct RoundOptions {
  int budget = 1000;  // draws (rank one) or m-batches (rank m)
  int threads = 1;
  SolveOptions sdp;
};

inline constexpr int kDefaultRankOneBudget = 1000;
inline constexpr int kDefaultRankMBudget = 200;

struct RoundingOutcome {
  int m = 1;
  std::vector<Vector> points;  // y (rank one) or y_1..y_m, b = mean of psi(y_j)
  SimplexVector a;
  SimplexVector b;
  double kl = 0.0;
  int trials = 0;            // draws or batches evaluated
  int accepted_trials = 0;   // trials satisfying the acceptance predicate
  long samples_drawn = 0;    // Gaussian vectors consumed, redraws included
  bool accepted = false;     // some trial satisfied the predicate
  bool best_accepted = false;
  int best_trial = -1;
  std::optional<SpectahedronPoint> witness_y;  // rank m only
  double fw_gap = 0.0;
  double sdp_value = 0.0;
  bool sdp_converged = false;
  double bound = 0.0;        // 4.8 or 15/sqrt(m)
  double certificate = 0.0;  // proof-level bound for an accepted trial, before fw_gap

  double acceptance_rate() const { return trials > 0 ? double(accepted_trials) / trials : 0.0; }
};

namespace detail {

inline double weighted_log_values(const SimplexVector& alpha, const Vector& values) {
  double s = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == 0.0) continue;
    if (!(values[i] > 0.0)) return -std::numeric_limits<double>::infinity();
    s += alpha[i] * std::log(values[i]);
  }
  return s;
}

inline void check_preconditioned(const QuadraticMap& map) {
  const double dev = (map.sum() - SymMatrix::identity(map.n())).frobenius_norm();
  if (dev > 1e-8)
    throw NotPreconditioned("rounding: map does not satisfy sum Q_i = I (deviation " +
                            std::to_string(dev) + ")");
}

inline void check_witness(const QuadraticMap& map, const SimplexVector& a,
                          const SpectahedronPoint& witness) {
  if (a.size() != map.k()) throw DimensionMismatch("rounding: a has wrong length");
  const SimplexVector from_witness = hull_point_from_witness(map, witness);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(from_witness[i] - a[i]) > 1e-9)
      throw InvalidArgument("rounding: a does not match <Q_i, X> of the witness");
}

// Draws one vector from `sub` with Tx != 0, counting every attempt.
inline Vector draw_nonzero(GaussianSampler& sub, const SymMatrix& t, long& drawn, Vector& x) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    x = sub.normals(t.n());
    ++drawn;
    Vector tx = t.apply(x);
    if (squared_norm(tx) > 0.0) return tx;
  }
  throw InvariantViolation("rounding: T annihilates every draw; the relaxation optimum is zero");
}

// Runs trial(j) for j in [0, budget) across `threads` workers and reduces to
// the trial with the smallest kl, lowest index on ties.
template <class Trial, class Result>
std::vector<Result> run_trials(int budget, int threads, Trial trial) {
  std::vector<Result> results(static_cast<std::size_t>(budget));
  threads = std::clamp(threads, 1, std::max(budget, 1));
  if (threads == 1) {
    for (int j = 0; j < budget; ++j) results[j] = trial(j);
    return results;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int j = w; j < budget; j += threads) results[j] = trial(j);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace detail

// |Tx|^2 < 6 and sum alpha_i ln q_i(Tx) > -3 for the map rescaled so that
// <Q_i, A> = 1. Tx = 0 is rejected.
inline bool accept_rank_one(std::span<const double> x, const SymMatrix& t,
                            const QuadraticMap& rescaled, const SimplexVector& alpha) {
  const Vector tx = t.apply(x);
  const double sq = squared_norm(tx);
  if (!(sq > 0.0)) return false;
  if (!(sq < kRankOneNormThreshold)) return false;
  return detail::weighted_log_values(alpha, evaluate(rescaled, tx)) > kRankOneLogThreshold;
}

// (1/m) sum |Tx_j|^2 <= 1 + 3/sqrt(m) and
// sum alpha_i ln((1/m) sum_j q_i(Tx_j)) >= -12/sqrt(m).
inline bool accept_rank_m(const std::vector<Vector>& xs, const SymMatrix& t,
                          const QuadraticMap& rescaled, const SimplexVector& alpha) {
  const int m = static_cast<int>(xs.size());
  if (m < 1) throw InvalidArgument("accept_rank_m: need at least one vector");
  double mass = 0.0;
  Vector avg(rescaled.k(), 0.0);
  for (const auto& x : xs) {
    const Vector tx = t.apply(x);
    mass += squared_norm(tx);
    const Vector q = evaluate(rescaled, tx);
    for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += q[i];
  }
  if (!(mass > 0.0)) return false;
  for (double& v : avg) v /= m;
  if (!(mass / m <= rank_m_norm_threshold(m))) return false;
  return detail::weighted_log_values(alpha, avg) >= rank_m_log_threshold(m);
}

// Pipeline on a preconditioned map (sum Q_i = I) with hull point
// a = <Q_i, X_witness>: solve the relaxation with weights a, take T = A^{1/2},
// rescale so <Q_i, A> = 1, and round `budget` Gaussian draws.
inline RoundingOutcome round_rank_one(const QuadraticMap& map, const SimplexVector& a,
                                      const SpectahedronPoint& witness,
                                      const GaussianSampler& sampler,
                                      const RoundOptions& opt = {}) {
  if (opt.budget < 1) throw InvalidArgument("round_rank_one: budget must be >= 1");
  detail::check_preconditioned(map);
  detail::check_witness(map, a, witness);

  const SdpSolution sol = solve(map, a, opt.sdp);
  const SymMatrix t = sqrt_psd(sol.x_star.matrix());
  const QuadraticMap rescaled = rescale_to_unit(map, sol);

  struct Draw {
    Vector y;
    double kl = std::numeric_limits<double>::infinity();
    bool accepted = false;
    long drawn = 0;
  };
  auto trial = [&](int j) {
    GaussianSampler sub = sampler.substream(static_cast<std::uint64_t>(j));
    Draw d;
    Vector x;
    Vector tx = detail::draw_nonzero(sub, t, d.drawn, x);
    const double sq = squared_norm(tx);
    d.accepted = sq < kRankOneNormThreshold &&
                 detail::weighted_log_values(a, evaluate(rescaled, tx)) > kRankOneLogThreshold;
    d.y = scaled(tx, 1.0 / std::sqrt(sq));
    d.kl = kl_divergence(a, SimplexVector(evaluate(map, d.y)));
    return d;
  };
  const auto draws = detail::run_trials<decltype(trial), Draw>(opt.budget, opt.threads, trial);

  RoundingOutcome out;
  out.m = 1;
  out.a = a;
  out.trials = opt.budget;
  std::size_t best = 0;
  for (std::size_t j = 0; j < draws.size(); ++j) {
    out.samples_drawn += draws[j].drawn;
    if (draws[j].accepted) ++out.accepted_trials;
    if (draws[j].kl < draws[best].kl) best = j;
  }
  out.accepted = out.accepted_trials > 0;
  out.best_trial = static_cast<int>(best);
  out.best_accepted = draws[best].accepted;
  out.points = {draws[best].y};
  out.b = SimplexVector(evaluate(map, draws[best].y));
  out.kl = kl_divergence(a, out.b);
  out.fw_gap = sol.fw_gap;
  out.sdp_value = sol.value;
  out.sdp_converged = sol.converged;
  out.bound = kBeta;
  out.certificate = rank_one_certificate();
  return out;
}

struct RankMDecomposition {
  std::vector<Vector> points;
  SimplexVector weights;  // uniform 1/m
};

// Y = (1/m) sum_j y_j y_j^T with y_j = sqrt(m lambda_j) u_j, zero-padded to m
// points. Requires every eigenvalue past the m-th largest to be <= rank_tol.
inline RankMDecomposition decompose_rank_m(const SpectahedronPoint& y, int m,
                                           double rank_tol = kDefaults.rank_tail) {
  if (m < 1) throw InvalidArgument("decompose_rank_m: m must be >= 1");
  const EigenDecomposition e = sym_eigen(y.matrix());
  const std::size_t n = y.n();
  const auto mm = static_cast<std::size_t>(m);
  RankMDecomposition out{{}, SimplexVector::uniform(mm)};
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t j = n - 1 - r;  // descending
    const double lam = e.values[j];
    if (r >= mm) {
      if (lam > rank_tol)
        throw InvalidArgument("decompose_rank_m: rank exceeds m (eigenvalue " +
                              std::to_string(lam) + ")");
      continue;
    }
    out.points.push_back(scaled(e.vectors.column(j), std::sqrt(m * std::max(lam, 0.0))));
  }
  while (out.points.size() < mm) out.points.emplace_back(n, 0.0);
  return out;
}

inline RoundingOutcome round_rank_m(const QuadraticMap& map, const SimplexVector& a,
                                    const SpectahedronPoint& witness, int m,
                                    const GaussianSampler& sampler,
                                    const RoundOptions& opt = {kDefaultRankMBudget, 1, {}}) {
  if (m < 1) throw InvalidArgument("round_rank_m: m must be >= 1");
  if (opt.budget < 1) throw InvalidArgument("round_rank_m: budget must be >= 1");
  detail::check_preconditioned(map);
  detail::check_witness(map, a, witness);

  const SdpSolution sol = solve(map, a, opt.sdp);
  const SymMatrix t = sqrt_psd(sol.x_star.matrix());
  const QuadraticMap rescaled = rescale_to_unit(map, sol);
  const std::size_t n = map.n();

  struct Batch {
    std::vector<Vector> tx;
    double mass = 0.0;
    double kl = std::numeric_limits<double>::infinity();
    bool accepted = false;
    long drawn = 0;
  };
  auto assemble_y = [n](const Batch& bt) {
    SymMatrix y = SymMatrix::zero(n);
    for (const auto& z : bt.tx) y.add_scaled(outer(z), 1.0 / bt.mass);
    return y;
  };
  auto trial = [&](int j) {
    GaussianSampler sub = sampler.substream(static_cast<std::uint64_t>(j));
    Batch bt;
    for (int attempt = 0; attempt < 64 && !(bt.mass > 0.0); ++attempt) {
      bt.tx.clear();
      bt.mass = 0.0;
      for (int r = 0; r < m; ++r) {
        bt.tx.push_back(t.apply(sub.normals(n)));
        ++bt.drawn;
        bt.mass += squared_norm(bt.tx.back());
      }
    }
    if (!(bt.mass > 0.0)) throw InvariantViolation("round_rank_m: T annihilates every draw");
    Vector avg(map.k(), 0.0);
    for (const auto& z : bt.tx) {
      const Vector q = evaluate(rescaled, z);
      for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += q[i] / m;
    }
    bt.accepted = bt.mass / m <= rank_m_norm_threshold(m) &&
                  detail::weighted_log_values(a, avg) >= rank_m_log_threshold(m);
    bt.kl = kl_divergence(a, SimplexVector(form_inner(map, assemble_y(bt))));
    return bt;
  };
  const auto batches = detail::run_trials<decltype(trial), Batch>(opt.budget, opt.threads, trial);

  RoundingOutcome out;
  out.m = m;
  out.a = a;
  out.trials = opt.budget;
  std::size_t best = 0;
  for (std::size_t j = 0; j < batches.size(); ++j) {
    out.samples_drawn += batches[j].drawn;
    if (batches[j].accepted) ++out.accepted_trials;
    if (batches[j].kl < batches[best].kl) best = j;
  }
  const Batch& bt = batches[best];
  out.accepted = out.accepted_trials > 0;
  out.best_trial = static_cast<int>(best);
  out.best_accepted = bt.accepted;
  const SymMatrix y = assemble_y(bt);
  out.witness_y = SpectahedronPoint(y / y.trace());
  out.b = SimplexVector(form_inner(map, y));
  out.kl = kl_divergence(a, out.b);
  const double scale = std::sqrt(m / bt.mass);
  for (const auto& z : bt.tx) out.points.push_back(scaled(z, scale));
  out.fw_gap = sol.fw_gap;
  out.sdp_value = sol.value;
  out.sdp_converged = sol.converged;
  out.bound = rank_m_beta(m);
  out.certificate = rank_m_certificate(m);
  return out;
}

}  // namespace klhull
