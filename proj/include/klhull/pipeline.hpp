#pragma once

// Instance -> preconditioned map -> hull point -> rounding -> result record.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "klhull/error.hpp"
#include "klhull/io.hpp"
#include "klhull/linalg.hpp"
#include "klhull/quadmap.hpp"
#include "klhull/random.hpp"
#include "klhull/rounding.hpp"

namespace klhull {

struct PipelineOptions {
  int m = 0;  // 0 selects rank-one rounding
  std::uint64_t seed = 0;
  int budget = 0;  // 0 selects the default for the mode
  double tol = kDefaults.fw_gap;
  int threads = 1;
  bool witness_random = false;  // ignore/absent witness: draw a Wishart one
};

struct PipelineRun {
  PreconditionedMap pre;
  SpectahedronPoint witness_hat;  // in preconditioned coordinates
  SimplexVector a;
  RoundingOutcome outcome;
  ResultRecord record;
};

class MissingWitness : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Witness in preconditioned coordinates: X -> T X T / trace, x -> T x.
inline SpectahedronPoint witness_to_hat(const PreconditionedMap& pre, const Witness& w) {
  if (w.is_matrix()) return SpectahedronPoint::normalized(congruence(pre.t, *w.x));
  std::vector<Vector> pts;
  for (const auto& p : w.points) pts.push_back(pre.t.apply(p));
  return hull_point_from_combination(pre.hat, pts, SimplexVector(w.weights)).x;
}

// Normalized Wishart matrix H H^T / trace with Gaussian H.
inline SpectahedronPoint random_witness(std::size_t n, const GaussianSampler& sampler) {
  GaussianSampler s = sampler;
  SquareMatrix h(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) h(r, c) = s.normal();
  return SpectahedronPoint::normalized(SymMatrix(h * h.transpose()));
}

inline PipelineRun run_pipeline(const Instance& inst, const PipelineOptions& opt) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  if (opt.m < 0) throw InvalidArgument("pipeline: m must be >= 1");
  if (!inst.witness && !opt.witness_random)
    throw MissingWitness(
        "instance has no witness; add one to the file or pass --witness-random");

  PipelineRun run;
  run.pre = precondition(inst.map);
  const GaussianSampler root(opt.seed);
  run.witness_hat = opt.witness_random ? random_witness(inst.map.n(), root.substream(~0ull))
                                       : witness_to_hat(run.pre, *inst.witness);
  run.a = hull_point_from_witness(run.pre.hat, run.witness_hat);

  RoundOptions ro;
  ro.budget = opt.budget > 0 ? opt.budget : (opt.m == 0 ? kDefaultRankOneBudget : kDefaultRankMBudget);
  ro.threads = opt.threads;
  ro.sdp.tol = opt.tol;

  const auto t1 = Clock::now();
  run.outcome = opt.m == 0 ? round_rank_one(run.pre.hat, run.a, run.witness_hat, root, ro)
                           : round_rank_m(run.pre.hat, run.a, run.witness_hat, opt.m, root, ro);
  const auto t2 = Clock::now();

  const RoundingOutcome& o = run.outcome;
  ResultRecord& r = run.record;
  r.command = "round";
  r.mode = opt.m == 0 ? "rank-one" : "rank-m";
  r.m = o.m;
  r.seed = opt.seed;
  r.budget = ro.budget;
  r.tol = opt.tol;
  r.instance_digest = instance_digest(inst);
  r.n = inst.map.n();
  r.k = inst.map.k();
  r.a = run.a.values();
  r.b = o.b.values();
  r.kl = o.kl;
  r.bound = o.bound;
  r.certificate = o.certificate;
  r.fw_gap = o.fw_gap;
  r.sdp_value = o.sdp_value;
  r.samples_drawn = o.samples_drawn;
  r.trials = o.trials;
  r.accepted_trials = o.accepted_trials;
  r.accepted = o.accepted;
  for (const auto& y : o.points) r.points.push_back(run.pre.t_inv.apply(y));
  r.digest = r.compute_digest();

  using Ms = std::chrono::duration<double, std::milli>;
  r.timings.prepare_ms = Ms(t1 - t0).count();
  r.timings.solve_round_ms = Ms(t2 - t1).count();
  r.timings.total_ms = Ms(Clock::now() - t0).count();
  return run;
}

// b recomputed from the stored points: the mean of psi over them.
inline Vector result_b_from_points(const QuadraticMap& original, const ResultRecord& r) {
  Vector b(original.k(), 0.0);
  for (const auto& p : r.points) {
    const Vector q = evaluate(original, p);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += q[i] / static_cast<double>(r.points.size());
  }
  return b;
}

}  // namespace klhull
