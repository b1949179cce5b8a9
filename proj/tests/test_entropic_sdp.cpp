#include <cmath>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace klhull;
using namespace klhull::testing;

namespace {

QuadraticMap diag_map(std::initializer_list<std::initializer_list<double>> diags) {
  std::vector<SymMatrix> forms;
  for (auto d : diags) forms.push_back(SymMatrix::diagonal(Vector(d)));
  return QuadraticMap(std::move(forms));
}

// Random symmetric direction with zero trace.
SymMatrix trace_free(std::size_t n, GaussianSampler& s) {
  SymMatrix d = random_symmetric(n, s);
  return d - SymMatrix::scaled_identity(n, d.trace() / n);
}

}  // namespace

TEST(Objective, Examples) {
  GaussianSampler s(71);
  const QuadraticMap ids({SymMatrix::identity(3), SymMatrix::identity(3)});
  EXPECT_NEAR(objective(ids, SimplexVector({0.3, 0.7}), random_spectahedron(3, s)), 0.0, 1e-15);

  const QuadraticMap m = diag_map({{1, 2}});
  EXPECT_NEAR(objective(m, SimplexVector({1.0}), SpectahedronPoint(SymMatrix::diagonal(Vector{0, 1}))),
              std::log(2.0), 1e-15);

  const QuadraticMap m2 = diag_map({{1, 2}, {2, 1}});
  EXPECT_NEAR(objective(m2, SimplexVector({0.5, 0.5}), SpectahedronPoint::center(2)), std::log(1.5), 1e-15);
  EXPECT_THROW(objective(m2, SimplexVector({1.0}), SpectahedronPoint::center(2)), DimensionMismatch);
}

TEST(Objective, FailsLoudlyOnNonPositiveInner) {
  const QuadraticMap m = diag_map({{1, 2}});
  EXPECT_THROW(objective(m, SimplexVector({1.0}), SymMatrix::zero(2)), InvariantViolation);
}

TEST(Gradient, Examples) {
  GaussianSampler s(73);
  const QuadraticMap ids({SymMatrix::identity(3), SymMatrix::identity(3)});
  EXPECT_LE((gradient(ids, SimplexVector({0.4, 0.6}), random_spectahedron(3, s)) - SymMatrix::identity(3))
                .frobenius_norm(),
            1e-14);
  const QuadraticMap m = diag_map({{1, 2}});
  const SymMatrix g = gradient(m, SimplexVector({1.0}), SpectahedronPoint::center(2));
  EXPECT_LE((g - (1.0 / 1.5) * SymMatrix::diagonal(Vector{1, 2})).frobenius_norm(), 1e-15);
}

TEST(Gradient, PositiveDefinite) {
  GaussianSampler s(79);
  for (int t = 0; t < 10; ++t) {
    const QuadraticMap m = random_map(4, 3, s);
    EXPECT_TRUE(is_positive_definite(gradient(m, random_simplex(3, s), random_spectahedron(4, s))));
  }
}

TEST(Gradient, MatchesCentralDifferences) {
  GaussianSampler s(83);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + t % 5, k = 1 + t % 4;
    const QuadraticMap m = random_map(n, k, s);
    const SimplexVector alpha = random_simplex(k, s);
    const SpectahedronPoint x = random_spectahedron(n, s);
    // Keep X + h D positive for the step used.
    const SymMatrix x_in = 0.5 * x.matrix() + SymMatrix::scaled_identity(n, 0.5 / n);
    const SymMatrix d = trace_free(n, s);
    const double h = 1e-6;
    const double fd = (objective(m, alpha, x_in + h * d) - objective(m, alpha, x_in - h * d)) / (2 * h);
    const double an = frobenius_inner(gradient(m, alpha, x_in), d);
    EXPECT_LE(std::abs(fd - an), 1e-4 * std::max(std::abs(an), 1e-3)) << "pair " << t;
  }
}

TEST(Solve, SingleFormRecoversTopEigenvalue) {
  const QuadraticMap m = diag_map({{1, 2}});
  const SdpSolution sol = solve(m, SimplexVector({1.0}));
  EXPECT_TRUE(sol.converged);
  EXPECT_NEAR(sol.value, std::log(2.0), 1e-6);
  EXPECT_NEAR(sol.x_star.matrix()(1, 1), 1.0, 1e-6);

  GaussianSampler s(89);
  for (int t = 0; t < 10; ++t) {
    const QuadraticMap r = random_map(2 + t % 5, 1, s);
    const SdpSolution rs = solve(r, SimplexVector({1.0}));
    EXPECT_NEAR(rs.value, std::log(sym_eigen(r.form(0)).values.back()), 1e-6);
  }
}

TEST(Solve, IdentityFormsStopAtStart) {
  const QuadraticMap ids({SymMatrix::identity(3), SymMatrix::identity(3), SymMatrix::identity(3)});
  const SdpSolution sol = solve(ids, SimplexVector({0.2, 0.3, 0.5}));
  EXPECT_EQ(sol.iterations, 0);
  EXPECT_NEAR(sol.value, 0.0, 1e-15);
  EXPECT_NEAR(sol.fw_gap, 0.0, 1e-15);
  EXPECT_TRUE(sol.converged);
}

// X = t u u^T + (1 - t) u_perp u_perp^T, t in [1/2, 1], theta in [0, pi).
TEST(Solve, MatchesGridOnTwoByTwoSpectahedron) {
  const double eps = 0.1;
  const QuadraticMap m = diag_map({{1, eps}, {eps, 1}});
  const SimplexVector alpha({0.5, 0.5});
  double best = -1e300;
  for (double t = 0.5; t <= 1.0 + 1e-12; t += 1e-3)
    for (double th = 0.0; th < std::numbers::pi; th += 1e-3) {
      const Vector u{std::cos(th), std::sin(th)}, v{-std::sin(th), std::cos(th)};
      SymMatrix x = t * outer(u);
      x.add_scaled(outer(v), 1.0 - t);
      best = std::max(best, objective(m, alpha, x));
    }
  const SdpSolution sol = solve(m, alpha);
  EXPECT_TRUE(sol.converged);
  EXPECT_NEAR(sol.value, best, 1e-4);
  EXPECT_GE(sol.value, best - 1e-12);
}

TEST(Solve, MonotoneFeasibleAndCertified) {
  GaussianSampler s(97);
  for (int t = 0; t < 25; ++t) {
    const std::size_t n = 2 + t % 6, k = 1 + t % 5;
    const QuadraticMap m = random_map(n, k, s);
    const SimplexVector alpha = random_simplex(k, s);
    SolveOptions opt;
    opt.record_history = true;
    const SdpSolution sol = solve(m, alpha, opt);
    ASSERT_TRUE(sol.converged) << "instance " << t;
    EXPECT_GE(sol.fw_gap, 0.0);
    EXPECT_LE(sol.fw_gap, opt.tol);
    for (std::size_t i = 1; i < sol.history.size(); ++i) EXPECT_GE(sol.history[i], sol.history[i - 1]);
    EXPECT_NEAR(sol.x_star.matrix().trace(), 1.0, 1e-9);
    EXPECT_GE(min_eigenvalue(sol.x_star.matrix()), -1e-9);
    for (int p = 0; p < 20; ++p) {
      EXPECT_LE(objective(m, alpha, random_spectahedron(n, s)), sol.value + sol.fw_gap + 1e-12);
      const Vector u = random_unit(n, s);
      EXPECT_LE(objective(m, alpha, outer(u)), sol.value + opt.tol);
    }
    for (std::size_t i = 0; i < k; ++i)
      EXPECT_NEAR(sol.rescale[i] * frobenius_inner(m.form(i), sol.x_star.matrix()), 1.0, 1e-14);
  }
}

TEST(Solve, HullWeightsAttainEntropyAtWitness) {
  GaussianSampler s(101);
  for (int t = 0; t < 10; ++t) {
    const PreconditionedMap p = precondition(random_map(4, 3, s));
    const SimplexVector a = hull_point_from_witness(p.hat, random_spectahedron(4, s));
    double ent = 0.0;
    for (std::size_t i = 0; i < 3; ++i) ent += a[i] * std::log(a[i]);
    const SdpSolution sol = solve(p.hat, a);
    EXPECT_NEAR(sol.value, ent, 2e-6);
    EXPECT_LE(sol.value, ent + 1e-12);
  }
}

TEST(Solve, IterationCapIsFlagged) {
  GaussianSampler s(103);
  const QuadraticMap m = random_map(6, 5, s);
  SolveOptions opt;
  opt.max_iters = 1;
  opt.tol = 1e-14;
  const SdpSolution sol = solve(m, random_simplex(5, s), opt);
  EXPECT_FALSE(sol.converged);
  EXPECT_GT(sol.fw_gap, opt.tol);
  EXPECT_EQ(sol.iterations, 1);
  EXPECT_THROW(solve(m, random_simplex(5, s), SolveOptions{0.0}), InvalidArgument);
}

TEST(RescaleToUnit, Examples) {
  const QuadraticMap m = diag_map({{1, 2}});
  const SdpSolution sol = solve(m, SimplexVector({1.0}));
  const QuadraticMap r = rescale_to_unit(m, sol);
  EXPECT_NEAR(sol.rescale[0], 0.5, 1e-6);
  EXPECT_LE((r.form(0) - SymMatrix::diagonal(Vector{0.5, 1.0})).frobenius_norm(), 1e-6);

  const QuadraticMap ids({SymMatrix::identity(2), SymMatrix::identity(2)});
  const SdpSolution si = solve(ids, SimplexVector({0.5, 0.5}));
  const QuadraticMap ri = rescale_to_unit(ids, si);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(ri.form(i), ids.form(i));

  GaussianSampler s(107);
  const QuadraticMap rm = random_map(5, 4, s);
  const SimplexVector alpha = random_simplex(4, s);
  const SdpSolution rs = solve(rm, alpha);
  const QuadraticMap rr = rescale_to_unit(rm, rs);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(frobenius_inner(rr.form(i), rs.x_star.matrix()), 1.0, 1e-9);
  EXPECT_NEAR(objective(rr, alpha, rs.x_star), 0.0, 1e-12);
}
