#include <cmath>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace klhull;
using klhull::testing::random_spd;
using klhull::testing::random_symmetric;

namespace {

// |M - I|_F
double residual_identity(const SquareMatrix& m) {
  double s = 0.0;
  for (std::size_t r = 0; r < m.n(); ++r)
    for (std::size_t c = 0; c < m.n(); ++c) {
      const double d = m(r, c) - (r == c ? 1.0 : 0.0);
      s += d * d;
    }
  return std::sqrt(s);
}

}  // namespace

TEST(SymMatrix, SymmetrizesOnConstruction) {
  const SymMatrix m(2, {1.0, 2.0, 4.0, 3.0});
  EXPECT_EQ(m(0, 1), 3.0);
  EXPECT_EQ(m(1, 0), 3.0);
}

TEST(SymMatrix, RejectsBadInput) {
  EXPECT_THROW(SymMatrix(0, {}), InvalidArgument);
  EXPECT_THROW(SymMatrix(2, {1.0, 2.0, 3.0}), DimensionMismatch);
  EXPECT_THROW(SymMatrix(1, {NAN}), InvalidArgument);
  EXPECT_THROW(SymMatrix(1, {INFINITY}), InvalidArgument);
}

TEST(FrobeniusInner, Examples) {
  EXPECT_DOUBLE_EQ(frobenius_inner(SymMatrix::identity(2), SymMatrix::identity(2)), 2.0);
  const SymMatrix x = SymMatrix::from_rows({{0.25, 0.1, 0.0}, {0.1, 0.5, -0.2}, {0.0, -0.2, 0.25}});
  EXPECT_NEAR(frobenius_inner(SymMatrix::identity(3), x), 1.0, 1e-15);
  const double a[2] = {1, 2}, b[2] = {3, 4};
  EXPECT_DOUBLE_EQ(frobenius_inner(SymMatrix::diagonal(a), SymMatrix::diagonal(b)), 11.0);
  EXPECT_THROW(frobenius_inner(SymMatrix::identity(2), SymMatrix::identity(3)), DimensionMismatch);
}

TEST(FrobeniusInner, OuterGivesQuadraticForm) {
  GaussianSampler s(11);
  for (int t = 0; t < 50; ++t) {
    const SymMatrix a = random_symmetric(5, s);
    const Vector x = s.normals(5);
    EXPECT_NEAR(frobenius_inner(a, outer(x)), a.quadratic_form(x), 1e-12 * (1 + std::abs(a.quadratic_form(x))));
    EXPECT_EQ(frobenius_inner(a, outer(x)), frobenius_inner(outer(x), a));
  }
}

TEST(SymEigen, DiagonalInput) {
  const double d[2] = {3, 1};
  const EigenDecomposition e = sym_eigen(SymMatrix::diagonal(d));
  EXPECT_DOUBLE_EQ(e.values[0], 1.0);
  EXPECT_DOUBLE_EQ(e.values[1], 3.0);
  EXPECT_DOUBLE_EQ(std::abs(e.vectors(1, 0)), 1.0);
  EXPECT_DOUBLE_EQ(std::abs(e.vectors(0, 1)), 1.0);
}

TEST(SymEigen, Identity) {
  const EigenDecomposition e = sym_eigen(SymMatrix::identity(4));
  for (double v : e.values) EXPECT_DOUBLE_EQ(v, 1.0);
  EXPECT_LT(residual_identity(e.vectors.transpose() * e.vectors), 1e-14);
}

TEST(SymEigen, HandComputed2x2) {
  const EigenDecomposition e = sym_eigen(SymMatrix::from_rows({{2, 1}, {1, 2}}));
  EXPECT_NEAR(e.values[0], 1.0, 1e-14);
  EXPECT_NEAR(e.values[1], 3.0, 1e-14);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(e.vectors(0, 0)), r, 1e-14);
  EXPECT_NEAR(e.vectors(0, 0) * e.vectors(1, 0), -0.5, 1e-14);  // (1,-1)/sqrt2 up to sign
  EXPECT_NEAR(e.vectors(0, 1) * e.vectors(1, 1), 0.5, 1e-14);   // (1,1)/sqrt2 up to sign
}

TEST(SymEigen, ResidualOrthonormalityAndReconstruction) {
  GaussianSampler s(3);
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 13u, 24u}) {
    const SymMatrix a = random_symmetric(n, s);
    const double tol = kDefaults.eigen;
    const EigenDecomposition e = sym_eigen(a, tol);
    for (std::size_t j = 0; j + 1 < n; ++j) EXPECT_LE(e.values[j], e.values[j + 1]);
    for (std::size_t j = 0; j < n; ++j) {
      const Vector v = e.vectors.column(j);
      Vector r = a.apply(v);
      for (std::size_t i = 0; i < n; ++i) r[i] -= e.values[j] * v[i];
      EXPECT_LE(norm(r), 10 * tol * a.frobenius_norm() + 1e-13) << "n=" << n;
    }
    EXPECT_LE(residual_identity(e.vectors.transpose() * e.vectors), 1e-12);
    const SymMatrix back = spectral_map(e, [](double l) { return l; });
    EXPECT_LE((back - a).frobenius_norm(), 1e-12 * a.frobenius_norm());
  }
}

TEST(SymEigen, SpdEigenvaluesPositive) {
  GaussianSampler s(5);
  for (int t = 0; t < 20; ++t)
    for (double v : sym_eigen(random_spd(6, s)).values) EXPECT_GT(v, 0.0);
}

TEST(SymEigen, NonConvergenceIsReported) {
  GaussianSampler s(9);
  EXPECT_THROW(sym_eigen(random_symmetric(8, s), 1e-14, 0), NonConvergence);
}

TEST(Cholesky, Examples) {
  const double d[2] = {4, 9};
  const SquareMatrix l = cholesky(SymMatrix::diagonal(d));
  EXPECT_DOUBLE_EQ(l(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(l(1, 1), 3.0);
  EXPECT_DOUBLE_EQ(l(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(l(1, 0), 0.0);
  EXPECT_THROW(cholesky(SymMatrix::from_rows({{1, 2}, {2, 1}})), NotPositiveDefinite);
  const SquareMatrix li = cholesky(SymMatrix::identity(3));
  EXPECT_LT(frobenius_norm(li) - std::sqrt(3.0), 1e-15);
  EXPECT_LT(residual_identity(li), 1e-15);
}

TEST(Cholesky, ReconstructsRandomSpd) {
  GaussianSampler s(13);
  for (int t = 0; t < 20; ++t) {
    const SymMatrix a = random_spd(7, s);
    const SquareMatrix l = cholesky(a);
    for (std::size_t r = 0; r < 7; ++r)
      for (std::size_t c = r + 1; c < 7; ++c) EXPECT_EQ(l(r, c), 0.0);
    const SymMatrix llt(l * l.transpose());
    EXPECT_LE((llt - a).frobenius_norm(), 1e-12 * a.frobenius_norm());
  }
}

TEST(Cholesky, AgreesWithEigenvalueSign) {
  GaussianSampler s(17);
  int pd = 0;
  for (int t = 0; t < 200; ++t) {
    // shifted symmetric matrices straddle definiteness
    const SymMatrix a = random_symmetric(4, s) + SymMatrix::scaled_identity(4, 3.0);
    const bool eig_pd = min_eigenvalue(a) > 0.0;
    EXPECT_EQ(is_positive_definite(a), eig_pd);
    pd += eig_pd;
  }
  EXPECT_GT(pd, 10);
  EXPECT_LT(pd, 190);
}

TEST(SqrtPsd, Examples) {
  const double d[2] = {4, 9};
  const SymMatrix t = sqrt_psd(SymMatrix::diagonal(d));
  EXPECT_NEAR(t(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(t(1, 1), 3.0, 1e-15);
  EXPECT_NEAR(t(0, 1), 0.0, 1e-15);

  const double u[3] = {0.6, 0.0, 0.8};
  const SymMatrix p = outer(u);
  // zero eigenvalues come back as O(eps); their square roots are O(sqrt(eps))
  EXPECT_LE((sqrt_psd(p) - p).frobenius_norm(), 1e-7);

  const SymMatrix a = SymMatrix::from_rows({{2, 1}, {1, 2}});
  const double r = 1.0 / std::sqrt(2.0);
  const double v1[2] = {r, -r}, v2[2] = {r, r};
  const SymMatrix expected = outer(v1) + std::sqrt(3.0) * outer(v2);
  EXPECT_LE((sqrt_psd(a) - expected).frobenius_norm(), 1e-14);
}

TEST(SqrtPsd, SquaresBackOnRandomSpd) {
  GaussianSampler s(19);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + t % 9;
    const SymMatrix a = random_spd(n, s, 1e-3);
    const SymMatrix r = sqrt_psd(a);
    EXPECT_GE(min_eigenvalue(r), -1e-12);
    const SymMatrix sq(r * r);
    EXPECT_LE((sq - a).frobenius_norm(), 1e-9 * std::max(1.0, a.frobenius_norm()));
  }
}

TEST(SqrtPsd, ClampsTinyNegativesAndRejectsIndefinite) {
  const double d[2] = {1.0, -1e-12};
  const SymMatrix t = sqrt_psd(SymMatrix::diagonal(d));
  EXPECT_EQ(t(1, 1), 0.0);
  const double bad[2] = {1.0, -1e-3};
  EXPECT_THROW(sqrt_psd(SymMatrix::diagonal(bad)), NotPositiveSemidefinite);
}

TEST(InverseSpd, Examples) {
  const double d[2] = {2, 4};
  const SymMatrix inv = inverse_spd(SymMatrix::diagonal(d));
  EXPECT_DOUBLE_EQ(inv(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(inv(1, 1), 0.25);
  EXPECT_DOUBLE_EQ(inv(0, 1), 0.0);
  EXPECT_EQ(inverse_spd(SymMatrix::identity(3)), SymMatrix::identity(3));
  EXPECT_THROW(inverse_spd(SymMatrix::from_rows({{1, 2}, {2, 1}})), NotPositiveDefinite);
}

TEST(InverseSpd, ResidualOnRandomSpd) {
  GaussianSampler s(23);
  for (int t = 0; t < 30; ++t) {
    const SymMatrix a = random_spd(3 + t % 5, s);
    EXPECT_LE(residual_identity(a * inverse_spd(a)), 1e-9);
  }
}

TEST(Outer, Examples) {
  const double e1[2] = {1, 0};
  const double d[2] = {1, 0};
  EXPECT_EQ(outer(e1), SymMatrix::diagonal(d));
  const double z[3] = {0, 0, 0};
  EXPECT_EQ(outer(z), SymMatrix::zero(3));
  const double x[2] = {1, 2};
  EXPECT_EQ(outer(x), SymMatrix::from_rows({{1, 2}, {2, 4}}));
}

TEST(Outer, TraceAndRank) {
  GaussianSampler s(29);
  for (int t = 0; t < 20; ++t) {
    const Vector x = s.normals(6);
    const SymMatrix p = outer(x);
    EXPECT_NEAR(p.trace(), squared_norm(x), 1e-12 * squared_norm(x));
    const EigenDecomposition e = sym_eigen(p);
    for (std::size_t j = 0; j + 1 < 6; ++j) EXPECT_LE(std::abs(e.values[j]), 1e-12 * p.trace());
  }
}
