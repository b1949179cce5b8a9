#pragma once

// Dense symmetric linear algebra: storage, Jacobi eigensolver, Cholesky,
// PSD square root and SPD inverse. Sizes are small (n up to a few hundred),
// so everything is stored as full row-major n x n arrays.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "klhull/config.hpp"
#include "klhull/error.hpp"

namespace klhull {

using Vector = std::vector<double>;

inline double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionMismatch("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double squared_norm(std::span<const double> x) { return dot(x, x); }
inline double norm(std::span<const double> x) { return std::sqrt(dot(x, x)); }

inline Vector scaled(std::span<const double> x, double s) {
  Vector out(x.begin(), x.end());
  for (double& v : out) v *= s;
  return out;
}

// General square matrix, row-major. Used for eigenvector bases and
// triangular factors, which are not symmetric.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  static SquareMatrix identity(std::size_t n) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t n() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  Vector column(std::size_t j) const {
    Vector c(n_);
    for (std::size_t i = 0; i < n_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  SquareMatrix transpose() const {
    SquareMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::span<const double> data() const { return a_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

inline SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.n() != b.n()) throw DimensionMismatch("matrix product: size mismatch");
  const std::size_t n = a.n();
  SquareMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline Vector operator*(const SquareMatrix& a, std::span<const double> x) {
  if (a.n() != x.size()) throw DimensionMismatch("matrix-vector: size mismatch");
  Vector y(a.n(), 0.0);
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

inline double frobenius_norm(const SquareMatrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

// Real symmetric n x n matrix with full storage. Symmetry holds bit-exactly:
// construction from arbitrary entries replaces M by (M + M^T) / 2.
class SymMatrix {
 public:
  SymMatrix() = default;

  SymMatrix(std::size_t n, std::vector<double> entries) : n_(n), a_(std::move(entries)) {
    if (n_ == 0) throw InvalidArgument("SymMatrix: dimension must be >= 1");
    if (a_.size() != n_ * n_) throw DimensionMismatch("SymMatrix: expected n*n entries");
    for (double v : a_)
      if (!std::isfinite(v)) throw InvalidArgument("SymMatrix: non-finite entry");
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double s = 0.5 * (a_[i * n_ + j] + a_[j * n_ + i]);
        a_[i * n_ + j] = s;
        a_[j * n_ + i] = s;
      }
  }

  explicit SymMatrix(const SquareMatrix& m)
      : SymMatrix(m.n(), std::vector<double>(m.data().begin(), m.data().end())) {}

  static SymMatrix from_rows(const std::vector<Vector>& rows) {
    const std::size_t n = rows.size();
    std::vector<double> a;
    a.reserve(n * n);
    for (const auto& r : rows) {
      if (r.size() != n) throw DimensionMismatch("SymMatrix::from_rows: matrix is not square");
      a.insert(a.end(), r.begin(), r.end());
    }
    return SymMatrix(n, std::move(a));
  }

  static SymMatrix zero(std::size_t n) { return SymMatrix(n, std::vector<double>(n * n, 0.0)); }

  static SymMatrix identity(std::size_t n) { return scaled_identity(n, 1.0); }

  static SymMatrix scaled_identity(std::size_t n, double s) {
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] = s;
    return SymMatrix(n, std::move(a));
  }

  static SymMatrix diagonal(std::span<const double> d) {
    const std::size_t n = d.size();
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] = d[i];
    return SymMatrix(n, std::move(a));
  }

  std::size_t n() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::span<const double> data() const { return a_; }

  std::vector<Vector> rows() const {
    std::vector<Vector> r(n_);
    for (std::size_t i = 0; i < n_; ++i) r[i].assign(a_.begin() + i * n_, a_.begin() + (i + 1) * n_);
    return r;
  }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < n_; ++i) t += a_[i * n_ + i];
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
  }

  Vector apply(std::span<const double> x) const {
    if (x.size() != n_) throw DimensionMismatch("SymMatrix::apply: size mismatch");
    Vector y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n_; ++j) s += a_[i * n_ + j] * x[j];
      y[i] = s;
    }
    return y;
  }

  // x^T A x
  double quadratic_form(std::span<const double> x) const {
    if (x.size() != n_) throw DimensionMismatch("SymMatrix::quadratic_form: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double r = 0.0;
      for (std::size_t j = 0; j < n_; ++j) r += a_[i * n_ + j] * x[j];
      s += x[i] * r;
    }
    return s;
  }

  SquareMatrix to_square() const {
    SquareMatrix m(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

  // Elementwise combinations of symmetric matrices stay exactly symmetric, so
  // they bypass the symmetrizing constructor.
  friend SymMatrix operator+(const SymMatrix& x, const SymMatrix& y) {
    return combine(x, y, [](double u, double v) { return u + v; });
  }
  friend SymMatrix operator-(const SymMatrix& x, const SymMatrix& y) {
    return combine(x, y, [](double u, double v) { return u - v; });
  }
  friend SymMatrix operator*(double s, const SymMatrix& x) {
    SymMatrix r = x;
    for (double& v : r.a_) v *= s;
    return r;
  }
  friend SymMatrix operator*(const SymMatrix& x, double s) { return s * x; }
  friend SymMatrix operator/(const SymMatrix& x, double s) {
    SymMatrix r = x;
    for (double& v : r.a_) v /= s;
    return r;
  }

  // this += s * other
  SymMatrix& add_scaled(const SymMatrix& other, double s) {
    if (other.n_ != n_) throw DimensionMismatch("SymMatrix::add_scaled: size mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += s * other.a_[i];
    return *this;
  }

 private:
  template <class Op>
  static SymMatrix combine(const SymMatrix& x, const SymMatrix& y, Op op) {
    if (x.n_ != y.n_) throw DimensionMismatch("SymMatrix: size mismatch");
    SymMatrix r = x;
    for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = op(x.a_[i], y.a_[i]);
    return r;
  }

  std::size_t n_ = 0;
  std::vector<double> a_;
};

// <A, B> = sum_ij a_ij b_ij = trace(AB)
inline double frobenius_inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.n() != b.n()) throw DimensionMismatch("frobenius_inner: size mismatch");
  return dot(a.data(), b.data());
}

inline SymMatrix outer(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = x[i] * x[j];
  return SymMatrix(n, std::move(a));
}

inline SquareMatrix operator*(const SymMatrix& a, const SymMatrix& b) {
  return a.to_square() * b.to_square();
}

// T Q T for symmetric T, resymmetrized.
inline SymMatrix congruence(const SymMatrix& t, const SymMatrix& q) {
  const SquareMatrix tq = t * q;
  return SymMatrix(tq * t.to_square());
}

struct EigenDecomposition {
  Vector values;         // ascending
  SquareMatrix vectors;  // column j pairs with values[j]
};

// Cyclic Jacobi rotations. Converges once the off-diagonal Frobenius norm is
// at most tol * ||A||_F; throws NonConvergence after max_sweeps sweeps.
inline EigenDecomposition sym_eigen(const SymMatrix& m, double tol = kDefaults.eigen,
                                    int max_sweeps = kDefaults.jacobi_max_sweeps) {
  if (!(tol > 0.0)) throw InvalidArgument("sym_eigen: tol must be positive");
  const std::size_t n = m.n();
  SquareMatrix a = m.to_square();
  SquareMatrix v = SquareMatrix::identity(n);
  const double scale = m.frobenius_norm();

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  bool converged = off_norm() <= tol * scale;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    converged = off_norm() <= tol * scale;
  }
  if (!converged)
    throw NonConvergence("sym_eigen: Jacobi did not converge in " + std::to_string(max_sweeps) +
                         " sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  EigenDecomposition out{Vector(n), SquareMatrix(n)};
  for (std::size_t jj = 0; jj < n; ++jj) {
    const std::size_t j = order[jj];
    out.values[jj] = a(j, j);
    // Sign convention: the first entry of largest magnitude is positive.
    std::size_t lead = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(v(i, j)) > std::abs(v(lead, j))) lead = i;
    const double sign = v(lead, j) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, jj) = sign * v(i, j);
  }
  return out;
}

// Lower-triangular L with L L^T = A. Throws NotPositiveDefinite on any
// pivot <= 0; this is the validation gate for positive definite input.
inline SquareMatrix cholesky(const SymMatrix& m) {
  const std::size_t n = m.n();
  SquareMatrix l(n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0))
      throw NotPositiveDefinite("cholesky: non-positive pivot at index " + std::to_string(j));
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

inline bool is_positive_definite(const SymMatrix& m) {
  try {
    (void)cholesky(m);
    return true;
  } catch (const NotPositiveDefinite&) {
    return false;
  }
}

inline SymMatrix inverse_spd(const SymMatrix& m) {
  const SquareMatrix l = cholesky(m);
  const std::size_t n = m.n();
  std::vector<double> inv(n * n, 0.0);
  Vector y(n), x(n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = (i == col) ? 1.0 : 0.0;
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
      y[i] = s / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double s = y[ii];
      for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
      x[ii] = s / l(ii, ii);
    }
    for (std::size_t i = 0; i < n; ++i) inv[i * n + col] = x[i];
  }
  return SymMatrix(n, std::move(inv));
}

// Rebuilds V diag(f(lambda)) V^T.
template <class F>
SymMatrix spectral_map(const EigenDecomposition& e, F f) {
  const std::size_t n = e.values.size();
  Vector fl(n);
  for (std::size_t k = 0; k < n; ++k) fl[k] = f(e.values[k]);
  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += e.vectors(i, k) * fl[k] * e.vectors(j, k);
      out[i * n + j] = s;
    }
  return SymMatrix(n, std::move(out));
}

// Symmetric PSD T with T^2 = A.
inline SymMatrix sqrt_psd(const SymMatrix& m, double clamp = kDefaults.psd_clamp,
                          double eig_tol = kDefaults.eigen) {
  const EigenDecomposition e = sym_eigen(m, eig_tol);
  const double floor = -clamp * m.frobenius_norm();
  for (double lam : e.values)
    if (lam < floor)
      throw NotPositiveSemidefinite("sqrt_psd: eigenvalue " + std::to_string(lam) +
                                    " below clamp threshold");
  return spectral_map(e, [](double lam) { return lam > 0.0 ? std::sqrt(lam) : 0.0; });
}

inline double min_eigenvalue(const SymMatrix& m) { return sym_eigen(m).values.front(); }

inline double max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
  if (a.n() != b.n()) throw DimensionMismatch("max_abs_diff: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

}  // namespace klhull
