#pragma once

// Quadratic maps psi(x) = (x^T Q_1 x, ..., x^T Q_k x) with positive definite
// Q_i, probability vectors on the simplex, and spectahedron points
// (PSD, unit trace) that witness membership in conv(psi(R^n)).

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "klhull/config.hpp"
#include "klhull/error.hpp"
#include "klhull/linalg.hpp"

namespace klhull {

class SimplexVector {
 public:
  SimplexVector() = default;

  // Entries must be finite and >= 0 with sum within `sum_tol` of 1; the
  // stored vector is divided by its sum.
  explicit SimplexVector(Vector values, double sum_tol = kDefaults.simplex_sum)
      : v_(std::move(values)) {
    if (v_.empty()) throw InvalidArgument("SimplexVector: empty");
    double s = 0.0;
    for (double x : v_) {
      if (!std::isfinite(x) || x < 0.0)
        throw InvalidArgument("SimplexVector: entries must be finite and non-negative");
      s += x;
    }
    if (std::abs(s - 1.0) > sum_tol)
      throw InvalidArgument("SimplexVector: entries sum to " + std::to_string(s) + ", not 1");
    for (double& x : v_) x /= s;
  }

  // Normalizes any non-negative vector with positive sum.
  static SimplexVector normalized(Vector values) {
    double s = 0.0;
    for (double x : values) s += x;
    if (!(s > 0.0)) throw InvalidArgument("SimplexVector::normalized: sum must be positive");
    for (double& x : values) x /= s;
    return SimplexVector(std::move(values));
  }

  static SimplexVector uniform(std::size_t k) { return SimplexVector(Vector(k, 1.0 / k)); }

  std::size_t size() const { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  const Vector& values() const { return v_; }

  friend bool operator==(const SimplexVector&, const SimplexVector&) = default;

 private:
  Vector v_;
};

class SpectahedronPoint {
 public:
  SpectahedronPoint() = default;

  explicit SpectahedronPoint(SymMatrix x, double trace_tol = kDefaults.spectahedron_trace,
                             double psd_tol = kDefaults.spectahedron_psd)
      : x_(std::move(x)) {
    if (std::abs(x_.trace() - 1.0) > trace_tol)
      throw InvalidArgument("SpectahedronPoint: trace is " + std::to_string(x_.trace()));
    if (min_eigenvalue(x_) < -psd_tol * x_.frobenius_norm())
      throw NotPositiveSemidefinite("SpectahedronPoint: matrix is not PSD");
  }

  // Scales a nonzero PSD matrix to unit trace.
  static SpectahedronPoint normalized(const SymMatrix& x) {
    const double t = x.trace();
    if (!(t > 0.0)) throw InvalidArgument("SpectahedronPoint::normalized: trace must be positive");
    return SpectahedronPoint(x / t);
  }

  static SpectahedronPoint center(std::size_t n) {
    return SpectahedronPoint(SymMatrix::scaled_identity(n, 1.0 / static_cast<double>(n)));
  }

  const SymMatrix& matrix() const { return x_; }
  std::size_t n() const { return x_.n(); }

 private:
  SymMatrix x_;
};

class QuadraticMap {
 public:
  QuadraticMap() = default;

  // Validates that every form is positive definite and all share one
  // dimension.
  explicit QuadraticMap(std::vector<SymMatrix> forms) : q_(std::move(forms)) {
    if (q_.empty()) throw InvalidArgument("QuadraticMap: need at least one form");
    const std::size_t n = q_.front().n();
    for (std::size_t i = 0; i < q_.size(); ++i) {
      if (q_[i].n() != n) throw DimensionMismatch("QuadraticMap: forms differ in dimension");
      try {
        (void)cholesky(q_[i]);
      } catch (const NotPositiveDefinite&) {
        throw NotPositiveDefinite("QuadraticMap: form " + std::to_string(i) +
                                  " is not positive definite");
      }
    }
  }

  std::size_t n() const { return q_.front().n(); }
  std::size_t k() const { return q_.size(); }
  const SymMatrix& form(std::size_t i) const { return q_[i]; }
  const std::vector<SymMatrix>& forms() const { return q_; }

  SymMatrix sum() const {
    SymMatrix s = q_.front();
    for (std::size_t i = 1; i < q_.size(); ++i) s = s + q_[i];
    return s;
  }

 private:
  std::vector<SymMatrix> q_;
};

// hat forms are T^{-1} Q_i T^{-1} with T = (sum Q_i)^{1/2}, so sum hat_i = I.
struct PreconditionedMap {
  QuadraticMap original;
  QuadraticMap hat;
  SymMatrix t;
  SymMatrix t_inv;
};

inline Vector evaluate(const QuadraticMap& map, std::span<const double> x) {
  if (x.size() != map.n()) throw DimensionMismatch("evaluate: point dimension mismatch");
  Vector out(map.k());
  for (std::size_t i = 0; i < map.k(); ++i) out[i] = map.form(i).quadratic_form(x);
  return out;
}

// Inner products <Q_i, X>.
inline Vector form_inner(const QuadraticMap& map, const SymMatrix& x) {
  if (x.n() != map.n()) throw DimensionMismatch("form_inner: matrix dimension mismatch");
  Vector out(map.k());
  for (std::size_t i = 0; i < map.k(); ++i) out[i] = frobenius_inner(map.form(i), x);
  return out;
}

inline PreconditionedMap precondition(const QuadraticMap& map) {
  const SymMatrix s = map.sum();
  SymMatrix t = sqrt_psd(s);
  SymMatrix t_inv = inverse_spd(t);
  std::vector<SymMatrix> hat;
  hat.reserve(map.k());
  for (const auto& q : map.forms()) hat.push_back(congruence(t_inv, q));
  return {map, QuadraticMap(std::move(hat)), std::move(t), std::move(t_inv)};
}

// a_i = <Q_i, X>. Requires sum Q_i = I so that sum a_i = trace X = 1.
inline SimplexVector hull_point_from_witness(const QuadraticMap& map, const SpectahedronPoint& x) {
  Vector a = form_inner(map, x.matrix());
  double s = 0.0;
  for (double v : a) s += v;
  if (std::abs(s - 1.0) > kDefaults.simplex_sum)
    throw NotPreconditioned("hull_point_from_witness: sum of <Q_i, X> is " + std::to_string(s) +
                            "; precondition the map first");
  return SimplexVector(std::move(a));
}

struct HullPoint {
  SimplexVector a;
  SpectahedronPoint x;
};

// Builds X = sum_t w_t x_t x_t^T / sum_t w_t |x_t|^2 and the matching hull
// point a = sum_t w'_t psi(x_t).
inline HullPoint hull_point_from_combination(const QuadraticMap& map,
                                             const std::vector<Vector>& points,
                                             const SimplexVector& weights) {
  if (points.size() != weights.size())
    throw DimensionMismatch("hull_point_from_combination: points and weights differ in length");
  SymMatrix x = SymMatrix::zero(map.n());
  double mass = 0.0;
  for (std::size_t t = 0; t < points.size(); ++t) {
    if (points[t].size() != map.n())
      throw DimensionMismatch("hull_point_from_combination: point dimension mismatch");
    x.add_scaled(outer(points[t]), weights[t]);
    mass += weights[t] * squared_norm(points[t]);
  }
  if (!(mass > 0.0)) throw InvalidArgument("hull_point_from_combination: all points are zero");
  SpectahedronPoint witness(x / mass);
  SimplexVector a = hull_point_from_witness(map, witness);
  return {std::move(a), std::move(witness)};
}

// D(a||b) = sum a_i ln(a_i / b_i), with 0 ln 0 = 0. Returns +infinity when
// some a_i > 0 has b_i == 0.
inline double kl_divergence(const SimplexVector& a, const SimplexVector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("kl_divergence: length mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    if (b[i] == 0.0) return std::numeric_limits<double>::infinity();
    d += a[i] * std::log(a[i] / b[i]);
  }
  // Rounding can push a ~= b slightly below zero.
  return d < 0.0 ? 0.0 : d;
}

// Pinsker: (sum |a_i - b_i|)^2 / 2, in nats like kl_divergence. This is the
// base-2 form D_2(a||b) >= (sum |a_i - b_i|)^2 / (2 ln 2) multiplied by ln 2.
inline double pinsker_lower_bound(const SimplexVector& a, const SimplexVector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("pinsker_lower_bound: length mismatch");
  double l1 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) l1 += std::abs(a[i] - b[i]);
  return 0.5 * l1 * l1;
}

}  // namespace klhull
