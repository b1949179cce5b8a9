#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "klhull/klhull.hpp"

namespace klhull::testing {

inline SymMatrix random_symmetric(std::size_t n, GaussianSampler& s) {
  SquareMatrix g(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) g(r, c) = s.normal();
  return SymMatrix(g);
}

// G G^T + eps I
inline SymMatrix random_spd(std::size_t n, GaussianSampler& s, double eps = 0.1) {
  SquareMatrix g(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) g(r, c) = s.normal();
  return SymMatrix(g * g.transpose()) + SymMatrix::scaled_identity(n, eps);
}

inline QuadraticMap random_map(std::size_t n, std::size_t k, GaussianSampler& s) {
  std::vector<SymMatrix> q;
  for (std::size_t i = 0; i < k; ++i) q.push_back(random_spd(n, s));
  return QuadraticMap(std::move(q));
}

inline SimplexVector random_simplex(std::size_t k, GaussianSampler& s) {
  Vector w(k);
  double sum = 0.0;
  for (double& v : w) sum += (v = -std::log(s.uniform()));
  for (double& v : w) v /= sum;
  return SimplexVector(std::move(w));
}

inline SpectahedronPoint random_spectahedron(std::size_t n, GaussianSampler& s) {
  return SpectahedronPoint::normalized(random_spd(n, s, 0.0));
}

inline Vector random_unit(std::size_t n, GaussianSampler& s) {
  Vector x = s.normals(n);
  return scaled(x, 1.0 / norm(x));
}

}  // namespace klhull::testing
