#pragma once

// Test-only generators. Kept independent of the library's own Haar sampler.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "msent/qstate/matrix.hpp"

namespace msent::testing {

inline CVector random_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  CVector v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

inline CVector random_unit_vector(std::mt19937_64& rng, std::size_t n) {
  CVector v = random_vector(rng, n);
  double s = 0;
  for (auto& x : v) s += std::norm(x);
  for (auto& x : v) x /= std::sqrt(s);
  return v;
}

inline CMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
  CMatrix a(n, n);
  std::normal_distribution<double> g;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      if (i == j) a(i, i) = g(rng);
      else {
        a(i, j) = {g(rng), g(rng)};
        a(j, i) = std::conj(a(i, j));
      }
    }
  return a;
}

// Modified Gram-Schmidt on Gaussian columns.
inline CMatrix random_unitary(std::mt19937_64& rng, std::size_t n) {
  std::vector<CVector> cols;
  for (std::size_t c = 0; c < n; ++c) {
    CVector v = random_vector(rng, n);
    for (const auto& u : cols) {
      std::complex<double> d{};
      for (std::size_t i = 0; i < n; ++i) d += std::conj(u[i]) * v[i];
      for (std::size_t i = 0; i < n; ++i) v[i] -= d * u[i];
    }
    double s = 0;
    for (auto& x : v) s += std::norm(x);
    for (auto& x : v) x /= std::sqrt(s);
    cols.push_back(v);
  }
  CMatrix u(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) u(r, c) = cols[c][r];
  return u;
}

inline CMatrix random_density(std::mt19937_64& rng, std::size_t n) {
  CMatrix a(n, n);
  std::normal_distribution<double> g;
  for (auto& x : a.data()) x = {g(rng), g(rng)};
  CMatrix r = a * a.adjoint();
  r *= 1.0 / r.trace().real();
  return r;
}

}  // namespace msent::testing
