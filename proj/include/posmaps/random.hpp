#pragma once

// Seeded generators. Every consumer receives its generator (or seed)
// explicitly; sub-streams are derived deterministically so that a batch of
// restarts gives the same result regardless of evaluation order.

#include <cstdint>
#include <random>

#include "posmaps/operators.hpp"

namespace posmaps {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Generator for sub-stream `stream` of `seed`.
inline Rng substream(std::uint64_t seed, std::uint64_t stream) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

inline ComplexVector random_gaussian_vector(int n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v[i] = Complex(re, im);
  }
  return v;
}

inline ComplexVector random_unit_vector(int n, Rng& rng) {
  ComplexVector v = random_gaussian_vector(n, rng);
  while (v.norm() < 1e-12) v = random_gaussian_vector(n, rng);
  return v / v.norm();
}

inline RealVector random_real_unit_vector(int n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  RealVector v(n);
  do {
    for (int i = 0; i < n; ++i) v[i] = g(rng);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

inline ComplexMatrix random_ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      const double re = g(rng);
      const double im = g(rng);
      m(r, c) = Complex(re, im) / std::sqrt(2.0);
    }
  return m;
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal moved into Q.
inline ComplexMatrix haar_unitary(int n, Rng& rng) {
  const ComplexMatrix z = random_ginibre(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const double a = std::abs(r(i, i));
    if (a > 0) q.col(i) *= r(i, i) / a;
  }
  return q;
}

/// Haar-distributed real orthogonal matrix.
inline RealMatrix haar_orthogonal(int n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  RealMatrix z(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) z(r, c) = g(rng);
  Eigen::HouseholderQR<RealMatrix> qr(z);
  RealMatrix q = qr.householderQ() * RealMatrix::Identity(n, n);
  const RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) *= -1.0;
  return q;
}

inline HermitianOp random_hermitian(int n, Rng& rng) {
  const ComplexMatrix g = random_ginibre(n, n, rng);
  return HermitianOp(ComplexMatrix(0.5 * (g + g.adjoint())));
}

/// Random density state of the given rank: W W^dagger / Tr for Ginibre W (n x rank).
inline HermitianOp random_density_matrix(int n, int rank, Rng& rng) {
  const ComplexMatrix w = random_ginibre(n, rank, rng);
  ComplexMatrix rho = w * w.adjoint();
  rho /= rho.trace().real();
  return HermitianOp(rho);
}

}  // namespace posmaps
