#pragma once

// Concrete maps: Pauli-diagonal qubit maps with the three extreme families,
// their Bloch-ball and channel representations, and a 3x3 Kraus triple that
// is extreme yet sends no pure state to a pure state.

#include <cmath>
#include <optional>

#include "posmaps/ballmaps.hpp"
#include "posmaps/channels.hpp"
#include "posmaps/random.hpp"

namespace posmaps {

/// Qubit map on Bloch coordinates: x' = l1 x, y' = l2 y, z' = l3 z + t.
struct PauliDiagonalMap {
  double lambda1;
  double lambda2;
  double lambda3;
  double t;
};

/// case 1: two contact points (requires 0 < u < v);
/// case 2: a single contact point at the north pole (v ignored);
/// case 3: a contact circle (positive, not completely positive for u, v != 0).
inline PauliDiagonalMap qubit_family(int family, double u, double v = 0.0) {
  if (!std::isfinite(u) || !std::isfinite(v)) throw InputError("qubit_family: non-finite parameters");
  switch (family) {
    case 1:
      if (!(0 < u && u < v)) throw InputError("qubit_family: case 1 requires 0 < u < v");
      return {std::cos(u), std::cos(v), std::cos(u) * std::cos(v), std::sin(u) * std::sin(v)};
    case 2: {
      const double c = std::cos(u), s = std::sin(u);
      return {c, c, c * c, s * s};
    }
    case 3: {
      const double cu = std::cos(u), cv = std::cos(v);
      const double q = std::sqrt(1.0 - cu * cu * cv * cv);
      const double sv = std::sin(v);
      return {q, q, std::sin(u) * q, std::sin(u) * sv * sv};
    }
    default:
      throw InputError("qubit_family: case must be 1, 2 or 3");
  }
}

/// Bloch-ball affine map; the unit sphere goes to the ellipsoid
/// (x/l1)^2 + (y/l2)^2 + ((z - t)/l3)^2 = 1.
inline AffineBallMap to_bloch_affine(const PauliDiagonalMap& m) {
  RealMatrix a = RealMatrix::Zero(3, 3);
  a(0, 0) = m.lambda1;
  a(1, 1) = m.lambda2;
  a(2, 2) = m.lambda3;
  RealVector b = RealVector::Zero(3);
  b[2] = m.t;
  return AffineBallMap(a, b);
}

struct QubitChannel {
  SuperOpMatrix superop;
  double min_choi_eigenvalue;
  bool completely_positive;
  std::optional<KrausChannel> kraus;  ///< present iff completely positive
};

/// Superoperator in the (I, sigma1, sigma2, sigma3)/sqrt(2) basis:
/// diag(1, l1, l2, l3) with t in the (sigma3, I) entry.
inline SuperOpMatrix pauli_superop(const PauliDiagonalMap& m) {
  RealMatrix s = RealMatrix::Zero(4, 4);
  s(0, 0) = 1.0;
  s(1, 1) = m.lambda1;
  s(2, 2) = m.lambda2;
  s(3, 3) = m.lambda3;
  s(3, 0) = m.t;
  return SuperOpMatrix(2, s);
}

inline QubitChannel to_channel(const PauliDiagonalMap& m, double tol = kDefaultTol) {
  SuperOpMatrix s = pauli_superop(m);
  const ChoiMatrix c = choi_of_map(s);
  const PsdReport rep = psd_report(c.op(), tol);
  std::optional<KrausChannel> k;
  if (rep.is_psd) k = kraus_from_choi(c, tol);
  return {std::move(s), rep.min_eigenvalue, rep.is_psd, std::move(k)};
}

/// Three 3x3 Kraus operators; sum V_i V_i^dagger = I for every alpha.
inline KrausChannel example33(double alpha) {
  if (!std::isfinite(alpha)) throw InputError("example33: alpha must be finite");
  const double r3 = 1.0 / std::sqrt(3.0), r2 = 1.0 / std::sqrt(2.0);
  const double c = 1.0 / std::sqrt(1.0 + alpha * alpha);
  ComplexMatrix v1 = ComplexMatrix::Zero(3, 3), v2 = ComplexMatrix::Zero(3, 3), v3 = ComplexMatrix::Zero(3, 3);
  v1(0, 0) = r3;
  v1(1, 1) = r2;
  v1(2, 2) = c;
  v2(0, 1) = r3;
  v2(1, 2) = r2;
  v2(2, 0) = alpha * c;
  v3(0, 2) = r3;
  return KrausChannel({v1, v2, v3});
}

/// Random trace-preserving channel with s Kraus operators: [V_1 ... V_s] are
/// the first n rows of a Haar unitary of size n*s.
inline KrausChannel random_channel(int n, int s, Rng& rng) {
  if (n < 1 || s < 1) throw InputError("random_channel: n and s must be >= 1");
  const ComplexMatrix w = haar_unitary(n * s, rng).topRows(n);
  std::vector<ComplexMatrix> ops;
  for (int i = 0; i < s; ++i) ops.push_back(w.middleCols(i * n, n));
  return KrausChannel(std::move(ops));
}

}  // namespace posmaps
