#pragma once

// Complex matrices and Hermitian operators on a finite-dimensional Hilbert
// space: Hilbert-Schmidt geometry, spectra with explicit tolerances, and the
// orthonormal Hermitian basis used for superoperator matrices.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "posmaps/errors.hpp"

namespace posmaps {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kHermiticityRejection = 1e-6;

inline void require_square_finite(const ComplexMatrix& m, const std::string& what) {
  if (m.rows() != m.cols()) {
    throw InputError(what + ": matrix is " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ", expected square");
  }
  if (m.rows() == 0) throw InputError(what + ": empty matrix");
  if (!m.allFinite()) throw InputError(what + ": non-finite entries");
}

/// Multiplies `v` by a unit phase so that its first entry of largest modulus
/// is real and non-negative.
inline ComplexVector fix_phase(ComplexVector v) {
  if (v.size() == 0) return v;
  double best = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) best = std::max(best, std::abs(v[i]));
  if (best == 0.0) return v;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= best * (1.0 - 1e-12)) {
      const Complex phase = std::conj(v[i]) / std::abs(v[i]);
      v *= phase;
      v[i] = Complex(std::abs(v[i]), 0.0);
      break;
    }
  }
  return v;
}

/// Same convention applied to a matrix viewed as its row-major entry list.
inline ComplexMatrix fix_phase(const ComplexMatrix& m) {
  double best = 0.0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) best = std::max(best, std::abs(m(r, c)));
  if (best == 0.0) return m;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (std::abs(m(r, c)) >= best * (1.0 - 1e-12)) {
        ComplexMatrix out = m * (std::conj(m(r, c)) / std::abs(m(r, c)));
        out(r, c) = Complex(std::abs(out(r, c)), 0.0);
        return out;
      }
    }
  }
  return m;
}

/// Hermitian operator. The stored matrix is exactly Hermitian: input within
/// the rejection threshold is symmetrized as (A + A^dagger)/2.
class HermitianOp {
 public:
  HermitianOp() = default;

  explicit HermitianOp(const ComplexMatrix& m) {
    require_square_finite(m, "HermitianOp");
    const double norm = m.norm();
    const double skew = (m - m.adjoint()).norm();
    if (skew > kHermiticityRejection * norm) {
      throw InputError("HermitianOp: matrix is not Hermitian, ||A - A^dagger|| = " +
                       std::to_string(skew));
    }
    m_ = 0.5 * (m + m.adjoint());
  }

  static HermitianOp identity(int n) { return HermitianOp(ComplexMatrix::Identity(n, n)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }

  friend HermitianOp operator+(const HermitianOp& a, const HermitianOp& b) {
    return HermitianOp(a.m_ + b.m_);
  }
  friend HermitianOp operator-(const HermitianOp& a, const HermitianOp& b) {
    return HermitianOp(a.m_ - b.m_);
  }
  friend HermitianOp operator*(double s, const HermitianOp& a) { return HermitianOp(s * a.m_); }

 private:
  ComplexMatrix m_;
};

/// Hilbert-Schmidt product Tr(AB) of Hermitian operators.
inline double hs_inner(const HermitianOp& a, const HermitianOp& b) {
  if (a.dim() != b.dim()) {
    throw InputError("hs_inner: dimension mismatch " + std::to_string(a.dim()) + " vs " +
                     std::to_string(b.dim()));
  }
  return (a.matrix().cwiseProduct(b.matrix().transpose())).sum().real();
}

struct EigenPair {
  double value;
  ComplexVector vector;
};

/// Eigenpairs sorted by descending eigenvalue, eigenvectors phase-fixed.
inline std::vector<EigenPair> spectral_decompose(const HermitianOp& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) throw InputError("spectral_decompose: eigensolver failed");
  const int n = a.dim();
  std::vector<EigenPair> out;
  out.reserve(n);
  for (int i = n - 1; i >= 0; --i) {
    out.push_back({solver.eigenvalues()[i], fix_phase(ComplexVector(solver.eigenvectors().col(i)))});
  }
  return out;
}

/// Eigenvalues in descending order.
inline RealVector eigenvalues_desc(const ComplexMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

inline double operator_norm(const HermitianOp& a) {
  const RealVector ev = eigenvalues_desc(a.matrix());
  return std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
}

struct PsdReport {
  bool is_psd;
  double min_eigenvalue;
  int numeric_rank;
};

/// Tolerances are relative to max(1, operator norm).
inline PsdReport psd_report(const HermitianOp& a, double tol = kDefaultTol) {
  if (!(tol > 0)) throw InputError("psd_report: tol must be positive");
  const RealVector ev = eigenvalues_desc(a.matrix());
  const double lo = ev[ev.size() - 1];
  const double scale = std::max({1.0, std::abs(ev[0]), std::abs(lo)});
  int rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev[i]) > tol * scale) ++rank;
  return {lo >= -tol * scale, lo, rank};
}

namespace detail {

inline std::vector<HermitianOp> build_hermitian_basis(int n) {
  std::vector<HermitianOp> basis;
  basis.reserve(static_cast<size_t>(n) * n);
  basis.emplace_back(ComplexMatrix::Identity(n, n) / std::sqrt(static_cast<double>(n)));
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i1(0.0, 1.0);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(n, n);
      sym(j, k) = r;
      sym(k, j) = r;
      basis.emplace_back(sym);
      ComplexMatrix asym = ComplexMatrix::Zero(n, n);
      asym(j, k) = -i1 * r;
      asym(k, j) = i1 * r;
      basis.emplace_back(asym);
    }
  }
  for (int l = 1; l < n; ++l) {
    ComplexMatrix d = ComplexMatrix::Zero(n, n);
    const double c = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) d(j, j) = c;
    d(l, l) = -l * c;
    basis.emplace_back(d);
  }
  return basis;
}

inline const std::vector<HermitianOp>& hermitian_basis_cached(int n) {
  thread_local std::map<int, std::vector<HermitianOp>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_hermitian_basis(n)).first;
  return it->second;
}

}  // namespace detail

/// Orthonormal basis of the n^2-dimensional real space of Hermitian n x n
/// operators: I/sqrt(n), then for each j<k the symmetric and antisymmetric
/// off-diagonal pair, then the traceless diagonal (generalized Gell-Mann)
/// elements. For n=2 this is (I, sigma1, sigma2, sigma3)/sqrt(2).
inline std::vector<HermitianOp> hermitian_basis(int n) {
  if (n <= 0) throw InputError("hermitian_basis: n must be positive");
  return detail::hermitian_basis_cached(n);
}

/// Coordinates Tr(b_a X) of a (possibly non-Hermitian) matrix in the
/// Hermitian basis. Real for Hermitian X.
inline ComplexVector basis_coordinates(const ComplexMatrix& x) {
  const int n = static_cast<int>(x.rows());
  const auto& basis = detail::hermitian_basis_cached(n);
  ComplexVector c(static_cast<Eigen::Index>(basis.size()));
  for (size_t a = 0; a < basis.size(); ++a) {
    c[static_cast<Eigen::Index>(a)] = basis[a].matrix().cwiseProduct(x.transpose()).sum();
  }
  return c;
}

inline RealVector real_coordinates(const HermitianOp& x) { return basis_coordinates(x.matrix()).real(); }

inline ComplexMatrix from_basis_coordinates(const ComplexVector& c, int n) {
  const auto& basis = detail::hermitian_basis_cached(n);
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (size_t a = 0; a < basis.size(); ++a) out += c[static_cast<Eigen::Index>(a)] * basis[a].matrix();
  return out;
}

/// Entrywise transposition in the standard basis.
inline ComplexMatrix transpose_in_basis(const ComplexMatrix& a) { return a.transpose(); }

inline HermitianOp transpose_in_basis(const HermitianOp& a) {
  return HermitianOp(ComplexMatrix(a.matrix().transpose()));
}

/// Numerical rank of a real matrix by singular values above rel_tol * max(1, sigma_max).
inline int numeric_rank(const RealMatrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<RealMatrix> svd(m);
  const RealVector& s = svd.singularValues();
  const double scale = std::max(1.0, s.size() ? s[0] : 0.0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > rel_tol * scale) ++r;
  return r;
}

}  // namespace posmaps
