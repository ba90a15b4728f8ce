#pragma once

// Linear maps on operators: Kraus channels (convention A rho = sum V_i^dagger
// rho V_i, "dagger-left"), Choi matrices, and real superoperator matrices in
// the Hermitian basis. Any type modelling OperatorMap can be converted to the
// other representations.
//
// vec is column stacking over matrix units: vec(K)[j*n + m] = K(m, j). The
// Choi matrix of a map is C = sum_{jk} E_jk (x) map(E_jk), i.e.
// C(j*n + m, k*n + l) = map(E_jk)(m, l); for a Kraus channel this equals
// sum_i |vec(V_i^dagger)><vec(V_i^dagger)|.

#include <concepts>
#include <optional>
#include <string>
#include <vector>

#include "posmaps/operators.hpp"

namespace posmaps {

/// Complex-linear map on gl(n) that preserves Hermiticity, together with its
/// Hilbert-Schmidt adjoint.
template <class M>
concept OperatorMap = requires(const M& m, const ComplexMatrix& x) {
  { m.dim() } -> std::convertible_to<int>;
  { m.apply(x) } -> std::convertible_to<ComplexMatrix>;
  { m.apply_adjoint(x) } -> std::convertible_to<ComplexMatrix>;
};

inline ComplexVector vec(const ComplexMatrix& k) {
  return Eigen::Map<const ComplexVector>(k.data(), k.size());
}

inline ComplexMatrix unvec(const ComplexVector& v, int n) {
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

enum class DaggerConvention { Left, Right };

class KrausChannel {
 public:
  KrausChannel() = default;

  /// `convention == Right` means the operators were given for rho -> sum K rho K^dagger;
  /// they are stored as V = K^dagger.
  explicit KrausChannel(std::vector<ComplexMatrix> ops,
                        DaggerConvention convention = DaggerConvention::Left) {
    if (ops.empty()) throw InputError("KrausChannel: empty Kraus list");
    const Eigen::Index n = ops.front().rows();
    bool any_nonzero = false;
    for (size_t i = 0; i < ops.size(); ++i) {
      require_square_finite(ops[i], "KrausChannel operator " + std::to_string(i));
      if (ops[i].rows() != n) {
        throw InputError("KrausChannel: operator " + std::to_string(i) + " has dimension " +
                         std::to_string(ops[i].rows()) + ", expected " + std::to_string(n));
      }
      if (convention == DaggerConvention::Right) ops[i] = ops[i].adjoint().eval();
      any_nonzero = any_nonzero || ops[i].norm() > 0;
    }
    if (!any_nonzero) throw InputError("KrausChannel: all Kraus operators are zero");
    ops_ = std::move(ops);
  }

  int dim() const { return static_cast<int>(ops_.front().rows()); }
  size_t size() const { return ops_.size(); }
  const std::vector<ComplexMatrix>& ops() const { return ops_; }

  ComplexMatrix apply(const ComplexMatrix& x) const {
    ComplexMatrix out = ComplexMatrix::Zero(dim(), dim());
    for (const auto& v : ops_) out.noalias() += v.adjoint() * x * v;
    return out;
  }

  ComplexMatrix apply_adjoint(const ComplexMatrix& y) const {
    ComplexMatrix out = ComplexMatrix::Zero(dim(), dim());
    for (const auto& v : ops_) out.noalias() += v * y * v.adjoint();
    return out;
  }

 private:
  std::vector<ComplexMatrix> ops_;
};

class ChoiMatrix {
 public:
  ChoiMatrix() = default;
  ChoiMatrix(int n, HermitianOp m) : n_(n), m_(std::move(m)) {
    if (n <= 0) throw InputError("ChoiMatrix: n must be positive");
    if (m_.dim() != n * n) {
      throw InputError("ChoiMatrix: matrix has dimension " + std::to_string(m_.dim()) +
                       ", expected n^2 = " + std::to_string(n * n));
    }
  }

  int dim() const { return n_; }
  const HermitianOp& op() const { return m_; }
  const ComplexMatrix& matrix() const { return m_.matrix(); }

 private:
  int n_ = 0;
  HermitianOp m_;
};

/// Real n^2 x n^2 matrix of an R-linear map on Hermitian operators in the
/// hermitian_basis(n) ordering; acts complex-linearly on gl(n).
class SuperOpMatrix {
 public:
  SuperOpMatrix() = default;
  SuperOpMatrix(int n, RealMatrix m) : n_(n), m_(std::move(m)) {
    if (n <= 0) throw InputError("SuperOpMatrix: n must be positive");
    if (m_.rows() != n * n || m_.cols() != n * n) {
      throw InputError("SuperOpMatrix: matrix is " + std::to_string(m_.rows()) + "x" +
                       std::to_string(m_.cols()) + ", expected " + std::to_string(n * n) + "x" +
                       std::to_string(n * n));
    }
    if (!m_.allFinite()) throw InputError("SuperOpMatrix: non-finite entries");
  }

  int dim() const { return n_; }
  const RealMatrix& matrix() const { return m_; }

  ComplexMatrix apply(const ComplexMatrix& x) const {
    return from_basis_coordinates(m_.cast<Complex>() * basis_coordinates(x), n_);
  }
  ComplexMatrix apply_adjoint(const ComplexMatrix& y) const {
    return from_basis_coordinates(m_.transpose().cast<Complex>() * basis_coordinates(y), n_);
  }

 private:
  int n_ = 0;
  RealMatrix m_;
};

/// map o transposition: X -> map(X^T).
template <OperatorMap M>
class TransposeComposed {
 public:
  explicit TransposeComposed(M inner) : inner_(std::move(inner)) {}
  int dim() const { return inner_.dim(); }
  ComplexMatrix apply(const ComplexMatrix& x) const { return inner_.apply(x.transpose()); }
  ComplexMatrix apply_adjoint(const ComplexMatrix& y) const {
    return inner_.apply_adjoint(y).transpose();
  }
  const M& inner() const { return inner_; }

 private:
  M inner_;
};

/// The transposition map rho -> rho^T.
struct TranspositionMap {
  int n;
  int dim() const { return n; }
  ComplexMatrix apply(const ComplexMatrix& x) const { return x.transpose(); }
  ComplexMatrix apply_adjoint(const ComplexMatrix& y) const { return y.transpose(); }
};

/// The completely depolarizing map rho -> Tr(rho) I / n.
struct DepolarizingMap {
  int n;
  int dim() const { return n; }
  ComplexMatrix apply(const ComplexMatrix& x) const {
    return x.trace() / static_cast<double>(n) * ComplexMatrix::Identity(n, n);
  }
  ComplexMatrix apply_adjoint(const ComplexMatrix& y) const {
    return y.trace() / static_cast<double>(n) * ComplexMatrix::Identity(n, n);
  }
};

template <OperatorMap M>
HermitianOp apply(const M& map, const HermitianOp& rho) {
  if (rho.dim() != map.dim()) {
    throw InputError("apply: operator dimension " + std::to_string(rho.dim()) +
                     " does not match map dimension " + std::to_string(map.dim()));
  }
  return HermitianOp(map.apply(rho.matrix()));
}

inline ChoiMatrix choi_of(const KrausChannel& ch) {
  const int n = ch.dim();
  ComplexMatrix c = ComplexMatrix::Zero(n * n, n * n);
  for (const auto& v : ch.ops()) {
    const ComplexVector w = vec(v.adjoint());
    c.noalias() += w * w.adjoint();
  }
  return ChoiMatrix(n, HermitianOp(c));
}

/// Choi matrix of an arbitrary map from its action on matrix units.
template <OperatorMap M>
ChoiMatrix choi_of_map(const M& map) {
  const int n = map.dim();
  ComplexMatrix c(n * n, n * n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      ComplexMatrix e = ComplexMatrix::Zero(n, n);
      e(j, k) = 1.0;
      c.block(j * n, k * n, n, n) = map.apply(e);
    }
  }
  return ChoiMatrix(n, HermitianOp(c));
}

/// The map whose Choi matrix is C: X -> sum_jk X(j,k) C_jk with C_jk the (j,k) block.
class ChoiMap {
 public:
  explicit ChoiMap(ChoiMatrix c) : c_(std::move(c)) {}
  int dim() const { return c_.dim(); }
  ComplexMatrix apply(const ComplexMatrix& x) const {
    const int n = dim();
    ComplexMatrix y = ComplexMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) y += x(j, k) * c_.matrix().block(j * n, k * n, n, n);
    return y;
  }
  ComplexMatrix apply_adjoint(const ComplexMatrix& y) const {
    const int n = dim();
    ComplexMatrix x(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) x(j, k) = (c_.matrix().block(j * n, k * n, n, n).adjoint() * y).trace();
    return x;
  }

 private:
  ChoiMatrix c_;
};

/// Kraus operators from the spectral decomposition of a psd Choi matrix.
/// Eigenvalues below tol * Tr(C) are dropped; the operators are mutually
/// Hilbert-Schmidt orthogonal.
inline KrausChannel kraus_from_choi(const ChoiMatrix& c, double tol = kDefaultTol) {
  const PsdReport rep = psd_report(c.op(), tol);
  if (!rep.is_psd) {
    throw NotCompletelyPositive("kraus_from_choi: Choi matrix is not positive semi-definite, min eigenvalue " +
                                    std::to_string(rep.min_eigenvalue),
                                rep.min_eigenvalue);
  }
  const double tr = c.op().trace();
  if (!(tr > 0)) throw InputError("kraus_from_choi: zero map has no Kraus form");
  const int n = c.dim();
  std::vector<ComplexMatrix> ops;
  for (const auto& p : spectral_decompose(c.op())) {
    if (p.value <= tol * tr) break;
    // the eigenvector is vec(V^dagger)
    ops.push_back(unvec(std::sqrt(p.value) * p.vector, n).adjoint());
  }
  return KrausChannel(std::move(ops));
}

struct TraceInvariants {
  double op_trace;
  double kraus_trace_sum;
  double spectral_trace;
};

/// Trace of an operator map over the matrix-unit basis of gl(n): sum_jk map(E_jk)(j,k).
template <OperatorMap M>
Complex superop_trace(const M& map) {
  const int n = map.dim();
  Complex t = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      ComplexMatrix e = ComplexMatrix::Zero(n, n);
      e(j, k) = 1.0;
      t += map.apply(e)(j, k);
    }
  return t;
}

inline double spectral_trace(const KrausChannel& ch) {
  double s = 0.0;
  for (const auto& v : ch.ops()) s += v.squaredNorm();
  return s;
}

inline TraceInvariants trace_invariants(const KrausChannel& ch) {
  double kraus_sum = 0.0;
  for (const auto& v : ch.ops()) kraus_sum += std::norm(v.trace());
  return {superop_trace(ch).real(), kraus_sum, spectral_trace(ch)};
}

/// Rescales to unit spectral trace.
inline KrausChannel normalize(const KrausChannel& ch) {
  const double s = spectral_trace(ch);
  if (!(s > 0)) throw InputError("normalize: zero channel");
  std::vector<ComplexMatrix> ops;
  for (const auto& v : ch.ops()) ops.push_back(v / std::sqrt(s));
  return KrausChannel(std::move(ops));
}

struct TpUnitalReport {
  bool trace_preserving;
  bool unital;
  double tp_residual;      ///< ||map^*(I) - I||_F  (= ||sum V V^dagger - I|| for Kraus)
  double unital_residual;  ///< ||map(I) - I||_F    (= ||sum V^dagger V - I|| for Kraus)
};

template <OperatorMap M>
TpUnitalReport tp_unital_report(const M& map, double tol = kDefaultTol) {
  const int n = map.dim();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const double tp = (map.apply_adjoint(id) - id).norm();
  const double un = (map.apply(id) - id).norm();
  return {tp <= tol, un <= tol, tp, un};
}

/// Entry (a, b) = Tr(basis_a map(basis_b)).
template <OperatorMap M>
SuperOpMatrix superop_matrix(const M& map) {
  const int n = map.dim();
  const auto& basis = detail::hermitian_basis_cached(n);
  const int d = n * n;
  RealMatrix s(d, d);
  for (int b = 0; b < d; ++b) {
    const ComplexVector c = basis_coordinates(map.apply(basis[b].matrix()));
    s.col(b) = c.real();
  }
  return SuperOpMatrix(n, std::move(s));
}

}  // namespace posmaps
