#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "posmaps/operators.hpp"
#include "posmaps/random.hpp"

namespace posmaps {

inline constexpr double kTraceTol = 1e-10;
/// A psd operator counts as rank one when lambda_2 <= kRankOneRatio * lambda_1.
inline constexpr double kRankOneRatio = 1e-8;

/// Positive semi-definite, unit-trace Hermitian operator.
class DensityState {
 public:
  explicit DensityState(HermitianOp op, double tol = kDefaultTol) : op_(std::move(op)) {
    const double tr = op_.trace();
    if (std::abs(tr - 1.0) > kTraceTol) {
      throw InputError("DensityState: invariant 'unit trace' failed, trace = " + std::to_string(tr));
    }
    const PsdReport rep = psd_report(op_, tol);
    if (!rep.is_psd) {
      throw InputError("DensityState: invariant 'positive semi-definite' failed, min eigenvalue = " +
                       std::to_string(rep.min_eigenvalue));
    }
  }

  int dim() const { return op_.dim(); }
  const HermitianOp& op() const { return op_; }
  const ComplexMatrix& matrix() const { return op_.matrix(); }

 private:
  HermitianOp op_;
};

/// Rank-one projector |x><x| with a cached unit representative x (phase fixed).
class PureState {
 public:
  explicit PureState(const ComplexVector& x) {
    if (x.size() == 0) throw InputError("PureState: empty vector");
    if (!x.allFinite()) throw InputError("PureState: non-finite entries");
    const double nrm = x.norm();
    if (!(nrm > 0)) throw InputError("PureState: zero vector");
    vec_ = fix_phase(ComplexVector(x / nrm));
    op_ = HermitianOp(ComplexMatrix(vec_ * vec_.adjoint()));
  }

  int dim() const { return op_.dim(); }
  const HermitianOp& op() const { return op_; }
  const ComplexVector& vector() const { return vec_; }
  DensityState density() const { return DensityState(op_); }

 private:
  ComplexVector vec_;
  HermitianOp op_;
};

inline PureState pure_from_vector(const ComplexVector& x) { return PureState(x); }

/// |<x|y>|^2 for unit representatives.
inline double fidelity(const PureState& a, const PureState& b) {
  return std::norm(a.vector().dot(b.vector()));
}

inline double purity(const DensityState& rho) { return hs_inner(rho.op(), rho.op()); }

/// Representative vector of a rank-one psd operator, or throws naming `index`.
inline ComplexVector rank_one_representative(const HermitianOp& op, size_t index) {
  const auto pairs = spectral_decompose(op);
  const double top = pairs.front().value;
  const double second = pairs.size() > 1 ? std::abs(pairs[1].value) : 0.0;
  const double bottom = pairs.back().value;
  if (!(top > 0) || second > kRankOneRatio * top || bottom < -kRankOneRatio * top) {
    throw InputError("general_position: operator " + std::to_string(index) +
                     " is not rank one psd (eigenvalues " + std::to_string(top) + ", " +
                     std::to_string(second) + ")");
  }
  return pairs.front().vector;
}

/// True iff every n of the (normalized) vectors have |det| > tol.
inline bool general_position_vectors(const std::vector<ComplexVector>& vecs, double tol = kDefaultTol) {
  if (vecs.empty()) throw InputError("general_position: empty list");
  const int n = static_cast<int>(vecs.front().size());
  if (static_cast<int>(vecs.size()) < n) {
    throw InputError("general_position: need at least n = " + std::to_string(n) + " operators, got " +
                     std::to_string(vecs.size()));
  }
  std::vector<ComplexVector> unit;
  unit.reserve(vecs.size());
  for (const auto& v : vecs) {
    if (v.size() != n) throw InputError("general_position: dimension mismatch");
    const double nrm = v.norm();
    if (!(nrm > 0)) return false;
    unit.push_back(v / nrm);
  }
  const int k = static_cast<int>(unit.size());
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  ComplexMatrix m(n, n);
  while (true) {
    for (int c = 0; c < n; ++c) m.col(c) = unit[idx[c]];
    if (!(std::abs(m.determinant()) > tol)) return false;
    int i = n - 1;
    while (i >= 0 && idx[i] == k - n + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  return true;
}

/// General position of rank-one psd operators: any n representative vectors form a basis.
inline bool general_position(const std::vector<HermitianOp>& ops, double tol = kDefaultTol) {
  if (ops.empty()) throw InputError("general_position: empty list");
  std::vector<ComplexVector> vecs;
  vecs.reserve(ops.size());
  for (size_t i = 0; i < ops.size(); ++i) vecs.push_back(rank_one_representative(ops[i], i));
  return general_position_vectors(vecs, tol);
}

/// Maximal number of affinely independent points among `points`.
inline int affine_rank(const std::vector<HermitianOp>& points, double tol = kDefaultTol) {
  if (points.empty()) throw InputError("affine_rank: empty list");
  const int n = points.front().dim();
  for (const auto& p : points)
    if (p.dim() != n) throw InputError("affine_rank: dimension mismatch");
  if (points.size() == 1) return 1;
  const RealVector p0 = real_coordinates(points.front());
  RealMatrix diff(static_cast<Eigen::Index>(points.size() - 1), p0.size());
  for (size_t i = 1; i < points.size(); ++i)
    diff.row(static_cast<Eigen::Index>(i - 1)) = (real_coordinates(points[i]) - p0).transpose();
  return 1 + numeric_rank(diff, tol);
}

/// Real-vector variant used for points of R^n.
inline int affine_rank(const std::vector<RealVector>& points, double tol = kDefaultTol) {
  if (points.empty()) return 0;
  if (points.size() == 1) return 1;
  RealMatrix diff(static_cast<Eigen::Index>(points.size() - 1), points.front().size());
  for (size_t i = 1; i < points.size(); ++i)
    diff.row(static_cast<Eigen::Index>(i - 1)) = (points[i] - points.front()).transpose();
  return 1 + numeric_rank(diff, tol);
}

struct WeightedPure {
  double weight;
  PureState state;
};

/// Random k-term pure-state decomposition of rho: the spectral ensemble
/// sqrt(mu_j)|z_j> (padded with zeros to k terms) is mixed by a Haar k x k
/// unitary, w_i = sum_j U_ji sqrt(mu_j) |z_j>. Every k-term decomposition
/// arises this way for some U.
inline std::vector<WeightedPure> random_decomposition(const DensityState& rho, int k,
                                                      std::uint64_t seed) {
  const auto pairs = spectral_decompose(rho.op());
  const double scale = std::max(1.0, std::abs(pairs.front().value));
  std::vector<const EigenPair*> kept;
  for (const auto& p : pairs)
    if (p.value > kDefaultTol * scale) kept.push_back(&p);
  const int rank = static_cast<int>(kept.size());
  if (k < rank) {
    throw InputError("random_decomposition: k = " + std::to_string(k) + " is below the rank " +
                     std::to_string(rank));
  }
  const int n = rho.dim();
  Rng rng = substream(seed, 0);
  const ComplexMatrix u = haar_unitary(k, rng);
  std::vector<WeightedPure> out;
  out.reserve(k);
  for (int i = 0; i < k; ++i) {
    ComplexVector w = ComplexVector::Zero(n);
    for (int j = 0; j < rank; ++j) w += u(j, i) * std::sqrt(kept[j]->value) * kept[j]->vector;
    const double weight = w.squaredNorm();
    if (weight > 1e-300) out.push_back({weight, PureState(w)});
  }
  return out;
}

}  // namespace posmaps
