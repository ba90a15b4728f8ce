#pragma once

// Wigner maps rho -> U rho U^dagger and rho -> U rho^T U^dagger, their
// recognition from an arbitrary map, and the sampled checks that go with
// them (orthogonality, transition probabilities, the Hilbert-Schmidt norm
// bound over pure-state decompositions).

#include <cstdint>
#include <optional>
#include <string>

#include "posmaps/channels.hpp"
#include "posmaps/random.hpp"
#include "posmaps/states.hpp"

namespace posmaps {

enum class WignerBranch { Unitary, Antiunitary, NotWigner };

inline std::string to_string(WignerBranch b) {
  switch (b) {
    case WignerBranch::Unitary: return "Unitary";
    case WignerBranch::Antiunitary: return "Antiunitary";
    case WignerBranch::NotWigner: return "NotWigner";
  }
  return "unknown";
}

inline constexpr double kUnitaryTol = 1e-9;

inline double unitarity_residual(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
}

class WignerMap {
 public:
  WignerMap(ComplexMatrix u, WignerBranch branch) : u_(std::move(u)), branch_(branch) {
    require_square_finite(u_, "wigner_channel");
    if (branch == WignerBranch::NotWigner) throw InputError("wigner_channel: branch must be Unitary or Antiunitary");
    const double res = unitarity_residual(u_);
    if (res > kUnitaryTol) {
      throw InputError("wigner_channel: U is not unitary, ||U^dagger U - I|| = " + std::to_string(res));
    }
  }

  int dim() const { return static_cast<int>(u_.rows()); }
  WignerBranch branch() const { return branch_; }
  const ComplexMatrix& unitary() const { return u_; }

  ComplexMatrix apply(const ComplexMatrix& x) const {
    if (branch_ == WignerBranch::Unitary) return u_ * x * u_.adjoint();
    return u_ * x.transpose() * u_.adjoint();
  }
  ComplexMatrix apply_adjoint(const ComplexMatrix& y) const {
    ComplexMatrix z = u_.adjoint() * y * u_;
    if (branch_ == WignerBranch::Antiunitary) return z.transpose();
    return z;
  }

 private:
  ComplexMatrix u_;
  WignerBranch branch_;
};

inline WignerMap wigner_channel(const ComplexMatrix& u, WignerBranch branch) { return WignerMap(u, branch); }

struct OrthogonalityReport {
  bool orthogonal;
  double residual;  ///< ||S^T S - I||_F
};

inline OrthogonalityReport is_orthogonal_superop(const SuperOpMatrix& s, double tol = kDefaultTol) {
  const RealMatrix& m = s.matrix();
  const double r = (m.transpose() * m - RealMatrix::Identity(m.rows(), m.cols())).norm();
  return {r <= tol, r};
}

struct WignerClassification {
  WignerBranch branch;
  std::optional<ComplexMatrix> recovered_u;
  double orthogonality_residual;
  std::optional<PureState> positivity_witness;  ///< sampled pure state with non-psd image
  std::uint64_t seed;
};

/// |<vec U_a, vec U_b>| / n: 1 iff the unitaries agree up to global phase.
inline double unitary_recovery_fidelity(const ComplexMatrix& a, const ComplexMatrix& b) {
  return std::abs(vec(a).dot(vec(b))) / static_cast<double>(a.rows());
}

namespace detail {

/// If the Choi matrix of `map` is rank one psd with a unitary Kraus operator,
/// returns U with map(rho) = U rho U^dagger.
template <OperatorMap M>
std::optional<ComplexMatrix> rank_one_unitary(const M& map, double tol) {
  const ChoiMatrix c = choi_of_map(map);
  const PsdReport rep = psd_report(c.op(), tol);
  if (!rep.is_psd || rep.numeric_rank != 1) return std::nullopt;
  const auto top = spectral_decompose(c.op()).front();
  // eigenvector is vec(V^dagger) and map(rho) = V^dagger rho V, so U = V^dagger
  ComplexMatrix u = unvec(std::sqrt(top.value) * top.vector, map.dim());
  if (unitarity_residual(u) > std::max(kUnitaryTol, tol)) return std::nullopt;
  return fix_phase(u);
}

}  // namespace detail

/// Classifies a trace-preserving map. `samples` pure states drawn from `seed`
/// are used to look for a positivity violation when the map is not Wigner.
template <OperatorMap M>
WignerClassification classify_wigner(const M& map, double tol = kDefaultTol, int samples = 200,
                                     std::uint64_t seed = 0) {
  const TpUnitalReport pre = tp_unital_report(map, std::max(tol, 1e-9));
  if (!pre.trace_preserving) throw ModeError("trace_preserving", pre.tp_residual);
  const double orth = is_orthogonal_superop(superop_matrix(map), tol).residual;
  if (auto u = detail::rank_one_unitary(map, tol)) {
    return {WignerBranch::Unitary, *u, orth, std::nullopt, seed};
  }
  if (auto u = detail::rank_one_unitary(TransposeComposed<M>(map), tol)) {
    return {WignerBranch::Antiunitary, *u, orth, std::nullopt, seed};
  }
  std::optional<PureState> witness;
  for (int i = 0; i < samples && !witness; ++i) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(i));
    PureState p(random_unit_vector(map.dim(), rng));
    if (!psd_report(HermitianOp(map.apply(p.op().matrix())), tol).is_psd) witness = p;
  }
  return {WignerBranch::NotWigner, std::nullopt, orth, witness, seed};
}

struct TransitionReport {
  bool preserves;
  double max_deviation;
};

/// Samples random pure-state pairs and compares Tr(map(r1) map(r2)) with Tr(r1 r2).
template <OperatorMap M>
TransitionReport preserves_transition_probs(const M& map, int samples, std::uint64_t seed,
                                            double tol = 1e-9) {
  const int n = map.dim();
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(i));
    const PureState a(random_unit_vector(n, rng));
    const PureState b(random_unit_vector(n, rng));
    const HermitianOp fa = apply(map, a.op());
    const HermitianOp fb = apply(map, b.op());
    worst = std::max(worst, std::abs(hs_inner(fa, fb) - hs_inner(a.op(), b.op())));
  }
  return {worst <= tol, worst};
}

struct NormLemmaReport {
  double max_score;        ///< max over trials of sum of squared weights
  double purity;           ///< Tr rho^2
  double gap_at_spectral;  ///< |sum mu_i^2 - Tr rho^2| for the spectral weights
};

/// Sum of squared weights over random k-term pure decompositions never
/// exceeds the purity, and the spectral decomposition attains it.
/// k defaults to the numeric rank of rho.
inline NormLemmaReport norm_lemma_check(const DensityState& rho, int trials, std::uint64_t seed,
                                        std::optional<int> k = std::nullopt) {
  if (trials < 1) throw InputError("norm_lemma_check: trials must be >= 1");
  const int terms = k.value_or(psd_report(rho.op()).numeric_rank);
  double best = 0.0;
  for (int t = 0; t < trials; ++t) {
    double score = 0.0;
    for (const auto& wp : random_decomposition(rho, terms, splitmix64(seed + static_cast<std::uint64_t>(t))))
      score += wp.weight * wp.weight;
    best = std::max(best, score);
  }
  const double p = purity(rho);
  double spectral = 0.0;
  for (const auto& e : spectral_decompose(rho.op())) spectral += e.value * e.value;
  return {best, p, std::abs(spectral - p)};
}

}  // namespace posmaps
