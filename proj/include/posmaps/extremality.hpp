#pragma once

// Extremality certificates for completely positive maps.
//
//  * choi_extremality: linear independence of {V_i^dagger V_j} (unital),
//    {V_i V_j^dagger} (trace preserving), of the pairs
//    V_i^dagger V_j (+) V_j V_i^dagger (bistochastic), or Choi rank one
//    (extreme rays of the CP cone).
//  * invertible_extreme_report: the equivalent conditions "inverse is CP",
//    "single invertible Kraus operator", and "n+1 pure states in general
//    position mapped to rank-one operators in general position".
//  * find_pure_images / fix_extreme_certificate: pure states whose image is
//    (proportional to) a pure state, and the affine-rank certificate built
//    from them.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "posmaps/channels.hpp"
#include "posmaps/random.hpp"
#include "posmaps/states.hpp"

namespace posmaps {

enum class ExtremalityMode { Unital, TracePreserving, Bistochastic, Cone };

inline std::string to_string(ExtremalityMode m) {
  switch (m) {
    case ExtremalityMode::Unital: return "unital";
    case ExtremalityMode::TracePreserving: return "trace_preserving";
    case ExtremalityMode::Bistochastic: return "bistochastic";
    case ExtremalityMode::Cone: return "cone";
  }
  return "unknown";
}

inline ExtremalityMode parse_mode(const std::string& s) {
  if (s == "unital") return ExtremalityMode::Unital;
  if (s == "tp" || s == "trace_preserving") return ExtremalityMode::TracePreserving;
  if (s == "bistochastic") return ExtremalityMode::Bistochastic;
  if (s == "cone") return ExtremalityMode::Cone;
  throw InputError("unknown extremality mode '" + s + "'");
}

/// Relative singular-value threshold for linear independence decisions.
inline constexpr double kIndependenceTol = 1e-8;

struct ExtremalityReport {
  ExtremalityMode mode;
  bool extreme;
  int gram_rank;
  int gram_size;
  /// Smallest of the gram_size singular values of the family (0 when the
  /// family has more members than the ambient dimension). In cone mode: the
  /// second Choi eigenvalue.
  double min_singular_value;
};

namespace detail {

inline RealVector singular_values(const ComplexMatrix& m) {
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

}  // namespace detail

inline ExtremalityReport choi_extremality(const KrausChannel& ch, ExtremalityMode mode,
                                          double tol = kDefaultTol) {
  const ChoiMatrix choi = choi_of(ch);
  if (mode == ExtremalityMode::Cone) {
    const PsdReport rep = psd_report(choi.op(), tol);
    const RealVector ev = eigenvalues_desc(choi.matrix());
    return {mode, rep.numeric_rank == 1, rep.numeric_rank, 1, ev.size() > 1 ? ev[1] : 0.0};
  }

  const TpUnitalReport pre = tp_unital_report(ch, tol);
  const bool need_unital = mode == ExtremalityMode::Unital || mode == ExtremalityMode::Bistochastic;
  const bool need_tp = mode == ExtremalityMode::TracePreserving || mode == ExtremalityMode::Bistochastic;
  if (need_unital && !pre.unital) throw ModeError("unital (sum V^dagger V = I)", pre.unital_residual);
  if (need_tp && !pre.trace_preserving) {
    throw ModeError("trace_preserving (sum V V^dagger = I)", pre.tp_residual);
  }

  // canonical spectral Kraus set
  const KrausChannel spectral = kraus_from_choi(choi, tol);
  const auto& v = spectral.ops();
  const int s = static_cast<int>(v.size());
  const int n = ch.dim();
  const int width = (mode == ExtremalityMode::Bistochastic ? 2 : 1) * n * n;
  ComplexMatrix family(s * s, width);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      const int row = i * s + j;
      if (mode == ExtremalityMode::Unital) {
        family.row(row) = vec(v[i].adjoint() * v[j]).transpose();
      } else if (mode == ExtremalityMode::TracePreserving) {
        family.row(row) = vec(v[i] * v[j].adjoint()).transpose();
      } else {
        family.row(row).head(n * n) = vec(v[i].adjoint() * v[j]).transpose();
        family.row(row).tail(n * n) = vec(v[j] * v[i].adjoint()).transpose();
      }
    }
  }
  const RealVector sv = detail::singular_values(family);
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv[k] > kIndependenceTol * sv[0]) ++rank;
  const int size = s * s;
  const double min_sv = size <= sv.size() ? sv[size - 1] : 0.0;
  return {mode, rank == size, rank, size, min_sv};
}

// ---------------------------------------------------------------------------
// Pure-image search

struct PureImageOptions {
  double witness_residual = 1e-8;      ///< a minimum is a witness below this residual
  double dedup_fidelity = 1.0 - 1e-6;  ///< witnesses closer than this are merged
  int max_iterations = 2000;
};

struct PureImageWitness {
  PureState input;
  PureState image;     ///< normalized image (dominant eigenvector of map(|x><x|))
  double image_trace;  ///< Tr map(|x><x|)
  double residual;     ///< 1 - purity of the normalized image
};

struct PureImageResult {
  std::vector<PureImageWitness> witnesses;
  double best_residual;
  int annihilated;  ///< restarts abandoned because the image trace vanished
  int restarts;
  std::uint64_t seed;
};

namespace detail {

struct ImageEval {
  double residual;
  double trace;
  double trace_sq;
  ComplexMatrix image;
};

template <OperatorMap M>
ImageEval eval_image(const M& map, const ComplexVector& x) {
  ComplexMatrix b = map.apply(x * x.adjoint());
  b = 0.5 * (b + b.adjoint()).eval();
  const double t1 = b.trace().real();
  const double t2 = b.squaredNorm();
  const double r = t1 > 0 ? std::max(0.0, 1.0 - t2 / (t1 * t1)) : 1.0;
  return {r, t1, t2, std::move(b)};
}

/// Local maximization of the image purity over the unit sphere of C^n,
/// carried out as descent on log(1 - purity) along the projected gradient
/// with Armijo backtracking.
template <OperatorMap M>
std::optional<std::pair<ComplexVector, ImageEval>> ascend_purity(const M& map, ComplexVector x,
                                                                 const ComplexMatrix& adj_identity,
                                                                 double trace_floor,
                                                                 int max_iterations) {
  ImageEval cur = eval_image(map, x);
  if (cur.trace <= trace_floor) return std::nullopt;
  double step = -1.0;
  constexpr double kFloor = 1e-300;
  for (int it = 0; it < max_iterations && cur.residual > 1e-15; ++it) {
    const double t1 = cur.trace;
    // Wirtinger gradient of Tr(B^2)/Tr(B)^2 with respect to conj(x)
    ComplexVector g = (2.0 / (t1 * t1)) * (map.apply_adjoint(cur.image) * x) -
                      (2.0 * cur.trace_sq / (t1 * t1 * t1)) * (adj_identity * x);
    g -= x.dot(g).real() * x;
    const ComplexVector d = g / std::max(cur.residual, kFloor);
    const double dn2 = d.squaredNorm();
    if (!(dn2 > 0) || !std::isfinite(dn2)) break;
    if (step < 0) step = 0.1 / std::sqrt(dn2);
    const double l0 = std::log(std::max(cur.residual, kFloor));
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      ComplexVector y = x + step * d;
      y /= y.norm();
      ImageEval cand = eval_image(map, y);
      if (cand.trace > trace_floor &&
          std::log(std::max(cand.residual, kFloor)) <= l0 - 2e-4 * step * dn2) {
        x = std::move(y);
        cur = std::move(cand);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    step *= 2.0;
  }
  return std::make_pair(std::move(x), std::move(cur));
}

inline bool lex_less(const ComplexVector& a, const ComplexVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

}  // namespace detail

/// Multistart search for pure states x with map(|x><x|) rank one. Restart r
/// draws its start from sub-stream r of `seed`, so the result does not depend
/// on the order in which restarts are evaluated.
template <OperatorMap M>
PureImageResult find_pure_images(const M& map, int restarts, std::uint64_t seed,
                                 const PureImageOptions& opt = {}) {
  if (restarts < 1) throw InputError("find_pure_images: restarts must be >= 1");
  const int n = map.dim();
  const ComplexMatrix adj_id = map.apply_adjoint(ComplexMatrix::Identity(n, n));
  const double scale = std::max(1e-300, eigenvalues_desc(0.5 * (adj_id + adj_id.adjoint()))[0]);
  const double trace_floor = 1e-12 * scale;

  struct Candidate {
    ComplexVector x;
    detail::ImageEval eval;
  };
  std::vector<Candidate> candidates;
  double best = std::numeric_limits<double>::infinity();
  int annihilated = 0;
  for (int r = 0; r < restarts; ++r) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(r));
    auto res = detail::ascend_purity(map, random_unit_vector(n, rng), adj_id, trace_floor,
                                     opt.max_iterations);
    if (!res) {
      ++annihilated;
      continue;
    }
    best = std::min(best, res->second.residual);
    if (res->second.residual <= opt.witness_residual) {
      candidates.push_back({fix_phase(res->first), std::move(res->second)});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.eval.residual != b.eval.residual) return a.eval.residual < b.eval.residual;
    return detail::lex_less(a.x, b.x);
  });
  PureImageResult out{{}, best, annihilated, restarts, seed};
  for (auto& c : candidates) {
    PureState in(c.x);
    bool dup = false;
    for (const auto& w : out.witnesses) {
      if (fidelity(w.input, in) >= opt.dedup_fidelity) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    const auto top = spectral_decompose(HermitianOp(c.eval.image)).front();
    out.witnesses.push_back({std::move(in), PureState(top.vector), c.eval.trace, c.eval.residual});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Invertible extreme maps

/// Tolerance for rank and general-position decisions on witness-derived data,
/// whose accuracy is limited by the witness residual.
inline constexpr double kWitnessTol = 1e-6;

struct Theorem5Report {
  bool cond_a_inverse_cp;
  bool cond_b_single_invertible_kraus;
  bool cond_de_rank_one_images;
  /// True when cond_de is false only because no witness set turned up within
  /// the restart budget; this is not a disproof.
  bool cond_de_not_found_within_budget;
  std::vector<PureImageWitness> witnesses;
  bool consistent;
};

namespace detail {

inline bool is_invertible(const ComplexMatrix& m) {
  const RealVector sv = singular_values(m);
  return sv[0] > 0 && sv[sv.size() - 1] > kIndependenceTol * sv[0];
}

/// First n+1 witnesses (in combination order, capped) whose inputs and images
/// are both in general position.
inline std::optional<std::vector<PureImageWitness>> general_position_subset(
    const std::vector<PureImageWitness>& w, int n, long max_subsets = 200000) {
  const int k = static_cast<int>(w.size());
  const int m = n + 1;
  if (k < m) return std::nullopt;
  std::vector<int> idx(m);
  for (int i = 0; i < m; ++i) idx[i] = i;
  for (long count = 0; count < max_subsets; ++count) {
    std::vector<ComplexVector> in, out;
    for (int i : idx) {
      in.push_back(w[i].input.vector());
      out.push_back(w[i].image.vector());
    }
    if (general_position_vectors(in, kWitnessTol) && general_position_vectors(out, kWitnessTol)) {
      std::vector<PureImageWitness> sel;
      for (int i : idx) sel.push_back(w[i]);
      return sel;
    }
    int i = m - 1;
    while (i >= 0 && idx[i] == k - m + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
  return std::nullopt;
}

}  // namespace detail

inline Theorem5Report invertible_extreme_report(const KrausChannel& ch, int budget, std::uint64_t seed,
                                                double tol = kDefaultTol) {
  const int n = ch.dim();

  // (a) superoperator invertible with completely positive inverse
  bool cond_a = false;
  const SuperOpMatrix s = superop_matrix(ch);
  {
    Eigen::BDCSVD<RealMatrix> svd(s.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector& sv = svd.singularValues();
    if (sv[0] > 0 && sv[sv.size() - 1] > kIndependenceTol * sv[0]) {
      const double cond = sv[0] / sv[sv.size() - 1];
      const SuperOpMatrix inv(n, s.matrix().inverse());
      const ChoiMatrix c_inv = choi_of_map(inv);
      const double psd_tol = std::max(tol, 1e3 * std::numeric_limits<double>::epsilon() * cond);
      cond_a = psd_report(c_inv.op(), psd_tol).is_psd;
    }
  }

  // (b) Choi rank one with an invertible Kraus operator
  bool cond_b = false;
  const ChoiMatrix choi = choi_of(ch);
  if (psd_report(choi.op(), tol).numeric_rank == 1) {
    const KrausChannel single = kraus_from_choi(choi, tol);
    cond_b = single.size() == 1 && detail::is_invertible(single.ops().front());
  }

  // (d)/(e) n+1 pure states in general position with rank-one images in general position
  const PureImageResult pure = find_pure_images(ch, budget, seed);
  const auto subset = detail::general_position_subset(pure.witnesses, n);
  const bool cond_de = subset.has_value();

  Theorem5Report rep{cond_a, cond_b, cond_de, !cond_de, subset.value_or(std::vector<PureImageWitness>{}),
                     cond_a == cond_b && cond_de == cond_b};
  return rep;
}

// ---------------------------------------------------------------------------
// Fix-extreme certificate

struct FixExtremeCertificate {
  int pure_image_count;
  int image_affine_rank;
  bool certified;  ///< image_affine_rank >= n^2
  PureImageResult search;
};

/// Pure states found in the image of the state space and the affine rank of
/// that set inside the (n^2 - 1)-dimensional affine space of unit-trace
/// Hermitian operators. n^2 affinely independent pure images certify an
/// extreme positive map.
template <OperatorMap M>
FixExtremeCertificate fix_extreme_certificate(const M& map, int restarts, std::uint64_t seed,
                                              double tol = kDefaultTol) {
  const TpUnitalReport pre = tp_unital_report(map, tol);
  if (!pre.trace_preserving) throw ModeError("trace_preserving", pre.tp_residual);
  PureImageResult search = find_pure_images(map, restarts, seed);
  std::vector<HermitianOp> images;
  for (const auto& w : search.witnesses) images.push_back(w.image.op());
  const int rank = images.empty() ? 0 : affine_rank(images, kWitnessTol);
  const int n = map.dim();
  const int count = static_cast<int>(search.witnesses.size());
  return {count, rank, rank >= n * n, std::move(search)};
}

}  // namespace posmaps
