#include <gtest/gtest.h>

#include "oracles.hpp"
#include "posmaps/catalog.hpp"
#include "posmaps/channels.hpp"
#include "posmaps/random.hpp"

using namespace posmaps;

namespace {

ComplexMatrix diag2(Complex a, Complex b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

/// Random Kraus list (not normalized) for property tests.
std::vector<ComplexMatrix> random_ops(int n, int s, Rng& rng) {
  std::vector<ComplexMatrix> ops;
  for (int i = 0; i < s; ++i) ops.push_back(random_ginibre(n, n, rng));
  return ops;
}

}  // namespace

TEST(ChannelApply, Examples) {
  Rng rng(1);
  const HermitianOp rho = random_density_matrix(2, 2, rng);
  EXPECT_LE((apply(KrausChannel({oracle::pauli(0)}), rho).matrix() - rho.matrix()).norm(), 1e-15);
  const HermitianOp flipped = apply(KrausChannel({oracle::pauli(1)}), HermitianOp(diag2(1, 0)));
  EXPECT_LE((flipped.matrix() - diag2(0, 1)).norm(), 1e-15);
}

TEST(ChannelApply, ThreeByThreeExampleOnMaximallyMixed) {
  const KrausChannel ch = example33(0.2);
  const HermitianOp out = apply(ch, HermitianOp(ComplexMatrix::Identity(3, 3) / 3.0));
  EXPECT_NEAR(out.trace(), 1.0, 1e-12);
  EXPECT_GE(oracle::min_eigenvalue(out.matrix()), -1e-12);
  EXPECT_LE((out.matrix() - oracle::apply_kraus(ch.ops(), ComplexMatrix::Identity(3, 3) / 3.0)).norm(), 1e-14);
}

TEST(ChannelApply, DimensionMismatchIsAnInputError) {
  EXPECT_THROW(apply(KrausChannel({oracle::pauli(0)}), HermitianOp::identity(3)), InputError);
}

TEST(KrausChannel, ValidatesOperators) {
  EXPECT_THROW(KrausChannel(std::vector<ComplexMatrix>{}), InputError);
  EXPECT_THROW(KrausChannel({ComplexMatrix::Zero(2, 2)}), InputError);
  EXPECT_THROW(KrausChannel({ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)}), InputError);
}

TEST(KrausChannel, DaggerRightConventionIsTheAdjoint) {
  Rng rng(3);
  const auto ops = random_ops(3, 2, rng);
  std::vector<ComplexMatrix> adj;
  for (const auto& k : ops) adj.push_back(k.adjoint());
  const KrausChannel right(ops, DaggerConvention::Right);
  const KrausChannel left(adj);
  const ComplexMatrix x = random_hermitian(3, rng).matrix();
  ComplexMatrix expected = ComplexMatrix::Zero(3, 3);
  for (const auto& k : ops) expected += k * x * k.adjoint();
  EXPECT_LE((right.apply(x) - expected).norm(), 1e-12);
  EXPECT_LE((superop_matrix(right).matrix() - superop_matrix(left).matrix()).norm(), 1e-12);
}

TEST(ChoiOf, Examples) {
  const ChoiMatrix id = choi_of(KrausChannel({oracle::pauli(0)}));
  const PsdReport r = psd_report(id.op());
  EXPECT_TRUE(r.is_psd);
  EXPECT_EQ(r.numeric_rank, 1);
  EXPECT_NEAR(id.op().trace(), 2.0, 1e-14);

  const ChoiMatrix two = choi_of(KrausChannel({oracle::pauli(1), oracle::pauli(3)}));
  EXPECT_EQ(psd_report(two.op()).numeric_rank, 2);
  EXPECT_NEAR(two.op().trace(), 4.0, 1e-14);
}

TEST(ChoiOf, MatchesBlockOracleAndSpectralTrace) {
  Rng rng(7);
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + t % 3, s = 1 + t % 4;
    const KrausChannel ch(random_ops(n, s, rng));
    const ComplexMatrix c = choi_of(ch).matrix();
    EXPECT_LE((c - oracle::choi_by_blocks(ch.ops())).norm(), 1e-12 * c.norm());
    EXPECT_LE((choi_of_map(ch).matrix() - c).norm(), 1e-12 * c.norm());
    ComplexMatrix vv = ComplexMatrix::Zero(n, n);
    for (const auto& v : ch.ops()) vv += v.adjoint() * v;
    EXPECT_NEAR(c.trace().real(), vv.trace().real(), 1e-12 * c.norm());
    EXPECT_NEAR(spectral_trace(ch), c.trace().real(), 1e-12 * c.norm());
  }
}

TEST(KrausFromChoi, IdentityRoundTrip) {
  const KrausChannel k = kraus_from_choi(choi_of(KrausChannel({oracle::pauli(0)})));
  ASSERT_EQ(k.size(), 1u);
  const ComplexMatrix& v = k.ops().front();
  EXPECT_LE((v - v(0, 0) * ComplexMatrix::Identity(2, 2)).norm(), 1e-14);
  EXPECT_NEAR(std::abs(v(0, 0)), 1.0, 1e-14);
}

TEST(KrausFromChoi, SwapIsNotCompletelyPositive) {
  const ComplexMatrix swap = oracle::choi_by_blocks(2, [](const ComplexMatrix& x) { return ComplexMatrix(x.transpose()); });
  try {
    kraus_from_choi(ChoiMatrix(2, HermitianOp(swap)));
    FAIL() << "transposition accepted as completely positive";
  } catch (const NotCompletelyPositive& e) {
    EXPECT_NEAR(e.min_eigenvalue(), -1.0, 1e-12);
    EXPECT_NEAR(oracle::min_eigenvalue(swap), -1.0, 1e-12);
  }
}

TEST(KrausFromChoi, RandomPsdRoundTrip) {
  Rng rng(19);
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + t % 2;
    const int rank = 1 + t % (n * n);
    const ComplexMatrix g = random_ginibre(n * n, rank, rng);
    const ChoiMatrix c(n, HermitianOp(g * g.adjoint()));
    const KrausChannel k = kraus_from_choi(c);
    EXPECT_EQ(static_cast<int>(k.size()), rank);
    EXPECT_LE((choi_of(k).matrix() - c.matrix()).norm(), 1e-9);
    for (size_t i = 0; i < k.size(); ++i)
      for (size_t j = i + 1; j < k.size(); ++j)
        EXPECT_NEAR(std::abs((k.ops()[i].adjoint() * k.ops()[j]).trace()), 0.0, 1e-10);
  }
}

TEST(TraceInvariants, Examples) {
  const TraceInvariants id = trace_invariants(KrausChannel({oracle::pauli(0)}));
  EXPECT_NEAR(id.op_trace, 4.0, 1e-14);
  EXPECT_NEAR(id.kraus_trace_sum, 4.0, 1e-14);
  EXPECT_NEAR(id.spectral_trace, 2.0, 1e-14);

  const TraceInvariants d = trace_invariants(KrausChannel({diag2(1, 2)}));
  EXPECT_NEAR(d.op_trace, 9.0, 1e-14);
  EXPECT_NEAR(d.kraus_trace_sum, 9.0, 1e-14);
  EXPECT_NEAR(d.spectral_trace, 5.0, 1e-14);

  const TraceInvariants x = trace_invariants(KrausChannel({oracle::pauli(1)}));
  EXPECT_NEAR(x.op_trace, 0.0, 1e-14);
  EXPECT_NEAR(x.kraus_trace_sum, 0.0, 1e-14);
  EXPECT_NEAR(x.spectral_trace, 2.0, 1e-14);
}

TEST(TraceInvariants, TraceFormulaOnRandomChannels) {
  Rng rng(2024);
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 3, s = 1 + (t / 3) % 4;
    const KrausChannel ch = random_channel(n, s, rng);
    const double op_trace = superop_trace(ch).real();
    EXPECT_LE(std::abs(op_trace - oracle::trace_formula(ch.ops())), 1e-8 * n * n);
    EXPECT_LE(std::abs(op_trace - oracle::vec_superop(ch.ops()).trace().real()), 1e-8 * n * n);
    EXPECT_NEAR(superop_matrix(ch).matrix().trace(), op_trace, 1e-10 * n * n);
  }
}

TEST(Normalize, Examples) {
  const KrausChannel a = normalize(KrausChannel({oracle::pauli(0)}));
  EXPECT_LE((a.ops().front() - oracle::pauli(0) / std::sqrt(2.0)).norm(), 1e-15);
  const KrausChannel b = normalize(KrausChannel({ComplexMatrix(2.0 * ComplexMatrix::Identity(3, 3))}));
  EXPECT_LE((b.ops().front() - ComplexMatrix::Identity(3, 3) * (2.0 / std::sqrt(12.0))).norm(), 1e-15);
}

TEST(Normalize, IsIdempotent) {
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const KrausChannel once = normalize(KrausChannel(random_ops(3, 1 + t % 3, rng)));
    const KrausChannel twice = normalize(once);
    EXPECT_NEAR(spectral_trace(once), 1.0, 1e-12);
    EXPECT_LE((superop_matrix(once).matrix() - superop_matrix(twice).matrix()).norm(), 1e-12);
  }
}

TEST(TpUnitalReport, Examples) {
  for (double a : {0.0, 0.1, 0.2, 1.0, -3.0}) {
    const TpUnitalReport r = tp_unital_report(example33(a));
    EXPECT_TRUE(r.trace_preserving) << "alpha=" << a;
    EXPECT_LE(r.tp_residual, 1e-12);
  }
  Rng rng(8);
  const TpUnitalReport u = tp_unital_report(KrausChannel({haar_unitary(3, rng)}));
  EXPECT_TRUE(u.trace_preserving);
  EXPECT_TRUE(u.unital);
  const TpUnitalReport p = tp_unital_report(KrausChannel({diag2(1, 0)}));
  EXPECT_FALSE(p.trace_preserving);
  EXPECT_FALSE(p.unital);
}

TEST(TpUnitalReport, ResidualsMatchKrausSums) {
  Rng rng(9);
  const KrausChannel ch(random_ops(3, 2, rng));
  ComplexMatrix vvd = ComplexMatrix::Zero(3, 3), vdv = ComplexMatrix::Zero(3, 3);
  for (const auto& v : ch.ops()) {
    vvd += v * v.adjoint();
    vdv += v.adjoint() * v;
  }
  const TpUnitalReport r = tp_unital_report(ch);
  EXPECT_NEAR(r.tp_residual, (vvd - ComplexMatrix::Identity(3, 3)).norm(), 1e-12);
  EXPECT_NEAR(r.unital_residual, (vdv - ComplexMatrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(TpUnitalReport, TracePreservingChannelsPreserveTrace) {
  Rng rng(10);
  for (int t = 0; t < 20; ++t) {
    const KrausChannel ch = random_channel(3, 1 + t % 4, rng);
    const HermitianOp rho = random_hermitian(3, rng);
    EXPECT_NEAR(apply(ch, rho).trace(), rho.trace(), 1e-10);
  }
}

TEST(SuperopMatrix, Examples) {
  EXPECT_LE((superop_matrix(KrausChannel({ComplexMatrix(ComplexMatrix::Identity(3, 3))})).matrix() -
             RealMatrix::Identity(9, 9))
                .norm(),
            1e-14);
  RealMatrix t = RealMatrix::Identity(4, 4);
  t(2, 2) = -1.0;
  EXPECT_LE((superop_matrix(TranspositionMap{2}).matrix() - t).norm(), 1e-14);
  EXPECT_EQ(numeric_rank(superop_matrix(DepolarizingMap{3}).matrix(), 1e-9), 1);
}

TEST(SuperopMatrix, EntriesAgreeWithVecOracle) {
  Rng rng(12);
  for (int n = 2; n <= 3; ++n) {
    const KrausChannel ch(random_ops(n, 2, rng));
    const ComplexMatrix vs = oracle::vec_superop(ch.ops());
    const auto b = hermitian_basis(n);
    const RealMatrix s = superop_matrix(ch).matrix();
    for (int a = 0; a < n * n; ++a)
      for (int c = 0; c < n * n; ++c) {
        const ComplexVector img = vs * vec(b[c].matrix());
        const double expected = (b[a].matrix() * unvec(img, n)).trace().real();
        EXPECT_NEAR(s(a, c), expected, 1e-12);
      }
    // the superoperator acts as the map on arbitrary (non-Hermitian) operators
    const ComplexMatrix x = random_ginibre(n, n, rng);
    EXPECT_LE((superop_matrix(ch).apply(x) - ch.apply(x)).norm(), 1e-12);
    EXPECT_LE((superop_matrix(ch).apply_adjoint(x) - ch.apply_adjoint(x)).norm(), 1e-12);
  }
}

TEST(SuperopMatrix, KrausFreedomGivesTheSameChannel) {
  Rng rng(14);
  const KrausChannel ch = random_channel(2, 3, rng);
  const ComplexMatrix u = haar_unitary(3, rng);
  std::vector<ComplexMatrix> mixed(3, ComplexMatrix::Zero(2, 2));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) mixed[i] += u(i, j) * ch.ops()[j];
  EXPECT_LE((superop_matrix(KrausChannel(mixed)).matrix() - superop_matrix(ch).matrix()).norm(), 1e-12);
}

TEST(ChoiMap, ReproducesTheMapAndItsAdjoint) {
  Rng rng(15);
  const KrausChannel ch(random_ops(3, 2, rng));
  const ChoiMap m(choi_of(ch));
  const ComplexMatrix x = random_ginibre(3, 3, rng);
  EXPECT_LE((m.apply(x) - ch.apply(x)).norm(), 1e-12);
  EXPECT_LE((m.apply_adjoint(x) - ch.apply_adjoint(x)).norm(), 1e-12);
}

TEST(ChoiMatrix, RejectsWrongSize) {
  try {
    ChoiMatrix c(2, HermitianOp::identity(3));
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("n^2 = 4"), std::string::npos);
  }
}
