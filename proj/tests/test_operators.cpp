#include <gtest/gtest.h>

#include "oracles.hpp"
#include "posmaps/operators.hpp"
#include "posmaps/random.hpp"

using namespace posmaps;

namespace {

HermitianOp pauli_op(int i) { return HermitianOp(oracle::pauli(i)); }

}  // namespace

TEST(HsInner, PauliAndIdentityValues) {
  EXPECT_NEAR(hs_inner(pauli_op(1), pauli_op(1)), 2.0, 1e-15);
  EXPECT_NEAR(hs_inner(HermitianOp::identity(3), HermitianOp::identity(3)), 3.0, 1e-15);
  EXPECT_NEAR(hs_inner(pauli_op(1), pauli_op(3)), 0.0, 1e-15);
}

TEST(HsInner, PositiveDefinite) {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const HermitianOp a = random_hermitian(1 + t % 4, rng);
    const double ip = hs_inner(a, a);
    EXPECT_GT(ip, 0.0);
    EXPECT_NEAR(ip, a.matrix().squaredNorm(), 1e-12 * ip);
  }
  const HermitianOp zero(ComplexMatrix::Zero(3, 3));
  EXPECT_EQ(hs_inner(zero, zero), 0.0);
}

TEST(SpectralDecompose, DiagonalAndPauli) {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  const auto pairs = spectral_decompose(HermitianOp(d));
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_NEAR(pairs[0].value, 3.0, 1e-14);
  EXPECT_NEAR(pairs[1].value, 1.0, 1e-14);
  EXPECT_NEAR(std::abs(pairs[0].vector[0] - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(pairs[1].vector[1] - 1.0), 0.0, 1e-14);

  const auto s1 = spectral_decompose(pauli_op(1));
  EXPECT_NEAR(s1[0].value, 1.0, 1e-14);
  EXPECT_NEAR(s1[1].value, -1.0, 1e-14);
}

TEST(SpectralDecompose, RandomReconstructionAndOrthonormality) {
  Rng rng(5);
  for (int n = 1; n <= 6; ++n) {
    const HermitianOp a = random_hermitian(n, rng);
    const auto pairs = spectral_decompose(a);
    ComplexMatrix rec = ComplexMatrix::Zero(n, n);
    ComplexMatrix basis(n, n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      rec += pairs[i].value * pairs[i].vector * pairs[i].vector.adjoint();
      basis.col(i) = pairs[i].vector;
      sum += pairs[i].value;
      if (i > 0) EXPECT_GE(pairs[i - 1].value, pairs[i].value);
    }
    const double norm = a.matrix().norm();
    EXPECT_LE((rec - a.matrix()).norm(), 1e-10 * norm);
    EXPECT_LE((basis.adjoint() * basis - ComplexMatrix::Identity(n, n)).norm(), 1e-12);
    EXPECT_NEAR(sum, a.trace(), 1e-10 * norm);

    const RealVector ref = oracle::eigenvalues_general(a.matrix());
    for (int i = 0; i < n; ++i) EXPECT_NEAR(pairs[i].value, ref[i], 1e-10 * norm);
  }
}

TEST(SpectralDecompose, PhaseIsFixed) {
  Rng rng(8);
  const HermitianOp a = random_hermitian(4, rng);
  for (const auto& p : spectral_decompose(a)) {
    Eigen::Index k = 0;
    p.vector.cwiseAbs().maxCoeff(&k);
    EXPECT_GE(p.vector[k].real(), 0.0);
    EXPECT_NEAR(p.vector[k].imag(), 0.0, 1e-15);
  }
}

TEST(PsdReport, Examples) {
  const PsdReport id = psd_report(HermitianOp::identity(2), 1e-9);
  EXPECT_TRUE(id.is_psd);
  EXPECT_NEAR(id.min_eigenvalue, 1.0, 1e-15);
  EXPECT_EQ(id.numeric_rank, 2);

  const PsdReport s3 = psd_report(pauli_op(3), 1e-9);
  EXPECT_FALSE(s3.is_psd);
  EXPECT_NEAR(s3.min_eigenvalue, -1.0, 1e-15);
  EXPECT_EQ(s3.numeric_rank, 2);

  ComplexVector x(3);
  x << Complex(1, 2), Complex(-0.5, 0.1), Complex(0.3, -1);
  x.normalize();
  const PsdReport proj = psd_report(HermitianOp(x * x.adjoint()), 1e-9);
  EXPECT_TRUE(proj.is_psd);
  EXPECT_NEAR(proj.min_eigenvalue, 0.0, 1e-14);
  EXPECT_EQ(proj.numeric_rank, 1);
}

TEST(PsdReport, MonotoneUnderIdentityShift) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const HermitianOp rho = random_density_matrix(3, 1 + t % 3, rng);
    ASSERT_TRUE(psd_report(rho).is_psd);
    for (double eps : {0.0, 1e-12, 1e-3, 1.0})
      EXPECT_TRUE(psd_report(rho + eps * HermitianOp::identity(3)).is_psd);
  }
}

TEST(HermitianOp, SymmetrizesRoundingAndRejectsNonHermitian) {
  ComplexMatrix m = oracle::pauli(2);
  m(0, 1) += Complex(1e-9, 0);
  const HermitianOp h(m);
  EXPECT_EQ(h.matrix()(0, 1), std::conj(h.matrix()(1, 0)));

  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  bad(0, 1) = 0.5;
  EXPECT_THROW(HermitianOp{bad}, InputError);

  ComplexMatrix nonsquare(2, 3);
  nonsquare.setZero();
  EXPECT_THROW(HermitianOp{nonsquare}, InputError);

  ComplexMatrix inf = ComplexMatrix::Identity(2, 2);
  inf(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(HermitianOp{inf}, InputError);
}

TEST(HermitianBasis, QubitIsNormalizedPauli) {
  const auto b = hermitian_basis(2);
  ASSERT_EQ(b.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_LE((b[i].matrix() - oracle::pauli(i) / std::sqrt(2.0)).norm(), 1e-15);
}

TEST(HermitianBasis, OrthonormalForSeveralSizes) {
  for (int n = 1; n <= 5; ++n) {
    const auto b = hermitian_basis(n);
    ASSERT_EQ(static_cast<int>(b.size()), n * n);
    double diag_sum = 0.0;
    RealMatrix gram(n * n, n * n);
    for (int i = 0; i < n * n; ++i)
      for (int j = 0; j < n * n; ++j) gram(i, j) = (b[i].matrix().adjoint() * b[j].matrix()).trace().real();
    for (int i = 0; i < n * n; ++i) diag_sum += hs_inner(b[i], b[i]);
    EXPECT_LE((gram - RealMatrix::Identity(n * n, n * n)).norm(), 1e-13) << "n=" << n;
    EXPECT_NEAR(diag_sum, n * n, 1e-12);
  }
  EXPECT_THROW(hermitian_basis(0), InputError);
}

TEST(HermitianBasis, CoordinatesRoundTrip) {
  Rng rng(21);
  for (int n = 2; n <= 4; ++n) {
    const ComplexMatrix x = random_ginibre(n, n, rng);
    EXPECT_LE((from_basis_coordinates(basis_coordinates(x), n) - x).norm(), 1e-13);
  }
}

TEST(TransposeInBasis, Examples) {
  EXPECT_EQ(transpose_in_basis(oracle::pauli(2)), (-oracle::pauli(2)).eval());
  EXPECT_EQ(transpose_in_basis(oracle::pauli(1)), oracle::pauli(1));
}

TEST(TransposeInBasis, PreservesSpectrumAndIsAnInvolution) {
  Rng rng(9);
  for (int n = 2; n <= 5; ++n) {
    const HermitianOp a = random_hermitian(n, rng);
    const HermitianOp t = transpose_in_basis(a);
    EXPECT_NEAR(t.trace(), a.trace(), 1e-13);
    const RealVector ea = oracle::eigenvalues_general(a.matrix());
    const RealVector et = oracle::eigenvalues_general(t.matrix());
    EXPECT_LE((ea - et).norm(), 1e-12);
    EXPECT_EQ(transpose_in_basis(t).matrix(), a.matrix());
  }
}

TEST(NumericRank, RelativeThreshold) {
  RealMatrix m = RealMatrix::Zero(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = 1e-3;
  m(2, 2) = 1e-12;
  EXPECT_EQ(numeric_rank(m, 1e-9), 2);
  EXPECT_EQ(numeric_rank(m, 1e-15), 3);
}
