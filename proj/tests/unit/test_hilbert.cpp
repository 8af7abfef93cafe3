// Copyright 2026 The qmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qmeas/hilbert.hpp"

namespace qmeas::hilbert {
namespace {

using testing::Cx;
using testing::Mat;
using testing::Vec;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Vec vec(std::initializer_list<Cx> xs) {
  Vec v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (Cx x : xs) {
    v(i++) = x;
  }
  return v;
}

TEST(StateVectorTest, RejectsUnnormalizedAndEmpty) {
  EXPECT_THROW(StateVector::from_amplitudes(vec({1.0, 1.0})), NotNormalized);
  EXPECT_THROW(StateVector::from_amplitudes(Vec()), DimensionMismatch);
  EXPECT_NO_THROW(StateVector::from_amplitudes(vec({kInvSqrt2, Cx(0, kInvSqrt2)})));
}

TEST(StateVectorTest, NormalizeRejectsNullVector) {
  EXPECT_THROW(StateVector::normalize(Vec::Zero(3)), NullState);
  const StateVector s = StateVector::normalize(vec({3.0, 4.0}));
  EXPECT_NEAR(s[0].real(), 0.6, 1e-15);
  EXPECT_NEAR(s[1].real(), 0.8, 1e-15);
}

TEST(StateVectorTest, BasisVector) {
  const StateVector e = StateVector::basis(4, 2);
  EXPECT_EQ(e.dim(), 4);
  EXPECT_EQ(e[2], Cx(1.0));
  EXPECT_EQ(e[0], Cx(0.0));
  EXPECT_THROW(StateVector::basis(4, 4), InvalidArgument);
}

TEST(DensityMatrixTest, ValidatesInvariants) {
  Mat not_hermitian(2, 2);
  not_hermitian << 0.5, 0.1, 0.2, 0.5;
  EXPECT_THROW(DensityMatrix::from_matrix(not_hermitian), InvalidOperator);
  Mat bad_trace = Mat::Identity(2, 2);
  EXPECT_THROW(DensityMatrix::from_matrix(bad_trace), InvalidOperator);
  Mat negative(2, 2);
  negative << 1.5, 0.0, 0.0, -0.5;
  EXPECT_THROW(DensityMatrix::from_matrix(negative), InvalidOperator);
  EXPECT_NO_THROW(DensityMatrix::from_matrix(Mat::Identity(2, 2) / 2.0));
}

TEST(MatrixOperatorTest, Flags) {
  Mat h(2, 2);
  h << 1.0, Cx(0, 1), Cx(0, -1), -1.0;
  EXPECT_TRUE(MatrixOperator::hermitian(h).is_hermitian());
  EXPECT_THROW(MatrixOperator::unitary(h), InvalidOperator);
  Mat x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  const MatrixOperator u = MatrixOperator::unitary(x);
  EXPECT_TRUE(u.is_unitary());
  EXPECT_EQ(u.unitarity_residual(), 0.0);
  const StateVector out = u.apply_unitary(StateVector::basis(2, 0));
  EXPECT_EQ(out[1], Cx(1.0));
  EXPECT_THROW(MatrixOperator::general(h).apply_unitary(StateVector::basis(2, 0)),
               InvalidOperator);
  EXPECT_THROW(MatrixOperator::hermitian(Mat::Zero(2, 3)), DimensionMismatch);
}

TEST(TensorTest, BasisVectorProduct) {
  const StateVector r = tensor(StateVector::basis(2, 0), StateVector::basis(2, 1));
  EXPECT_EQ(r.amplitudes(), vec({0.0, 1.0, 0.0, 0.0}));
}

TEST(TensorTest, Linearity) {
  const StateVector plus = StateVector::from_amplitudes(vec({kInvSqrt2, kInvSqrt2}));
  const StateVector r = tensor(plus, StateVector::basis(2, 0));
  EXPECT_LT(testing::max_abs(r.amplitudes() - vec({kInvSqrt2, 0.0, kInvSqrt2, 0.0})), 1e-15);
}

TEST(TensorTest, OperatorIdentity) {
  const MatrixOperator i4 = tensor_op(MatrixOperator::identity(2), MatrixOperator::identity(2));
  EXPECT_EQ(i4.entries(), Mat::Identity(4, 4));
  EXPECT_TRUE(i4.is_unitary());
  EXPECT_TRUE(i4.is_hermitian());
}

TEST(TensorTest, MatchesLoopOracleAndAssociativity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec u = testing::random_unit_vector(rng, 2 + trial % 3);
    const Vec v = testing::random_unit_vector(rng, 3);
    const Vec w = testing::random_unit_vector(rng, 2);
    EXPECT_LT(testing::max_abs(kron(u, v) - testing::kron_loops(u, v)), 1e-15);
    const Vec left = kron(kron(u, v), w);
    const Vec right = kron(u, kron(v, w));
    EXPECT_LT(testing::max_abs(left - right), 1e-12);

    const Mat a = testing::random_unitary(rng, 2);
    const Mat b = testing::random_unitary(rng, 3);
    EXPECT_LT(testing::max_abs(kron(a, b) - testing::kron_loops(a, b)), 1e-15);
  }
}

TEST(OuterTest, Examples) {
  EXPECT_EQ(outer(StateVector::basis(2, 0)).entries(), Mat(Eigen::Vector2cd(1.0, 0.0).asDiagonal()));
  const DensityMatrix plus = outer(StateVector::from_amplitudes(vec({kInvSqrt2, kInvSqrt2})));
  EXPECT_LT(testing::max_abs(plus.entries() - Mat::Constant(2, 2, 0.5)), 1e-15);
  EXPECT_NEAR(plus.purity(), 1.0, 1e-14);
}

TEST(PartialTraceTest, ProductState) {
  const StateVector zz = tensor(StateVector::basis(2, 0), StateVector::basis(2, 0));
  const ProductSpace space({2, 2});
  const Mat p0 = Eigen::Vector2cd(1.0, 0.0).asDiagonal();
  EXPECT_EQ(partial_trace(outer(zz), space, 0).entries(), p0);
  EXPECT_EQ(partial_trace(outer(zz), space, 1).entries(), p0);
}

TEST(PartialTraceTest, BellState) {
  const StateVector bell = StateVector::from_amplitudes(vec({kInvSqrt2, 0.0, 0.0, kInvSqrt2}));
  const ProductSpace space({2, 2});
  const Mat half = Mat::Identity(2, 2) / 2.0;
  for (std::size_t keep : {0u, 1u}) {
    EXPECT_LT(testing::max_abs(partial_trace(outer(bell), space, keep).entries() - half), 1e-15);
    EXPECT_LT(testing::max_abs(partial_trace(bell, space, keep).entries() - half), 1e-15);
  }
}

TEST(PartialTraceTest, DimensionMismatch) {
  const DensityMatrix rho = outer(StateVector::basis(5, 0));
  EXPECT_THROW(partial_trace(rho, ProductSpace({2, 2}), 0), DimensionMismatch);
  EXPECT_THROW(partial_trace(outer(StateVector::basis(4, 0)), ProductSpace({2, 2}), 2),
               InvalidArgument);
}

TEST(PartialTraceTest, ProductPureStatesProperty) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Index da = 2 + trial % 4;
    const Index db = 2 + (trial / 4) % 3;
    const StateVector u = StateVector::from_amplitudes(testing::random_unit_vector(rng, da));
    const StateVector v = StateVector::from_amplitudes(testing::random_unit_vector(rng, db));
    const ProductSpace space({da, db});
    const DensityMatrix rho = outer(tensor(u, v));
    EXPECT_LT(testing::max_abs(partial_trace(rho, space, 1).entries() - outer(v).entries()), 1e-12);
    EXPECT_LT(testing::max_abs(partial_trace(rho, space, 0).entries() - outer(u).entries()), 1e-12);
  }
}

TEST(PartialTraceTest, MatchesLoopOracleOnMixedStates) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const Index da = 2 + trial % 3;
    const Index db = 2 + trial % 4;
    const Mat raw = testing::random_density(rng, da * db, 1 + trial % 5);
    const DensityMatrix rho = DensityMatrix::from_matrix(raw);
    const ProductSpace space({da, db});
    for (int keep : {0, 1}) {
      EXPECT_LT(testing::max_abs(partial_trace(rho, space, static_cast<std::size_t>(keep)).entries() -
                                 testing::partial_trace_loops(raw, da, db, keep)),
                1e-13);
    }
  }
}

TEST(PartialTraceTest, ThreeFactors) {
  std::mt19937_64 rng(9);
  const StateVector a = StateVector::from_amplitudes(testing::random_unit_vector(rng, 2));
  const StateVector b = StateVector::from_amplitudes(testing::random_unit_vector(rng, 3));
  const StateVector c = StateVector::from_amplitudes(testing::random_unit_vector(rng, 2));
  const ProductSpace space({2, 3, 2});
  const DensityMatrix rho = outer(tensor(tensor(a, b), c));
  EXPECT_LT(testing::max_abs(partial_trace(rho, space, 1).entries() - outer(b).entries()), 1e-13);
  EXPECT_LT(testing::max_abs(partial_trace(rho, space, 2).entries() - outer(c).entries()), 1e-13);
  const StateVector abc = tensor(tensor(a, b), c);
  for (std::size_t keep = 0; keep < 3; ++keep) {
    EXPECT_LT(testing::max_abs(partial_trace(abc, space, keep).entries() -
                               partial_trace(outer(abc), space, keep).entries()),
              1e-14);
  }
}

TEST(EntropyTest, Examples) {
  EXPECT_NEAR(von_neumann_entropy(outer(StateVector::basis(3, 1))), 0.0, 1e-9);
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::from_matrix(Mat::Identity(2, 2) / 2.0)),
              std::log(2.0), 1e-9);
  const Mat d = Eigen::Vector2cd(0.25, 0.75).asDiagonal();
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::from_matrix(d)),
              -0.25 * std::log(0.25) - 0.75 * std::log(0.75), 1e-9);
}

TEST(EntropyTest, UnitaryInvariance) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const Index dim = 2 + trial % 6;
    const Mat rho = testing::random_density(rng, dim, 1 + trial % dim);
    const Mat u = testing::random_unitary(rng, dim);
    const Mat rotated = u * rho * u.adjoint();
    const Mat sym = 0.5 * (rotated + rotated.adjoint());
    EXPECT_NEAR(von_neumann_entropy(DensityMatrix::from_matrix(sym)),
                von_neumann_entropy(DensityMatrix::from_matrix(rho)), 1e-9);
  }
}

TEST(EntropyTest, Shannon) {
  const std::vector<double> p{0.5, 0.5, 0.0};
  EXPECT_NEAR(shannon_entropy(p), std::log(2.0), 1e-15);
  const std::vector<double> one{1.0};
  EXPECT_EQ(shannon_entropy(one), 0.0);
}

TEST(TraceDistanceTest, MatchesSvdOracle) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Index dim = 2 + trial % 5;
    const Mat a = testing::random_density(rng, dim, 2);
    const Mat b = testing::random_density(rng, dim, 3);
    const double d = trace_distance(DensityMatrix::from_matrix(a), DensityMatrix::from_matrix(b));
    EXPECT_NEAR(d, testing::trace_distance_svd(a, b), 1e-12);
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 1.0 + 1e-12);
  }
  EXPECT_THROW(trace_distance(outer(StateVector::basis(2, 0)), outer(StateVector::basis(3, 0))),
               DimensionMismatch);
}

TEST(HermitianEigenvaluesTest, RealSortedSpectrum) {
  Mat h(2, 2);
  h << 0.0, Cx(0, -1), Cx(0, 1), 0.0;
  const Eigen::VectorXd ev = hermitian_eigenvalues(h);
  ASSERT_EQ(ev.size(), 2);
  EXPECT_NEAR(ev(0), -1.0, 1e-15);
  EXPECT_NEAR(ev(1), 1.0, 1e-15);
}

TEST(CoefficientsTest, Examples) {
  const std::vector<StateVector> basis{StateVector::basis(3, 0), StateVector::basis(3, 1),
                                       StateVector::basis(3, 2)};
  const std::vector<Complex> c0 = coefficients_of(basis[0], basis);
  EXPECT_EQ(c0, (std::vector<Complex>{1.0, 0.0, 0.0}));
  const StateVector mix = StateVector::from_amplitudes(vec({kInvSqrt2, Cx(0, kInvSqrt2), 0.0}));
  const std::vector<Complex> c1 = coefficients_of(mix, basis);
  EXPECT_NEAR(std::abs(c1[0] - Cx(kInvSqrt2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(c1[1] - Cx(0, kInvSqrt2)), 0.0, 1e-15);
  EXPECT_EQ(c1[2], Cx(0.0));
}

TEST(CoefficientsTest, RejectsNonOrthonormalBasis) {
  const std::vector<StateVector> bad{
      StateVector::basis(2, 0), StateVector::from_amplitudes(vec({kInvSqrt2, kInvSqrt2}))};
  EXPECT_THROW(coefficients_of(StateVector::basis(2, 0), bad), BasisNotOrthonormal);
  EXPECT_GT(gram_residual(bad), 0.5);
}

TEST(CoefficientsTest, RoundTripRandomBasis) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat u = testing::random_unitary(rng, 4);
    std::vector<StateVector> basis;
    for (Index j = 0; j < 4; ++j) {
      basis.push_back(StateVector::from_amplitudes(u.col(j)));
    }
    EXPECT_LT(gram_residual(basis), 1e-13);
    const StateVector phi = StateVector::from_amplitudes(testing::random_unit_vector(rng, 4));
    const std::vector<Complex> c = coefficients_of(phi, basis);
    Vec back = Vec::Zero(4);
    for (Index j = 0; j < 4; ++j) {
      back += c[static_cast<std::size_t>(j)] * basis[static_cast<std::size_t>(j)].amplitudes();
    }
    EXPECT_LT(testing::max_abs(back - phi.amplitudes()), 1e-12);
  }
}

TEST(CoefficientsTest, ReconstructOnPartialSpan) {
  std::mt19937_64 rng(42);
  const Mat u = testing::random_unitary(rng, 5);
  std::vector<StateVector> basis;
  for (Index j = 0; j < 3; ++j) {
    basis.push_back(StateVector::from_amplitudes(u.col(j)));
  }
  const Vec inside = (u.col(0) * Cx(0.6, 0.0) + u.col(2) * Cx(0.0, 0.8));
  const StateVector phi = StateVector::from_amplitudes(inside);
  const std::vector<Complex> c = coefficients_of(phi, basis);
  Vec back = Vec::Zero(5);
  for (std::size_t j = 0; j < 3; ++j) {
    back += c[j] * basis[j].amplitudes();
  }
  EXPECT_LT(testing::max_abs(back - inside), 1e-12);
}

TEST(ExpectationTest, PureAndMixedAgree) {
  std::mt19937_64 rng(51);
  const Mat u = testing::random_unitary(rng, 3);
  const Mat h = u * Eigen::Vector3cd(1.0, -2.0, 0.5).asDiagonal() * u.adjoint();
  const MatrixOperator op = MatrixOperator::hermitian(0.5 * (h + h.adjoint()));
  const StateVector v = StateVector::from_amplitudes(testing::random_unit_vector(rng, 3));
  EXPECT_NEAR(std::abs(op.expectation(v) - op.expectation(outer(v))), 0.0, 1e-13);
  EXPECT_NEAR(op.expectation(v).imag(), 0.0, 1e-14);
}

}  // namespace
}  // namespace qmeas::hilbert
