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

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qmeas/identical_particles.hpp"

namespace qmeas::particles {
namespace {

using testing::Cx;
using testing::Mat;
using testing::Vec;

constexpr ExchangeSymmetry kBoth[] = {ExchangeSymmetry::kBoson, ExchangeSymmetry::kFermion};

LatticeGrid standard_grid() { return LatticeGrid::spanning(-20.0, 20.0, 512); }

double quadrature_norm(const Mat& values, double dx) {
  double s = 0.0;
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      s += std::norm(values(i, j));
    }
  }
  return dx * dx * s;
}

KernelOperator random_hermitian_kernel(std::mt19937_64& rng, const LatticeGrid& grid) {
  const Index n = grid.n_points();
  Mat k(n, n);
  for (Index j = 0; j < n; ++j) {
    k.col(j) = testing::random_vector(rng, n);
  }
  return KernelOperator::from_kernel(grid, 0.5 * (k + k.adjoint()), true);
}

TEST(LatticeGridTest, Geometry) {
  const LatticeGrid g = standard_grid();
  EXPECT_DOUBLE_EQ(g.x_min(), -20.0);
  EXPECT_NEAR(g.x_max(), 20.0, 1e-12);
  EXPECT_NEAR(g.dx(), 40.0 / 511.0, 1e-15);
  EXPECT_THROW(LatticeGrid(0.0, 0.0, 10), InvalidArgument);
  EXPECT_THROW(LatticeGrid(0.0, 0.1, 1), InvalidArgument);
}

TEST(LatticeWavefunctionTest, NormalizationContract) {
  const LatticeGrid g(0.0, 0.5, 4);
  EXPECT_THROW(LatticeWavefunction::from_values(g, Vec::Ones(4)), NotNormalized);
  EXPECT_NO_THROW(LatticeWavefunction::from_values(g, Vec::Ones(4) / std::sqrt(2.0)));
  EXPECT_THROW(LatticeWavefunction::normalized(g, Vec::Zero(4)), NullState);
  EXPECT_THROW(LatticeWavefunction::from_values(g, Vec::Ones(3)), DimensionMismatch);
  const LatticeWavefunction spike = LatticeWavefunction::delta_spike(g, 2);
  EXPECT_NEAR(spike.probability_at(2), 1.0, 1e-15);
  EXPECT_NEAR(spike.inner(spike).real(), 1.0, 1e-15);
}

TEST(GaussianPacketTest, QuadratureNorm) {
  const LatticeGrid g = standard_grid();
  const LatticeWavefunction psi = gaussian_packet(g, 0.0, 1.0);
  double s = 0.0;
  for (Index i = 0; i < g.n_points(); ++i) {
    s += std::norm(psi.values()(i));
  }
  EXPECT_NEAR(g.dx() * s, 1.0, 1e-8);
}

TEST(GaussianPacketTest, WidthIsStandardDeviation) {
  const LatticeGrid g = standard_grid();
  const LatticeWavefunction psi = gaussian_packet(g, 1.0, 2.0);
  double mean = 0.0;
  double second = 0.0;
  for (Index i = 0; i < g.n_points(); ++i) {
    const double x = g.coordinate(i);
    mean += x * psi.probability_at(i);
    second += x * x * psi.probability_at(i);
  }
  EXPECT_NEAR(mean, 1.0, 1e-10);
  EXPECT_NEAR(std::sqrt(second - mean * mean), 2.0, 1e-8);
}

TEST(GaussianPacketTest, Errors) {
  const LatticeGrid g = standard_grid();
  EXPECT_THROW(gaussian_packet(g, 0.0, 2.0 * g.dx()), UnresolvableWidth);
  EXPECT_THROW(gaussian_packet(g, 0.0, 0.1), UnresolvableWidth);
  EXPECT_THROW(gaussian_packet(g, 25.0, 1.0), InvalidArgument);
}

TEST(SymmetrizeTest, DisjointPacketsGiveInverseSqrt2) {
  const LatticeGrid g = standard_grid();
  const LatticeWavefunction psi = gaussian_packet(g, 0.0, 1.0);
  const LatticeWavefunction phi = gaussian_packet(g, 10.0, 1.0);
  for (ExchangeSymmetry sym : kBoth) {
    const TwoParticleWavefunction big = symmetrize(psi, phi, sym);
    EXPECT_NEAR(big.nu(), 1.0 / std::sqrt(2.0), 1e-8) << to_string(sym);
    EXPECT_NEAR(quadrature_norm(big.values(), g.dx()), 1.0, 1e-8);
    EXPECT_EQ(big.symmetry(), sym);
  }
}

TEST(SymmetrizeTest, OrthogonalInputsProperty) {
  const LatticeGrid g = standard_grid();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> centers(-16.0, -4.0);
  std::uniform_real_distribution<double> widths(0.5, 1.2);
  for (int trial = 0; trial < 10; ++trial) {
    const double c = centers(rng);
    const LatticeWavefunction psi = gaussian_packet(g, c, widths(rng));
    const LatticeWavefunction phi = gaussian_packet(g, c + 14.0, widths(rng));
    ASSERT_LT(std::abs(psi.inner(phi)), 1e-10);
    for (ExchangeSymmetry sym : kBoth) {
      EXPECT_NEAR(symmetrize(psi, phi, sym).nu(), 1.0 / std::sqrt(2.0), 1e-8);
    }
  }
}

TEST(SymmetrizeTest, IdenticalInputs) {
  const LatticeGrid g = standard_grid();
  const LatticeWavefunction psi = gaussian_packet(g, 3.0, 1.5);
  EXPECT_THROW(symmetrize(psi, psi, ExchangeSymmetry::kFermion), NullState);
  const TwoParticleWavefunction big = symmetrize(psi, psi, ExchangeSymmetry::kBoson);
  EXPECT_NEAR(big.nu(), 0.5, 1e-12);
  const Mat product = psi.values() * psi.values().transpose();
  EXPECT_LT(testing::max_abs(big.values() - product), 1e-14);
}

TEST(SymmetrizeTest, SwapSymmetryIsBitwise) {
  const LatticeGrid g(-4.0, 0.125, 64);
  std::mt19937_64 rng(5);
  const LatticeWavefunction psi = LatticeWavefunction::normalized(g, testing::random_vector(rng, 64));
  const LatticeWavefunction phi = LatticeWavefunction::normalized(g, testing::random_vector(rng, 64));
  for (ExchangeSymmetry sym : kBoth) {
    const Mat& v = symmetrize(psi, phi, sym).values();
    const double sign = sym == ExchangeSymmetry::kBoson ? 1.0 : -1.0;
    for (Index i = 0; i < 64; ++i) {
      for (Index j = 0; j < 64; ++j) {
        ASSERT_EQ(v(i, j), sign * v(j, i));
      }
    }
  }
}

TEST(SymmetrizeTest, GridMismatch) {
  const LatticeWavefunction a = gaussian_packet(LatticeGrid(-5.0, 0.1, 100), 0.0, 1.0);
  const LatticeWavefunction b = gaussian_packet(LatticeGrid(-5.0, 0.1, 101), 0.0, 1.0);
  EXPECT_THROW(symmetrize(a, b, ExchangeSymmetry::kBoson), GridMismatch);
}

TEST(SymmetrizedObservableTest, ProductStatePattern) {
  const LatticeGrid g(-3.0, 0.25, 25);
  std::mt19937_64 rng(17);
  const Vec psi = testing::random_vector(rng, 25);
  const Vec phi = testing::random_vector(rng, 25);
  const TwoParticleKernel a = symmetrized_observable(KernelOperator::position(g));
  Vec xpsi(25);
  Vec xphi(25);
  for (Index i = 0; i < 25; ++i) {
    xpsi(i) = g.coordinate(i) * psi(i);
    xphi(i) = g.coordinate(i) * phi(i);
  }
  const Mat expected = (xpsi * phi.transpose() + psi * xphi.transpose()) / (g.dx() * g.dx());
  EXPECT_LT(testing::max_abs(a.apply(psi * phi.transpose()) - expected), 1e-12);
}

TEST(TwoParticleKernelTest, DenseMatchesApplyAndIsExchangeSymmetric) {
  const LatticeGrid g(-2.0, 0.25, 16);
  std::mt19937_64 rng(19);
  const TwoParticleKernel a = symmetrized_observable(random_hermitian_kernel(rng, g));
  EXPECT_EQ(a.exchange_asymmetry(), 0.0);
  const Mat dense = a.dense();
  ASSERT_EQ(dense.rows(), 256);
  Mat values(16, 16);
  for (Index j = 0; j < 16; ++j) {
    values.col(j) = testing::random_vector(rng, 16);
  }
  Vec flat(256);
  for (Index i = 0; i < 16; ++i) {
    for (Index j = 0; j < 16; ++j) {
      flat(i * 16 + j) = values(i, j);
    }
  }
  const Vec dense_out = dense * flat;
  const Mat applied = a.apply(values);
  for (Index i = 0; i < 16; ++i) {
    for (Index j = 0; j < 16; ++j) {
      EXPECT_NEAR(std::abs(dense_out(i * 16 + j) - applied(i, j)), 0.0, 1e-10);
    }
  }
  Mat swap = Mat::Zero(256, 256);
  for (Index i = 0; i < 16; ++i) {
    for (Index j = 0; j < 16; ++j) {
      swap(i * 16 + j, j * 16 + i) = 1.0;
    }
  }
  EXPECT_LT(testing::max_abs(swap * dense * swap - dense), 1e-12);
}

TEST(TwoParticleKernelTest, RejectsAsymmetricKernel) {
  const LatticeGrid g(-2.0, 0.25, 16);
  const Mat x = KernelOperator::position(g).kernel();
  const Mat id = Mat::Identity(16, 16);
  EXPECT_THROW(TwoParticleKernel(g, {{x, id}}), InvalidOperator);
  EXPECT_NO_THROW(TwoParticleKernel(g, {{x, x}}));
  EXPECT_THROW(TwoParticleKernel(g, {{Mat::Identity(3, 3), Mat::Identity(3, 3)}}),
               DimensionMismatch);
}

TEST(TwoParticleKernelTest, DenseCapacity) {
  const TwoParticleKernel a = symmetrized_observable(KernelOperator::identity(standard_grid()));
  EXPECT_THROW(a.dense(), CapacityExceeded);
}

TEST(ExpectationSingleTest, Examples) {
  const LatticeGrid g = standard_grid();
  const KernelOperator x = KernelOperator::position(g);
  EXPECT_NEAR(expectation_single(x, gaussian_packet(g, 0.0, 1.0)).real(), 0.0, 1e-6);
  EXPECT_NEAR(expectation_single(x, gaussian_packet(g, 10.0, 1.0)).real(), 10.0, 1e-6);
  EXPECT_NEAR(expectation_single(KernelOperator::identity(g), gaussian_packet(g, 4.0, 1.0)).real(),
              1.0, 1e-8);
  const LatticeGrid other(-20.0, 0.1, 400);
  EXPECT_THROW(expectation_single(x, gaussian_packet(other, 0.0, 1.0)), GridMismatch);
}

TEST(ExpectationSingleTest, MultiplicationKernel) {
  const LatticeGrid g = standard_grid();
  const KernelOperator x2 = KernelOperator::multiplication(g, [](double x) { return x * x; });
  EXPECT_NEAR(expectation_single(x2, gaussian_packet(g, 0.0, 1.5)).real(), 2.25, 1e-8);
}

TEST(ExpectationTwoParticleTest, Examples) {
  const LatticeGrid g = standard_grid();
  const LatticeWavefunction psi = gaussian_packet(g, 0.0, 1.0);
  const LatticeWavefunction phi = gaussian_packet(g, 10.0, 1.0);
  const TwoParticleKernel x = symmetrized_observable(KernelOperator::position(g));
  const TwoParticleKernel id = symmetrized_observable(KernelOperator::identity(g));
  for (ExchangeSymmetry sym : kBoth) {
    const TwoParticleWavefunction big = symmetrize(psi, phi, sym);
    EXPECT_NEAR(expectation_two_particle(x, big).real(), 10.0, 1e-5);
    EXPECT_NEAR(expectation_two_particle(id, big).real(), 2.0, 1e-6);
  }
}

TEST(ExpectationTwoParticleTest, DiscrepancyTheoremRandomKernels) {
  const LatticeGrid g = LatticeGrid::spanning(-20.0, 20.0, 128);
  std::mt19937_64 rng(23);
  const LatticeWavefunction psi = gaussian_packet(g, -10.0, 1.0);
  const LatticeWavefunction phi = gaussian_packet(g, 10.0, 1.0);
  ASSERT_LT(std::abs(psi.inner(phi)), 1e-12);
  for (int trial = 0; trial < 5; ++trial) {
    const KernelOperator a = random_hermitian_kernel(rng, g);
    const Cx expected = expectation_single(a, psi) + expectation_single(a, phi);
    for (ExchangeSymmetry sym : kBoth) {
      const Cx got = expectation_two_particle(symmetrized_observable(a), symmetrize(psi, phi, sym));
      EXPECT_NEAR(std::abs(got - expected), 0.0, 1e-6);
    }
  }
}

TEST(DomainTest, Construction) {
  const LatticeGrid g = standard_grid();
  const Domain d = Domain::from_interval(g, -5.0, 5.0);
  ASSERT_EQ(d.ranges().size(), 1u);
  EXPECT_GE(g.coordinate(d.ranges()[0].begin), -5.0);
  EXPECT_LT(g.coordinate(d.ranges()[0].begin - 1), -5.0);
  EXPECT_LE(g.coordinate(d.ranges()[0].end - 1), 5.0);
  EXPECT_GT(g.coordinate(d.ranges()[0].end), 5.0);
  EXPECT_EQ(d.count(), d.indicator().sum());
  EXPECT_EQ(Domain::full(g).count(), 512);
  EXPECT_THROW(Domain(10, {{3, 5}, {4, 6}}), InvalidArgument);
  EXPECT_THROW(Domain(10, {{5, 7}, {1, 2}}), InvalidArgument);
  EXPECT_THROW(Domain(10, {{8, 11}}), InvalidArgument);
  EXPECT_THROW(Domain(10, {{4, 4}}), InvalidArgument);
  const Domain two(10, {{1, 3}, {6, 8}});
  EXPECT_TRUE(two.contains(2));
  EXPECT_FALSE(two.contains(3));
  EXPECT_EQ(two.count(), 4);
}

TEST(LocalizeTest, Examples) {
  const LatticeGrid g = standard_grid();
  const Domain d = Domain::from_interval(g, -5.0, 5.0);
  std::mt19937_64 rng(29);
  const KernelOperator a = random_hermitian_kernel(rng, g);
  const KernelOperator la = localize(a, d);
  for (Index i = 0; i < g.n_points(); ++i) {
    for (Index j = 0; j < g.n_points(); ++j) {
      if (!d.contains(i) || !d.contains(j)) {
        ASSERT_EQ(la.kernel()(i, j), Cx(0.0));
      } else {
        ASSERT_EQ(la.kernel()(i, j), a.kernel()(i, j));
      }
    }
  }
  EXPECT_EQ(localize(a, Domain::full(g)).kernel(), a.kernel());
  EXPECT_EQ(localize(la, d).kernel(), la.kernel());
  EXPECT_TRUE(la.is_hermitian());
}

TEST(IsDLocalTest, Examples) {
  const LatticeGrid g = standard_grid();
  const Domain d = Domain::from_interval(g, -5.0, 5.0);
  const KernelOperator x = KernelOperator::position(g);
  EXPECT_FALSE(is_d_local(x, d, 1e-10));
  EXPECT_GT(d_locality_residual(x, d), 19.0);
  EXPECT_TRUE(is_d_local(localize(x, d), d, 0.0));
  const KernelOperator zero = KernelOperator::from_kernel(g, Mat::Zero(512, 512), true);
  EXPECT_TRUE(is_d_local(zero, d, 0.0));
  EXPECT_TRUE(is_d_local(zero, Domain(512, {{0, 1}}), 0.0));
  EXPECT_THROW(is_d_local(x, d, -1.0), InvalidArgument);
}

TEST(IsDLocalTest, AgreesWithExhaustiveSpikeOracle) {
  const LatticeGrid g(-4.0, 0.25, 33);
  const Domain d = Domain::from_interval(g, -1.0, 1.5);
  std::mt19937_64 rng(31);
  const KernelOperator a = random_hermitian_kernel(rng, g);
  for (const KernelOperator& k : {a, localize(a, d)}) {
    double worst = 0.0;
    for (Index e = 0; e < g.n_points(); ++e) {
      if (d.contains(e)) {
        continue;
      }
      const LatticeWavefunction f = LatticeWavefunction::delta_spike(g, e);
      const Vec image = g.dx() * (k.kernel() * f.values());
      const Vec co_image = g.dx() * (k.kernel().transpose() * f.values());
      worst = std::max({worst, testing::max_abs(image), testing::max_abs(co_image)});
    }
    EXPECT_EQ(is_d_local(k, d, 0.0), worst == 0.0);
  }
}

TEST(DLocalAgreementTest, PositionKernel) {
  const LatticeGrid g = standard_grid();
  const Domain d = Domain::from_interval(g, -5.0, 5.0);
  const LatticeWavefunction psi = gaussian_packet(g, 0.0, 1.0);
  const LatticeWavefunction phi = gaussian_packet(g, 15.0, 1.0);
  const KernelOperator x = KernelOperator::position(g);
  EXPECT_THROW(dlocal_agreement_check(x, d, psi, phi), SupportViolation);
  for (ExchangeSymmetry sym : kBoth) {
    const AgreementResult r = dlocal_agreement_check(x, d, psi, phi, sym, 1e-6);
    EXPECT_LT(r.difference, 1e-6);
    const Cx raw = expectation_two_particle(symmetrized_observable(x), symmetrize(psi, phi, sym));
    EXPECT_NEAR(std::abs(raw - r.single), 15.0, 1e-4);
  }
}

TEST(DLocalAgreementTest, LocalizedIdentityNarrowPacket) {
  const LatticeGrid g = standard_grid();
  const Domain d = Domain::from_interval(g, -5.0, 5.0);
  const LatticeWavefunction psi = gaussian_packet(g, 0.0, 0.5);
  const LatticeWavefunction phi = gaussian_packet(g, 12.0, 0.5);
  const KernelOperator id = localize(KernelOperator::identity(g), d);
  const AgreementResult r = dlocal_agreement_check(id, d, psi, phi);
  EXPECT_NEAR(r.two_particle.real(), 1.0, 1e-6);
  EXPECT_NEAR(r.single.real(), 1.0, 1e-6);
  EXPECT_LT(r.difference, 1e-6);
}

TEST(DLocalAgreementTest, PhiInsideDomainIsRejected) {
  const LatticeGrid g = standard_grid();
  const Domain d = Domain::from_interval(g, -5.0, 5.0);
  EXPECT_THROW(dlocal_agreement_check(KernelOperator::position(g), d, gaussian_packet(g, 0.0, 0.5),
                                      gaussian_packet(g, 3.0, 0.5)),
               SupportViolation);
}

TEST(SupportTest, Examples) {
  const LatticeGrid g = standard_grid();
  for (double eps : {0.5, 1e-3, 1e-12}) {
    const Domain s = support(LatticeWavefunction::delta_spike(g, 77), eps);
    ASSERT_EQ(s.ranges().size(), 1u);
    EXPECT_EQ(s.ranges()[0], (Domain::Range{77, 78}));
  }
  const Domain s = support(gaussian_packet(g, 0.0, 1.0), 1e-8);
  ASSERT_EQ(s.ranges().size(), 1u);
  const double lo = g.coordinate(s.ranges()[0].begin);
  const double hi = g.coordinate(s.ranges()[0].end - 1);
  EXPECT_GE(lo, -7.0);
  EXPECT_LE(hi, 7.0);
  EXPECT_LE(lo, -5.0);
  EXPECT_GE(hi, 5.0);
  EXPECT_THROW(support(gaussian_packet(g, 0.0, 1.0), 0.0), InvalidArgument);
  EXPECT_THROW(support(gaussian_packet(g, 0.0, 1.0), 1.0), InvalidArgument);
}

TEST(SupportTest, MassBound) {
  const LatticeGrid g = standard_grid();
  std::mt19937_64 rng(37);
  const LatticeWavefunction psi = LatticeWavefunction::normalized(g, testing::random_vector(rng, 512));
  for (double eps : {0.3, 0.05, 1e-4}) {
    const Domain s = support(psi, eps);
    EXPECT_LE(mass_outside(psi, s), eps + 1e-12);
  }
}

TEST(CollectiveObservableTest, NumberOperatorPattern) {
  Mat a = Mat::Zero(2, 2);
  a(1, 1) = 1.0;
  const hilbert::MatrixOperator col = collective_observable(hilbert::MatrixOperator::hermitian(a), 2);
  Mat expected = Mat::Zero(4, 4);
  expected.diagonal() << 0.0, 1.0, 1.0, 2.0;
  EXPECT_EQ(col.entries(), expected);
  EXPECT_TRUE(col.is_hermitian());
}

TEST(CollectiveObservableTest, ProductExpectationAndExchange) {
  std::mt19937_64 rng(41);
  const Mat u = testing::random_unitary(rng, 3);
  const Mat h = u * Eigen::Vector3cd(0.3, -1.0, 2.0).asDiagonal() * u.adjoint();
  const auto a = hilbert::MatrixOperator::hermitian(0.5 * (h + h.adjoint()));
  const auto v = hilbert::StateVector::from_amplitudes(testing::random_unit_vector(rng, 3));
  const auto vvv = hilbert::tensor(hilbert::tensor(v, v), v);
  EXPECT_NEAR(std::abs(collective_observable(a, 3).expectation(vvv) - 3.0 * a.expectation(v)), 0.0,
              1e-12);
  const Mat c2 = collective_observable(a, 2).entries();
  const Mat s = exchange_operator(3).entries();
  EXPECT_LT(testing::max_abs(c2 * s - s * c2), 1e-12);
  EXPECT_THROW(collective_observable(hilbert::MatrixOperator::identity(2), 13), CapacityExceeded);
}

TEST(ExchangeOperatorTest, SwapsFactors) {
  std::mt19937_64 rng(43);
  const Vec u = testing::random_unit_vector(rng, 3);
  const Vec v = testing::random_unit_vector(rng, 3);
  const hilbert::MatrixOperator s = exchange_operator(3);
  EXPECT_TRUE(s.is_unitary());
  EXPECT_TRUE(s.is_hermitian());
  EXPECT_LT(testing::max_abs(s.apply(testing::kron_loops(u, v)) - testing::kron_loops(v, u)), 1e-15);
}

}  // namespace
}  // namespace qmeas::particles
