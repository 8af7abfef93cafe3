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

// Identical particles on a uniform 1-D lattice.
//
// Quadrature conventions:
//   * a wavefunction is normalized as dx * sum |psi_i|^2 = 1;
//   * a kernel a(x; x') acts as (a f)(x_i) = dx * sum_j a_ij f_j;
//   * delta(x - x') is the kernel (1/dx) * identity;
//   * two-particle values Psi_ij = Psi(x_i, x_j) are normalized with dx^2.
//
// Two-particle kernels are kept as sums of Kronecker terms L (x) R acting on
// the n x n value matrix as L Psi R^T, which never forms the n^2 x n^2 matrix.

#ifndef QMEAS_IDENTICAL_PARTICLES_HPP
#define QMEAS_IDENTICAL_PARTICLES_HPP

#include <functional>
#include <utility>
#include <vector>

#include "qmeas/hilbert.hpp"

namespace qmeas::particles {

class LatticeGrid {
 public:
  /// Throws InvalidArgument unless dx > 0 and n_points >= 2.
  LatticeGrid(double x_min, double dx, Index n_points);
  /// Grid whose first and last points are x_min and x_max.
  static LatticeGrid spanning(double x_min, double x_max, Index n_points);

  double x_min() const noexcept { return x_min_; }
  double dx() const noexcept { return dx_; }
  Index n_points() const noexcept { return n_; }
  double x_max() const noexcept { return coordinate(n_ - 1); }
  double coordinate(Index i) const noexcept {
    return x_min_ + static_cast<double>(i) * dx_;
  }

  bool operator==(const LatticeGrid&) const = default;

 private:
  double x_min_;
  double dx_;
  Index n_;
};

/// Single-particle wavefunction on the lattice, quadrature-normalized.
class LatticeWavefunction {
 public:
  /// Throws NotNormalized if |dx sum|v|^2 - 1| > kLatticeNorm.
  static LatticeWavefunction from_values(LatticeGrid grid, RawVector values);
  /// Rescales to quadrature norm 1. Throws NullState for a zero vector.
  static LatticeWavefunction normalized(LatticeGrid grid, const RawVector& raw);
  /// Normalized spike supported on the single point `index`.
  static LatticeWavefunction delta_spike(LatticeGrid grid, Index index);

  const LatticeGrid& grid() const noexcept { return grid_; }
  const RawVector& values() const noexcept { return values_; }

  /// dx * sum conj(this_i) other_i
  Complex inner(const LatticeWavefunction& other) const;
  /// dx * |psi_i|^2
  double probability_at(Index i) const;

 private:
  LatticeWavefunction(LatticeGrid grid, RawVector values)
      : grid_(grid), values_(std::move(values)) {}

  LatticeGrid grid_;
  RawVector values_;
};

enum class ExchangeSymmetry { kBoson, kFermion };

const char* to_string(ExchangeSymmetry sym);

/// nu (psi_i phi_j +/- phi_i psi_j). Only `symmetrize` constructs these.
class TwoParticleWavefunction {
 public:
  const LatticeGrid& grid() const noexcept { return grid_; }
  /// values()(i, j) = Psi(x_i, x_j)
  const Matrix& values() const noexcept { return values_; }
  ExchangeSymmetry symmetry() const noexcept { return symmetry_; }
  /// Real positive normalization factor.
  double nu() const noexcept { return nu_; }

 private:
  friend TwoParticleWavefunction symmetrize(const LatticeWavefunction&,
                                            const LatticeWavefunction&,
                                            ExchangeSymmetry);
  TwoParticleWavefunction(LatticeGrid grid, Matrix values, ExchangeSymmetry sym, double nu)
      : grid_(grid), values_(std::move(values)), symmetry_(sym), nu_(nu) {}

  LatticeGrid grid_;
  Matrix values_;
  ExchangeSymmetry symmetry_;
  double nu_;
};

/// Single-particle kernel a(x_i; x_j).
class KernelOperator {
 public:
  /// With `hermitian` set, throws InvalidOperator unless
  /// kernel_ij = conj(kernel_ji) within kInvariant.
  static KernelOperator from_kernel(LatticeGrid grid, Matrix kernel, bool hermitian);
  /// x delta(x - x')
  static KernelOperator position(LatticeGrid grid);
  /// delta(x - x')
  static KernelOperator identity(LatticeGrid grid);
  /// f(x) delta(x - x') for real f.
  static KernelOperator multiplication(LatticeGrid grid, const std::function<double(double)>& f);

  const LatticeGrid& grid() const noexcept { return grid_; }
  const Matrix& kernel() const noexcept { return kernel_; }
  bool is_hermitian() const noexcept { return hermitian_; }

 private:
  KernelOperator(LatticeGrid grid, Matrix kernel, bool hermitian)
      : grid_(grid), kernel_(std::move(kernel)), hermitian_(hermitian) {}

  LatticeGrid grid_;
  Matrix kernel_;
  bool hermitian_;
};

/// Two-particle kernel held as sum_t left_t (x) right_t over (particle 1,
/// particle 2) in the row-major convention.
class TwoParticleKernel {
 public:
  struct Term {
    Matrix left;
    Matrix right;
  };

  /// Throws InvalidOperator if exchange_asymmetry() > kInvariant, or
  /// DimensionMismatch if a factor is not n x n.
  TwoParticleKernel(LatticeGrid grid, std::vector<Term> terms);

  const LatticeGrid& grid() const noexcept { return grid_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  /// Kernel contraction (A Psi)_ij = sum_t (left_t Psi right_t^T)_ij, i.e. the
  /// raw matrix product without quadrature weights.
  Matrix apply(const Matrix& values) const;

  /// Largest elementwise distance from any term L (x) R to its nearest swap
  /// partner R' (x) L' in the term list. Zero implies S A S = A exactly for
  /// the particle swap S.
  double exchange_asymmetry() const;

  /// Full n^2 x n^2 matrix. Throws CapacityExceeded when n^2 > kMaxDenseDim.
  Matrix dense() const;

 private:
  LatticeGrid grid_;
  std::vector<Term> terms_;
};

/// Set of lattice indices given as sorted, disjoint half-open ranges.
class Domain {
 public:
  struct Range {
    Index begin;
    Index end;
    bool operator==(const Range&) const = default;
  };

  /// Throws InvalidArgument unless ranges are non-empty, sorted, disjoint and
  /// inside [0, n_points).
  Domain(Index n_points, std::vector<Range> ranges);
  /// Points with lower <= x_i <= upper (length units).
  static Domain from_interval(const LatticeGrid& grid, double lower, double upper);
  static Domain full(const LatticeGrid& grid);

  Index n_points() const noexcept { return n_; }
  const std::vector<Range>& ranges() const noexcept { return ranges_; }
  bool contains(Index i) const;
  Index count() const;
  /// chi_D as a 0/1 vector.
  Eigen::VectorXd indicator() const;

  bool operator==(const Domain&) const = default;

 private:
  Index n_;
  std::vector<Range> ranges_;
};

/// Normalized exp(-(x - center)^2 / (4 width^2)); |psi|^2 has standard
/// deviation `width`. Throws UnresolvableWidth if width <= 2 dx and
/// InvalidArgument if center lies outside the grid.
LatticeWavefunction gaussian_packet(const LatticeGrid& grid, double center, double width);

/// Psi_ij = nu (psi_i phi_j +/- phi_i psi_j) with nu > 0 fixing the quadrature
/// norm. Built on the upper triangle and mirrored, so Psi_ji = +/- Psi_ij
/// bitwise. Throws NullState if the raw norm is below kNullNorm, GridMismatch
/// for different grids.
TwoParticleWavefunction symmetrize(const LatticeWavefunction& psi,
                                   const LatticeWavefunction& phi,
                                   ExchangeSymmetry sym);

/// a (x) delta + delta (x) a.
TwoParticleKernel symmetrized_observable(const KernelOperator& a);

/// dx^2 sum conj(psi_i) a_ij psi_j
Complex expectation_single(const KernelOperator& a, const LatticeWavefunction& psi);

/// dx^4 sum conj(Psi_ij) (A Psi)_ij
Complex expectation_two_particle(const TwoParticleKernel& a,
                                 const TwoParticleWavefunction& psi);

/// chi_D(i) a_ij chi_D(j); entries outside D are exact zeros.
KernelOperator localize(const KernelOperator& a, const Domain& domain);

/// Largest response of `a` to a unit delta-spike test function placed at a
/// point outside D, over both kernel arguments:
///   max_{e notin D} max(dx sum_i |a_ie|, dx sum_i |a_ei|).
double d_locality_residual(const KernelOperator& a, const Domain& domain);

/// True iff d_locality_residual(a, D) <= tolerance. Throws InvalidArgument for
/// a negative tolerance.
bool is_d_local(const KernelOperator& a, const Domain& domain, double tolerance);

/// Probability mass of psi on lattice points outside D.
double mass_outside(const LatticeWavefunction& psi, const Domain& domain);

struct AgreementResult {
  Complex two_particle;  ///< <Psi| sym(localize(a, D)) |Psi>
  Complex single;        ///< <psi| a |psi>
  double difference;     ///< |two_particle - single|
};

/// Compares the two-particle expectation of the symmetrized D-localized
/// observable in symmetrize(psi, phi) with the single-particle expectation of
/// the unrestricted `a` in psi. Throws SupportViolation unless psi carries at
/// most `support_mass_epsilon` of its mass outside D and phi at most that
/// much inside D.
AgreementResult dlocal_agreement_check(const KernelOperator& a, const Domain& domain,
                                       const LatticeWavefunction& psi,
                                       const LatticeWavefunction& phi,
                                       ExchangeSymmetry sym = ExchangeSymmetry::kBoson,
                                       double support_mass_epsilon = tol::kSupportMass);

/// Smallest contiguous index interval holding at least (1 - mass_epsilon) of
/// psi's total probability mass. Ties go to the leftmost interval. Throws
/// InvalidArgument unless 0 < mass_epsilon < 1.
Domain support(const LatticeWavefunction& psi, double mass_epsilon);

/// sum_k I (x) ... (x) a (x) ... (x) I with `a` in slot k, over n_particles
/// slots. Hermitian-flagged iff `a` is. Throws CapacityExceeded when
/// dim^n_particles > kMaxDenseDim.
hilbert::MatrixOperator collective_observable(const hilbert::MatrixOperator& a,
                                              int n_particles);

/// Swap operator on C^dim (x) C^dim.
hilbert::MatrixOperator exchange_operator(Index dim);

}  // namespace qmeas::particles

#endif  // QMEAS_IDENTICAL_PARTICLES_HPP
