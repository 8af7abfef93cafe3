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

// Dense finite-dimensional complex linear algebra: normalized states,
// density matrices, operators, tensor products, partial traces and entropy.
//
// Tensor index convention (shared by every module): for a product space
// with factor dims (d_0, d_1, ..., d_{n-1}) the flattened index is row-major,
// i.e. the first factor varies slowest:
//
//     index(i_0, i_1) = i_0 * d_1 + i_1.
//
// All types are immutable values; every function is pure.

#ifndef QMEAS_HILBERT_HPP
#define QMEAS_HILBERT_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qmeas/errors.hpp"
#include "qmeas/tolerances.hpp"

namespace qmeas {

using Complex = std::complex<double>;
using Index = Eigen::Index;
/// Unnormalized complex vector. Carries no invariant.
using RawVector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

namespace hilbert {

/// Unit-norm state vector.
class StateVector {
 public:
  /// Throws NotNormalized if | ||a|| - 1 | > tolerance, DimensionMismatch if
  /// empty.
  static StateVector from_amplitudes(RawVector amplitudes,
                                     double tolerance = tol::kInvariant);
  /// Rescales `raw` to unit norm. Throws NullState if ||raw|| < kNullNorm.
  static StateVector normalize(const RawVector& raw);
  /// Canonical basis vector e_index.
  static StateVector basis(Index dim, Index index);

  Index dim() const noexcept { return amplitudes_.size(); }
  const RawVector& amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](Index i) const { return amplitudes_(i); }

  /// <this|ket>
  Complex inner(const StateVector& ket) const {
    return amplitudes_.dot(ket.amplitudes_);
  }

 private:
  explicit StateVector(RawVector amplitudes)
      : amplitudes_(std::move(amplitudes)) {}

  RawVector amplitudes_;
};

class DensityMatrix;

namespace detail {
DensityMatrix make_density_unchecked(Matrix entries);
}  // namespace detail

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
 public:
  /// Validates Hermiticity, trace and spectrum against kInvariant. Throws
  /// InvalidOperator on violation.
  static DensityMatrix from_matrix(Matrix entries);

  Index dim() const noexcept { return entries_.rows(); }
  const Matrix& entries() const noexcept { return entries_; }
  double purity() const;

 private:
  explicit DensityMatrix(Matrix entries) : entries_(std::move(entries)) {}
  friend DensityMatrix detail::make_density_unchecked(Matrix entries);

  Matrix entries_;
};

/// Square operator with independently asserted Hermitian / unitary flags.
class MatrixOperator {
 public:
  static MatrixOperator general(Matrix entries);
  /// Throws InvalidOperator unless M = M^dagger within kInvariant.
  static MatrixOperator hermitian(Matrix entries);
  /// Throws InvalidOperator unless M^dagger M = I within kInvariant.
  static MatrixOperator unitary(Matrix entries);
  static MatrixOperator identity(Index dim);

  Index dim() const noexcept { return entries_.rows(); }
  const Matrix& entries() const noexcept { return entries_; }
  bool is_hermitian() const noexcept { return hermitian_; }
  bool is_unitary() const noexcept { return unitary_; }

  /// max |M - M^dagger|
  double hermiticity_residual() const;
  /// max |M^dagger M - I|
  double unitarity_residual() const;

  RawVector apply(const RawVector& v) const;
  RawVector apply(const StateVector& v) const {
    return apply(v.amplitudes());
  }
  /// Requires the unitary flag; the image is renormalization-free.
  StateVector apply_unitary(const StateVector& v) const;

  /// <v|M|v>
  Complex expectation(const StateVector& v) const;
  /// tr(M rho)
  Complex expectation(const DensityMatrix& rho) const;

 private:
  MatrixOperator(Matrix entries, bool hermitian, bool unitary);

  Matrix entries_;
  bool hermitian_ = false;
  bool unitary_ = false;
};

/// Bookkeeping for a tensor-product space; see the index convention above.
class ProductSpace {
 public:
  explicit ProductSpace(std::vector<Index> factor_dims);

  const std::vector<Index>& factor_dims() const noexcept { return dims_; }
  std::size_t factor_count() const noexcept { return dims_.size(); }
  Index factor_dim(std::size_t factor) const { return dims_.at(factor); }
  Index total_dim() const noexcept { return total_; }

  bool operator==(const ProductSpace&) const = default;

 private:
  std::vector<Index> dims_;
  Index total_ = 1;
};

// ---------------------------------------------------------------------------
// Products

/// Row-major Kronecker product of raw vectors.
RawVector kron(const RawVector& u, const RawVector& v);
/// Row-major Kronecker product of matrices.
Matrix kron(const Matrix& a, const Matrix& b);

StateVector tensor(const StateVector& u, const StateVector& v);

/// Kronecker product; (M (x) N)(u (x) v) = (Mu) (x) (Nv). The result carries
/// the Hermitian (unitary) flag iff both factors do.
MatrixOperator tensor_op(const MatrixOperator& m, const MatrixOperator& n);

// ---------------------------------------------------------------------------
// States

/// |phi><phi|
DensityMatrix outer(const StateVector& phi);

/// Reduced state on factor `keep`, tracing out every other factor. Throws
/// DimensionMismatch if rho's dim is not the product of the factor dims and
/// InvalidArgument if `keep` is out of range.
DensityMatrix partial_trace(const DensityMatrix& rho, const ProductSpace& space,
                            std::size_t keep);

/// Partial trace of the projector |psi><psi| without forming it.
DensityMatrix partial_trace(const StateVector& psi, const ProductSpace& space,
                            std::size_t keep);

/// Coefficients c_i = <basis_i|phi>. Throws BasisNotOrthonormal if the Gram
/// matrix of `basis` deviates from the identity by more than kInvariant.
std::vector<Complex> coefficients_of(const StateVector& phi,
                                     std::span<const StateVector> basis);

/// max |G - I| for the Gram matrix G_ij = <v_i|v_j>.
double gram_residual(std::span<const StateVector> vectors);

// ---------------------------------------------------------------------------
// Spectra and information measures

/// Ascending real eigenvalues of a Hermitian matrix (self-adjoint solver).
Eigen::VectorXd hermitian_eigenvalues(const Matrix& hermitian);

/// -sum lambda ln lambda over eigenvalues above kEntropyFloor, in nats.
double von_neumann_entropy(const DensityMatrix& rho);

/// 1/2 ||rho - sigma||_1.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// -sum p ln p over entries above kEntropyFloor.
double shannon_entropy(std::span<const double> probabilities);

}  // namespace hilbert
}  // namespace qmeas

#endif  // QMEAS_HILBERT_HPP
