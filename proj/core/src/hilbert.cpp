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

#include "qmeas/hilbert.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace qmeas::hilbert {

namespace {

std::string describe(const char* what, double residual) {
  std::ostringstream os;
  os.precision(3);
  os << what << " (residual " << std::scientific << residual << ")";
  return os.str();
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionMismatch(std::string(who) + ": matrix must be square and non-empty");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// StateVector

StateVector StateVector::from_amplitudes(RawVector amplitudes, double tolerance) {
  if (amplitudes.size() == 0) {
    throw DimensionMismatch("StateVector: empty amplitude list");
  }
  const double residual = std::abs(amplitudes.norm() - 1.0);
  if (!(residual <= tolerance)) {
    throw NotNormalized(describe("StateVector: amplitudes are not unit norm", residual));
  }
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::normalize(const RawVector& raw) {
  if (raw.size() == 0) {
    throw DimensionMismatch("StateVector: empty amplitude list");
  }
  const double n = raw.norm();
  if (!(n >= tol::kNullNorm)) {
    throw NullState("StateVector: cannot normalize a null vector");
  }
  return StateVector(raw / n);
}

StateVector StateVector::basis(Index dim, Index index) {
  if (dim <= 0 || index < 0 || index >= dim) {
    throw InvalidArgument("StateVector::basis: index out of range");
  }
  RawVector e = RawVector::Zero(dim);
  e(index) = 1.0;
  return StateVector(std::move(e));
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix detail::make_density_unchecked(Matrix entries) {
  return DensityMatrix(std::move(entries));
}

DensityMatrix DensityMatrix::from_matrix(Matrix entries) {
  require_square(entries, "DensityMatrix");
  const double herm = max_abs(entries - entries.adjoint());
  if (herm > tol::kInvariant) {
    throw InvalidOperator(describe("DensityMatrix: not Hermitian", herm));
  }
  const double trace_residual = std::abs(entries.trace() - Complex(1.0));
  if (trace_residual > tol::kInvariant) {
    throw InvalidOperator(describe("DensityMatrix: trace is not 1", trace_residual));
  }
  const Eigen::VectorXd eig = hermitian_eigenvalues(entries);
  if (eig(0) < -tol::kInvariant) {
    throw InvalidOperator(describe("DensityMatrix: negative eigenvalue", -eig(0)));
  }
  return DensityMatrix(std::move(entries));
}

double DensityMatrix::purity() const {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return entries_.squaredNorm();
}

// ---------------------------------------------------------------------------
// MatrixOperator

MatrixOperator::MatrixOperator(Matrix entries, bool hermitian, bool unitary)
    : entries_(std::move(entries)), hermitian_(hermitian), unitary_(unitary) {}

MatrixOperator MatrixOperator::general(Matrix entries) {
  require_square(entries, "MatrixOperator");
  return MatrixOperator(std::move(entries), false, false);
}

MatrixOperator MatrixOperator::hermitian(Matrix entries) {
  require_square(entries, "MatrixOperator");
  MatrixOperator op(std::move(entries), true, false);
  const double r = op.hermiticity_residual();
  if (r > tol::kInvariant) {
    throw InvalidOperator(describe("MatrixOperator: not Hermitian", r));
  }
  return op;
}

MatrixOperator MatrixOperator::unitary(Matrix entries) {
  require_square(entries, "MatrixOperator");
  MatrixOperator op(std::move(entries), false, true);
  const double r = op.unitarity_residual();
  if (r > tol::kInvariant) {
    throw InvalidOperator(describe("MatrixOperator: not unitary", r));
  }
  op.hermitian_ = op.hermiticity_residual() <= tol::kInvariant;
  return op;
}

MatrixOperator MatrixOperator::identity(Index dim) {
  if (dim <= 0) {
    throw InvalidArgument("MatrixOperator::identity: dim must be positive");
  }
  return MatrixOperator(Matrix::Identity(dim, dim), true, true);
}

double MatrixOperator::hermiticity_residual() const {
  return max_abs(entries_ - entries_.adjoint());
}

double MatrixOperator::unitarity_residual() const {
  return max_abs(entries_.adjoint() * entries_ - Matrix::Identity(dim(), dim()));
}

RawVector MatrixOperator::apply(const RawVector& v) const {
  if (v.size() != dim()) {
    throw DimensionMismatch("MatrixOperator::apply: dimension mismatch");
  }
  return entries_ * v;
}

StateVector MatrixOperator::apply_unitary(const StateVector& v) const {
  if (!unitary_) {
    throw InvalidOperator("MatrixOperator::apply_unitary: operator is not flagged unitary");
  }
  return StateVector::from_amplitudes(apply(v.amplitudes()));
}

Complex MatrixOperator::expectation(const StateVector& v) const {
  return v.amplitudes().dot(apply(v.amplitudes()));
}

Complex MatrixOperator::expectation(const DensityMatrix& rho) const {
  if (rho.dim() != dim()) {
    throw DimensionMismatch("MatrixOperator::expectation: dimension mismatch");
  }
  // tr(M rho) = sum_ij M_ij rho_ji
  return (entries_.cwiseProduct(rho.entries().transpose())).sum();
}

// ---------------------------------------------------------------------------
// ProductSpace

ProductSpace::ProductSpace(std::vector<Index> factor_dims) : dims_(std::move(factor_dims)) {
  if (dims_.empty()) {
    throw InvalidArgument("ProductSpace: at least one factor required");
  }
  for (Index d : dims_) {
    if (d <= 0) {
      throw InvalidArgument("ProductSpace: factor dims must be positive");
    }
    total_ *= d;
  }
}

// ---------------------------------------------------------------------------
// Products

RawVector kron(const RawVector& u, const RawVector& v) {
  const Index nv = v.size();
  RawVector out(u.size() * nv);
  for (Index i = 0; i < u.size(); ++i) {
    out.segment(i * nv, nv) = u(i) * v;
  }
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  const Index br = b.rows();
  const Index bc = b.cols();
  Matrix out(a.rows() * br, a.cols() * bc);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

StateVector tensor(const StateVector& u, const StateVector& v) {
  // Norm is multiplicative; the product of unit vectors needs no check beyond
  // rounding.
  return StateVector::from_amplitudes(kron(u.amplitudes(), v.amplitudes()));
}

MatrixOperator tensor_op(const MatrixOperator& m, const MatrixOperator& n) {
  Matrix k = kron(m.entries(), n.entries());
  if (m.is_unitary() && n.is_unitary()) {
    MatrixOperator out = MatrixOperator::unitary(std::move(k));
    return out;
  }
  if (m.is_hermitian() && n.is_hermitian()) {
    return MatrixOperator::hermitian(std::move(k));
  }
  return MatrixOperator::general(std::move(k));
}

// ---------------------------------------------------------------------------
// States

DensityMatrix outer(const StateVector& phi) {
  const RawVector& a = phi.amplitudes();
  return detail::make_density_unchecked(a * a.adjoint());
}

namespace {

// Index split (before, kept, after) of a flattened product index.
struct TraceLayout {
  Index before;
  Index kept;
  Index after;
};

TraceLayout trace_layout(const ProductSpace& space, Index dim, std::size_t keep) {
  if (keep >= space.factor_count()) {
    throw InvalidArgument("partial_trace: keep index " + std::to_string(keep) +
                          " out of range for " + std::to_string(space.factor_count()) +
                          " factors");
  }
  if (dim != space.total_dim()) {
    throw DimensionMismatch("partial_trace: state dim " + std::to_string(dim) +
                            " != product of factor dims " +
                            std::to_string(space.total_dim()));
  }
  TraceLayout t{1, space.factor_dim(keep), 1};
  for (std::size_t f = 0; f < space.factor_count(); ++f) {
    if (f < keep) {
      t.before *= space.factor_dim(f);
    } else if (f > keep) {
      t.after *= space.factor_dim(f);
    }
  }
  return t;
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, const ProductSpace& space,
                            std::size_t keep) {
  const TraceLayout t = trace_layout(space, rho.dim(), keep);
  const Matrix& r = rho.entries();
  const Index stride = t.kept * t.after;
  Matrix out = Matrix::Zero(t.kept, t.kept);
  if (t.after == 1) {
    for (Index a = 0; a < t.before; ++a) {
      out += r.block(a * stride, a * stride, t.kept, t.kept);
    }
    return detail::make_density_unchecked(std::move(out));
  }
  for (Index k = 0; k < t.kept; ++k) {
    for (Index kp = 0; kp < t.kept; ++kp) {
      Complex s = 0.0;
      for (Index a = 0; a < t.before; ++a) {
        for (Index c = 0; c < t.after; ++c) {
          s += r(a * stride + k * t.after + c, a * stride + kp * t.after + c);
        }
      }
      out(k, kp) = s;
    }
  }
  return detail::make_density_unchecked(std::move(out));
}

DensityMatrix partial_trace(const StateVector& psi, const ProductSpace& space,
                            std::size_t keep) {
  const TraceLayout t = trace_layout(space, psi.dim(), keep);
  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Index stride = t.kept * t.after;
  Matrix out = Matrix::Zero(t.kept, t.kept);
  // Each slab a is a row-major (kept x after) coefficient block C_a, and the
  // reduced state is sum_a C_a C_a^dagger.
  for (Index a = 0; a < t.before; ++a) {
    const Eigen::Map<const RowMajor> c(psi.amplitudes().data() + a * stride, t.kept, t.after);
    out.noalias() += c * c.adjoint();
  }
  return detail::make_density_unchecked(std::move(out));
}

double gram_residual(std::span<const StateVector> vectors) {
  double worst = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i; j < vectors.size(); ++j) {
      if (vectors[i].dim() != vectors[j].dim()) {
        throw DimensionMismatch("gram_residual: vectors of different dims");
      }
      const Complex g = vectors[i].inner(vectors[j]);
      const double dev = std::abs(g - (i == j ? Complex(1.0) : Complex(0.0)));
      worst = std::max(worst, dev);
    }
  }
  return worst;
}

std::vector<Complex> coefficients_of(const StateVector& phi,
                                     std::span<const StateVector> basis) {
  const double r = gram_residual(basis);
  if (r > tol::kInvariant) {
    throw BasisNotOrthonormal(describe("coefficients_of: basis is not orthonormal", r));
  }
  std::vector<Complex> c;
  c.reserve(basis.size());
  for (const StateVector& b : basis) {
    if (b.dim() != phi.dim()) {
      throw DimensionMismatch("coefficients_of: basis vector dim differs from state dim");
    }
    c.push_back(b.inner(phi));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Spectra

Eigen::VectorXd hermitian_eigenvalues(const Matrix& hermitian) {
  require_square(hermitian, "hermitian_eigenvalues");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw InvalidOperator("hermitian_eigenvalues: decomposition did not converge");
  }
  return solver.eigenvalues();
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const Eigen::VectorXd eig = hermitian_eigenvalues(rho.entries());
  double s = 0.0;
  for (Index i = 0; i < eig.size(); ++i) {
    const double l = eig(i);
    if (l > tol::kEntropyFloor) {
      s -= l * std::log(l);
    }
  }
  return std::max(s, 0.0);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw DimensionMismatch("trace_distance: dimension mismatch");
  }
  const Matrix diff = rho.entries() - sigma.entries();
  // Symmetrize away rounding so the self-adjoint solver sees an exactly
  // Hermitian input.
  const Eigen::VectorXd eig = hermitian_eigenvalues(0.5 * (diff + diff.adjoint()));
  return 0.5 * eig.cwiseAbs().sum();
}

double shannon_entropy(std::span<const double> probabilities) {
  double s = 0.0;
  for (double p : probabilities) {
    if (p > tol::kEntropyFloor) {
      s -= p * std::log(p);
    }
  }
  return s;
}

}  // namespace qmeas::hilbert
