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

#include "qmeas/objectification.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace qmeas::objectification {

using hilbert::gram_residual;
using hilbert::kron;

namespace {

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

// Rows of I_S (x) Psi^dagger, where Psi holds the pointer states as columns.
// Row (s, k) of the result picks out the amplitude along e_s (x) psi_k.
Matrix pointer_frame(const std::vector<StateVector>& pointer_basis, const ProductSpace& space) {
  if (space.factor_count() != 2) {
    throw InvalidArgument("pointer frame: product space must be bipartite");
  }
  const Index ds = space.factor_dim(0);
  const Index da = space.factor_dim(1);
  const Index k = static_cast<Index>(pointer_basis.size());
  if (k == 0) {
    throw InvalidArgument("pointer frame: pointer basis is empty");
  }
  Matrix psi(da, k);
  for (Index j = 0; j < k; ++j) {
    if (pointer_basis[static_cast<std::size_t>(j)].dim() != da) {
      throw DimensionMismatch("pointer frame: pointer state dim differs from apparatus dim");
    }
    psi.col(j) = pointer_basis[static_cast<std::size_t>(j)].amplitudes();
  }
  if (const double r = gram_residual(pointer_basis); r > tol::kInvariant) {
    throw BasisNotOrthonormal("pointer frame: pointer basis not orthonormal (residual " + sci(r) +
                              ")");
  }
  return kron(Matrix::Identity(ds, ds), Matrix(psi.adjoint()));
}

void require_space(const DensityMatrix& rho, const ProductSpace& space, const char* who) {
  if (rho.dim() != space.total_dim()) {
    throw DimensionMismatch(std::string(who) + ": state dim differs from product space dim");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// GemengeDecomposition

GemengeDecomposition GemengeDecomposition::create(std::vector<GemengeComponent> components) {
  if (components.empty()) {
    throw InvalidArgument("GemengeDecomposition: at least one component required");
  }
  double total = 0.0;
  std::vector<StateVector> systems;
  std::vector<StateVector> pointers;
  for (const GemengeComponent& c : components) {
    if (!(c.probability >= 0.0)) {
      throw InvalidArgument("GemengeDecomposition: negative weight");
    }
    total += c.probability;
    systems.push_back(c.system_state);
    pointers.push_back(c.pointer_state);
  }
  if (std::abs(total - 1.0) > tol::kInvariant) {
    throw InvalidArgument("GemengeDecomposition: weights sum to " + sci(total));
  }
  if (const double r = gram_residual(systems); r > tol::kInvariant) {
    throw InvalidArgument("GemengeDecomposition: system states not orthonormal (residual " +
                          sci(r) + ")");
  }
  if (const double r = gram_residual(pointers); r > tol::kInvariant) {
    throw InvalidArgument("GemengeDecomposition: pointer states not orthonormal (residual " +
                          sci(r) + ")");
  }
  return GemengeDecomposition(std::move(components));
}

std::vector<double> GemengeDecomposition::probabilities() const {
  std::vector<double> p;
  p.reserve(components_.size());
  for (const GemengeComponent& c : components_) {
    p.push_back(c.probability);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Rule 2

GemengeDecomposition apply_rule2(const bcl::PremeasurementResult& result,
                                 const bcl::BclSpec& spec) {
  if (const double r = gram_residual(spec.flat_transfer_family()); r > tol::kInvariant) {
    throw MeasurementConditionViolated(
        "apply_rule2: transfer family is not orthonormal across sectors (residual " + sci(r) +
        ")");
  }
  if (result.probabilities.size() != spec.sector_count() ||
      result.conditional_states.size() != spec.sector_count()) {
    throw DimensionMismatch("apply_rule2: result does not match the spec's sector count");
  }
  std::vector<GemengeComponent> components;
  for (std::size_t k = 0; k < spec.sector_count(); ++k) {
    if (result.conditional_states[k] && result.probabilities[k] >= tol::kProbabilityFloor) {
      components.push_back(
          {result.probabilities[k], *result.conditional_states[k], spec.pointer_basis()[k]});
    }
  }
  return GemengeDecomposition::create(std::move(components));
}

DensityMatrix gemenge_density_matrix(const GemengeDecomposition& g, const ProductSpace& space) {
  if (space.factor_count() != 2) {
    throw InvalidArgument("gemenge_density_matrix: product space must be bipartite");
  }
  const Index ds = space.factor_dim(0);
  const Index da = space.factor_dim(1);
  Matrix rho = Matrix::Zero(space.total_dim(), space.total_dim());
  for (const GemengeComponent& c : g.components()) {
    if (c.system_state.dim() != ds || c.pointer_state.dim() != da) {
      throw DimensionMismatch("gemenge_density_matrix: component dims differ from the space");
    }
    const RawVector& s = c.system_state.amplitudes();
    const RawVector& a = c.pointer_state.amplitudes();
    rho += c.probability * kron(Matrix(s * s.adjoint()), Matrix(a * a.adjoint()));
  }
  return hilbert::detail::make_density_unchecked(std::move(rho));
}

double pointer_block_coherence(const DensityMatrix& rho,
                               const std::vector<StateVector>& pointer_basis,
                               const ProductSpace& space) {
  require_space(rho, space, "pointer_block_coherence");
  const Matrix frame = pointer_frame(pointer_basis, space);
  const Matrix rotated = frame * rho.entries() * frame.adjoint();
  const Index k = static_cast<Index>(pointer_basis.size());
  double sq = 0.0;
  for (Index col = 0; col < rotated.cols(); ++col) {
    for (Index row = 0; row < rotated.rows(); ++row) {
      if (row % k != col % k) {
        sq += std::norm(rotated(row, col));
      }
    }
  }
  return std::sqrt(sq);
}

DensityMatrix pointer_block_dephase(const DensityMatrix& rho,
                                    const std::vector<StateVector>& pointer_basis,
                                    const ProductSpace& space) {
  require_space(rho, space, "pointer_block_dephase");
  const Matrix frame = pointer_frame(pointer_basis, space);
  Matrix rotated = frame * rho.entries() * frame.adjoint();
  const Index k = static_cast<Index>(pointer_basis.size());
  for (Index col = 0; col < rotated.cols(); ++col) {
    for (Index row = 0; row < rotated.rows(); ++row) {
      if (row % k != col % k) {
        rotated(row, col) = 0.0;
      }
    }
  }
  Matrix out = frame.adjoint() * rotated * frame;
  return DensityMatrix::from_matrix(0.5 * (out + out.adjoint()));
}

CorrelationReport compare_states(const bcl::PremeasurementResult& result,
                                 const GemengeDecomposition& g, const bcl::BclSpec& spec,
                                 const MatrixOperator& witness) {
  const ProductSpace space = spec.space();
  if (witness.dim() != space.total_dim()) {
    throw DimensionMismatch("compare_states: witness dim differs from S (x) A dim");
  }
  if (const double r = witness.hermiticity_residual(); r > tol::kInvariant) {
    throw InvalidOperator("compare_states: witness is not Hermitian (residual " + sci(r) + ")");
  }
  const DensityMatrix unitary_state = hilbert::outer(result.final_state);
  const DensityMatrix rule2_state = gemenge_density_matrix(g, space);

  CorrelationReport r;
  r.pointer_block_coherence_unitary =
      pointer_block_coherence(unitary_state, spec.pointer_basis(), space);
  r.pointer_block_coherence_rule2 = pointer_block_coherence(rule2_state, spec.pointer_basis(), space);
  r.marginal_agreement_system =
      hilbert::trace_distance(hilbert::partial_trace(result.final_state, space, 0),
                              hilbert::partial_trace(rule2_state, space, 0));
  r.marginal_agreement_apparatus =
      hilbert::trace_distance(hilbert::partial_trace(result.final_state, space, 1),
                              hilbert::partial_trace(rule2_state, space, 1));
  r.witness_expectation_unitary = witness.expectation(unitary_state).real();
  r.witness_expectation_rule2 = witness.expectation(rule2_state).real();
  r.entropy_unitary_state = hilbert::von_neumann_entropy(unitary_state);
  r.entropy_rule2_state = hilbert::von_neumann_entropy(rule2_state);
  return r;
}

// ---------------------------------------------------------------------------
// Witnesses

MatrixOperator sigma_x_witness(const bcl::BclSpec& spec, std::size_t a, std::size_t b) {
  if (a == b || a >= spec.sector_count() || b >= spec.sector_count()) {
    throw InvalidArgument("sigma_x_witness: need two distinct existing sectors");
  }
  const RawVector& sa = spec.system_eigenbasis()[a].front().amplitudes();
  const RawVector& sb = spec.system_eigenbasis()[b].front().amplitudes();
  const RawVector& pa = spec.pointer_basis()[a].amplitudes();
  const RawVector& pb = spec.pointer_basis()[b].amplitudes();
  const Matrix xs = sa * sb.adjoint() + sb * sa.adjoint();
  const Matrix xa = pa * pb.adjoint() + pb * pa.adjoint();
  const Matrix w = kron(xs, xa);
  return MatrixOperator::hermitian(0.5 * (w + w.adjoint()));
}

MatrixOperator observable_witness(const bcl::BclSpec& spec) {
  return hilbert::tensor_op(spec.observable(), MatrixOperator::identity(spec.apparatus_dim()));
}

MatrixOperator pointer_diagonal_witness(const bcl::BclSpec& spec) {
  const Matrix& o = spec.observable().entries();
  Matrix w = Matrix::Zero(spec.system_dim() * spec.apparatus_dim(),
                          spec.system_dim() * spec.apparatus_dim());
  for (std::size_t k = 0; k < spec.sector_count(); ++k) {
    const RawVector& p = spec.pointer_basis()[k].amplitudes();
    w += spec.eigenvalues()[k] * kron(o, Matrix(p * p.adjoint()));
  }
  return MatrixOperator::hermitian(0.5 * (w + w.adjoint()));
}

}  // namespace qmeas::objectification
