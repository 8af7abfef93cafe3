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

#include "qmeas/premeasurement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace qmeas::bcl {

using hilbert::gram_residual;
using hilbert::kron;

namespace {

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

std::vector<StateVector> flatten(const SectorFamily& family) {
  std::vector<StateVector> out;
  for (const auto& sector : family) {
    out.insert(out.end(), sector.begin(), sector.end());
  }
  return out;
}

double per_sector_residual(const SectorFamily& family) {
  double worst = 0.0;
  for (const auto& sector : family) {
    worst = std::max(worst, gram_residual(sector));
  }
  return worst;
}

void require_dims(const std::vector<StateVector>& vs, Index dim, const char* what) {
  for (const StateVector& v : vs) {
    if (v.dim() != dim) {
      throw SpecInvalid(std::string("BclSpec: ") + what + " has a vector of dim " +
                        std::to_string(v.dim()) + ", expected " + std::to_string(dim));
    }
  }
}

// Extends the orthonormal columns of `seed` to an orthonormal basis of C^n by
// modified Gram-Schmidt (two passes) over canonical basis candidates visited
// in `order`. A candidate is kept when its residual norm exceeds
// 0.5 / sqrt(n); visiting every canonical vector once with that threshold
// always completes the basis, and keeps each new column well conditioned.
Matrix complete_basis(const std::vector<RawVector>& seed, Index n,
                      const std::vector<Index>& order) {
  Matrix q(n, n);
  Index filled = 0;
  for (const RawVector& v : seed) {
    q.col(filled++) = v;
  }
  const double threshold = 0.5 / std::sqrt(static_cast<double>(n));
  for (Index candidate : order) {
    if (filled == n) {
      break;
    }
    RawVector v = RawVector::Zero(n);
    v(candidate) = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (Index j = 0; j < filled; ++j) {
        v -= q.col(j).dot(v) * q.col(j);
      }
    }
    const double norm = v.norm();
    if (norm > threshold) {
      q.col(filled++) = v / norm;
    }
  }
  if (filled != n) {
    throw CompletionFailure("build_premeasurement_unitary: completed only " +
                            std::to_string(filled) + " of " + std::to_string(n) +
                            " basis vectors");
  }
  return q;
}

std::vector<Index> candidate_order(Index n, std::mt19937_64* rng) {
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  if (rng != nullptr) {
    std::shuffle(order.begin(), order.end(), *rng);
  }
  return order;
}

}  // namespace

// ---------------------------------------------------------------------------
// BclSpec

BclSpec::BclSpec(Parts parts)
    : parts_(std::move(parts)),
      system_dim_(parts_.system_eigenbasis.front().front().dim()),
      apparatus_dim_(parts_.ready_state.dim()) {}

BclSpec BclSpec::create(Parts parts) {
  const std::size_t sectors = parts.eigenvalues.size();
  if (sectors == 0) {
    throw SpecInvalid("BclSpec: at least one eigenvalue required");
  }
  for (std::size_t k = 0; k < sectors; ++k) {
    if (!std::isfinite(parts.eigenvalues[k])) {
      throw SpecInvalid("BclSpec: eigenvalues must be finite");
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (parts.eigenvalues[j] == parts.eigenvalues[k]) {
        throw SpecInvalid("BclSpec: eigenvalues must be distinct");
      }
    }
  }
  if (parts.system_eigenbasis.size() != sectors) {
    throw SpecInvalid("BclSpec: one eigenbasis sector per eigenvalue required");
  }
  if (parts.pointer_basis.size() != sectors) {
    throw SpecInvalid("BclSpec: number of pointer states must equal number of sectors");
  }
  if (parts.transfer_family.size() != sectors) {
    throw SpecInvalid("BclSpec: transfer family must have one sector per eigenvalue");
  }
  for (std::size_t k = 0; k < sectors; ++k) {
    if (parts.system_eigenbasis[k].empty()) {
      throw SpecInvalid("BclSpec: eigenvalue sector " + std::to_string(k) + " is empty");
    }
    if (parts.transfer_family[k].size() != parts.system_eigenbasis[k].size()) {
      throw SpecInvalid("BclSpec: transfer sector " + std::to_string(k) +
                        " does not match the eigenbasis degeneracy");
    }
  }

  const std::vector<StateVector> eigen = flatten(parts.system_eigenbasis);
  const Index ds = eigen.front().dim();
  const Index da = parts.ready_state.dim();
  if (ds * da > tol::kMaxDenseDim) {
    throw CapacityExceeded("BclSpec: system_dim * apparatus_dim exceeds " +
                           std::to_string(tol::kMaxDenseDim));
  }
  require_dims(eigen, ds, "system eigenbasis");
  require_dims(flatten(parts.transfer_family), ds, "transfer family");
  require_dims(parts.pointer_basis, da, "pointer basis");

  if (static_cast<Index>(eigen.size()) != ds) {
    throw SpecInvalid("BclSpec: degeneracies sum to " + std::to_string(eigen.size()) +
                      " but system_dim is " + std::to_string(ds));
  }
  if (const double r = gram_residual(eigen); r > tol::kInvariant) {
    throw SpecInvalid("BclSpec: system eigenbasis not orthonormal (residual " + sci(r) + ")");
  }
  if (const double r = gram_residual(parts.pointer_basis); r > tol::kInvariant) {
    throw SpecInvalid("BclSpec: pointer basis not orthonormal (residual " + sci(r) + ")");
  }
  if (const double r = per_sector_residual(parts.transfer_family); r > tol::kInvariant) {
    throw SpecInvalid("BclSpec: transfer family not orthonormal within a sector (residual " +
                      sci(r) + ")");
  }
  return BclSpec(std::move(parts));
}

BclSpec BclSpec::canonical(std::vector<double> eigenvalues, std::vector<Index> degeneracies,
                           Index apparatus_dim, Index ready_index) {
  if (degeneracies.size() != eigenvalues.size()) {
    throw SpecInvalid("BclSpec::canonical: one degeneracy per eigenvalue required");
  }
  Index ds = 0;
  for (Index d : degeneracies) {
    if (d <= 0) {
      throw SpecInvalid("BclSpec::canonical: degeneracies must be positive");
    }
    ds += d;
  }
  if (apparatus_dim < static_cast<Index>(eigenvalues.size())) {
    throw SpecInvalid("BclSpec::canonical: apparatus_dim must be at least the sector count");
  }
  if (ready_index < 0 || ready_index >= apparatus_dim) {
    throw SpecInvalid("BclSpec::canonical: ready_index outside the apparatus space");
  }
  Parts parts{std::move(eigenvalues), {}, {}, StateVector::basis(apparatus_dim, ready_index), {}};
  Index next = 0;
  for (std::size_t k = 0; k < degeneracies.size(); ++k) {
    std::vector<StateVector> sector;
    for (Index l = 0; l < degeneracies[k]; ++l) {
      sector.push_back(StateVector::basis(ds, next++));
    }
    parts.system_eigenbasis.push_back(sector);
    parts.transfer_family.push_back(std::move(sector));
    parts.pointer_basis.push_back(StateVector::basis(apparatus_dim, static_cast<Index>(k)));
  }
  return create(std::move(parts));
}

BclSpec BclSpec::with_transfer_family(SectorFamily transfer_family) const {
  Parts p = parts_;
  p.transfer_family = std::move(transfer_family);
  return create(std::move(p));
}

std::vector<StateVector> BclSpec::flat_eigenbasis() const {
  return flatten(parts_.system_eigenbasis);
}

std::vector<StateVector> BclSpec::flat_transfer_family() const {
  return flatten(parts_.transfer_family);
}

MatrixOperator BclSpec::observable() const {
  Matrix o = Matrix::Zero(system_dim_, system_dim_);
  for (std::size_t k = 0; k < sector_count(); ++k) {
    for (const StateVector& v : parts_.system_eigenbasis[k]) {
      o += parts_.eigenvalues[k] * v.amplitudes() * v.amplitudes().adjoint();
    }
  }
  // Symmetrize away rounding in the outer products.
  return MatrixOperator::hermitian(0.5 * (o + o.adjoint()));
}

MatrixOperator BclSpec::pointer_observable() const {
  Matrix o = Matrix::Zero(apparatus_dim_, apparatus_dim_);
  for (std::size_t k = 0; k < sector_count(); ++k) {
    const RawVector& v = parts_.pointer_basis[k].amplitudes();
    o += parts_.eigenvalues[k] * v * v.adjoint();
  }
  return MatrixOperator::hermitian(0.5 * (o + o.adjoint()));
}

// ---------------------------------------------------------------------------
// Validation

bool ValidationReport::invariants_hold() const {
  return std::all_of(invariants.begin(), invariants.end(),
                     [](const Residual& r) { return r.pass; });
}

ValidationReport validate_spec(const BclSpec& spec) {
  ValidationReport report;
  auto add = [&](std::string name, double value) {
    report.invariants.push_back({std::move(name), value, tol::kInvariant, value <= tol::kInvariant});
  };
  Index deg_sum = 0;
  for (std::size_t k = 0; k < spec.sector_count(); ++k) {
    deg_sum += static_cast<Index>(spec.degeneracy(k));
  }
  add("completeness", static_cast<double>(std::abs(deg_sum - spec.system_dim())));
  add("eigenbasis_orthonormality", gram_residual(spec.flat_eigenbasis()));
  add("pointer_orthonormality", gram_residual(spec.pointer_basis()));
  add("transfer_sector_orthonormality", per_sector_residual(spec.transfer_family()));
  add("pointer_count",
      static_cast<double>(spec.pointer_basis().size() != spec.sector_count()));

  report.measurement_residual = gram_residual(spec.flat_transfer_family());
  report.measurement_condition = report.measurement_residual <= tol::kInvariant;
  return report;
}

// ---------------------------------------------------------------------------
// Unitary

MatrixOperator build_premeasurement_unitary(const BclSpec& spec, UnitaryCompletion completion) {
  const double mc = gram_residual(spec.flat_transfer_family());
  if (mc > tol::kInvariant) {
    throw MeasurementConditionViolated(
        "build_premeasurement_unitary: transfer family is not orthonormal across sectors "
        "(residual " + sci(mc) + ")");
  }
  const Index n = spec.system_dim() * spec.apparatus_dim();
  const RawVector& ready = spec.ready_state().amplitudes();

  std::vector<RawVector> domain;
  std::vector<RawVector> range;
  for (std::size_t k = 0; k < spec.sector_count(); ++k) {
    const RawVector& pointer = spec.pointer_basis()[k].amplitudes();
    for (std::size_t l = 0; l < spec.degeneracy(k); ++l) {
      domain.push_back(kron(spec.system_eigenbasis()[k][l].amplitudes(), ready));
      range.push_back(kron(spec.transfer_family()[k][l].amplitudes(), pointer));
    }
  }

  std::vector<Index> domain_order;
  std::vector<Index> range_order;
  if (completion.seed == 0) {
    domain_order = candidate_order(n, nullptr);
    range_order = domain_order;
  } else {
    std::mt19937_64 rng(completion.seed);
    domain_order = candidate_order(n, &rng);
    range_order = candidate_order(n, &rng);
  }
  const Matrix d = complete_basis(domain, n, domain_order);
  const Matrix r = complete_basis(range, n, range_order);
  return MatrixOperator::unitary(r * d.adjoint());
}

// ---------------------------------------------------------------------------
// Premeasurement

double PremeasurementResult::reconstruction_residual(const BclSpec& spec) const {
  RawVector sum = RawVector::Zero(final_state.dim());
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    const RawVector& pointer = spec.pointer_basis()[k].amplitudes();
    if (conditional_states[k]) {
      sum += std::sqrt(probabilities[k]) * kron(conditional_states[k]->amplitudes(), pointer);
    } else {
      // Omitted sectors still carry their (tiny) unnormalized branch.
      RawVector branch = RawVector::Zero(spec.system_dim());
      for (std::size_t l = 0; l < coefficients[k].size(); ++l) {
        branch += coefficients[k][l] * spec.transfer_family()[k][l].amplitudes();
      }
      sum += kron(branch, pointer);
    }
  }
  return (final_state.amplitudes() - sum).cwiseAbs().maxCoeff();
}

PremeasurementResult premeasure(const BclSpec& spec, const StateVector& phi,
                                UnitaryCompletion completion) {
  if (phi.dim() != spec.system_dim()) {
    throw DimensionMismatch("premeasure: initial state dim " + std::to_string(phi.dim()) +
                            " != system_dim " + std::to_string(spec.system_dim()));
  }
  MatrixOperator u = build_premeasurement_unitary(spec, completion);
  StateVector final_state = u.apply_unitary(hilbert::tensor(phi, spec.ready_state()));

  const std::vector<Complex> flat = hilbert::coefficients_of(phi, spec.flat_eigenbasis());

  PremeasurementResult result{std::move(u), std::move(final_state), {}, {}, {}};
  std::size_t offset = 0;
  for (std::size_t k = 0; k < spec.sector_count(); ++k) {
    const std::size_t deg = spec.degeneracy(k);
    std::vector<Complex> c(flat.begin() + static_cast<std::ptrdiff_t>(offset),
                           flat.begin() + static_cast<std::ptrdiff_t>(offset + deg));
    offset += deg;

    RawVector branch = RawVector::Zero(spec.system_dim());
    for (std::size_t l = 0; l < deg; ++l) {
      branch += c[l] * spec.transfer_family()[k][l].amplitudes();
    }
    // <v_k|v_k>, real and non-negative up to rounding.
    double p = branch.dot(branch).real();
    if (p < 0.0 && p >= -tol::kNegativeClip) {
      p = 0.0;
    }
    result.probabilities.push_back(p);
    if (p >= tol::kProbabilityFloor) {
      result.conditional_states.emplace_back(StateVector::normalize(branch));
    } else {
      result.conditional_states.emplace_back(std::nullopt);
    }
    result.coefficients.push_back(std::move(c));
  }
  return result;
}

DensityMatrix apparatus_marginal(const PremeasurementResult& result, const BclSpec& spec) {
  return hilbert::partial_trace(result.final_state, spec.space(), 1);
}

DensityMatrix system_marginal(const PremeasurementResult& result, const BclSpec& spec) {
  return hilbert::partial_trace(result.final_state, spec.space(), 0);
}

DensityMatrix pointer_mixture(const std::vector<double>& probabilities, const BclSpec& spec) {
  if (probabilities.size() != spec.sector_count()) {
    throw DimensionMismatch("pointer_mixture: one probability per sector required");
  }
  Matrix m = Matrix::Zero(spec.apparatus_dim(), spec.apparatus_dim());
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    const RawVector& v = spec.pointer_basis()[k].amplitudes();
    m += probabilities[k] * v * v.adjoint();
  }
  return DensityMatrix::from_matrix(0.5 * (m + m.adjoint()));
}

}  // namespace qmeas::bcl
