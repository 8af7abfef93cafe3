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

// Beltrametti-Cassinelli-Lahti premeasurement of a discrete observable.
//
// A system S (dim d_S) is coupled to an apparatus A (dim d_A). The observable
// O has eigenvalues o_k with orthonormal eigenvectors phi_kl (l runs over the
// degeneracy of o_k). The apparatus has orthonormal pointer states psi_k and
// starts in the ready state psi. The premeasurement unitary U extends
//
//     phi_kl (x) psi  ->  phi'_kl (x) psi_k
//
// where phi'_kl is the transfer family. The product space is S (x) A in
// that order.

#ifndef QMEAS_PREMEASUREMENT_HPP
#define QMEAS_PREMEASUREMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmeas/hilbert.hpp"

namespace qmeas::bcl {

using hilbert::DensityMatrix;
using hilbert::MatrixOperator;
using hilbert::ProductSpace;
using hilbert::StateVector;

/// One family of vectors per eigenvalue sector; index [k][l].
using SectorFamily = std::vector<std::vector<StateVector>>;

/// Immutable, validated model inputs.
class BclSpec {
 public:
  struct Parts {
    std::vector<double> eigenvalues;
    SectorFamily system_eigenbasis;
    std::vector<StateVector> pointer_basis;
    StateVector ready_state;
    SectorFamily transfer_family;
  };

  /// Checks every structural invariant (distinct eigenvalues, completeness,
  /// eigenbasis orthonormality, pointer orthonormality, per-sector transfer
  /// orthonormality, matching shapes and dims). Throws SpecInvalid naming
  /// the first failure and its residual. Cross-sector orthonormality of the
  /// transfer family is NOT required here; see validate_spec.
  static BclSpec create(Parts parts);

  /// Canonical bases: phi_kl are consecutive canonical vectors of C^{d_S}
  /// (sector 0 first), psi_k = e_k of C^{d_A}, ready state e_{ready_index},
  /// transfer family phi'_kl = phi_kl.
  static BclSpec canonical(std::vector<double> eigenvalues, std::vector<Index> degeneracies,
                           Index apparatus_dim, Index ready_index = 0);

  /// Same spec with a different transfer family (re-validated).
  BclSpec with_transfer_family(SectorFamily transfer_family) const;

  Index system_dim() const noexcept { return system_dim_; }
  Index apparatus_dim() const noexcept { return apparatus_dim_; }
  std::size_t sector_count() const noexcept { return parts_.eigenvalues.size(); }
  std::size_t degeneracy(std::size_t k) const { return parts_.system_eigenbasis.at(k).size(); }

  const std::vector<double>& eigenvalues() const noexcept { return parts_.eigenvalues; }
  const SectorFamily& system_eigenbasis() const noexcept { return parts_.system_eigenbasis; }
  const std::vector<StateVector>& pointer_basis() const noexcept { return parts_.pointer_basis; }
  const StateVector& ready_state() const noexcept { return parts_.ready_state; }
  const SectorFamily& transfer_family() const noexcept { return parts_.transfer_family; }

  /// S (x) A.
  ProductSpace space() const { return ProductSpace({system_dim_, apparatus_dim_}); }

  /// Sector-major flattening of the eigenbasis / transfer family.
  std::vector<StateVector> flat_eigenbasis() const;
  std::vector<StateVector> flat_transfer_family() const;

  /// O = sum_k o_k sum_l |phi_kl><phi_kl| on S.
  MatrixOperator observable() const;
  /// sum_k o_k |psi_k><psi_k| on A.
  MatrixOperator pointer_observable() const;

 private:
  explicit BclSpec(Parts parts);

  Parts parts_;
  Index system_dim_;
  Index apparatus_dim_;
};

struct Residual {
  std::string name;
  double value;
  double tolerance;
  bool pass;
};

struct ValidationReport {
  std::vector<Residual> invariants;
  /// Full cross-sector orthonormality <phi'_ki|phi'_lj> = delta_kl delta_ij.
  bool measurement_condition = false;
  double measurement_residual = 0.0;

  bool invariants_hold() const;
};

ValidationReport validate_spec(const BclSpec& spec);

/// Selects the orthonormal completion used outside span{phi_kl (x) psi}.
/// Seed 0 walks canonical basis candidates in index order; any other seed
/// walks them in a seeded pseudo-random order (independently for domain and
/// range), giving a different but equally valid unitary.
struct UnitaryCompletion {
  std::uint64_t seed = 0;
};

/// Unitary U on S (x) A with U(phi_kl (x) psi) = phi'_kl (x) psi_k.
/// Throws MeasurementConditionViolated if the transfer family is not
/// orthonormal across sectors, CompletionFailure if Gram-Schmidt cannot
/// complete a basis.
MatrixOperator build_premeasurement_unitary(const BclSpec& spec,
                                            UnitaryCompletion completion = {});

struct PremeasurementResult {
  MatrixOperator unitary;
  /// U(phi (x) psi)
  StateVector final_state;
  /// p_k = <v_k|v_k>, v_k = sum_l c_kl phi'_kl.
  std::vector<double> probabilities;
  /// Phi_k = v_k / sqrt(p_k); empty when p_k < kProbabilityFloor.
  std::vector<std::optional<StateVector>> conditional_states;
  /// c_kl = <phi_kl|phi>
  std::vector<std::vector<Complex>> coefficients;

  /// max | final_state - sum_k sqrt(p_k) Phi_k (x) psi_k |.
  double reconstruction_residual(const BclSpec& spec) const;
};

/// Evolves phi (x) psi and decomposes the result by sector. Throws SpecInvalid
/// (MeasurementConditionViolated) when the measurement condition fails, and
/// DimensionMismatch when phi is not a system state.
PremeasurementResult premeasure(const BclSpec& spec, const StateVector& phi,
                                UnitaryCompletion completion = {});

/// tr_S |final><final|.
DensityMatrix apparatus_marginal(const PremeasurementResult& result, const BclSpec& spec);

/// tr_A |final><final|.
DensityMatrix system_marginal(const PremeasurementResult& result, const BclSpec& spec);

/// sum_k p_k |psi_k><psi_k|, the marginal expected from the probabilities.
DensityMatrix pointer_mixture(const std::vector<double>& probabilities, const BclSpec& spec);

}  // namespace qmeas::bcl

#endif  // QMEAS_PREMEASUREMENT_HPP
