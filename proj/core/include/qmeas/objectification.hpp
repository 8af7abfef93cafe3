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

// Objectification: the deterministic, non-unitary map taking the entangled
// premeasurement state sum_k sqrt(p_k) Phi_k (x) psi_k to the gemenge
//
//     sum_k p_k |Phi_k><Phi_k| (x) |psi_k><psi_k|,
//
// together with diagnostics of which S-A correlations survive the map.

#ifndef QMEAS_OBJECTIFICATION_HPP
#define QMEAS_OBJECTIFICATION_HPP

#include <vector>

#include "qmeas/hilbert.hpp"
#include "qmeas/premeasurement.hpp"

namespace qmeas::objectification {

using hilbert::DensityMatrix;
using hilbert::MatrixOperator;
using hilbert::ProductSpace;
using hilbert::StateVector;

struct GemengeComponent {
  double probability;
  StateVector system_state;
  StateVector pointer_state;
};

/// Explicit decomposition {(p_k, Phi_k, psi_k)} with classical weights.
class GemengeDecomposition {
 public:
  /// Throws InvalidArgument unless the weights are non-negative and sum to 1,
  /// and both the system states and the pointer states are orthonormal
  /// (all within kInvariant).
  static GemengeDecomposition create(std::vector<GemengeComponent> components);

  const std::vector<GemengeComponent>& components() const noexcept { return components_; }
  std::size_t size() const noexcept { return components_.size(); }
  std::vector<double> probabilities() const;

 private:
  explicit GemengeDecomposition(std::vector<GemengeComponent> c) : components_(std::move(c)) {}

  std::vector<GemengeComponent> components_;
};

/// Keeps (p_k, Phi_k, psi_k) for every sector with p_k >= kProbabilityFloor.
/// Throws MeasurementConditionViolated if the spec's transfer family is not
/// orthonormal across sectors.
GemengeDecomposition apply_rule2(const bcl::PremeasurementResult& result, const bcl::BclSpec& spec);

/// sum_k p_k |Phi_k><Phi_k| (x) |psi_k><psi_k|. Throws DimensionMismatch if
/// the component dims disagree with `space`.
DensityMatrix gemenge_density_matrix(const GemengeDecomposition& g, const ProductSpace& space);

/// Frobenius norm of sum_{k != j} (I (x) P_k) rho (I (x) P_j), with
/// P_k = |psi_k><psi_k|. Throws BasisNotOrthonormal for a bad pointer basis.
double pointer_block_coherence(const DensityMatrix& rho,
                               const std::vector<StateVector>& pointer_basis,
                               const ProductSpace& space);

/// sum_k (I (x) P_k) rho (I (x) P_k). On a pointer-block-diagonal state this
/// is the identity map.
DensityMatrix pointer_block_dephase(const DensityMatrix& rho,
                                    const std::vector<StateVector>& pointer_basis,
                                    const ProductSpace& space);

struct CorrelationReport {
  double pointer_block_coherence_unitary = 0.0;
  double pointer_block_coherence_rule2 = 0.0;
  double marginal_agreement_system = 0.0;     ///< trace distance
  double marginal_agreement_apparatus = 0.0;  ///< trace distance
  double witness_expectation_unitary = 0.0;
  double witness_expectation_rule2 = 0.0;
  double entropy_unitary_state = 0.0;  ///< nats
  double entropy_rule2_state = 0.0;    ///< nats

  double entropy_gap() const { return entropy_rule2_state - entropy_unitary_state; }
};

/// Compares the unitary final state |final><final| with the Rule-2 gemenge.
/// Throws InvalidOperator unless `witness` is Hermitian on S (x) A.
CorrelationReport compare_states(const bcl::PremeasurementResult& result,
                                 const GemengeDecomposition& g, const bcl::BclSpec& spec,
                                 const MatrixOperator& witness);

// Default witnesses.

/// X_S (x) X_A with X_S = |phi_a><phi_b| + h.c. built from the first
/// eigenvector of sectors `a` and `b`, and X_A = |psi_a><psi_b| + h.c.
/// For a qubit with canonical bases this is sigma_x (x) sigma_x.
MatrixOperator sigma_x_witness(const bcl::BclSpec& spec, std::size_t a = 0, std::size_t b = 1);

/// O (x) I_A; diagonal in the eigenbasis, so blind to erased correlations.
MatrixOperator observable_witness(const bcl::BclSpec& spec);

/// sum_k O (x) |psi_k><psi_k| scaled by o_k: a pointer-block-diagonal witness.
MatrixOperator pointer_diagonal_witness(const bcl::BclSpec& spec);

}  // namespace qmeas::objectification

#endif  // QMEAS_OBJECTIFICATION_HPP
