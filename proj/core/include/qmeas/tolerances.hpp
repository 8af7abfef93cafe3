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

#ifndef QMEAS_TOLERANCES_HPP
#define QMEAS_TOLERANCES_HPP

namespace qmeas::tol {

/// Residual allowed on structural invariants (norms, Hermiticity, unitarity,
/// orthonormality, traces).
inline constexpr double kInvariant = 1e-10;

/// Residual allowed when comparing two routes to the same quantity.
inline constexpr double kCompare = 1e-12;

/// Eigenvalues at or below this are dropped from the entropy sum.
inline constexpr double kEntropyFloor = 1e-12;

/// Below this sector probability the conditional state is omitted.
inline constexpr double kProbabilityFloor = 1e-12;

/// Probabilities in [-kNegativeClip, 0) are clipped to zero.
inline constexpr double kNegativeClip = 1e-12;

/// Quadrature-norm tolerance for lattice wavefunctions.
inline constexpr double kLatticeNorm = 1e-8;

/// Raw norms below this are treated as the zero vector.
inline constexpr double kNullNorm = 1e-12;

/// Default probability mass allowed on the wrong side of a domain boundary.
inline constexpr double kSupportMass = 1e-10;

/// Agreement between two-particle and single-particle expectations.
inline constexpr double kExpectationAgreement = 1e-6;

/// Largest Hilbert-space dimension any dense operator may reach.
inline constexpr long kMaxDenseDim = 4096;

}  // namespace qmeas::tol

#endif  // QMEAS_TOLERANCES_HPP
