// Copyright 2026 The QDB Lab Authors
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

#ifndef QDB_QUANTUM_H_
#define QDB_QUANTUM_H_

#include <array>
#include <complex>
#include <cstdint>

#include <Eigen/Core>

#include "qdb/random.h"

namespace qdb {

// Single-qubit quantum mechanics on 2x2 density matrices.
//
// All states are mixed-state density matrices so that per-round acceptance
// probabilities can be computed exactly and compared against sampling.

using Matrix2 = Eigen::Matrix2cd;
using Bit = std::uint8_t;

// Z is the computational basis {|0>, |1>}, X the diagonal basis {|+>, |->}.
// The encoding bit 0 -> Z, 1 -> X is used wherever bases come from bits.
enum class Basis : std::uint8_t { kZ = 0, kX = 1 };

inline Basis BasisFromBit(Bit bit) { return bit ? Basis::kX : Basis::kZ; }
inline Bit BitFromBasis(Basis basis) { return basis == Basis::kX ? 1 : 0; }
inline Basis OtherBasis(Basis basis) {
  return basis == Basis::kZ ? Basis::kX : Basis::kZ;
}
char BasisName(Basis basis);

// Entrywise tolerance for the Hermitian, trace and positivity checks.
inline constexpr double kStateTolerance = 1e-12;

struct BlochVector {
  double x = 0;
  double y = 0;
  double z = 0;
};

// Returns true iff `rho` is Hermitian, has unit trace and is positive
// semidefinite, each within `tolerance`.
bool IsDensityMatrix(const Matrix2& rho, double tolerance = kStateTolerance);

class QubitState {
 public:
  // Validates the density-matrix invariants; throws ArgumentError otherwise.
  static QubitState FromDensityMatrix(const Matrix2& rho);
  // Normalizes (alpha, beta) and returns |psi><psi|.
  static QubitState FromAmplitudes(std::complex<double> alpha,
                                   std::complex<double> beta);
  static QubitState MaximallyMixed();

  const Matrix2& rho() const { return rho_; }
  double Purity() const;
  BlochVector Bloch() const;

  friend QubitState Bb84State(Bit bit, Basis basis);
  friend QubitState Depolarize(const QubitState& state, double eta);
  friend QubitState Hadamard(const QubitState& state);
  friend QubitState Mix(const QubitState& a, const QubitState& b,
                        double weight_a);

 private:
  explicit QubitState(const Matrix2& rho) : rho_(rho) {}

  Matrix2 rho_;
};

struct MeasurementDistribution {
  double p0 = 0;
  double p1 = 0;
};

// Rank-one projector |bit>_basis <bit|_basis.
const Matrix2& Bb84Projector(Bit bit, Basis basis);

// |bit>_basis <bit|_basis as a state.
QubitState Bb84State(Bit bit, Basis basis);

// Born rule: p_r = tr(Pi_{basis,r} rho).
MeasurementDistribution MeasureDist(const QubitState& state, Basis basis);

// Samples a measurement in `basis`. Consumes exactly one draw.
Bit SampleMeasure(const QubitState& state, Basis basis, RandomStream& rng);

// Samples the two-outcome projective measurement {I - P, P}, returning 1 for
// the outcome of `projector_one`. Consumes exactly one draw.
Bit SampleProjective(const QubitState& state, const Matrix2& projector_one,
                     RandomStream& rng);

// Depolarizing channel (1 - eta) rho + eta I/2. Throws ArgumentError for eta
// outside [0, 1].
QubitState Depolarize(const QubitState& state, double eta);

// H rho H with H = [[1, 1], [1, -1]] / sqrt(2).
QubitState Hadamard(const QubitState& state);

// Convex combination weight_a * a + (1 - weight_a) * b.
QubitState Mix(const QubitState& a, const QubitState& b, double weight_a);

// Eigen-decomposition of a 2x2 Hermitian matrix in closed form.
struct HermitianEigen {
  double lower = 0;   // smaller eigenvalue
  double upper = 0;   // larger eigenvalue
  Matrix2 upper_projector;  // spectral projector of `upper` (rank one unless
                            // the eigenvalues coincide, then the identity)
};
HermitianEigen EigenHermitian(const Matrix2& m);

struct HelstromResult {
  // Maximum probability of guessing which of rho0, rho1 was prepared.
  double success = 0;
  // Projector onto the positive part of prior1*rho1 - prior0*rho0; the
  // optimal rule guesses "1" on this outcome.
  Matrix2 guess_one = Matrix2::Zero();
  // Bloch direction of `guess_one` when it is rank one, zero otherwise.
  BlochVector direction;
};

// Optimal two-state discrimination:
// success = prior0 + tr[(prior1 rho1 - prior0 rho0)_+].
HelstromResult HelstromSuccess(const QubitState& rho0, const QubitState& rho1,
                               double prior0);

// Half the trace norm of rho0 - rho1.
double TraceDistance(const QubitState& rho0, const QubitState& rho1);

}  // namespace qdb

#endif  // QDB_QUANTUM_H_
