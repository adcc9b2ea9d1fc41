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

#include "qdb/quantum.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdb/errors.h"

namespace qdb {
namespace {

using Complex = std::complex<double>;

const std::array<Matrix2, 4>& ProjectorTable() {
  static const std::array<Matrix2, 4> table = [] {
    std::array<Matrix2, 4> t;
    t[0] << 1, 0, 0, 0;             // |0>
    t[1] << 0, 0, 0, 1;             // |1>
    t[2] << 0.5, 0.5, 0.5, 0.5;     // |+>
    t[3] << 0.5, -0.5, -0.5, 0.5;   // |->
    return t;
  }();
  return table;
}

const Matrix2& HadamardMatrix() {
  static const Matrix2 h = [] {
    Matrix2 m;
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
  }();
  return h;
}

double RealTrace(const Matrix2& a, const Matrix2& b) {
  // tr(a b) for Hermitian a, b is real.
  return (a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0) + a(1, 0) * b(0, 1) +
          a(1, 1) * b(1, 1))
      .real();
}

double ClampProbability(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

char BasisName(Basis basis) { return basis == Basis::kZ ? 'Z' : 'X'; }

bool IsDensityMatrix(const Matrix2& rho, double tolerance) {
  if (!rho.allFinite()) return false;
  if (std::abs(rho(0, 1) - std::conj(rho(1, 0))) > tolerance) return false;
  if (std::abs(rho(0, 0).imag()) > tolerance ||
      std::abs(rho(1, 1).imag()) > tolerance) {
    return false;
  }
  if (std::abs(rho.trace() - Complex(1.0)) > tolerance) return false;
  return EigenHermitian(rho).lower >= -tolerance;
}

QubitState QubitState::FromDensityMatrix(const Matrix2& rho) {
  if (!IsDensityMatrix(rho)) {
    throw ArgumentError("matrix is not a valid single-qubit density matrix");
  }
  return QubitState(rho);
}

QubitState QubitState::FromAmplitudes(Complex alpha, Complex beta) {
  const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
  if (!(norm > 0) || !std::isfinite(norm)) {
    throw ArgumentError("state amplitudes must be finite and non-zero");
  }
  Eigen::Vector2cd psi(alpha / norm, beta / norm);
  return QubitState(psi * psi.adjoint());
}

QubitState QubitState::MaximallyMixed() {
  return QubitState(Matrix2::Identity() * 0.5);
}

double QubitState::Purity() const { return RealTrace(rho_, rho_); }

BlochVector QubitState::Bloch() const {
  return {2.0 * rho_(0, 1).real(), -2.0 * rho_(0, 1).imag(),
          (rho_(0, 0) - rho_(1, 1)).real()};
}

const Matrix2& Bb84Projector(Bit bit, Basis basis) {
  return ProjectorTable()[2 * BitFromBasis(basis) + (bit & 1)];
}

QubitState Bb84State(Bit bit, Basis basis) {
  return QubitState(Bb84Projector(bit, basis));
}

MeasurementDistribution MeasureDist(const QubitState& state, Basis basis) {
  const double p0 = ClampProbability(RealTrace(Bb84Projector(0, basis), state.rho()));
  return {p0, 1.0 - p0};
}

Bit SampleMeasure(const QubitState& state, Basis basis, RandomStream& rng) {
  const double p0 = MeasureDist(state, basis).p0;
  return rng.NextUniform() < p0 ? 0 : 1;
}

Bit SampleProjective(const QubitState& state, const Matrix2& projector_one,
                     RandomStream& rng) {
  const double p1 = ClampProbability(RealTrace(projector_one, state.rho()));
  return rng.NextUniform() < 1.0 - p1 ? 0 : 1;
}

QubitState Depolarize(const QubitState& state, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw ArgumentError("depolarizing parameter must lie in [0, 1], got " +
                        std::to_string(eta));
  }
  if (eta == 0.0) return state;
  Matrix2 out = (1.0 - eta) * state.rho();
  out(0, 0) += 0.5 * eta;
  out(1, 1) += 0.5 * eta;
  return QubitState(out);
}

QubitState Hadamard(const QubitState& state) {
  const Matrix2& h = HadamardMatrix();
  return QubitState(h * state.rho() * h);
}

QubitState Mix(const QubitState& a, const QubitState& b, double weight_a) {
  if (!(weight_a >= 0.0 && weight_a <= 1.0)) {
    throw ArgumentError("mixture weight must lie in [0, 1]");
  }
  return QubitState(weight_a * a.rho() + (1.0 - weight_a) * b.rho());
}

HermitianEigen EigenHermitian(const Matrix2& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const Complex b = m(0, 1);
  const double mean = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), std::abs(b));
  HermitianEigen out;
  out.lower = mean - radius;
  out.upper = mean + radius;
  if (radius == 0.0) {
    out.upper_projector = Matrix2::Identity();
  } else {
    // For a 2x2 matrix the spectral projector of the larger eigenvalue is
    // (M - lower I) / (upper - lower).
    out.upper_projector = (m - out.lower * Matrix2::Identity()) / (2.0 * radius);
  }
  return out;
}

HelstromResult HelstromSuccess(const QubitState& rho0, const QubitState& rho1,
                               double prior0) {
  if (!(prior0 >= 0.0 && prior0 <= 1.0)) {
    throw ArgumentError("prior must lie in [0, 1]");
  }
  const double prior1 = 1.0 - prior0;
  const Matrix2 gamma = prior1 * rho1.rho() - prior0 * rho0.rho();
  const HermitianEigen eig = EigenHermitian(gamma);

  HelstromResult out;
  out.success = prior0 + std::max(eig.upper, 0.0) + std::max(eig.lower, 0.0);
  if (eig.lower > 0.0) {
    out.guess_one = Matrix2::Identity();
  } else if (eig.upper > 0.0) {
    out.guess_one = eig.upper_projector;
    out.direction = {2.0 * out.guess_one(0, 1).real(),
                     -2.0 * out.guess_one(0, 1).imag(),
                     (out.guess_one(0, 0) - out.guess_one(1, 1)).real()};
  }
  out.success = std::min(out.success, 1.0);
  return out;
}

double TraceDistance(const QubitState& rho0, const QubitState& rho1) {
  const HermitianEigen eig = EigenHermitian(rho0.rho() - rho1.rho());
  return 0.5 * (std::abs(eig.lower) + std::abs(eig.upper));
}

}  // namespace qdb
