// Copyright 2026 The mibound Authors
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

// Noisy phase estimation on qubits (and a qutrit for erasure): phase gates,
// Kraus channels, quantum and classical Fisher information, and the global
// mutual-information caps that follow from known Fisher-information caps.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mibound/bounds.hpp"
#include "mibound/stat_model.hpp"

namespace mibound::quantum {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Validated density operator: Hermitian and unit trace within 1e-12,
/// eigenvalues >= -1e-10.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix rho);

  static DensityMatrix pure(const Eigen::VectorXcd& psi);
  /// (|0> + |1>) / sqrt(2) embedded in `dim` levels.
  static DensityMatrix plus(Eigen::Index dim = 2);

  const Matrix& matrix() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }

 private:
  Matrix rho_;
};

enum class NoiseKind { kDephasing, kAmplitudeDamping, kErasure };

std::string to_string(NoiseKind kind);
/// Accepts "dephasing", "amplitude-damping"/"ampdamp", "erasure".
NoiseKind parse_noise_kind(const std::string& text);

/// Hilbert-space dimension the noise acts on (3 for erasure, else 2).
Eigen::Index noise_dimension(NoiseKind kind);

/// Kraus operators of a channel; the phase gate, when present, is already
/// folded into each operator.
struct KrausChannel {
  std::vector<Matrix> kraus;
  double eta = 1.0;
  NoiseKind kind = NoiseKind::kDephasing;

  Matrix apply(const Matrix& rho) const;
  /// Max-norm of sum_k K_k^dagger K_k - 1.
  double completeness_error() const;
};

/// Measurement operators; resolution of the identity and positivity are
/// checked to 1e-12 on construction.
class Povm {
 public:
  explicit Povm(std::vector<Matrix> elements);

  const std::vector<Matrix>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  Eigen::Index dim() const { return elements_.front().rows(); }

  /// Projective measurement in the basis (|0> +- e^{i theta} |1>)/sqrt(2).
  static Povm equatorial(double theta = 0.0);
  /// Projective measurement in the computational basis of `dim` levels.
  static Povm computational(Eigen::Index dim = 2);
  /// Random POVM with `outcomes` elements, S^{-1/2} A_x S^{-1/2} with
  /// A_x = B B^dagger and B complex Gaussian.
  static Povm random(Eigen::Index dim, std::size_t outcomes, std::mt19937_64& rng);

 private:
  std::vector<Matrix> elements_;
};

/// diag(1, e^{i phi}, 1, ...): phase on level |1> only.
Matrix phase_gate(double phi, Eigen::Index dim);

/// Noise Kraus operators alone. DomainError unless 0 < eta <= 1.
std::vector<Matrix> noise_kraus(NoiseKind kind, double eta);

/// rho -> sum_k K_k U_phi rho U_phi^dagger K_k^dagger.
KrausChannel make_channel(NoiseKind kind, double eta, double phi);

/// phi -> rho_phi with an optional analytic derivative. Without one, the
/// derivative is taken by central differences of the entries.
struct StateFamily {
  std::function<Matrix(double)> state;
  std::function<Matrix(double)> derivative;

  Matrix derivative_at(double phi) const;
};

/// U_{m phi} rho0 U_{m phi}^dagger with the analytic derivative.
StateFamily phase_family(const Matrix& rho0, double multiplier = 1.0);

/// `uses` sequential applications of the noisy gate to rho0, with the
/// analytic derivative from the product rule.
StateFamily channel_family(NoiseKind kind, double eta, const Matrix& rho0,
                           std::size_t uses = 1);

/// Quantum Fisher information
///   2 sum_{j,k: l_j + l_k > eps} |<j| d rho |k>|^2 / (l_j + l_k)
/// over the eigendecomposition of rho_phi, eps = 1e-12.
double qfi(const StateFamily& family, double phi);

struct FisherValue {
  double value;
  bool divergent;
};

/// Fisher information of p(x|phi) = tr(rho_phi M_x).
FisherValue classical_fi_of_povm(const StateFamily& family, const Povm& povm,
                                 double phi);

/// F_as = eta / (1 - eta), the per-gate asymptotic cap for dephasing and
/// erasure.
struct FisherCap {
  double value;
  /// eta = 1: there is no noise-induced cap.
  bool unbounded;
};

FisherCap asymptotic_fi_cap(std::size_t gates, double eta);

/// N F_as / (1 + F_as / N). At eta = 1 this returns the noiseless limit N^2.
FisherCap finite_n_fi_cap(std::size_t gates, double eta);

enum class CapRegime { kAsymptotic, kFiniteN };

std::string to_string(CapRegime regime);
/// Accepts "asymptotic" and "finite-n".
CapRegime parse_regime(const std::string& text);

struct CapOptions {
  NoiseKind kind = NoiseKind::kDephasing;
  /// Per-gate asymptotic cap to use instead of eta / (1 - eta). Amplitude
  /// damping without an override falls back to the dephasing value and is
  /// flagged.
  std::optional<double> per_gate_cap;
};

/// ln(1 + pi sqrt(F_cap)): the finite-support bound on [0, 2 pi) with the
/// capped Fisher information.
BoundReport mi_cap(std::size_t gates, double eta, CapRegime regime,
                   const CapOptions& options = {});

struct SweepRow {
  double eta;
  std::size_t gates;
  double mi_cap;
  double hs_ref;   // ln N
  double sql_ref;  // ln N / 2
  /// d ln(pi sqrt(F_cap)) / d ln N: 1 in the Heisenberg regime, 1/2 at the
  /// standard quantum limit.
  double slope;
};

std::vector<SweepRow> transition_sweep(double eta,
                                       const std::vector<std::size_t>& gates,
                                       CapRegime regime = CapRegime::kFiniteN,
                                       const CapOptions& options = {});

/// N at which the slope column crosses 3/4, log-interpolated between rows.
std::optional<double> transition_point(const std::vector<SweepRow>& rows);

/// `count` log-spaced distinct integers from `first` to `last`.
std::vector<std::size_t> log_spaced_counts(std::size_t first, std::size_t last,
                                           std::size_t count);

/// p(x|phi) = tr(rho_phi M_x) tabulated on `grid`, first derivative from
/// the family's derivative.
ConditionalModel povm_outcome_model(const StateFamily& family, const Povm& povm,
                                    const ParameterGrid& grid, std::string name);

/// p(x|phi) = tr(rho_{N phi} M_x) for the |+> family carrying phase N phi,
/// the two-level picture of an N-gate N00N probe.
ConditionalModel noon_outcome_model(std::size_t gates, const Povm& povm,
                                    const ParameterGrid& grid);

}  // namespace mibound::quantum
