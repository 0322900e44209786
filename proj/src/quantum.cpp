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

#include "mibound/quantum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mibound/errors.hpp"

namespace mibound::quantum {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};
constexpr double kQfiEpsilon = 1e-12;
constexpr double kFiniteDifferenceStep = 1e-5;

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Generator of the phase gate: U_phi = exp(i phi G), G = |1><1|.
Matrix phase_generator(Eigen::Index dim) {
  Matrix g = Matrix::Zero(dim, dim);
  g(1, 1) = 1.0;
  return g;
}

void check_eta(double eta) {
  if (!(eta > 0.0) || !(eta <= 1.0)) {
    std::ostringstream msg;
    msg << "noise parameter eta must lie in (0, 1], got " << eta;
    throw DomainError(msg.str());
  }
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() < 2) {
    throw ArgumentError("DensityMatrix: need a square matrix of dimension >= 2");
  }
  if (max_abs(rho_ - rho_.adjoint()) > 1e-12) {
    throw ArgumentError("DensityMatrix: not Hermitian");
  }
  if (std::abs(rho_.trace() - Complex(1.0)) > 1e-12) {
    throw ArgumentError("DensityMatrix: trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(rho_),
                                               Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-10) {
    throw ArgumentError("DensityMatrix: negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw ArgumentError("DensityMatrix::pure: zero vector");
  const Eigen::VectorXcd v = psi / norm;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::plus(Eigen::Index dim) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi(0) = psi(1) = 1.0 / std::sqrt(2.0);
  return pure(psi);
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kDephasing:
      return "dephasing";
    case NoiseKind::kAmplitudeDamping:
      return "amplitude-damping";
    case NoiseKind::kErasure:
      return "erasure";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(const std::string& text) {
  if (text == "dephasing") return NoiseKind::kDephasing;
  if (text == "amplitude-damping" || text == "ampdamp") {
    return NoiseKind::kAmplitudeDamping;
  }
  if (text == "erasure") return NoiseKind::kErasure;
  throw ArgumentError("unknown noise kind '" + text + "'");
}

Eigen::Index noise_dimension(NoiseKind kind) {
  return kind == NoiseKind::kErasure ? 3 : 2;
}

Matrix KrausChannel::apply(const Matrix& rho) const {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus) out += k * rho * k.adjoint();
  return out;
}

double KrausChannel::completeness_error() const {
  const Eigen::Index dim = kraus.front().cols();
  Matrix total = Matrix::Zero(dim, dim);
  for (const auto& k : kraus) total += k.adjoint() * k;
  return max_abs(total - Matrix::Identity(dim, dim));
}

Povm::Povm(std::vector<Matrix> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw ArgumentError("Povm: no elements");
  const Eigen::Index dim = elements_.front().rows();
  Matrix total = Matrix::Zero(dim, dim);
  for (std::size_t x = 0; x < elements_.size(); ++x) {
    const Matrix& m = elements_[x];
    if (m.rows() != dim || m.cols() != dim) {
      throw ArgumentError("Povm: element dimensions differ");
    }
    if (max_abs(m - m.adjoint()) > 1e-12) {
      throw ArgumentError("Povm: element " + std::to_string(x) + " not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m),
                                                 Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-12) {
      throw ArgumentError("Povm: element " + std::to_string(x) +
                          " is not positive semidefinite");
    }
    total += m;
  }
  if (max_abs(total - Matrix::Identity(dim, dim)) > 1e-12) {
    throw ArgumentError("Povm: elements do not sum to the identity");
  }
}

Povm Povm::equatorial(double theta) {
  std::vector<Matrix> elements;
  for (double sign : {1.0, -1.0}) {
    Eigen::VectorXcd v(2);
    v(0) = 1.0 / std::sqrt(2.0);
    v(1) = sign * std::exp(kI * theta) / std::sqrt(2.0);
    elements.push_back(v * v.adjoint());
  }
  return Povm(std::move(elements));
}

Povm Povm::computational(Eigen::Index dim) {
  std::vector<Matrix> elements;
  for (Eigen::Index i = 0; i < dim; ++i) {
    Matrix m = Matrix::Zero(dim, dim);
    m(i, i) = 1.0;
    elements.push_back(m);
  }
  return Povm(std::move(elements));
}

Povm Povm::random(Eigen::Index dim, std::size_t outcomes, std::mt19937_64& rng) {
  if (outcomes == 0) throw ArgumentError("Povm::random: need >= 1 outcome");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Matrix> raw;
  Matrix total = Matrix::Zero(dim, dim);
  for (std::size_t x = 0; x < outcomes; ++x) {
    Matrix b(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) b(r, c) = Complex(gauss(rng), gauss(rng));
    }
    raw.push_back(b * b.adjoint());
    total += raw.back();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(total));
  const Eigen::VectorXd inv_root = solver.eigenvalues().cwiseSqrt().cwiseInverse();
  const Matrix s = solver.eigenvectors() * inv_root.cast<Complex>().asDiagonal() *
                   solver.eigenvectors().adjoint();
  std::vector<Matrix> elements;
  Matrix sum = Matrix::Zero(dim, dim);
  for (const auto& a : raw) {
    elements.push_back(hermitian_part(s * a * s));
    sum += elements.back();
  }
  // Absorb the residual rounding into the last element.
  elements.back() += Matrix::Identity(dim, dim) - sum;
  elements.back() = hermitian_part(elements.back());
  return Povm(std::move(elements));
}

// ---------------------------------------------------------------------------

Matrix phase_gate(double phi, Eigen::Index dim) {
  if (dim < 2) throw ArgumentError("phase_gate: dim must be >= 2");
  Matrix u = Matrix::Identity(dim, dim);
  u(1, 1) = std::exp(kI * phi);
  return u;
}

std::vector<Matrix> noise_kraus(NoiseKind kind, double eta) {
  check_eta(eta);
  std::vector<Matrix> out;
  switch (kind) {
    case NoiseKind::kDephasing: {
      const double root = std::sqrt(eta);
      Matrix k0 = Matrix::Identity(2, 2) * std::sqrt((1.0 + root) / 2.0);
      Matrix z = Matrix::Identity(2, 2);
      z(1, 1) = -1.0;
      Matrix k1 = z * std::sqrt((1.0 - root) / 2.0);
      out = {k0, k1};
      break;
    }
    case NoiseKind::kAmplitudeDamping: {
      Matrix k0 = Matrix::Zero(2, 2);
      k0(0, 0) = 1.0;
      k0(1, 1) = std::sqrt(eta);
      Matrix k1 = Matrix::Zero(2, 2);
      k1(0, 1) = std::sqrt(1.0 - eta);
      out = {k0, k1};
      break;
    }
    case NoiseKind::kErasure: {
      Matrix k0 = Matrix::Zero(3, 3);
      k0(0, 0) = k0(1, 1) = std::sqrt(eta);
      Matrix k1 = Matrix::Zero(3, 3);
      k1(2, 2) = 1.0;
      Matrix k2 = Matrix::Zero(3, 3);
      k2(2, 0) = std::sqrt(1.0 - eta);
      Matrix k3 = Matrix::Zero(3, 3);
      k3(2, 1) = std::sqrt(1.0 - eta);
      out = {k0, k1, k2, k3};
      break;
    }
  }
  return out;
}

KrausChannel make_channel(NoiseKind kind, double eta, double phi) {
  KrausChannel channel;
  channel.eta = eta;
  channel.kind = kind;
  const Matrix u = phase_gate(phi, noise_dimension(kind));
  for (const auto& k : noise_kraus(kind, eta)) channel.kraus.push_back(k * u);
  return channel;
}

Matrix StateFamily::derivative_at(double phi) const {
  if (derivative) return derivative(phi);
  const double h = kFiniteDifferenceStep;
  return (state(phi + h) - state(phi - h)) / (2.0 * h);
}

StateFamily phase_family(const Matrix& rho0, double multiplier) {
  DensityMatrix checked(rho0);
  const Matrix g = phase_generator(rho0.rows());
  StateFamily family;
  family.state = [rho0, multiplier](double phi) {
    const Matrix u = phase_gate(multiplier * phi, rho0.rows());
    return Matrix(u * rho0 * u.adjoint());
  };
  family.derivative = [rho0, multiplier, g](double phi) {
    const Matrix u = phase_gate(multiplier * phi, rho0.rows());
    const Matrix rho = u * rho0 * u.adjoint();
    return Matrix(kI * multiplier * (g * rho - rho * g));
  };
  return family;
}

StateFamily channel_family(NoiseKind kind, double eta, const Matrix& rho0,
                           std::size_t uses) {
  check_eta(eta);
  if (uses == 0) throw ArgumentError("channel_family: uses must be >= 1");
  if (rho0.rows() != noise_dimension(kind)) {
    throw ArgumentError("channel_family: state dimension does not match the channel");
  }
  DensityMatrix checked(rho0);
  const std::vector<Matrix> noise = noise_kraus(kind, eta);
  const Matrix g = phase_generator(rho0.rows());
  // Returns (rho_phi, d rho_phi / d phi) by iterating
  //   rho <- L(rho),  rho' <- L(rho') + D(rho),
  // with D(s) = sum_k K_k (i [G, U s U^dagger]) K_k^dagger.
  auto evolve = [noise, g, rho0, uses](double phi) {
    const Matrix u = phase_gate(phi, rho0.rows());
    auto apply_noise = [&](const Matrix& s) {
      Matrix out = Matrix::Zero(s.rows(), s.cols());
      for (const auto& k : noise) out += k * s * k.adjoint();
      return out;
    };
    Matrix rho = rho0;
    Matrix slope = Matrix::Zero(rho0.rows(), rho0.cols());
    for (std::size_t step = 0; step < uses; ++step) {
      const Matrix rotated = u * rho * u.adjoint();
      const Matrix rotated_slope = u * slope * u.adjoint();
      const Matrix generated = kI * (g * rotated - rotated * g);
      slope = apply_noise(rotated_slope + generated);
      rho = apply_noise(rotated);
    }
    return std::make_pair(rho, slope);
  };
  StateFamily family;
  family.state = [evolve](double phi) { return evolve(phi).first; };
  family.derivative = [evolve](double phi) { return evolve(phi).second; };
  return family;
}

double qfi(const StateFamily& family, double phi) {
  const Matrix rho = family.state(phi);
  const Matrix drho = family.derivative_at(phi);
  const double scale = std::max(1.0, max_abs(rho));
  if (max_abs(rho - rho.adjoint()) > 1e-10 * scale ||
      max_abs(drho - drho.adjoint()) > 1e-8 * std::max(1.0, max_abs(drho))) {
    throw ArgumentError("qfi: state or derivative is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(rho));
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const Matrix& v = solver.eigenvectors();
  const Matrix d = v.adjoint() * hermitian_part(drho) * v;
  double total = 0.0;
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
      const double denom = lambda(j) + lambda(k);
      if (denom > kQfiEpsilon) total += std::norm(d(j, k)) / denom;
    }
  }
  return 2.0 * total;
}

FisherValue classical_fi_of_povm(const StateFamily& family, const Povm& povm,
                                 double phi) {
  const Matrix rho = family.state(phi);
  const Matrix drho = family.derivative_at(phi);
  if (rho.rows() != povm.dim()) {
    throw ArgumentError("classical_fi_of_povm: dimension mismatch");
  }
  FisherValue out{0.0, false};
  for (const auto& m : povm.elements()) {
    const double p = std::max(0.0, (rho * m).trace().real());
    const double dp = (drho * m).trace().real();
    out.value += fisher_summand(p, dp, std::nullopt, out.divergent);
  }
  return out;
}

// ---------------------------------------------------------------------------

FisherCap asymptotic_fi_cap(std::size_t gates, double eta) {
  if (gates == 0) throw ArgumentError("asymptotic_fi_cap: N must be >= 1");
  check_eta(eta);
  if (eta == 1.0) return {std::numeric_limits<double>::infinity(), true};
  return {static_cast<double>(gates) * eta / (1.0 - eta), false};
}

FisherCap finite_n_fi_cap(std::size_t gates, double eta) {
  if (gates == 0) throw ArgumentError("finite_n_fi_cap: N must be >= 1");
  check_eta(eta);
  const double n = static_cast<double>(gates);
  if (eta == 1.0) return {n * n, false};
  const double per_gate = eta / (1.0 - eta);
  return {n * per_gate / (1.0 + per_gate / n), false};
}

std::string to_string(CapRegime regime) {
  return regime == CapRegime::kAsymptotic ? "asymptotic" : "finite-n";
}

CapRegime parse_regime(const std::string& text) {
  if (text == "asymptotic") return CapRegime::kAsymptotic;
  if (text == "finite-n" || text == "finite") return CapRegime::kFiniteN;
  throw ArgumentError("unknown regime '" + text + "' (asymptotic|finite-n)");
}

namespace {

// Per-gate cap F_as and whether it is the unbounded noiseless case.
std::pair<double, bool> per_gate_cap(double eta, const CapOptions& options,
                                     BoundReport* report) {
  if (options.per_gate_cap) {
    if (!(*options.per_gate_cap > 0.0)) {
      throw DomainError("per-gate Fisher cap must be positive");
    }
    return {*options.per_gate_cap, false};
  }
  if (options.kind == NoiseKind::kAmplitudeDamping && report) {
    report->set(Validity::kAmplitudeDampingCapCaveat);
  }
  if (eta == 1.0) return {std::numeric_limits<double>::infinity(), true};
  return {eta / (1.0 - eta), false};
}

double capped_fisher(std::size_t gates, double per_gate, bool unbounded,
                     CapRegime regime) {
  const double n = static_cast<double>(gates);
  if (regime == CapRegime::kAsymptotic) {
    return unbounded ? std::numeric_limits<double>::infinity() : n * per_gate;
  }
  if (unbounded) return n * n;
  return n * per_gate / (1.0 + per_gate / n);
}

}  // namespace

BoundReport mi_cap(std::size_t gates, double eta, CapRegime regime,
                   const CapOptions& options) {
  if (gates == 0) throw ArgumentError("mi_cap: N must be >= 1");
  check_eta(eta);
  BoundReport r;
  r.name = "mi_cap";
  r.units = Units::kNats;
  r.direction = Direction::kUpperBoundOnMI;
  r.inputs.emplace_back("N", std::to_string(gates));
  {
    std::ostringstream e;
    e.precision(17);
    e << eta;
    r.inputs.emplace_back("eta", e.str());
  }
  r.inputs.emplace_back("regime", to_string(regime));
  r.inputs.emplace_back("noise", to_string(options.kind));
  const auto [per_gate, unbounded] = per_gate_cap(eta, options, &r);
  if (unbounded) r.set(Validity::kNoiselessLimit);
  const double cap = capped_fisher(gates, per_gate, unbounded, regime);
  if (!std::isfinite(cap)) {
    r.set(Validity::kFisherDivergent);
    return r;
  }
  r.details.emplace_back("fisher_cap", cap);
  r.value = std::log1p(kPi * std::sqrt(cap));
  return r;
}

std::vector<SweepRow> transition_sweep(double eta,
                                       const std::vector<std::size_t>& gates,
                                       CapRegime regime,
                                       const CapOptions& options) {
  check_eta(eta);
  const auto [per_gate, unbounded] = per_gate_cap(eta, options, nullptr);
  std::vector<SweepRow> rows;
  rows.reserve(gates.size());
  for (std::size_t count : gates) {
    if (count == 0) throw ArgumentError("transition_sweep: N must be >= 1");
    const double n = static_cast<double>(count);
    SweepRow row{};
    row.eta = eta;
    row.gates = count;
    const double cap = capped_fisher(count, per_gate, unbounded, regime);
    row.mi_cap = std::isfinite(cap) ? std::log1p(kPi * std::sqrt(cap))
                                    : std::numeric_limits<double>::infinity();
    row.hs_ref = std::log(n);
    row.sql_ref = 0.5 * std::log(n);
    // ln(pi sqrt(cap)) = const + ln N - ln(N + F_as) / 2 (finite-N).
    if (regime == CapRegime::kAsymptotic) {
      row.slope = 0.5;
    } else if (unbounded) {
      row.slope = 1.0;
    } else {
      row.slope = 1.0 - 0.5 * n / (n + per_gate);
    }
    rows.push_back(row);
  }
  return rows;
}

std::optional<double> transition_point(const std::vector<SweepRow>& rows) {
  constexpr double kMidpoint = 0.75;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double a = rows[i].slope;
    const double b = rows[i + 1].slope;
    if (a >= kMidpoint && b < kMidpoint) {
      const double la = std::log(static_cast<double>(rows[i].gates));
      const double lb = std::log(static_cast<double>(rows[i + 1].gates));
      const double t = (a - kMidpoint) / (a - b);
      return std::exp(la + t * (lb - la));
    }
  }
  return std::nullopt;
}

std::vector<std::size_t> log_spaced_counts(std::size_t first, std::size_t last,
                                           std::size_t count) {
  if (first == 0 || last < first || count == 0) {
    throw ArgumentError("log_spaced_counts: need 1 <= first <= last and count >= 1");
  }
  std::vector<std::size_t> out;
  if (count == 1 || first == last) return {first};
  const double la = std::log(static_cast<double>(first));
  const double lb = std::log(static_cast<double>(last));
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    auto value = static_cast<std::size_t>(std::llround(std::exp(la + t * (lb - la))));
    value = std::clamp(value, first, last);
    if (out.empty() || value > out.back()) out.push_back(value);
  }
  if (out.back() != last) out.push_back(last);
  return out;
}

ConditionalModel noon_outcome_model(std::size_t gates, const Povm& povm,
                                    const ParameterGrid& grid) {
  if (gates == 0) throw ArgumentError("noon_outcome_model: N must be >= 1");
  if (povm.dim() != 2) {
    throw ArgumentError("noon_outcome_model: the POVM must act on two levels");
  }
  const double n = static_cast<double>(gates);
  const Matrix rho0 = DensityMatrix::plus(2).matrix();
  const Matrix g = phase_generator(2);
  const std::size_t k = povm.size();
  const std::size_t points = grid.points();
  std::vector<double> p(k * points), d1(k * points), d2(k * points);
  for (std::size_t j = 0; j < points; ++j) {
    const Matrix u = phase_gate(n * grid.at(j), 2);
    const Matrix rho = u * rho0 * u.adjoint();
    const Matrix c1 = g * rho - rho * g;
    const Matrix drho = kI * n * c1;
    const Matrix ddrho = -n * n * (g * c1 - c1 * g);
    for (std::size_t x = 0; x < k; ++x) {
      const Matrix& m = povm.elements()[x];
      p[x * points + j] = std::max(0.0, (rho * m).trace().real());
      d1[x * points + j] = (drho * m).trace().real();
      d2[x * points + j] = (ddrho * m).trace().real();
    }
  }
  return ConditionalModel::from_tables(grid, k, std::move(p), std::move(d1),
                                       std::move(d2), DerivativeSource::kAnalytic,
                                       "noon(N=" + std::to_string(gates) + ")");
}

ConditionalModel povm_outcome_model(const StateFamily& family, const Povm& povm,
                                    const ParameterGrid& grid, std::string name) {
  const std::size_t k = povm.size();
  const std::size_t points = grid.points();
  std::vector<double> p(k * points), d1(k * points);
  for (std::size_t j = 0; j < points; ++j) {
    const double phi = grid.at(j);
    const Matrix rho = family.state(phi);
    const Matrix drho = family.derivative_at(phi);
    if (rho.rows() != povm.dim()) {
      throw ArgumentError("povm_outcome_model: dimension mismatch");
    }
    double total = 0.0;
    for (std::size_t x = 0; x < k; ++x) {
      const Matrix& m = povm.elements()[x];
      p[x * points + j] = std::max(0.0, (rho * m).trace().real());
      d1[x * points + j] = (drho * m).trace().real();
      total += p[x * points + j];
    }
    for (std::size_t x = 0; x < k; ++x) p[x * points + j] /= total;
  }
  const auto source = family.derivative ? DerivativeSource::kAnalytic
                                        : DerivativeSource::kFiniteDifference;
  return ConditionalModel::from_tables(grid, k, std::move(p), std::move(d1), {},
                                       source, std::move(name));
}

}  // namespace mibound::quantum
