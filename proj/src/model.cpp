#include "qpcnoise/model.hpp"

#include <cmath>

#include "qpcnoise/errors.hpp"
#include "qpcnoise/units.hpp"

namespace qpcnoise {

double delta_from_splitting(double U, double J) {
  if (!(U > 0.0) || !(J >= 0.0)) throw InvalidArgument("delta_from_splitting requires U > 0 and J >= 0");
  return 0.5 * std::sqrt(J * (U + J));
}

double splitting_from_delta(double U, double Delta) {
  // Written as 8 Delta^2 / (sqrt(U^2 + 16 Delta^2) + U) to avoid cancellation
  // when Delta << U.
  const double d2 = Delta * Delta;
  return 8.0 * d2 / (std::sqrt(U * U + 16.0 * d2) + U);
}

EigenStructure eigenstructure(const ModelParams& p) {
  EigenStructure es{};
  es.Delta = delta_from_splitting(p.U, p.J);
  es.theta = std::atan(4.0 * es.Delta / p.U);
  es.xi = std::sin(0.5 * es.theta) / std::sqrt(2.0);
  es.xi_prime = std::cos(0.5 * es.theta) / std::sqrt(2.0);
  es.energies = {-p.J, p.U, p.U + p.J};
  return es;
}

double bose_occupation(double energy_meV, double temperature_K) {
  if (!(energy_meV > 0.0)) throw InvalidArgument("bose_occupation requires a positive energy");
  if (!(temperature_K >= 0.0)) throw InvalidArgument("bose_occupation requires temperature >= 0");
  if (temperature_K == 0.0) return 0.0;
  return 1.0 / std::expm1(energy_meV / (units::k_B * temperature_K));
}

PhononRates phonon_rates(const ModelParams& p) {
  PhononRates r{};
  r.omega_a = p.gap_convention == GapConvention::spectral ? p.U + 2.0 * p.J : p.U + p.J;
  r.omega_b = p.J;
  const double na = bose_occupation(r.omega_a, p.temperature);
  // J = 0 collapses s1 and s2; no thermal factor is defined there, use the
  // spontaneous rate only.
  const double nb = r.omega_b > 0.0 ? bose_occupation(r.omega_b, p.temperature) : 0.0;
  r.gamma_02 = p.gamma_a0 * (na + 1.0);
  r.gamma_20 = p.gamma_a0 * na;
  r.gamma_12 = p.gamma_b0 * (nb + 1.0);
  r.gamma_21 = p.gamma_b0 * nb;
  return r;
}

QpcAmplitudes qpc_amplitudes(const ModelParams& p) {
  if (!(p.V > p.U + p.J)) throw HighBiasViolation("high-bias condition violated: need V > U + J");
  const auto [T_eff, nu_eff] = effective_couplings(p);
  const auto es = eigenstructure(p);
  const double s = std::sin(0.5 * es.theta);
  const double c = std::cos(0.5 * es.theta);
  return {
      nu_eff * std::sqrt((p.V + p.J + p.U) / units::hbar) * s,
      nu_eff * std::sqrt((p.V - p.J - p.U) / units::hbar) * s,
      nu_eff * std::sqrt(p.V / units::hbar) * c,
  };
}

std::array<Mat3, 3> build_qpc_operators(const ModelParams& p) {
  if (!(p.V > p.U + p.J)) throw HighBiasViolation("high-bias condition violated: need V > U + J");
  const auto [T_eff, nu_eff] = effective_couplings(p);
  const auto es = eigenstructure(p);
  const double s = std::sin(0.5 * es.theta);
  const double c = std::cos(0.5 * es.theta);
  const double scale = std::sqrt(p.V / units::hbar);

  Mat3 C1 = nu_eff * std::sqrt((p.V - (p.U + p.J)) / units::hbar) * s * ketbra(s2, s0);
  Mat3 C2 = nu_eff * std::sqrt((p.V + (p.U + p.J)) / units::hbar) * s * ketbra(s0, s2);
  Mat3 C3 = scale * ((T_eff + nu_eff) * Mat3::Identity() +
                     nu_eff * c * (ketbra(s1, s2) + ketbra(s2, s1)));
  return {C1, C2, C3};
}

std::array<Mat3, 4> build_phonon_operators(const PhononRates& r) {
  return {
      std::sqrt(r.gamma_20) * ketbra(s2, s0),
      std::sqrt(r.gamma_02) * ketbra(s0, s2),
      std::sqrt(r.gamma_21) * ketbra(s2, s1),
      std::sqrt(r.gamma_12) * ketbra(s1, s2),
  };
}

Mat3 hamiltonian(const ModelParams& p) {
  Mat3 H = Mat3::Zero();
  H(s0, s0) = -p.J;
  H(s1, s1) = p.U;
  H(s2, s2) = p.U + p.J;
  return H;
}

OperatorSet build_operator_set(const ModelParams& p) {
  validate(p);
  return {hamiltonian(p), build_qpc_operators(p), build_phonon_operators(phonon_rates(p))};
}

}  // namespace qpcnoise
