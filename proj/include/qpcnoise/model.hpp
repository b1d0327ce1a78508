#pragma once

#include <array>

#include "qpcnoise/linalg.hpp"
#include "qpcnoise/params.hpp"

namespace qpcnoise {

// Basis ordering used throughout: s0 (energy -J), s1 (U), s2 (U + J).
inline constexpr int s0 = 0;
inline constexpr int s1 = 1;
inline constexpr int s2 = 2;

/// Singlet-sector eigenstructure of the two-site Hubbard DQD.
struct EigenStructure {
  double theta;     // atan(4 Delta / U)
  double xi;        // sin(theta/2) / sqrt(2)
  double xi_prime;  // cos(theta/2) / sqrt(2)
  double Delta;     // inter-dot tunnelling, meV
  std::array<double, 3> energies;  // {-J, U, U + J}
};

/// Temperature-dressed phonon rates (1/ns) and the gaps (meV) they use.
/// gamma_ij is the rate of the j -> i transition.
struct PhononRates {
  double gamma_02;
  double gamma_20;
  double gamma_12;
  double gamma_21;
  double omega_a;  // s0 <-> s2
  double omega_b;  // s1 <-> s2
};

/// Hamiltonian (meV) and jump operators (sqrt(1/ns)) in the eigenbasis.
struct OperatorSet {
  Mat3 H;
  std::array<Mat3, 3> counted;    // C1, C2, C3 (QPC)
  std::array<Mat3, 4> uncounted;  // B_20, B_02, B_21, B_12 (phonons)
};

struct QpcAmplitudes {
  double A_plus;
  double A_minus;
  double A_0;
};

/// Delta such that J = (sqrt(U^2 + 16 Delta^2) - U) / 2, i.e. sqrt(J (U + J)) / 2.
double delta_from_splitting(double U, double J);

/// Forward map: J = (sqrt(U^2 + 16 Delta^2) - U) / 2.
double splitting_from_delta(double U, double Delta);

EigenStructure eigenstructure(const ModelParams& p);

/// Bose-Einstein occupation 1/(exp(E/kT) - 1); 0 at T = 0.
/// Throws InvalidArgument for energy <= 0 or negative temperature.
double bose_occupation(double energy_meV, double temperature_K);

PhononRates phonon_rates(const ModelParams& p);

/// {C1, C2, C3}. Throws HighBiasViolation if V <= U + J.
std::array<Mat3, 3> build_qpc_operators(const ModelParams& p);

/// {B_20, B_02, B_21, B_12} with B_ij = sqrt(gamma_ij) |s_i><s_j|.
std::array<Mat3, 4> build_phonon_operators(const PhononRates& r);

QpcAmplitudes qpc_amplitudes(const ModelParams& p);

/// diag(-J, U, U + J).
Mat3 hamiltonian(const ModelParams& p);

/// Everything needed for the generator; validates `p` first.
OperatorSet build_operator_set(const ModelParams& p);

}  // namespace qpcnoise
