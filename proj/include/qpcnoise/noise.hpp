#pragma once

#include <optional>
#include <string_view>

#include "qpcnoise/lindblad.hpp"

namespace qpcnoise {

/// rho -> sum_i C_i rho C_i^+ over the counted (QPC) channels, as a 9x9
/// matrix in the generator's vectorization.
struct JumpMap {
  SuperMat matrix;

  Mat3 apply(const Mat3& X) const { return unvectorize(matrix * vectorize(X)); }
  /// True if the map is c * identity (an occupation-blind detector).
  bool is_scalar(double rel_tol = 0.0) const;
};

enum class NoiseMethod { resolvent, quadrature, trajectory, triplet };

std::string_view to_string(NoiseMethod m);

/// Zero-frequency counting statistics. With e = 1:
///   S0 = 2 R + 4 correction,  fano = S0 / (2 R) = 1 + 2 correction / R,
/// where correction is the integral over tau >= 0 of the regular part of the
/// current correlation function.
struct NoiseResult {
  double current = 0.0;     // R, electrons / ns
  double shot_part = 0.0;   // e^2 R
  double correction = 0.0;  // integral_0^inf g_reg(tau) dtau
  double S0 = 0.0;
  double fano = 1.0;
  NoiseMethod method = NoiseMethod::resolvent;

  // Diagnostics; zero when not applicable.
  double spectral_gap = 0.0;
  double tau_max = 0.0;
  double tail_estimate = 0.0;
  double quadrature_error = 0.0;
  long panels = 0;
};

/// Relative mismatch between fano and the other fields (0 for a consistent record).
double consistency_error(const NoiseResult& r);

JumpMap jump_map(const OperatorSet& ops);

/// R = Tr J[rho].
double mean_current(const DensityMatrix& rho, const JumpMap& jm);

/// Triplet sector: one electron per dot, no charge fluctuations, fano = 1.
NoiseResult triplet_current_and_fano(const ModelParams& p);

/// Regular part of the current correlation,
///   g(tau) = Tr J[exp(L tau) J[rho_ss]] - R^2.
/// Throws InvalidArgument for tau < 0.
double correlation_regular(double tau_ns, const Generator& L, const JumpMap& jm,
                           const DensityMatrix& rho_ss);

/// Fano factor from the resolvent: solve L[Y] = -(J[rho] - R rho), Tr Y = 0,
/// correction = Tr J[Y].
NoiseResult fano_resolvent(const ModelParams& p);

struct QuadratureOptions {
  std::optional<double> tau_max;  // default: 40 / spectral gap
  double rel_tol = 1e-9;          // target relative accuracy of fano
  int max_refinements = 40;       // how many halvings below the initial panel are allowed
};

/// Fano factor by adaptive Gauss-Kronrod (7/15) integration of g(tau) over
/// [0, tau_max], plus the exponential tail estimate g(tau_max) / gap.
NoiseResult fano_quadrature(const ModelParams& p, const QuadratureOptions& opt = {});

}  // namespace qpcnoise
