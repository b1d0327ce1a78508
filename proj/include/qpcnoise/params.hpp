#pragma once

#include <string>
#include <string_view>

namespace qpcnoise {

/// Which energy gap drives the s0 <-> s2 phonon Bose factor.
///   spectral: eigenvalue difference, U + 2J
///   qpc:      the U + J combination appearing in the C1/C2 operators
enum class GapConvention { spectral, qpc };

std::string_view to_string(GapConvention g);
GapConvention gap_convention_from_string(std::string_view s);

/// Physical inputs of the DQD + QPC + phonon model.
///
/// Energies in meV, rates in 1/ns, temperature in K. `tunneling_T` and
/// `tunneling_nu` are the unscaled couplings; the effective values used to
/// build operators are divided by `alpha` (see effective_couplings()).
struct ModelParams {
  double U = 1.0;
  double J = 0.1;
  double V = 2.0;
  double tunneling_T = 0.1;
  double tunneling_nu = 2.25e-3;
  double gamma_a0 = 1.15e-3;  // spontaneous s2 -> s0
  double gamma_b0 = 6.01e-8;  // spontaneous s2 -> s1
  double temperature = 0.0;
  double alpha = 1.0;
  GapConvention gap_convention = GapConvention::spectral;

  bool operator==(const ModelParams&) const = default;
};

/// GaAs defaults: U=1, J=0.1, V=2 meV; T0=0.1, nu0=2.25e-3; alpha=1; 0 K.
ModelParams default_params();

/// Throws InvalidParameter (or HighBiasViolation) if an invariant fails.
void validate(const ModelParams& p);

struct EffectiveCouplings {
  double T;
  double nu;
};

/// (T/alpha, nu/alpha). Throws InvalidParameter for alpha <= 0.
EffectiveCouplings effective_couplings(const ModelParams& p);

/// Copy of `p` with both phonon rates set to zero.
ModelParams without_phonons(ModelParams p);

/// Apply one `key = value` override. Throws ConfigParseError for unknown
/// keys or non-numeric values; does not validate the full record.
void set_param(ModelParams& p, std::string_view key, std::string_view value);

/// Parse line-oriented `key = value` text (`#` starts a comment) on top of
/// `base`, then validate.
ModelParams parse_config(std::string_view text, const ModelParams& base = default_params());

/// Serialize to the config format; parse_config(to_config(p)) == p.
std::string to_config(const ModelParams& p);

}  // namespace qpcnoise
