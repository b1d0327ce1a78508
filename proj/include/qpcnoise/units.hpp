#pragma once

// Fixed unit system: energies in meV, times in ns, temperatures in K.
// Currents are counting rates (electrons per ns); the elementary charge is 1.

namespace qpcnoise::units {

inline constexpr double hbar = 6.582119569e-4;   // meV * ns
inline constexpr double k_B = 8.617333262e-2;    // meV / K
inline constexpr double e = 1.0;

}  // namespace qpcnoise::units
