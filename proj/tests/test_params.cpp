#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qpcnoise/errors.hpp"
#include "qpcnoise/params.hpp"

using namespace qpcnoise;

TEST_CASE("default parameters are the GaAs set") {
  const auto p = default_params();
  CHECK(p.U == 1.0);
  CHECK(p.J == 0.1);
  CHECK(p.V == 2.0);
  CHECK(p.tunneling_T == 0.1);
  CHECK(p.tunneling_nu == 2.25e-3);
  CHECK(p.gamma_a0 == 1.15e-3);
  CHECK(p.gamma_b0 == 6.01e-8);
  CHECK(p.alpha == 1.0);
  CHECK(p.temperature == 0.0);
  CHECK(p.V > p.U + p.J);
  CHECK_NOTHROW(validate(p));
}

TEST_CASE("effective couplings divide by alpha") {
  auto p = default_params();
  auto c = effective_couplings(p);
  CHECK(c.T == 0.1);
  CHECK(c.nu == 2.25e-3);

  p.alpha = 3.0;
  c = effective_couplings(p);
  CHECK(c.T == doctest::Approx(0.1 / 3).epsilon(1e-15));
  CHECK(c.nu == doctest::Approx(7.5e-4).epsilon(1e-15));

  p.alpha = 1e12;
  c = effective_couplings(p);
  CHECK(c.T < 1e-12);
  CHECK(c.nu < 1e-14);

  // The stored base couplings never change.
  CHECK(p.tunneling_T == 0.1);

  p.alpha = 0.0;
  CHECK_THROWS_AS(effective_couplings(p), InvalidParameter);
  p.alpha = -1.0;
  CHECK_THROWS_AS(effective_couplings(p), InvalidParameter);
}

TEST_CASE("parse_config applies overrides on top of the defaults") {
  const auto p = parse_config("alpha = 3\ntemperature_K = 15");
  auto expected = default_params();
  expected.alpha = 3.0;
  expected.temperature = 15.0;
  CHECK(p == expected);

  CHECK(parse_config("") == default_params());
  CHECK(parse_config("# only a comment\n\n   \n") == default_params());
  CHECK(parse_config("  U_meV=1.0   # trailing comment\r\n").U == 1.0);
  CHECK(parse_config("gap_convention = qpc").gap_convention == GapConvention::qpc);
}

TEST_CASE("parse_config errors name the offending key") {
  auto key_of = [](const char* text) {
    try {
      parse_config(text);
    } catch (const ConfigParseError& e) {
      return e.key();
    }
    return std::string("<no error>");
  };
  CHECK(key_of("V_meV = 1.0") == "V_meV");  // U + J = 1.1
  CHECK(key_of("bogus = 1") == "bogus");
  CHECK(key_of("alpha = three") == "alpha");
  CHECK(key_of("alpha = 1.0x") == "alpha");
  CHECK(key_of("alpha = ") == "alpha");
  CHECK(key_of("alpha = -2") == "alpha");
  CHECK(key_of("temperature_K = -1") == "temperature_K");
  CHECK(key_of("gap_convention = sideways") == "gap_convention");
  CHECK_THROWS_AS(parse_config("just some words"), ConfigParseError);

  try {
    parse_config("V_meV = 1.0");
  } catch (const ConfigParseError& e) {
    CHECK(std::string(e.what()).find("V_meV") != std::string::npos);
  }
}

TEST_CASE("serialize / parse round trip is field-wise exact") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    ModelParams p = oracle::random_params(rng);
    p.tunneling_T = u(rng);
    p.tunneling_nu = 1e-2 * u(rng);
    p.gamma_a0 = 1e-2 * u(rng);
    p.gamma_b0 = 1e-6 * u(rng);
    p.gap_convention = k % 2 ? GapConvention::qpc : GapConvention::spectral;
    CHECK(parse_config(to_config(p)) == p);
  }
}

TEST_CASE("parse_config rejects randomized invariant violations") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    ModelParams p = oracle::random_params(rng);
    switch (k % 8) {
      case 0: p.U = -u(rng); break;
      case 1: p.V = -u(rng); break;
      case 2: p.J = -1e-3 - u(rng); break;
      case 3: p.temperature = -1e-3 - 10 * u(rng); break;
      case 4: p.alpha = -u(rng); break;
      case 5: p.gamma_a0 = -1e-9 - u(rng); break;
      case 6: p.tunneling_nu = -1e-9 - u(rng); break;
      case 7: p.V = (p.U + p.J) * u(rng); break;  // high-bias violation
    }
    CHECK_THROWS_AS(parse_config(to_config(p)), ConfigParseError);
  }
}
