#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qpcnoise/errors.hpp"
#include "qpcnoise/model.hpp"
#include "qpcnoise/units.hpp"

using namespace qpcnoise;

// Reference values below were evaluated with mpmath at 30 digits from the
// closed-form expressions.

TEST_CASE("delta from the singlet-triplet splitting") {
  CHECK(delta_from_splitting(1.0, 0.0) == 0.0);
  CHECK(delta_from_splitting(1.0, 0.1) == doctest::Approx(0.16583123951777).epsilon(1e-13));
  CHECK(delta_from_splitting(100.0, 0.04) == doctest::Approx(1.000199980004).epsilon(1e-12));
  CHECK(splitting_from_delta(1.0, delta_from_splitting(1.0, 0.1)) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK_THROWS_AS(delta_from_splitting(0.0, 0.1), InvalidArgument);
}

TEST_CASE("delta round trip through the J formula, random (U, J)") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double U = std::exp(std::log(1e-3) + u(rng) * std::log(1e6));
    const double J = U * (1e-6 + u(rng) * (1 - 1e-6));
    const double back = splitting_from_delta(U, delta_from_splitting(U, J));
    CHECK(std::abs(back - J) <= 1e-12 * J);
  }
}

TEST_CASE("eigenstructure") {
  SUBCASE("decoupled limit") {
    auto p = default_params();
    p.J = 0.0;
    const auto es = eigenstructure(p);
    CHECK(es.theta == 0.0);
    CHECK(es.xi == 0.0);
    CHECK(es.xi_prime == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  }
  SUBCASE("defaults") {
    const auto es = eigenstructure(default_params());
    CHECK(es.theta == doctest::Approx(0.58568554345715).epsilon(1e-13));
    CHECK(std::sin(es.theta / 2) == doctest::Approx(0.28867513459481).epsilon(1e-13));
    CHECK(std::cos(es.theta / 2) == doctest::Approx(0.95742710775634).epsilon(1e-13));
    CHECK(2 * (es.xi * es.xi + es.xi_prime * es.xi_prime) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(es.energies[0] == -0.1);
    CHECK(es.energies[1] == 1.0);
    CHECK(es.energies[2] == doctest::Approx(1.1).epsilon(1e-15));
  }
  SUBCASE("U -> 0 at fixed Delta") {
    auto p = default_params();
    p.U = 1e-9;
    p.J = splitting_from_delta(p.U, 0.2);
    p.V = 10.0;
    CHECK(eigenstructure(p).theta == doctest::Approx(M_PI / 2).epsilon(1e-8));
  }
  SUBCASE("normalization for random parameters") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 200; ++k) {
      const auto es = eigenstructure(oracle::random_params(rng));
      CHECK(es.theta > 0.0);
      CHECK(es.theta < M_PI / 2);
      CHECK(std::abs(2 * (es.xi * es.xi + es.xi_prime * es.xi_prime) - 1.0) < 1e-15);
    }
  }
}

TEST_CASE("Bose occupation") {
  CHECK(bose_occupation(1.2, 0.0) == 0.0);
  CHECK(bose_occupation(1.2, 15.0) == doctest::Approx(0.65344116666788).epsilon(1e-12));
  CHECK(bose_occupation(0.1, 15.0) == doctest::Approx(12.432446204509).epsilon(1e-12));
  CHECK_THROWS_AS(bose_occupation(0.0, 15.0), InvalidArgument);
  CHECK_THROWS_AS(bose_occupation(-1.0, 15.0), InvalidArgument);
  CHECK_THROWS_AS(bose_occupation(1.0, -1.0), InvalidArgument);
}

TEST_CASE("phonon rates") {
  SUBCASE("zero temperature") {
    const auto r = phonon_rates(default_params());
    CHECK(r.gamma_02 == 1.15e-3);
    CHECK(r.gamma_20 == 0.0);
    CHECK(r.gamma_12 == 6.01e-8);
    CHECK(r.gamma_21 == 0.0);
    CHECK(r.omega_a == doctest::Approx(1.2).epsilon(1e-15));
    CHECK(r.omega_b == 0.1);
  }
  SUBCASE("15 K") {
    auto p = default_params();
    p.temperature = 15.0;
    const auto r = phonon_rates(p);
    CHECK(r.gamma_02 == doctest::Approx(1.15e-3 * 1.65344116666788).epsilon(1e-12));
    CHECK(r.gamma_20 == doctest::Approx(1.15e-3 * 0.65344116666788).epsilon(1e-12));
  }
  SUBCASE("gap convention toggle") {
    auto p = default_params();
    p.gap_convention = GapConvention::qpc;
    CHECK(phonon_rates(p).omega_a == doctest::Approx(1.1).epsilon(1e-15));
  }
  SUBCASE("detailed balance, random parameters") {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 300; ++k) {
      auto p = oracle::random_params(rng);
      if (k % 10 == 0) p.temperature = 0.0;
      const auto r = phonon_rates(p);
      CHECK(r.gamma_02 >= p.gamma_a0);
      CHECK(r.gamma_12 >= p.gamma_b0);
      if (p.temperature == 0.0) {
        CHECK(r.gamma_20 == 0.0);
        CHECK(r.gamma_21 == 0.0);
      } else {
        const double kT = units::k_B * p.temperature;
        CHECK(oracle::rel_diff(r.gamma_20 / r.gamma_02, std::exp(-r.omega_a / kT)) < 1e-12);
        CHECK(oracle::rel_diff(r.gamma_21 / r.gamma_12, std::exp(-r.omega_b / kT)) < 1e-12);
      }
    }
  }
}

namespace {
bool only_nonzero_at(const Mat3& m, std::initializer_list<std::pair<int, int>> allowed) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      bool ok = false;
      for (auto [a, b] : allowed) ok = ok || (a == i && b == j);
      if (!ok && m(i, j) != 0.0) return false;
    }
  return true;
}
}  // namespace

TEST_CASE("QPC operators") {
  SUBCASE("occupation-blind detector") {
    auto p = default_params();
    p.tunneling_nu = 0.0;
    const auto C = build_qpc_operators(p);
    CHECK(C[0].isZero(0.0));
    CHECK(C[1].isZero(0.0));
    const Mat3 expected = std::sqrt(p.V / units::hbar) * p.tunneling_T * Mat3::Identity();
    CHECK((C[2] - expected).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("C3 off-diagonal amplitude") {
    const auto C = build_qpc_operators(default_params());
    const double b = C[2](s1, s2).real();
    CHECK(b * b == doctest::Approx(0.014100701001714).epsilon(1e-12));
    CHECK(C[2](s2, s1) == C[2](s1, s2));
  }
  SUBCASE("alpha = 3 is one third of alpha = 1") {
    auto p = default_params();
    const auto C1 = build_qpc_operators(p);
    p.alpha = 3.0;
    const auto C3 = build_qpc_operators(p);
    for (int k = 0; k < 3; ++k) CHECK((C3[k] * 3.0 - C1[k]).cwiseAbs().maxCoeff() < 1e-14 * C1[k].norm() + 1e-300);
  }
  SUBCASE("sparsity, reality and sign") {
    std::mt19937_64 rng(13);
    for (int k = 0; k < 100; ++k) {
      const auto C = build_qpc_operators(oracle::random_params(rng));
      CHECK(only_nonzero_at(C[0], {{s2, s0}}));
      CHECK(only_nonzero_at(C[1], {{s0, s2}}));
      CHECK(only_nonzero_at(C[2], {{s0, s0}, {s1, s1}, {s2, s2}, {s1, s2}, {s2, s1}}));
      CHECK(C[2](s0, s0) == C[2](s1, s1));
      CHECK(C[2](s1, s1) == C[2](s2, s2));
      for (const auto& m : C) {
        CHECK(m.imag().isZero(0.0));
        CHECK(m.real().minCoeff() >= 0.0);
      }
    }
  }
  SUBCASE("high-bias violation") {
    auto p = default_params();
    p.V = 1.1;
    CHECK_THROWS_AS(build_qpc_operators(p), HighBiasViolation);
    CHECK_THROWS_AS(qpc_amplitudes(p), HighBiasViolation);
    CHECK_THROWS_AS(build_operator_set(p), HighBiasViolation);
  }
}

TEST_CASE("phonon operators") {
  SUBCASE("zero temperature: no absorption") {
    const auto B = build_phonon_operators(phonon_rates(default_params()));
    CHECK(B[0].isZero(0.0));
    CHECK(B[2].isZero(0.0));
    CHECK(B[1](s0, s2).real() == doctest::Approx(std::sqrt(1.15e-3)).epsilon(1e-15));
    CHECK(only_nonzero_at(B[1], {{s0, s2}}));
    CHECK(only_nonzero_at(B[3], {{s1, s2}}));
  }
  SUBCASE("B^+ B = gamma |j><j|") {
    auto p = default_params();
    p.temperature = 20.0;
    const auto r = phonon_rates(p);
    const auto B = build_phonon_operators(r);
    const std::array<std::pair<double, int>, 4> expect{{{r.gamma_20, s0}, {r.gamma_02, s2}, {r.gamma_21, s1}, {r.gamma_12, s2}}};
    for (int k = 0; k < 4; ++k) {
      const Mat3 m = B[k].adjoint() * B[k];
      const Mat3 want = expect[k].first * ketbra(expect[k].second, expect[k].second);
      CHECK((m - want).cwiseAbs().maxCoeff() <= 1e-15 * expect[k].first);
    }
  }
}

TEST_CASE("QPC amplitudes") {
  auto p = default_params();
  const auto a = qpc_amplitudes(p);
  CHECK(a.A_minus * a.A_minus == doctest::Approx(5.7684685916103e-4).epsilon(1e-12));
  CHECK(a.A_plus * a.A_plus == doctest::Approx(1.9869169593324e-3).epsilon(1e-12));
  CHECK(a.A_0 * a.A_0 == doctest::Approx(0.014100701001714).epsilon(1e-12));

  p.alpha = 3.0;
  const auto a3 = qpc_amplitudes(p);
  CHECK(a3.A_plus * 3 == doctest::Approx(a.A_plus).epsilon(1e-15));
  CHECK(a3.A_minus * 3 == doctest::Approx(a.A_minus).epsilon(1e-15));
  CHECK(a3.A_0 * 3 == doctest::Approx(a.A_0).epsilon(1e-15));

  p.tunneling_nu = 0.0;
  const auto a0 = qpc_amplitudes(p);
  CHECK(a0.A_plus == 0.0);
  CHECK(a0.A_minus == 0.0);
  CHECK(a0.A_0 == 0.0);
}

TEST_CASE("operator coefficients agree with the amplitudes, random parameters") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 300; ++k) {
    const auto p = oracle::random_params(rng);
    const auto C = build_qpc_operators(p);
    const auto a = qpc_amplitudes(p);
    CHECK(std::abs(C[0](s2, s0).real() - a.A_minus) <= 1e-15 * a.A_minus);
    CHECK(std::abs(C[1](s0, s2).real() - a.A_plus) <= 1e-15 * a.A_plus);
    CHECK(std::abs(C[2](s1, s2).real() - a.A_0) <= 1e-15 * a.A_0);
  }
}
