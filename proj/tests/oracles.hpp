#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library's superoperator or exponential code paths.

#include <complex>
#include <random>
#include <span>

#include <Eigen/Dense>

#include "qpcnoise/linalg.hpp"
#include "qpcnoise/params.hpp"

namespace oracle {

using qpcnoise::cplx;
using qpcnoise::Mat3;

/// sum_k C_k X C_k^+ by explicit index loops.
inline Mat3 jump_sum(std::span<const Mat3> ops, const Mat3& X) {
  Mat3 out = Mat3::Zero();
  for (const auto& C : ops)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c)
          for (int d = 0; d < 3; ++d) out(a, b) += C(a, c) * X(c, d) * std::conj(C(b, d));
  return out;
}

/// Lindblad right-hand side applied directly to a matrix.
inline Mat3 lindblad_rhs(const Mat3& H, std::span<const Mat3> ops, const Mat3& X, double hbar) {
  Mat3 out = cplx(0.0, -1.0 / hbar) * (H * X - X * H);
  for (const auto& L : ops) {
    const Mat3 LdL = L.adjoint() * L;
    out += L * X * L.adjoint() - 0.5 * (LdL * X + X * LdL);
  }
  return out;
}

/// exp(A) by a Taylor series with 2^s pre-scaling, accumulated in long double.
template <int N>
Eigen::Matrix<cplx, N, N> taylor_expm(const Eigen::Matrix<cplx, N, N>& A) {
  using LC = std::complex<long double>;
  using LM = Eigen::Matrix<LC, N, N>;
  const double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (std::ldexp(1.0, -s) * norm > 0.25) ++s;
  LM a = A.template cast<LC>() / static_cast<long double>(std::ldexp(1.0, s));
  LM term = LM::Identity();
  LM sum = LM::Identity();
  for (int k = 1; k < 40; ++k) {
    term = term * a / static_cast<long double>(k);
    sum += term;
  }
  for (int k = 0; k < s; ++k) sum = sum * sum;
  return sum.template cast<cplx>();
}

inline Mat3 random_matrix(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

inline Mat3 random_density(std::mt19937_64& rng) {
  const Mat3 a = random_matrix(rng);
  const Mat3 r = a * a.adjoint();
  return r / r.trace().real();
}

/// Random parameter set in the acceptance ranges.
inline qpcnoise::ModelParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  qpcnoise::ModelParams p;
  p.U = 0.5 + 1.5 * u(rng);
  p.J = p.U * (0.02 + 0.28 * u(rng));
  p.V = (p.U + p.J) * (1.2 + 2.8 * u(rng));
  p.alpha = 0.1 + 9.9 * u(rng);
  p.temperature = 50.0 * u(rng);
  return p;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace oracle
