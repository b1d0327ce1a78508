#include "qpcnoise/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <boost/numeric/odeint.hpp>

#include "qpcnoise/errors.hpp"
#include "qpcnoise/units.hpp"

namespace qpcnoise {

DensityMatrix DensityMatrix::pure(int basis_state) {
  return DensityMatrix(ketbra(basis_state, basis_state));
}

DensityMatrix DensityMatrix::pure(const Vec3& psi) {
  const Vec3 n = psi.normalized();
  return DensityMatrix(n * n.adjoint());
}

double DensityMatrix::trace_error() const { return std::abs(m_.trace() - 1.0); }

double DensityMatrix::hermiticity_error() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Mat3 h = 0.5 * (m_ + m_.adjoint());
  return Eigen::SelfAdjointEigenSolver<Mat3>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

bool DensityMatrix::is_physical(double herm_tol, double trace_tol, double eig_tol) const {
  return hermiticity_error() <= herm_tol && trace_error() <= trace_tol && min_eigenvalue() >= -eig_tol;
}

Generator build_generator(const Mat3& H, std::span<const Mat3> jump_ops, const GeneratorOptions& opt) {
  const double herm = (H - H.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12 * std::max(1.0, H.cwiseAbs().maxCoeff())) {
    throw InvalidArgument("build_generator: Hamiltonian is not Hermitian");
  }
  const cplx minus_i_over_hbar(0.0, -1.0 / units::hbar);

  std::vector<Mat3> LdL;
  LdL.reserve(jump_ops.size());
  for (const auto& Lk : jump_ops) LdL.push_back(Lk.adjoint() * Lk);

  Generator gen;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      const Mat3 E = ketbra(i, j);
      Mat3 out = minus_i_over_hbar * (H * E - E * H);
      for (std::size_t k = 0; k < jump_ops.size(); ++k) {
        const Mat3& Lk = jump_ops[k];
        out += Lk * E * Lk.adjoint() + opt.anticommutator_coeff * (LdL[k] * E + E * LdL[k]);
      }
      gen.matrix.col(vec_index(i, j)) = vectorize(out);
    }
  }
  return gen;
}

Generator build_generator(const OperatorSet& ops, const GeneratorOptions& opt) {
  std::array<Mat3, 7> all;
  std::copy(ops.counted.begin(), ops.counted.end(), all.begin());
  std::copy(ops.uncounted.begin(), ops.uncounted.end(), all.begin() + 3);
  return build_generator(ops.H, all, opt);
}

Generator build_generator(const ModelParams& p, const GeneratorOptions& opt) {
  return build_generator(build_operator_set(p), opt);
}

namespace {

// Restores Tr P[X] = Tr X, which the exact propagator satisfies, by moving each
// column's trace defect onto the identity direction.
void restore_trace(SuperMat& P) {
  const auto tr = trace_functional();
  const Eigen::Matrix<cplx, 1, 9> defect = tr - tr * P;
  for (int i = 0; i < 3; ++i) P.row(vec_index(i, i)) += defect / 3.0;
}

// exp(L t) by Pade scaling and squaring; the trace is re-imposed after every
// squaring so that rounding along the stationary direction does not compound.
SuperMat propagator(const SuperMat& L, double t) {
  constexpr double theta13 = 5.371920351148152;
  const double norm1 = (L * t).cwiseAbs().colwise().sum().maxCoeff();
  const int s = norm1 > theta13 ? static_cast<int>(std::ceil(std::log2(norm1 / theta13))) : 0;
  SuperMat P = expm(SuperMat(L * std::ldexp(t, -s)));
  restore_trace(P);
  for (int k = 0; k < s; ++k) {
    P = P * P;
    restore_trace(P);
  }
  return P;
}

DensityMatrix evolve_ode(const Generator& L, const DensityMatrix& rho0, double t) {
  namespace odeint = boost::numeric::odeint;
  using state = std::vector<cplx>;
  state x(9);
  const Vec9 v0 = vectorize(rho0.matrix());
  for (int k = 0; k < 9; ++k) x[k] = v0(k);

  const SuperMat& M = L.matrix;
  auto rhs = [&M](const state& in, state& out, double) {
    Eigen::Map<const Vec9> vin(in.data());
    Eigen::Map<Vec9> vout(out.data());
    vout.noalias() = M * vin;
  };
  const double scale = M.cwiseAbs().maxCoeff();
  const double dt0 = scale > 0.0 ? 1e-3 / scale : t;
  auto stepper = odeint::make_controlled(1e-11, 1e-11, odeint::runge_kutta_fehlberg78<state>());
  odeint::integrate_adaptive(stepper, rhs, x, 0.0, t, dt0);

  Vec9 v;
  for (int k = 0; k < 9; ++k) v(k) = x[k];
  return DensityMatrix(unvectorize(v));
}

// LU of L with the s0 population row replaced by the trace functional.
Eigen::PartialPivLU<SuperMat> augmented_lu(const SuperMat& L, Eigen::Matrix<double, 9, 1>& row_scale) {
  SuperMat A = L;
  A.row(vec_index(0, 0)) = trace_functional();
  for (int r = 0; r < 9; ++r) {
    const double m = A.row(r).cwiseAbs().maxCoeff();
    row_scale(r) = m > 0.0 ? 1.0 / m : 1.0;
    A.row(r) *= row_scale(r);
  }
  return Eigen::PartialPivLU<SuperMat>(A);
}

Vec9 solve_augmented(const SuperMat& L, const Vec9& rhs_full, cplx trace_value) {
  Eigen::Matrix<double, 9, 1> scale;
  const auto lu = augmented_lu(L, scale);
  SuperMat A = L;
  A.row(vec_index(0, 0)) = trace_functional();
  Vec9 b = rhs_full;
  b(vec_index(0, 0)) = trace_value;
  const Vec9 bs = scale.cast<cplx>().cwiseProduct(b);
  Vec9 x = lu.solve(bs);
  const Vec9 r = b - A * x;
  x += lu.solve(scale.cast<cplx>().cwiseProduct(r));
  return x;
}

void check_kernel_dimension(const SuperMat& L) {
  Eigen::JacobiSVD<SuperMat> svd(L);
  const auto& sv = svd.singularValues();
  const double largest = sv(0);
  if (largest == 0.0 || sv(7) < 1e-10 * largest) throw DegenerateSteadyState(sv(7), sv(8), largest);
}

}  // namespace

DensityMatrix evolve(const Generator& L, const DensityMatrix& rho0, double t, Propagator method) {
  if (!(t >= 0.0)) throw InvalidArgument("evolve: time must be >= 0");
  if (t == 0.0) return rho0;
  if (method == Propagator::ode) return evolve_ode(L, rho0, t);
  const SuperMat P = propagator(L.matrix, t);
  return DensityMatrix(unvectorize(P * vectorize(rho0.matrix())));
}

DensityMatrix steady_state_numeric(const Generator& L) {
  check_kernel_dimension(L.matrix);
  const Vec9 x = solve_augmented(L.matrix, Vec9::Zero(), 1.0);
  Mat3 rho = unvectorize(x);
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix(rho / rho.trace().real());
}

Mat3 solve_traceless(const Generator& L, const Mat3& X) {
  check_kernel_dimension(L.matrix);
  return unvectorize(solve_augmented(L.matrix, -vectorize(X), 0.0));
}

DensityMatrix steady_state_analytic(const ModelParams& p) {
  validate(p);
  const auto a = qpc_amplitudes(p);
  const auto r = phonon_rates(p);
  const double Ap2 = a.A_plus * a.A_plus;
  const double Am2 = a.A_minus * a.A_minus;
  const double A02 = a.A_0 * a.A_0;
  const double w0 = (Ap2 + r.gamma_02) * (A02 + r.gamma_21);
  const double w1 = (A02 + r.gamma_12) * (Am2 + r.gamma_20);
  const double w2 = (Am2 + r.gamma_20) * (A02 + r.gamma_21);
  const double N = w0 + w1 + w2;
  if (!(N > 0.0)) throw DegenerateSteadyState(0.0, 0.0, 0.0);
  Mat3 rho = Mat3::Zero();
  rho(s0, s0) = w0 / N;
  rho(s1, s1) = w1 / N;
  rho(s2, s2) = w2 / N;
  return DensityMatrix(rho);
}

namespace {
Eigen::Matrix<cplx, 9, 1> eigenvalues_of(const Generator& L) {
  Eigen::ComplexEigenSolver<SuperMat> es(L.matrix, false);
  return es.eigenvalues();
}
}  // namespace

double spectral_gap(const Generator& L) {
  const auto ev = eigenvalues_of(L);
  const double scale = ev.cwiseAbs().maxCoeff();
  double gap = 0.0;
  bool found = false;
  for (int k = 0; k < 9; ++k) {
    const double re = std::abs(ev(k).real());
    if (std::abs(ev(k)) <= 1e-10 * scale || re <= 1e-14 * scale) continue;
    if (!found || re < gap) {
      gap = re;
      found = true;
    }
  }
  if (!found) throw NumericalError("spectral_gap: no damped mode in the spectrum");
  return gap;
}

double max_frequency(const Generator& L) { return eigenvalues_of(L).imag().cwiseAbs().maxCoeff(); }

}  // namespace qpcnoise
