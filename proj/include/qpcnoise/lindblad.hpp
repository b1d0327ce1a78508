#pragma once

#include <span>

#include "qpcnoise/linalg.hpp"
#include "qpcnoise/model.hpp"

namespace qpcnoise {

/// 3x3 density matrix over (s0, s1, s2).
class DensityMatrix {
 public:
  DensityMatrix() : m_(Mat3::Identity() / 3.0) {}
  explicit DensityMatrix(const Mat3& m) : m_(m) {}

  static DensityMatrix pure(int basis_state);
  static DensityMatrix pure(const Vec3& psi);

  const Mat3& matrix() const noexcept { return m_; }
  cplx operator()(int i, int j) const { return m_(i, j); }
  Eigen::Vector3d populations() const { return m_.diagonal().real(); }

  double trace_error() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;

  /// Hermitian to `herm_tol`, unit trace to `trace_tol`, eigenvalues >= -eig_tol.
  bool is_physical(double herm_tol = 1e-12, double trace_tol = 1e-12, double eig_tol = 1e-10) const;

 private:
  Mat3 m_;
};

/// Liouvillian acting on column-stacked 3x3 matrices (rates in 1/ns).
struct Generator {
  SuperMat matrix;

  Mat3 apply(const Mat3& X) const { return unvectorize(matrix * vectorize(X)); }
};

struct GeneratorOptions {
  // Coefficient of the anticommutator term. -1/2 is the Lindblad form;
  // anything else exists only to mutation-test the validators.
  double anticommutator_coeff = -0.5;
};

/// L[rho] = -(i/hbar)[H, rho] + sum_k (L_k rho L_k^+ - 1/2 {L_k^+ L_k, rho}).
/// Throws InvalidArgument if H is not Hermitian.
Generator build_generator(const Mat3& H, std::span<const Mat3> jump_ops,
                          const GeneratorOptions& opt = {});

/// Generator over all seven channels (counted and uncounted).
Generator build_generator(const OperatorSet& ops, const GeneratorOptions& opt = {});

/// Convenience: build_generator(build_operator_set(p)).
Generator build_generator(const ModelParams& p, const GeneratorOptions& opt = {});

enum class Propagator {
  expm,  // Pade-13 scaling and squaring of L t
  ode,   // adaptive Runge-Kutta-Fehlberg 7(8), rtol = atol = 1e-11
};

/// exp(L t)[rho0]. Throws InvalidArgument for t < 0.
DensityMatrix evolve(const Generator& L, const DensityMatrix& rho0, double t_ns,
                     Propagator method = Propagator::expm);

/// Unit-trace Hermitian kernel element of L.
///
/// The kernel dimension is checked with an SVD: if the second-smallest
/// singular value is below 1e-10 of the largest, DegenerateSteadyState is
/// thrown. The state itself comes from an LU solve of L with one population
/// equation replaced by the trace constraint, followed by one step of
/// iterative refinement.
DensityMatrix steady_state_numeric(const Generator& L);

/// Closed-form diagonal steady state of the rate equations.
DensityMatrix steady_state_analytic(const ModelParams& p);

/// Solve L[Y] = -X with Tr Y = 0, for traceless X. Same factorization as the
/// steady-state solve, so the kernel must be one-dimensional.
Mat3 solve_traceless(const Generator& L, const Mat3& X);

/// Smallest nonzero |Re lambda| over the spectrum of L (eigenvalues with
/// |lambda| <= 1e-10 * max|lambda| count as zero).
double spectral_gap(const Generator& L);

/// Largest |Im lambda|.
double max_frequency(const Generator& L);

}  // namespace qpcnoise
