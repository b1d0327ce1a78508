#include "qpcnoise/noise.hpp"

#include <cmath>
#include <map>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qpcnoise/errors.hpp"
#include "qpcnoise/units.hpp"

namespace qpcnoise {

bool JumpMap::is_scalar(double rel_tol) const {
  const cplx c = matrix(0, 0);
  const double scale = std::max(std::abs(c), 1e-300);
  return (matrix - c * SuperMat::Identity()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

std::string_view to_string(NoiseMethod m) {
  switch (m) {
    case NoiseMethod::resolvent:
      return "resolvent";
    case NoiseMethod::quadrature:
      return "quadrature";
    case NoiseMethod::trajectory:
      return "trajectory";
    case NoiseMethod::triplet:
      return "triplet";
  }
  return "?";
}

double consistency_error(const NoiseResult& r) {
  if (!(r.current > 0.0)) return 0.0;
  const double f_from_S0 = r.S0 / (2.0 * units::e * r.current * units::e);
  const double f_from_corr = 1.0 + r.correction * 2.0 / (units::e * units::e * r.current);
  const double shot = std::abs(r.shot_part - units::e * units::e * r.current);
  return std::max({std::abs(f_from_S0 - r.fano), std::abs(f_from_corr - r.fano), shot / r.current}) /
         std::abs(r.fano);
}

JumpMap jump_map(const OperatorSet& ops) {
  JumpMap jm;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      const Mat3 E = ketbra(i, j);
      Mat3 out = Mat3::Zero();
      for (const auto& C : ops.counted) out += C * E * C.adjoint();
      jm.matrix.col(vec_index(i, j)) = vectorize(out);
    }
  }
  return jm;
}

double mean_current(const DensityMatrix& rho, const JumpMap& jm) {
  return jm.apply(rho.matrix()).trace().real();
}

namespace {

NoiseResult assemble(double R, double correction, NoiseMethod method) {
  NoiseResult r;
  r.current = R;
  r.shot_part = units::e * units::e * R;
  r.correction = correction;
  r.S0 = 2.0 * r.shot_part + 4.0 * correction;
  r.fano = R > 0.0 ? r.S0 / (2.0 * r.shot_part) : 1.0;
  r.method = method;
  return r;
}

// Poissonian result for an occupation-blind detector, valid for any state.
NoiseResult scalar_detector(const JumpMap& jm, NoiseMethod method) {
  return assemble(jm.matrix(0, 0).real(), 0.0, method);
}

struct Prepared {
  OperatorSet ops;
  Generator L;
  JumpMap jm;
};

Prepared prepare(const ModelParams& p) {
  Prepared out{build_operator_set(p), {}, {}};
  out.L = build_generator(out.ops);
  out.jm = jump_map(out.ops);
  return out;
}

}  // namespace

NoiseResult triplet_current_and_fano(const ModelParams& p) {
  validate(p);
  const auto [T_eff, nu_eff] = effective_couplings(p);
  const double R = (p.V / units::hbar) * (T_eff + nu_eff) * (T_eff + nu_eff);
  return assemble(R, 0.0, NoiseMethod::triplet);
}

double correlation_regular(double tau, const Generator& L, const JumpMap& jm, const DensityMatrix& rho_ss) {
  if (!(tau >= 0.0)) throw InvalidArgument("correlation_regular: tau must be >= 0 (use g(-tau) = g(tau))");
  const double R = mean_current(rho_ss, jm);
  const DensityMatrix after_jump(jm.apply(rho_ss.matrix()));
  const Vec9 propagated = vectorize(evolve(L, after_jump, tau).matrix());
  const double second = (trace_functional() * (jm.matrix * propagated))(0).real();
  return units::e * units::e * (second - R * R);
}

NoiseResult fano_resolvent(const ModelParams& p) {
  const auto prep = prepare(p);
  if (prep.jm.is_scalar()) return scalar_detector(prep.jm, NoiseMethod::resolvent);

  const DensityMatrix rho = steady_state_numeric(prep.L);
  const double R = mean_current(rho, prep.jm);
  const Mat3 X = prep.jm.apply(rho.matrix()) - R * rho.matrix();
  const Mat3 Y = solve_traceless(prep.L, X);
  const double correction = units::e * units::e * prep.jm.apply(Y).trace().real();
  return assemble(R, correction, NoiseMethod::resolvent);
}

namespace {

// Adaptive panel integration of f(tau) = Tr J[exp(L tau) x0] over [0, tau_max].
// Panel widths are h0 * 2^k; the propagators to the Kronrod nodes of a panel
// and across a whole panel depend only on k, so they are computed once per
// level and every panel costs 16 matrix-vector products.
class PanelIntegrator {
 public:
  PanelIntegrator(const SuperMat& L, const Eigen::Matrix<cplx, 1, 9>& readout, double h0)
      : L_(L), readout_(readout), h0_(h0) {}

  struct Panel {
    double kronrod;
    double error;
    double end_value;
  };

  Panel integrate(const Vec9& start, int level) {
    const Level& lv = level_data(level);
    double k15 = 0.0;
    double g7 = 0.0;
    for (std::size_t n = 0; n < lv.nodes.size(); ++n) {
      const double f = (readout_ * (lv.nodes[n] * start))(0).real();
      k15 += lv.kronrod_w[n] * f;
      g7 += lv.gauss_w[n] * f;
    }
    const double end = (readout_ * (lv.step * start))(0).real();
    return {k15, std::abs(k15 - g7), end};
  }

  Vec9 advance(const Vec9& start, int level) { return level_data(level).step * start; }
  double width(int level) const { return std::ldexp(h0_, level); }

 private:
  struct Level {
    std::vector<SuperMat> nodes;
    std::vector<double> kronrod_w;
    std::vector<double> gauss_w;
    SuperMat step;
  };

  const Level& level_data(int level) {
    auto it = cache_.find(level);
    if (it != cache_.end()) return it->second;
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    const auto& abs = GK::abscissa();
    const auto& kw = GK::weights();
    const auto& gw = boost::math::quadrature::gauss<double, 7>::weights();
    const double h = width(level);
    const double half = 0.5 * h;
    Level lv;
    // Boost stores non-negative abscissae only; index 0 is the centre, odd
    // indices are Gauss nodes.
    auto add = [&](double x, double wk, double wg) {
      lv.nodes.push_back(expm(SuperMat(L_ * (half + half * x))));
      lv.kronrod_w.push_back(wk * half);
      lv.gauss_w.push_back(wg * half);
    };
    for (std::size_t i = 0; i < abs.size(); ++i) {
      const double wg = (i % 2 == 0) ? gw[i / 2] : 0.0;
      add(abs[i], kw[i], wg);
      if (abs[i] != 0.0) add(-abs[i], kw[i], wg);
    }
    lv.step = expm(SuperMat(L_ * h));
    return cache_.emplace(level, std::move(lv)).first->second;
  }

  SuperMat L_;
  Eigen::Matrix<cplx, 1, 9> readout_;
  double h0_;
  std::map<int, Level> cache_;
};

}  // namespace

NoiseResult fano_quadrature(const ModelParams& p, const QuadratureOptions& opt) {
  const auto prep = prepare(p);
  if (prep.jm.is_scalar()) return scalar_detector(prep.jm, NoiseMethod::quadrature);

  const DensityMatrix rho = steady_state_numeric(prep.L);
  const double R = mean_current(rho, prep.jm);
  const Vec9 rho_vec = vectorize(rho.matrix());
  const Vec9 x0 = prep.jm.matrix * rho_vec - R * rho_vec;

  const double gap = spectral_gap(prep.L);
  const double tau_max = opt.tau_max.value_or(40.0 / gap);
  if (!(tau_max > 0.0)) throw InvalidArgument("fano_quadrature: tau_max must be > 0");

  const auto trace = trace_functional();
  const Eigen::Matrix<cplx, 1, 9> readout = trace * prep.jm.matrix;

  // Start by resolving the fastest oscillation of L.
  const double omega = std::max(max_frequency(prep.L), gap);
  double h0 = std::min(tau_max, 0.5 / omega);
  PanelIntegrator panels(prep.L.matrix, readout, h0);

  // |d fano| = 2 |d correction| / R.
  const double budget = 0.5 * opt.rel_tol * R * 0.5;
  double tau = 0.0;
  double integral = 0.0;
  double error_sum = 0.0;
  long n_panels = 0;
  int level = 0;
  Vec9 state = x0;
  double last_value = (readout * x0)(0).real();

  const int min_level = -opt.max_refinements;
  while (tau < tau_max) {
    const double remaining = tau_max - tau;
    while (panels.width(level) > remaining && level > min_level) --level;
    if (panels.width(level) > remaining) break;  // below the finest panel width
    const double h = panels.width(level);
    const auto panel = panels.integrate(state, level);
    const double allowed = budget * h / tau_max;
    if (panel.error > allowed && level > min_level) {
      --level;
      continue;
    }
    if (panel.error > allowed) {
      throw QuadratureError("fano_quadrature: panel error above tolerance at minimum width",
                            (error_sum + panel.error) / (0.5 * R));
    }
    integral += panel.kronrod;
    error_sum += panel.error;
    state = panels.advance(state, level);
    // The traceless input has no component along the stationary state; strip
    // the one rounding injects so it cannot accumulate.
    state -= (trace * state)(0) * rho_vec;
    last_value = panel.end_value;
    tau += h;
    ++n_panels;
    if (panel.error < allowed / 64.0) ++level;
  }

  const double tail = last_value / gap;
  NoiseResult r = assemble(R, units::e * units::e * (integral + tail), NoiseMethod::quadrature);
  r.spectral_gap = gap;
  r.tau_max = tau;
  r.tail_estimate = tail;
  r.quadrature_error = error_sum;
  r.panels = n_panels;
  return r;
}

}  // namespace qpcnoise
