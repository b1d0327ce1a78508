#include "qpcnoise/validate.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include <Eigen/Eigenvalues>

#include "qpcnoise/lindblad.hpp"
#include "qpcnoise/noise.hpp"
#include "qpcnoise/trajectories.hpp"

namespace qpcnoise {

bool ValidationReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return !checks.empty();
}

namespace {

ModelParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  ModelParams p = default_params();
  p.U = 0.5 + 1.5 * u01(rng);
  p.J = p.U * (0.02 + 0.28 * u01(rng));
  p.V = (p.U + p.J) * (1.2 + 2.8 * u01(rng));
  p.alpha = 0.1 + 9.9 * u01(rng);
  p.temperature = 50.0 * u01(rng);
  return p;
}

template <class Fn>
ValidationCheck guarded(const std::string& name, double tolerance, Fn&& fn) {
  ValidationCheck c{name, false, 0.0, tolerance, {}};
  try {
    fn(c);
  } catch (const std::exception& e) {
    c.passed = false;
    c.detail = std::string("exception: ") + e.what();
  }
  return c;
}

ValidationCheck steady_state_check(const ValidationOptions& opt) {
  return guarded("steady state: analytic vs numeric", 1e-10, [&](ValidationCheck& c) {
    std::mt19937_64 rng(opt.seed);
    GeneratorOptions gen_opt;
    if (opt.inject_sign_flip) gen_opt.anticommutator_coeff = +0.5;
    const int n = opt.quick ? 20 : 200;
    double worst = 0.0;
    for (int k = 0; k <= n; ++k) {
      const ModelParams p = k == 0 ? default_params() : random_params(rng);
      const auto L = build_generator(p, gen_opt);
      const Mat3 diff = steady_state_numeric(L).matrix() - steady_state_analytic(p).matrix();
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
    c.value = worst;
    c.passed = worst < c.tolerance;
    c.detail = std::to_string(n + 1) + " parameter sets, max entrywise difference";
  });
}

ValidationCheck generator_check(const ValidationOptions& opt) {
  return guarded("generator: spectrum and trace preservation", 1e-10, [&](ValidationCheck& c) {
    std::mt19937_64 rng(opt.seed + 1);
    const int n = opt.quick ? 20 : 100;
    double worst_re = -1e300;
    double worst_tr = 0.0;
    for (int k = 0; k < n; ++k) {
      const auto L = build_generator(random_params(rng));
      Eigen::ComplexEigenSolver<SuperMat> es(L.matrix, false);
      worst_re = std::max(worst_re, es.eigenvalues().real().maxCoeff());
      worst_tr = std::max(worst_tr, (trace_functional() * L.matrix).cwiseAbs().maxCoeff());
    }
    c.value = worst_re;
    c.passed = worst_re <= 1e-10 && worst_tr <= 1e-12;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d sets; max Re(lambda) = %.3e, max |Tr L| = %.3e", n, worst_re, worst_tr);
    c.detail = buf;
  });
}

ValidationCheck poisson_check() {
  return guarded("Poissonian limit nu0 = 0", 1e-12, [&](ValidationCheck& c) {
    double worst = 0.0;
    for (double T : {0.0, 15.0}) {
      ModelParams p = default_params();
      p.tunneling_nu = 0.0;
      p.temperature = T;
      worst = std::max(worst, std::abs(fano_resolvent(p).fano - 1.0));
      worst = std::max(worst, std::abs(fano_quadrature(p).fano - 1.0));
    }
    c.value = worst;
    c.passed = worst <= c.tolerance;
    c.detail = "|F - 1|, resolvent and quadrature, T in {0, 15} K";
  });
}

ValidationCheck quadrature_check(const ValidationOptions& opt) {
  return guarded("Fano: resolvent vs quadrature", 1e-6, [&](ValidationCheck& c) {
    std::vector<double> alphas{1.0, 3.0};
    std::vector<double> temps{0.0, 40.0};
    if (!opt.quick) {
      alphas = {0.5, 1.0, 2.0, 3.0, 5.0};
      temps = {0.0, 5.0, 15.0, 25.0, 40.0};
    }
    double worst = 0.0;
    for (double a : alphas) {
      for (double T : temps) {
        ModelParams p = default_params();
        p.alpha = a;
        p.temperature = T;
        const double fr = fano_resolvent(p).fano;
        const double fq = fano_quadrature(p).fano;
        worst = std::max(worst, std::abs(fq - fr) / std::abs(fr));
      }
    }
    c.value = worst;
    c.passed = worst <= c.tolerance;
    c.detail = std::to_string(alphas.size() * temps.size()) + " (alpha, T) points, max relative difference";
  });
}

ValidationCheck trajectory_check(const ValidationOptions& opt, double alpha, double T) {
  char name[96];
  std::snprintf(name, sizeof name, "Fano: trajectories vs resolvent (alpha=%g, T=%g K)", alpha, T);
  return guarded(name, 3.0, [&](ValidationCheck& c) {
    ModelParams p = default_params();
    p.alpha = alpha;
    p.temperature = T;
    const double gap = spectral_gap(build_generator(p));
    TrajectoryConfig cfg;
    cfg.seed = opt.seed + static_cast<std::uint64_t>(alpha * 1000 + T);
    cfg.threads = opt.threads;
    cfg.t_window = 2.0 / gap;
    cfg.n_trajectories = opt.quick ? 8 : 20;
    cfg.n_windows = opt.quick ? 100 : 1000;
    const auto rec = run_trajectories(p, cfg);
    const double fr = fano_resolvent(p).fano;
    const double z = std::abs(rec.fano_estimate - fr) / rec.std_error;
    c.value = z;
    c.passed = z <= c.tolerance;
    char buf[200];
    std::snprintf(buf, sizeof buf, "%d windows: F_traj = %.5f +- %.5f, F_resolvent = %.6f (|z| = %.2f)",
                  cfg.n_trajectories * cfg.n_windows, rec.fano_estimate, rec.std_error, fr, z);
    c.detail = buf;
  });
}

}  // namespace

ValidationReport run_validation(const ValidationOptions& opt) {
  ValidationReport r;
  r.checks.push_back(steady_state_check(opt));
  r.checks.push_back(generator_check(opt));
  r.checks.push_back(poisson_check());
  r.checks.push_back(quadrature_check(opt));
  r.checks.push_back(trajectory_check(opt, 3.0, 0.0));
  if (!opt.quick) r.checks.push_back(trajectory_check(opt, 1.0, 15.0));
  return r;
}

void print_report_table(std::ostream& os, const ValidationReport& r) {
  for (const auto& c : r.checks) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "[%s] %-58s value=%.3e tol=%.1e", c.passed ? "PASS" : "FAIL",
                  c.name.c_str(), c.value, c.tolerance);
    os << buf << "\n       " << c.detail << '\n';
  }
  os << (r.all_passed() ? "all checks passed" : "VALIDATION FAILED") << '\n';
}

nlohmann::json report_to_json(const ValidationReport& r) {
  auto checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"value", c.value},
                      {"tolerance", c.tolerance},
                      {"detail", c.detail}});
  }
  return {{"all_passed", r.all_passed()}, {"checks", checks}};
}

}  // namespace qpcnoise
