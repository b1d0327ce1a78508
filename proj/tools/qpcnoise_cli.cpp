// Command-line front end: single-point Fano factors, temperature / alpha
// sweeps, state and operator dumps, trajectory runs and the validation suite.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qpcnoise/errors.hpp"
#include "qpcnoise/io.hpp"
#include "qpcnoise/lindblad.hpp"
#include "qpcnoise/noise.hpp"
#include "qpcnoise/sweep.hpp"
#include "qpcnoise/trajectories.hpp"
#include "qpcnoise/validate.hpp"

namespace {

using namespace qpcnoise;

enum ExitCode : int { kOk = 0, kParamError = 2, kNumericalError = 3, kValidationFailed = 4 };

constexpr const char* kExitCodes =
    "Exit codes:\n"
    "  0  success\n"
    "  2  parameter or command-line error\n"
    "  3  numerical failure (degenerate steady state, quadrature, trajectories, failed sweep point)\n"
    "  4  validation failure";

struct GlobalOptions {
  std::string config_path;
  std::map<std::string, std::string> overrides;  // config key -> raw value
  std::string output = "";
  std::uint64_t seed = 1;
  bool seed_given = false;
};

ModelParams resolve_params(const GlobalOptions& g) {
  ModelParams p = default_params();
  if (!g.config_path.empty()) {
    std::ifstream in(g.config_path);
    if (!in) throw InvalidParameter("cannot open config file '" + g.config_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    p = parse_config(ss.str());
  }
  for (const auto& [key, value] : g.overrides) set_param(p, key, value);
  validate(p);
  return p;
}

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_fano(const GlobalOptions& g, const std::string& method, const std::string& reference,
             std::optional<double> tau_max, double rel_tol) {
  const ModelParams p = resolve_params(g);
  NoiseResult r;
  if (method == "resolvent") {
    r = fano_resolvent(p);
  } else if (method == "quadrature") {
    QuadratureOptions q;
    q.tau_max = tau_max;
    q.rel_tol = rel_tol;
    r = fano_quadrature(p, q);
  } else {
    throw InvalidParameter("--method must be 'resolvent' or 'quadrature'");
  }
  nlohmann::json j = noise_to_json(r);
  j["params"] = params_to_json(p);
  if (reference == "nophonon") {
    const double ref = fano_resolvent(without_phonons(p)).fano;
    j["fano_nophonon"] = ref;
    j["ratio_to_nophonon"] = r.fano / ref;
  } else if (reference != "none") {
    throw InvalidParameter("--reference must be 'nophonon' or 'none'");
  }
  j["fano_triplet"] = triplet_current_and_fano(p).fano;
  if (g.output == "csv") {
    std::cout << "fano,current_e_per_ns,S0,shot_part,correction,method\n"
              << format_number(r.fano) << ',' << format_number(r.current) << ',' << format_number(r.S0)
              << ',' << format_number(r.shot_part) << ',' << format_number(r.correction) << ','
              << to_string(r.method) << '\n';
  } else {
    print_json(j);
  }
  return kOk;
}

int cmd_sweep(const GlobalOptions& g, SweepSpec spec, const std::string& variable, std::optional<double> start,
              std::optional<double> stop, std::optional<int> points, const std::string& method, bool no_reference,
              bool triplet_row) {
  spec.variable = sweep_variable_from_string(variable);
  if (spec.variable == SweepVariable::temperature) {
    spec.start = start.value_or(0.0);
    spec.stop = stop.value_or(40.0);
    spec.points = points.value_or(81);
  } else {
    spec.start = start.value_or(0.05);
    spec.stop = stop.value_or(8.0);
    spec.points = points.value_or(160);
  }
  spec.fixed = resolve_params(g);
  spec.method = sweep_method_from_string(method);
  spec.include_nophonon_reference = !no_reference;
  spec.triplet_row = triplet_row;
  validate(spec);
  const auto rows = run_sweep(spec);
  if (g.output == "json") {
    auto arr = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json j = {{"variable", std::string(to_string(r.variable))}, {"value", r.value}, {"method", r.method}};
      if (r.error) {
        j["error"] = *r.error;
      } else {
        j["fano"] = r.fano;
        j["current_e_per_ns"] = r.current;
        j["S0"] = r.S0;
        if (r.fano_nophonon) j["fano_nophonon"] = *r.fano_nophonon;
        if (r.populations) j["populations"] = {(*r.populations)(0), (*r.populations)(1), (*r.populations)(2)};
      }
      arr.push_back(std::move(j));
    }
    print_json(arr);
  } else {
    write_sweep_csv(std::cout, rows);
  }
  if (any_error(rows)) {
    std::cerr << "error: one or more sweep points failed\n";
    return kNumericalError;
  }
  return kOk;
}

int cmd_steady_state(const GlobalOptions& g) {
  const ModelParams p = resolve_params(g);
  const auto numeric = steady_state_numeric(build_generator(p));
  const auto analytic = steady_state_analytic(p);
  const Eigen::Vector3d pops = numeric.populations();
  if (g.output == "csv") {
    std::cout << "p0,p1,p2,max_abs_difference\n"
              << format_number(pops(0)) << ',' << format_number(pops(1)) << ',' << format_number(pops(2)) << ','
              << format_number((numeric.matrix() - analytic.matrix()).cwiseAbs().maxCoeff()) << '\n';
    return kOk;
  }
  print_json({{"params", params_to_json(p)},
              {"numeric", matrix_to_json(numeric.matrix())},
              {"analytic", matrix_to_json(analytic.matrix())},
              {"populations", {pops(0), pops(1), pops(2)}},
              {"max_abs_difference", (numeric.matrix() - analytic.matrix()).cwiseAbs().maxCoeff()}});
  return kOk;
}

int cmd_correlation(const GlobalOptions& g, std::optional<double> tau_max, int points) {
  if (points < 2) throw InvalidParameter("--points must be >= 2");
  const ModelParams p = resolve_params(g);
  const auto ops = build_operator_set(p);
  const auto L = build_generator(ops);
  const auto jm = jump_map(ops);
  const auto rho = steady_state_numeric(L);
  const double tmax = tau_max.value_or(10.0 / spectral_gap(L));
  if (!(tmax > 0.0)) throw InvalidParameter("--tau-max must be > 0");
  std::cout << "tau_ns,g_e2_per_ns2\n";
  for (int i = 0; i < points; ++i) {
    const double tau = tmax * i / (points - 1);
    std::cout << format_number(tau) << ',' << format_number(correlation_regular(tau, L, jm, rho)) << '\n';
  }
  return kOk;
}

int cmd_trajectories(const GlobalOptions& g, TrajectoryConfig cfg, std::optional<double> t_window,
                     const std::string& dump_path) {
  const ModelParams p = resolve_params(g);
  if (g.seed_given) cfg.seed = g.seed;
  const double gap = spectral_gap(build_generator(p));
  cfg.t_window = t_window.value_or(5.0 / gap);
  const auto rec = run_trajectories(p, cfg);
  if (!dump_path.empty()) {
    std::ofstream out(dump_path);
    if (!out) throw InvalidParameter("cannot write '" + dump_path + "'");
    write_counts_csv(out, rec);
  }
  const auto ref = fano_resolvent(p);
  print_json({{"params", params_to_json(p)},
              {"seed", cfg.seed},
              {"n_trajectories", rec.n_trajectories},
              {"n_windows", rec.n_windows},
              {"t_window_ns", rec.t_window},
              {"burn_in_ns", rec.burn_in},
              {"mean", rec.mean},
              {"mean_std_error", rec.mean_std_error},
              {"variance", rec.variance},
              {"fano_estimate", rec.fano_estimate},
              {"std_error", rec.std_error},
              {"fano_resolvent", ref.fano},
              {"expected_mean", ref.current * rec.t_window},
              {"z_score", (rec.fano_estimate - ref.fano) / rec.std_error}});
  return kOk;
}

int cmd_validate(const GlobalOptions& g, ValidationOptions opt) {
  if (g.seed_given) opt.seed = g.seed;
  const auto report = run_validation(opt);
  if (g.output != "json") print_report_table(std::cout, report);
  std::cout << report_to_json(report).dump() << '\n';
  return report.all_passed() ? kOk : kValidationFailed;
}

int cmd_dump_operators(const GlobalOptions& g) {
  print_json(operators_to_json(resolve_params(g)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DQD + QPC + phonon Lindblad model: steady states and QPC shot-noise Fano factors"};
  app.footer(kExitCodes);
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "key = value parameter file")->check(CLI::ExistingFile);
  app.add_option("--output", g.output, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option_function<std::uint64_t>(
      "--seed", [&](std::uint64_t s) { g.seed = s, g.seed_given = true; }, "random seed");

  const std::pair<const char*, const char*> overrides[] = {
      {"--U-meV", "U_meV"},
      {"--J-meV", "J_meV"},
      {"--V-meV", "V_meV"},
      {"--T0", "T0"},
      {"--nu0", "nu0"},
      {"--gamma-a0", "gamma_a0_per_ns"},
      {"--gamma-b0", "gamma_b0_per_ns"},
      {"--temperature", "temperature_K"},
      {"--alpha", "alpha"},
      {"--gap-convention", "gap_convention"},
  };
  for (const auto& [flag, key] : overrides) {
    const std::string k = key;
    app.add_option_function<std::string>(
           flag, [&g, k](const std::string& v) { g.overrides[k] = v; }, std::string("override ") + key)
        ->group("Parameters");
  }

  auto* fano = app.add_subcommand("fano", "Fano factor at one parameter point (JSON)");
  std::string fano_method = "resolvent";
  std::string reference = "none";
  std::optional<double> fano_tau_max;
  double rel_tol = 1e-9;
  fano->add_option("--method", fano_method, "resolvent | quadrature");
  fano->add_option("--reference", reference, "nophonon | none");
  fano->add_option("--tau-max", fano_tau_max, "quadrature horizon in ns (default 40/gap)");
  fano->add_option("--rel-tol", rel_tol, "quadrature relative tolerance on F");

  auto* sweep = app.add_subcommand("sweep", "temperature or alpha sweep (CSV)");
  SweepSpec spec;
  std::string variable = "temperature";
  std::optional<double> start, stop;
  std::optional<int> points;
  std::string sweep_method = "resolvent";
  bool no_reference = false;
  bool triplet_row = false;
  sweep->add_option("--variable", variable, "temperature | alpha");
  sweep->add_option("--start", start, "first grid value (default 0 K / 0.05)");
  sweep->add_option("--stop", stop, "last grid value (default 40 K / 8)");
  sweep->add_option("--points", points, "grid points, >= 2 (default 81 / 160)");
  sweep->add_option("--method", sweep_method, "resolvent | quadrature | both");
  sweep->add_flag("--no-reference", no_reference, "skip the no-phonon reference column");
  sweep->add_flag("--triplet-row", triplet_row, "also emit a triplet (F = 1) row per point");
  sweep->add_option("--threads", spec.threads, "worker threads (0: all cores)");

  auto* steady = app.add_subcommand("steady-state", "analytic and numeric singlet steady state");

  auto* corr = app.add_subcommand("correlation", "regular current correlation g(tau) (CSV)");
  std::optional<double> corr_tau_max;
  int corr_points = 201;
  corr->add_option("--tau-max", corr_tau_max, "largest tau in ns (default 10/gap)");
  corr->add_option("--points", corr_points, "number of tau samples");

  auto* traj = app.add_subcommand("trajectories", "Monte-Carlo wave-function counting statistics");
  TrajectoryConfig tcfg;
  std::optional<double> t_window;
  std::string dump_path;
  traj->add_option("--trajectories", tcfg.n_trajectories, "number of trajectories");
  traj->add_option("--windows", tcfg.n_windows, "counting windows per trajectory");
  traj->add_option("--t-window", t_window, "window length in ns (default 5/gap)");
  traj->add_option("--threads", tcfg.threads, "worker threads (0: all cores)");
  traj->add_option("--burn-in", tcfg.burn_in, "discarded time before the first window in ns (default 10/gap)");
  traj->add_option("--dump", dump_path, "write trajectory_index,window_index,count CSV");

  auto* val = app.add_subcommand("validate", "run the cross-oracle suite");
  ValidationOptions vopt;
  val->add_flag("--quick", vopt.quick, "reduced suite (< 60 s)");
  val->add_flag("--inject-sign-flip", vopt.inject_sign_flip, "mutation test: flip the dissipator sign")
      ->group("");
  val->add_option("--threads", vopt.threads, "worker threads for trajectories");

  auto* dump = app.add_subcommand("dump-operators", "H and all Lindblad operators as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParamError;
  }

  try {
    if (*fano) return cmd_fano(g, fano_method, reference, fano_tau_max, rel_tol);
    if (*sweep) return cmd_sweep(g, spec, variable, start, stop, points, sweep_method, no_reference, triplet_row);
    if (*steady) return cmd_steady_state(g);
    if (*corr) return cmd_correlation(g, corr_tau_max, corr_points);
    if (*traj) return cmd_trajectories(g, tcfg, t_window, dump_path);
    if (*val) return cmd_validate(g, vopt);
    if (*dump) return cmd_dump_operators(g);
  } catch (const InvalidParameter& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kParamError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kParamError;
  }
  return kParamError;
}
