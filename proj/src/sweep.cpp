#include "qpcnoise/sweep.hpp"

#include <ostream>
#include <thread>

#include "qpcnoise/errors.hpp"
#include "qpcnoise/io.hpp"
#include "qpcnoise/lindblad.hpp"
#include "qpcnoise/noise.hpp"

namespace qpcnoise {

std::string_view to_string(SweepVariable v) {
  return v == SweepVariable::temperature ? "temperature" : "alpha";
}

SweepVariable sweep_variable_from_string(std::string_view s) {
  if (s == "temperature") return SweepVariable::temperature;
  if (s == "alpha") return SweepVariable::alpha;
  throw InvalidParameter("sweep variable must be 'temperature' or 'alpha'");
}

SweepMethod sweep_method_from_string(std::string_view s) {
  if (s == "resolvent") return SweepMethod::resolvent;
  if (s == "quadrature") return SweepMethod::quadrature;
  if (s == "both") return SweepMethod::both;
  throw InvalidParameter("method must be 'resolvent', 'quadrature' or 'both'");
}

void validate(const SweepSpec& spec) {
  if (!(spec.start < spec.stop)) throw InvalidParameter("sweep requires start < stop");
  if (spec.points < 2) throw InvalidParameter("sweep requires points >= 2");
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
  validate(spec);
  std::vector<double> grid(spec.points);
  const double step = (spec.stop - spec.start) / (spec.points - 1);
  for (int i = 0; i < spec.points; ++i) grid[i] = spec.start + step * i;
  grid.back() = spec.stop;
  return grid;
}

namespace {

ModelParams at_point(const SweepSpec& spec, double value) {
  ModelParams p = spec.fixed;
  if (spec.variable == SweepVariable::temperature) p.temperature = value;
  else p.alpha = value;
  return p;
}

std::vector<SweepRow> evaluate_point(const SweepSpec& spec, double value) {
  std::vector<SweepRow> rows;
  auto error_row = [&](const std::string& method, const std::string& what) {
    SweepRow r;
    r.variable = spec.variable;
    r.value = value;
    r.method = method;
    r.error = what;
    return r;
  };

  ModelParams p;
  std::optional<Eigen::Vector3d> pops;
  std::optional<double> reference;
  try {
    p = at_point(spec, value);
    validate(p);
    try {
      pops = steady_state_numeric(build_generator(p)).populations();
    } catch (const DegenerateSteadyState&) {
      // The Fano factor may still be defined (occupation-blind detector);
      // populations stay empty.
    }
    if (spec.include_nophonon_reference) reference = fano_resolvent(without_phonons(p)).fano;
  } catch (const std::exception& e) {
    rows.push_back(error_row("error", e.what()));
    return rows;
  }

  std::vector<NoiseMethod> methods;
  if (spec.method != SweepMethod::quadrature) methods.push_back(NoiseMethod::resolvent);
  if (spec.method != SweepMethod::resolvent) methods.push_back(NoiseMethod::quadrature);

  for (const auto m : methods) {
    try {
      const NoiseResult res = m == NoiseMethod::resolvent ? fano_resolvent(p) : fano_quadrature(p);
      SweepRow r;
      r.variable = spec.variable;
      r.value = value;
      r.fano = res.fano;
      r.fano_nophonon = reference;
      r.current = res.current;
      r.S0 = res.S0;
      r.populations = pops;
      r.method = std::string(to_string(m));
      rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      rows.push_back(error_row(std::string(to_string(m)), e.what()));
    }
  }
  if (spec.triplet_row) {
    const NoiseResult t = triplet_current_and_fano(p);
    SweepRow r;
    r.variable = spec.variable;
    r.value = value;
    r.fano = t.fano;
    r.current = t.current;
    r.S0 = t.S0;
    r.method = "triplet";
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string csv_escape(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '"') c = ';';
  return s;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  const auto grid = sweep_grid(spec);
  std::vector<std::vector<SweepRow>> per_point(grid.size());
  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(grid.size()));
  // evaluate_point never throws; each worker owns a disjoint stride of points.
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < grid.size(); i += threads) per_point[i] = evaluate_point(spec, grid[i]);
    });
  }
  for (auto& t : pool) t.join();

  std::vector<SweepRow> rows;
  for (auto& pts : per_point)
    for (auto& r : pts) rows.push_back(std::move(r));
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    os << to_string(r.variable) << ',' << format_number(r.value) << ',';
    if (r.error) {
      os << ",,,,,,," << "error: " << csv_escape(*r.error) << '\n';
      continue;
    }
    os << format_number(r.fano) << ',';
    if (r.fano_nophonon) os << format_number(*r.fano_nophonon);
    os << ',' << format_number(r.current) << ',' << format_number(r.S0) << ',';
    if (r.populations) {
      os << format_number((*r.populations)(0)) << ',' << format_number((*r.populations)(1)) << ','
         << format_number((*r.populations)(2));
    } else {
      os << ",,";
    }
    os << ',' << r.method << '\n';
  }
}

bool any_error(const std::vector<SweepRow>& rows) {
  for (const auto& r : rows)
    if (r.error) return true;
  return false;
}

}  // namespace qpcnoise
