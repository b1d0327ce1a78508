#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "qpcnoise/params.hpp"

namespace qpcnoise {

enum class SweepVariable { temperature, alpha };
enum class SweepMethod { resolvent, quadrature, both };

std::string_view to_string(SweepVariable v);
SweepVariable sweep_variable_from_string(std::string_view s);
SweepMethod sweep_method_from_string(std::string_view s);

struct SweepSpec {
  SweepVariable variable = SweepVariable::temperature;
  double start = 0.0;
  double stop = 40.0;
  int points = 81;
  ModelParams fixed = default_params();
  bool include_nophonon_reference = true;
  SweepMethod method = SweepMethod::resolvent;
  bool triplet_row = false;
  unsigned threads = 0;
};

/// Throws InvalidParameter unless start < stop and points >= 2.
void validate(const SweepSpec& spec);

/// Linear grid including both endpoints.
std::vector<double> sweep_grid(const SweepSpec& spec);

struct SweepRow {
  SweepVariable variable = SweepVariable::temperature;
  double value = 0.0;
  double fano = 0.0;
  std::optional<double> fano_nophonon;
  double current = 0.0;
  double S0 = 0.0;
  std::optional<Eigen::Vector3d> populations;
  std::string method;
  std::optional<std::string> error;
};

/// Evaluates every grid point (in parallel), rows in ascending grid order.
/// A failing point yields a row with `error` set; the rest still run.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

inline constexpr std::string_view kSweepCsvHeader =
    "variable,value,fano,fano_nophonon,current_e_per_ns,S0,p0,p1,p2,method";

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

bool any_error(const std::vector<SweepRow>& rows);

}  // namespace qpcnoise
