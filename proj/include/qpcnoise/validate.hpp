#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qpcnoise {

struct ValidationOptions {
  bool quick = false;
  // Mutation check: builds the steady-state generators with the flipped
  // anticommutator sign; the steady-state check must then fail.
  bool inject_sign_flip = false;
  std::uint64_t seed = 20240607;
  unsigned threads = 0;
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_passed() const;
};

/// Cross-oracle suite: analytic vs numeric steady state, generator health,
/// resolvent vs quadrature Fano, trajectories vs resolvent, Poissonian limit.
ValidationReport run_validation(const ValidationOptions& opt = {});

void print_report_table(std::ostream& os, const ValidationReport& r);
nlohmann::json report_to_json(const ValidationReport& r);

}  // namespace qpcnoise
