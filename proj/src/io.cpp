#include "qpcnoise/io.hpp"

#include <cstdio>

#include "qpcnoise/errors.hpp"

namespace qpcnoise {

nlohmann::json matrix_to_json(const Mat3& m) {
  auto rows = nlohmann::json::array();
  for (int i = 0; i < 3; ++i) {
    auto row = nlohmann::json::array();
    for (int j = 0; j < 3; ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat3 matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw InvalidArgument("matrix JSON must have 3 rows");
  Mat3 m;
  for (int r = 0; r < 3; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || row.size() != 3) throw InvalidArgument("matrix JSON rows must have 3 entries");
    for (int c = 0; c < 3; ++c) {
      const auto& e = row[c];
      if (!e.is_array() || e.size() != 2) throw InvalidArgument("matrix JSON entries must be [re, im]");
      m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

nlohmann::json params_to_json(const ModelParams& p) {
  return {
      {"U_meV", p.U},
      {"J_meV", p.J},
      {"V_meV", p.V},
      {"T0", p.tunneling_T},
      {"nu0", p.tunneling_nu},
      {"gamma_a0_per_ns", p.gamma_a0},
      {"gamma_b0_per_ns", p.gamma_b0},
      {"temperature_K", p.temperature},
      {"alpha", p.alpha},
      {"gap_convention", std::string(to_string(p.gap_convention))},
  };
}

nlohmann::json noise_to_json(const NoiseResult& r) {
  nlohmann::json j = {
      {"current_e_per_ns", r.current},
      {"shot_part", r.shot_part},
      {"correction", r.correction},
      {"S0", r.S0},
      {"fano", r.fano},
      {"method", std::string(to_string(r.method))},
  };
  if (r.method == NoiseMethod::quadrature) {
    j["diagnostics"] = {
        {"spectral_gap_per_ns", r.spectral_gap},
        {"tau_max_ns", r.tau_max},
        {"tail_estimate", r.tail_estimate},
        {"quadrature_error", r.quadrature_error},
        {"panels", r.panels},
    };
  }
  return j;
}

nlohmann::json operators_to_json(const ModelParams& p) {
  const auto ops = build_operator_set(p);
  const auto es = eigenstructure(p);
  const auto rates = phonon_rates(p);
  const auto [T_eff, nu_eff] = effective_couplings(p);
  return {
      {"format", "row-major 3x3, entries [re, im], basis (s0, s1, s2)"},
      {"params", params_to_json(p)},
      {"effective", {{"T", T_eff}, {"nu", nu_eff}}},
      {"eigenstructure",
       {{"theta", es.theta},
        {"xi", es.xi},
        {"xi_prime", es.xi_prime},
        {"Delta_meV", es.Delta},
        {"energies_meV", es.energies}}},
      {"phonon_rates_per_ns",
       {{"gamma_02", rates.gamma_02},
        {"gamma_20", rates.gamma_20},
        {"gamma_12", rates.gamma_12},
        {"gamma_21", rates.gamma_21},
        {"omega_a_meV", rates.omega_a},
        {"omega_b_meV", rates.omega_b}}},
      {"H_meV", matrix_to_json(ops.H)},
      {"C1", matrix_to_json(ops.counted[0])},
      {"C2", matrix_to_json(ops.counted[1])},
      {"C3", matrix_to_json(ops.counted[2])},
      {"B_20", matrix_to_json(ops.uncounted[0])},
      {"B_02", matrix_to_json(ops.uncounted[1])},
      {"B_21", matrix_to_json(ops.uncounted[2])},
      {"B_12", matrix_to_json(ops.uncounted[3])},
  };
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace qpcnoise
