#include "qpcnoise/params.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qpcnoise/errors.hpp"

namespace qpcnoise {

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double parse_number(std::string_view key, std::string_view value) {
  value = trim(value);
  double out = 0.0;
  const auto* first = value.data();
  const auto* last = value.data() + value.size();
  if (!value.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (value.empty() || ec != std::errc{} || ptr != last || !std::isfinite(out)) {
    throw ConfigParseError(std::string(key), "parameter '" + std::string(key) +
                                                 "': expected a finite number, got '" +
                                                 std::string(value) + "'");
  }
  return out;
}

struct KeyBinding {
  std::string_view key;
  double ModelParams::*field;
};

constexpr std::array<KeyBinding, 9> kNumericKeys{{
    {"U_meV", &ModelParams::U},
    {"J_meV", &ModelParams::J},
    {"V_meV", &ModelParams::V},
    {"T0", &ModelParams::tunneling_T},
    {"nu0", &ModelParams::tunneling_nu},
    {"gamma_a0_per_ns", &ModelParams::gamma_a0},
    {"gamma_b0_per_ns", &ModelParams::gamma_b0},
    {"temperature_K", &ModelParams::temperature},
    {"alpha", &ModelParams::alpha},
}};

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(GapConvention g) {
  return g == GapConvention::spectral ? "spectral" : "qpc";
}

GapConvention gap_convention_from_string(std::string_view s) {
  s = trim(s);
  if (s == "spectral") return GapConvention::spectral;
  if (s == "qpc") return GapConvention::qpc;
  throw ConfigParseError("gap_convention", "parameter 'gap_convention': expected 'spectral' or 'qpc', got '" +
                                               std::string(s) + "'");
}

ModelParams default_params() { return ModelParams{}; }

void validate(const ModelParams& p) {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw InvalidParameter(msg);
  };
  const std::array<double, 9> all{p.U, p.J, p.V, p.tunneling_T, p.tunneling_nu,
                                  p.gamma_a0, p.gamma_b0, p.temperature, p.alpha};
  for (double v : all) require(std::isfinite(v), "all parameters must be finite");
  require(p.U > 0.0, "U_meV must be > 0");
  require(p.V > 0.0, "V_meV must be > 0");
  require(p.J >= 0.0, "J_meV must be >= 0");
  require(p.temperature >= 0.0, "temperature_K must be >= 0");
  require(p.alpha > 0.0, "alpha must be > 0");
  require(p.tunneling_T >= 0.0, "T0 must be >= 0");
  require(p.tunneling_nu >= 0.0, "nu0 must be >= 0");
  require(p.gamma_a0 >= 0.0, "gamma_a0_per_ns must be >= 0");
  require(p.gamma_b0 >= 0.0, "gamma_b0_per_ns must be >= 0");
  if (!(p.V > p.U + p.J)) {
    throw HighBiasViolation("high-bias condition violated: V_meV = " + fmt_double(p.V) +
                            " must exceed U_meV + J_meV = " + fmt_double(p.U + p.J));
  }
}

EffectiveCouplings effective_couplings(const ModelParams& p) {
  if (!(p.alpha > 0.0)) throw InvalidParameter("alpha must be > 0");
  return {p.tunneling_T / p.alpha, p.tunneling_nu / p.alpha};
}

ModelParams without_phonons(ModelParams p) {
  p.gamma_a0 = 0.0;
  p.gamma_b0 = 0.0;
  return p;
}

void set_param(ModelParams& p, std::string_view key, std::string_view value) {
  key = trim(key);
  if (key == "gap_convention") {
    p.gap_convention = gap_convention_from_string(value);
    return;
  }
  for (const auto& b : kNumericKeys) {
    if (b.key == key) {
      p.*(b.field) = parse_number(key, value);
      return;
    }
  }
  throw ConfigParseError(std::string(key), "unknown parameter '" + std::string(key) + "'");
}

ModelParams parse_config(std::string_view text, const ModelParams& base) {
  ModelParams p = base;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigParseError(std::string(line), "line " + std::to_string(line_no) +
                                                    ": expected 'key = value', got '" +
                                                    std::string(line) + "'");
    }
    set_param(p, line.substr(0, eq), line.substr(eq + 1));
  }
  try {
    validate(p);
  } catch (const HighBiasViolation& e) {
    throw ConfigParseError("V_meV", e.what());
  } catch (const InvalidParameter& e) {
    const std::string msg = e.what();
    std::string key;
    for (const auto& b : kNumericKeys) {
      if (msg.find(b.key) != std::string::npos) {
        key = b.key;
        break;
      }
    }
    throw ConfigParseError(key, msg);
  }
  return p;
}

std::string to_config(const ModelParams& p) {
  std::ostringstream os;
  for (const auto& b : kNumericKeys) os << b.key << " = " << fmt_double(p.*(b.field)) << '\n';
  os << "gap_convention = " << to_string(p.gap_convention) << '\n';
  return os.str();
}

}  // namespace qpcnoise
