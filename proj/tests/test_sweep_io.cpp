#include <doctest.h>

#include <random>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "qpcnoise/errors.hpp"
#include "qpcnoise/io.hpp"
#include "qpcnoise/sweep.hpp"
#include "qpcnoise/validate.hpp"

using namespace qpcnoise;

TEST_CASE("sweep grid is inclusive") {
  SweepSpec s;
  const auto g = sweep_grid(s);
  CHECK(g.size() == 81);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 40.0);
  CHECK(g[1] == doctest::Approx(0.5));
  s.points = 2;
  CHECK(sweep_grid(s) == std::vector<double>{0.0, 40.0});
}

TEST_CASE("sweep spec validation") {
  SweepSpec s;
  CHECK_NOTHROW(validate(s));
  s.points = 1;
  CHECK_THROWS_AS(validate(s), InvalidParameter);
  s = {};
  s.start = 40.0;
  CHECK_THROWS_AS(validate(s), InvalidParameter);
  s = {};
  s.stop = -1.0;
  CHECK_THROWS_AS(validate(s), InvalidParameter);
  CHECK_THROWS(sweep_variable_from_string("pressure"));
  CHECK(sweep_method_from_string("both") == SweepMethod::both);
}

TEST_CASE("sweep rows, CSV and determinism") {
  SweepSpec s;
  s.start = 0.0;
  s.stop = 10.0;
  s.points = 3;
  s.triplet_row = true;
  const auto rows = run_sweep(s);
  CHECK_FALSE(any_error(rows));
  REQUIRE(rows.size() == 6);  // each point: resolvent row then triplet row
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& r = rows[2 * i];
    const auto& t = rows[2 * i + 1];
    CHECK(r.value == 5.0 * i);
    CHECK(r.method == "resolvent");
    CHECK(t.method == "triplet");
    CHECK(t.fano == 1.0);
    REQUIRE(r.fano_nophonon.has_value());
    REQUIRE(r.populations.has_value());
    CHECK(std::abs(r.populations->sum() - 1.0) < 1e-10);
    auto p = default_params();
    p.temperature = r.value;
    CHECK(r.fano == fano_resolvent(p).fano);
    CHECK(*r.fano_nophonon == fano_resolvent(without_phonons(p)).fano);
  }
  std::ostringstream a, b;
  write_sweep_csv(a, rows);
  write_sweep_csv(b, run_sweep(s));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind(std::string(kSweepCsvHeader) + "\n", 0) == 0);
}

TEST_CASE("sweep records per-row failures") {
  SweepSpec a;
  a.variable = SweepVariable::alpha;
  a.start = 0.0;  // alpha = 0 is invalid; the other point still runs
  a.stop = 1.0;
  a.points = 2;
  const auto arows = run_sweep(a);
  REQUIRE(arows.size() == 2);
  CHECK(arows[0].error.has_value());
  CHECK_FALSE(arows[1].error.has_value());

  SweepSpec s;
  s.fixed.V = 1.05;  // below U + J
  s.points = 2;
  s.stop = 1.0;
  const auto rows = run_sweep(s);
  CHECK(any_error(rows));
  std::ostringstream os;
  write_sweep_csv(os, rows);
  CHECK(os.str().find("error:") != std::string::npos);
}

TEST_CASE("matrix JSON round trip") {
  std::mt19937_64 rng(61);
  for (int k = 0; k < 20; ++k) {
    const Mat3 m = oracle::random_matrix(rng);
    CHECK(matrix_from_json(nlohmann::json::parse(matrix_to_json(m).dump())) == m);
  }
}

TEST_CASE("JSON documents carry the expected fields") {
  const auto p = default_params();
  const auto pj = params_to_json(p);
  CHECK(pj.at("U_meV").get<double>() == 1.0);
  CHECK(pj.at("gap_convention").get<std::string>() == "spectral");
  const auto nj = noise_to_json(fano_resolvent(p));
  CHECK(nj.contains("fano"));
  CHECK(nj.contains("current_e_per_ns"));
  const auto oj = operators_to_json(p);
  CHECK(oj.contains("H_meV"));
}

TEST_CASE("validation suite, quick mode") {
  ValidationOptions opt;
  opt.quick = true;
  const auto r = run_validation(opt);
  std::ostringstream os;
  print_report_table(os, r);
  MESSAGE(os.str());
  CHECK(r.all_passed());
  CHECK(report_to_json(r).is_object());

  opt.inject_sign_flip = true;
  CHECK_FALSE(run_validation(opt).all_passed());
}
