#include <doctest.h>

#include <array>
#include <cmath>
#include <filesystem>
#include <limits>

#include "cases.hpp"
#include "json.hpp"
#include "sspf/error.hpp"
#include "sspf/io.hpp"

using namespace sspf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
  const fs::path p = fs::temp_directory_path() / (std::string("sspf_io_") + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("shortest round-trip formatting") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(-2.0) == "-2");
  CHECK(io::format_double(1e-300) == "1e-300");
  CHECK(io::format_double(std::nan("")) == "nan");
  CHECK(io::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  for (double x : {1.0 / 3.0, std::sqrt(2.0), -7.25e-17, 123456789.125}) {
    CHECK(io::parse_double(io::format_double(x)) == x);
  }
  CHECK(io::parse_double(" +1.5\r") == 1.5);
  CHECK_THROWS_AS(io::parse_double("1.5x"), FormatError);
  CHECK_THROWS_AS(io::parse_double(""), FormatError);
}

TEST_CASE("field files round trip") {
  const fs::path dir = scratch("field");
  const GasModel gas = sspf::testing::gas_with(1.4, 2.0, 1.1);
  GridSpec g = GridSpec::from_extent({5, 4}, {-0.5, 0.2}, {0.5, 0.8});
  g.walls[static_cast<int>(Edge::Bottom)] = true;
  const std::array<double, 2> v{0.3, 0.0};
  const ScalarField u = uniform_flow(v, 0.5, gas, g);

  for (Variable var : {Variable::Chi, Variable::Psi}) {
    const ScalarField f = var == Variable::Chi ? u : to_psi(u);
    const fs::path csv = dir / "f.csv";
    io::write_field(csv, f, gas);
    CHECK(fs::exists(io::sidecar_path(csv)));
    CHECK_FALSE(fs::exists(dir / "f.csv.tmp"));
    const io::LoadedField back = io::read_field(csv);
    CHECK(back.field.variable() == var);
    CHECK(back.field.grid().walls == g.walls);
    CHECK(back.field.grid().dims == g.dims);
    CHECK(back.gas.c0 == gas.c0);
    CHECK(back.gas.bernoulli_A == gas.bernoulli_A);
    CHECK(sspf::testing::max_abs_diff(back.field, f) == 0.0);
  }

  const std::string csv_text = io::field_csv(u);
  CHECK(csv_text.rfind("xi1,xi2,value\n", 0) == 0);
  const auto meta = nlohmann::json::parse(io::field_metadata_json(u, gas));
  CHECK(meta["variable"] == "chi");
  CHECK(meta["grid"]["walls"] == nlohmann::json::array({"bottom"}));

  SUBCASE("corrupt files") {
    const fs::path csv = dir / "g.csv";
    io::write_field(csv, u, gas);
    std::string text = io::read_text(csv);
    io::write_text_atomic(csv, text.substr(0, text.size() / 2));
    CHECK_THROWS_AS(io::read_field(csv), FormatError);
    io::write_field(csv, u, gas);
    text = io::read_text(csv);
    text.replace(text.find("-0.5"), 4, "-0.4");
    io::write_text_atomic(csv, text);
    CHECK_THROWS_AS(io::read_field(csv), FormatError);
    CHECK_THROWS_AS(io::read_field(dir / "missing.csv"), FormatError);
  }
}

TEST_CASE("1D profiles read back as fields") {
  const fs::path dir = scratch("profile");
  const GasModel gas = sspf::testing::gas_with(1.4, 2.0);
  const Profile1D p = solve_1d(gas, OneDBranch::Affine, {0.0, 0.0, 0.2}, -0.5, 0.5, 11);
  const std::string text = io::profile_csv(p);
  CHECK(text.rfind("xi,chi,dchi\n", 0) == 0);
  const fs::path csv = dir / "p.csv";
  io::write_text_atomic(csv, text);
  io::write_text_atomic(io::sidecar_path(csv), io::field_metadata_json(to_field(p), gas));
  const io::LoadedField back = io::read_field(csv);
  CHECK(back.field.grid().dim == 1);
  CHECK(sspf::testing::max_abs_diff(back.field, to_field(p)) == 0.0);
}

TEST_CASE("solver config files") {
  const SolverConfig c = io::parse_solver_config(
      "# tuned\nmax_newton_iters = 12\nresidual_tol=1e-9\n\nbacktrack=0.25 # halve twice\n"
      "c2_floor=1e-6\nL_guard=0.99\npicard_warmup_iters=0\nmin_step=0.001\n");
  CHECK(c.max_newton_iters == 12);
  CHECK(*c.residual_tol == 1e-9);
  CHECK(c.backtrack == 0.25);
  CHECK(*c.c2_floor == 1e-6);
  CHECK(c.L_guard == 0.99);
  CHECK(c.picard_warmup_iters == 0);
  CHECK(c.min_step == 0.001);

  const SolverConfig again = io::parse_solver_config(io::solver_config_text(c));
  CHECK(io::solver_config_text(again) == io::solver_config_text(c));
  CHECK_FALSE(io::parse_solver_config("").residual_tol.has_value());

  CHECK_THROWS_AS(io::parse_solver_config("tolerance=1"), FormatError);
  CHECK_THROWS_AS(io::parse_solver_config("max_newton_iters"), FormatError);
  CHECK_THROWS_AS(io::parse_solver_config("max_newton_iters=2.5"), FormatError);
  CHECK_THROWS_AS(io::parse_solver_config("backtrack=2"), FormatError);
  CHECK_THROWS_AS(io::parse_solver_config("backtrack=fast"), FormatError);
}

TEST_CASE("report JSON") {
  const sspf::testing::SolvedCase s = sspf::testing::solve_quiescent_case(17, 0.7);
  const auto rep = nlohmann::json::parse(io::solve_report_json(s.result.report));
  CHECK(rep["converged"] == true);
  CHECK(rep["residual_history"].size() == s.result.report.residual_history.size());

  const GasModel gas = sspf::testing::quiescent_gas();
  const EllipticityReport e = verify_max_principle(
      s.result.solution, gas, make_barrier(s.result.solution.grid(), 1.0, 0.05), 0.05);
  const auto ej = nlohmann::json::parse(io::ellipticity_report_json(e));
  CHECK(ej["verdict"] == std::string(to_string(e.verdict)));
  CHECK(ej.contains("residual"));
  CHECK(ej.contains("tolerance"));
  CHECK(io::ellipticity_report_json(e) == io::ellipticity_report_json(e));
  CHECK(io::version() == SSPF_TEST_VERSION);
}
