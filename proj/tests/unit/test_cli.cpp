#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cases.hpp"
#include "cli.hpp"
#include "json.hpp"
#include "sspf/io.hpp"

namespace fs = std::filesystem;
using sspf::cli::run;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run sspf_run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class Scratch {
 public:
  explicit Scratch(const char* name) : dir_(fs::temp_directory_path() / (std::string("sspf_cli_") + name)) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  std::string operator()(const std::string& file) const { return (dir_ / file).string(); }

 private:
  fs::path dir_;
};

nlohmann::json load(const std::string& path) { return nlohmann::json::parse(sspf::io::read_text(path)); }

}  // namespace

TEST_CASE("exact uniform writes the field, its sidecar and a manifest") {
  const Scratch at("uniform");
  const Run r = sspf_run({"exact", "uniform", "--gamma", "2", "--aprime", "-1", "--grid", "65x65",
                          "--extent", "-0.5:0.5,-0.5:0.5", "--out", at("u.csv")});
  CHECK(r.code == 0);
  CHECK(fs::exists(at("u.csv")));
  CHECK(fs::exists(at("u.json")));
  REQUIRE(fs::exists(at("u.manifest.json")));
  const nlohmann::json m = load(at("u.manifest.json"));
  CHECK(m["tool"] == "sspf");
  CHECK(m["version"] == std::string(sspf::io::version()));
  CHECK(m["gas"]["gamma"] == 2.0);
  CHECK(m["grid"]["dims"] == nlohmann::json::array({65, 65}));
  CHECK(m.contains("config"));
  CHECK(m["warnings"].empty());

  const Run neg = sspf_run({"exact", "uniform", "--gamma", "-0.5", "--aprime", "1", "--out", at("n.csv")});
  CHECK(neg.code == 0);
  CHECK(neg.err.find("warning") != std::string::npos);
  CHECK(load(at("n.manifest.json"))["warnings"].size() == 1);
  const sspf::io::LoadedField f = sspf::io::read_field(at("u.csv"));
  CHECK(f.field.grid().size() == 65u * 65u);
}

TEST_CASE("solve then verify a solved elliptic field") {
  const Scratch at("pipeline");
  // Thin strip up to |xi| = 0.995 so that interior nodes exceed L^2 = 1 - delta.
  REQUIRE(sspf_run({"exact", "uniform", "--gamma", "2", "--aprime", "-1", "--grid", "33x9",
                    "--extent", "0.5:0.995,-0.05:0.05", "--out", at("b.csv")})
              .code == 0);
  const Run s = sspf_run({"solve", "--boundary", at("b.csv"), "--out", at("s.csv")});
  CHECK(s.code == 0);
  CHECK(load(at("s.report.json"))["converged"] == true);
  CHECK(fs::exists(at("s.manifest.json")));
  CHECK(load(at("s.manifest.json"))["config"].is_object());

  const Run v = sspf_run({"verify", "--field", at("s.csv"), "--delta", "0.05", "--chat", "auto",
                          "--out", at("v.json")});
  CHECK(v.code == 0);
  CHECK(load(at("v.json"))["verdict"] == "MaxOnBoundary");
  CHECK(fs::exists(at("v.manifest.json")));

  SUBCASE("byte-identical reruns") {
    REQUIRE(sspf_run({"solve", "--boundary", at("b.csv"), "--out", at("s2.csv")}).code == 0);
    REQUIRE(sspf_run({"verify", "--field", at("s2.csv"), "--delta", "0.05", "--chat", "auto",
                      "--out", at("v2.json")})
                .code == 0);
    CHECK(sspf::io::read_text(at("s.csv")) == sspf::io::read_text(at("s2.csv")));
    CHECK(sspf::io::read_text(at("s.json")) == sspf::io::read_text(at("s2.json")));
    CHECK(sspf::io::read_text(at("s.report.json")) == sspf::io::read_text(at("s2.report.json")));
    CHECK(sspf::io::read_text(at("v.json")) == sspf::io::read_text(at("v2.json")));
  }
  SUBCASE("analysis subcommands") {
    CHECK(sspf_run({"classify", "--field", at("s.csv"), "--out", at("c.csv")}).code == 0);
    CHECK(sspf_run({"residual", "--field", at("s.csv"), "--form", "psi", "--out", at("r.csv")}).code == 0);
    CHECK(sspf_run({"transform", "--field", at("s.csv"), "--rotate", "1", "--out", at("t.csv")}).code == 0);
    CHECK(sspf_run({"transform", "--field", at("s.csv"), "--scale", "2", "--out", at("t2.csv")}).code == 0);
    CHECK(sspf::io::read_field(at("t2.csv")).gas.c0 == 2.0);
    CHECK(sspf_run({"export", "--field", at("s.csv"), "--as", "psi", "--out", at("p.csv")}).code == 0);
    CHECK(sspf::io::read_field(at("p.csv")).field.variable() == sspf::Variable::Psi);
    CHECK(sspf_run({"export", "--field", at("s.csv"), "--as", "states", "--out", at("st.csv")}).code == 0);
    const Run sw = sspf_run({"sweep-delta", "--field", at("s.csv"), "--out", at("sw.json")});
    CHECK(sw.code == 0);
    CHECK(load(at("sw.json"))["entries"].size() == 4);
    for (const char* f : {"c", "r", "t", "t2", "p", "st", "sw"}) {
      CHECK(fs::exists(at(std::string(f) + ".manifest.json")));
    }
  }
}

TEST_CASE("wall fields: reflect, restrict and wall-check") {
  const Scratch at("wall");
  REQUIRE(sspf_run({"exact", "uniform", "--gamma", "2", "--aprime", "-1", "--v", "0,0.2", "--grid",
                    "9x17", "--extent", "0:0.4,-0.4:0.4", "--walls", "left", "--out", at("w.csv")})
              .code == 0);
  CHECK(sspf_run({"wall-check", "--field", at("w.csv"), "--edge", "left", "--strict", "--out",
                  at("wc.json")})
            .code == 0);
  CHECK(load(at("wc.json"))["chi_n"].get<double>() <= 1e-9);
  CHECK(sspf_run({"reflect", "--field", at("w.csv"), "--edge", "left", "--out", at("full.csv")}).code == 0);
  CHECK(sspf::io::read_field(at("full.csv")).field.grid().dims[0] == 17);
  CHECK(sspf_run({"reflect", "--field", at("full.csv"), "--edge", "left", "--restrict", "--out",
                  at("half.csv")})
            .code == 0);
  CHECK(sspf::io::read_text(at("half.csv")) == sspf::io::read_text(at("w.csv")));
}

TEST_CASE("exact oned and radial") {
  const Scratch at("exact");
  const Run a = sspf_run({"exact", "oned", "--branch", "affine", "--dchi0", "0.2", "--A", "2",
                          "--interval", "-2:2", "--out", at("a.csv")});
  CHECK(a.code == 0);
  CHECK(a.out.find("truncated") != std::string::npos);
  CHECK(sspf_run({"classify", "--field", at("a.csv"), "--out", at("ac.csv")}).code == 0);
  const Run p = sspf_run({"exact", "radial", "--A", "2", "--dchi0", "0.3", "--r1", "2", "--out",
                          at("r.csv")});
  CHECK(p.code == 0);
  CHECK(p.out.find("sonic") != std::string::npos);
  CHECK(sspf::io::read_text(at("r.csv")).rfind("r,chi,dchi\n", 0) == 0);
  CHECK(sspf_run({"exact", "radial", "--A", "2", "--dchi0", "0.3", "--grid", "9x9", "--extent",
                  "1.05:1.35,-0.15:0.15", "--out", at("rf.csv")})
            .code == 0);
  CHECK(sspf_run({"residual", "--field", at("rf.csv"), "--out", at("rr.csv")}).code == 0);
}

TEST_CASE("exit codes") {
  const Scratch at("codes");
  const Run bogus = sspf_run({"solve", "--bogus"});
  CHECK(bogus.code == 2);
  CHECK(bogus.err.find("Usage") != std::string::npos);
  CHECK(sspf_run({}).code == 2);
  CHECK(sspf_run({"frobnicate"}).code == 2);
  CHECK(sspf_run({"verify", "--field", at("missing.csv"), "--out", at("x.json")}).code == 2);
  CHECK(sspf_run({"exact", "oned", "--branch", "sideways", "--out", at("o.csv")}).code == 2);

  // c^2 <= 0 for the requested state.
  CHECK(sspf_run({"exact", "uniform", "--gamma", "2", "--aprime", "1", "--out", at("vac.csv")}).code == 1);

  // L > 1 at the corners is a failed precondition.
  REQUIRE(sspf_run({"exact", "uniform", "--gamma", "2", "--aprime", "-1", "--grid", "17x17",
                    "--extent", "-0.9:0.9,-0.9:0.9", "--out", at("wide.csv")})
              .code == 0);
  CHECK(sspf_run({"verify", "--field", at("wide.csv"), "--out", at("wide.json")}).code == 1);

  // A non-solution flagged under --strict.
  sspf::io::write_field(at("nc.csv"), sspf::testing::negative_control(129), sspf::testing::gas_with(1.0));
  CHECK(sspf_run({"verify", "--field", at("nc.csv"), "--delta", "0.1", "--chat", "1", "--out",
                  at("nc_report.json")})
            .code == 0);
  CHECK(load(at("nc_report.json"))["verdict"] == "ViolationCandidate");
  CHECK(sspf_run({"verify", "--field", at("nc.csv"), "--delta", "0.1", "--chat", "1", "--strict",
                  "--out", at("nc_strict.json")})
            .code == 1);
  CHECK(sspf_run({"--version"}).code == 0);
}
