#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "onsager/pipeline.hpp"

using namespace onsager;
namespace fs = std::filesystem;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("onsager_test_" + name);
  fs::remove_all(p);
  return p;
}

StepConfig small_run(const fs::path& out) {
  StepConfig c = parse_config(R"({"grid": {"n": 32}, "ladder": {"mode": "desk", "indices": [2, 4]},
                                   "times": {"samples": 3}, "output": {"dir": ")" +
                              out.string() + R"("}})");
  return c;
}

std::map<std::string, double> max_by_quantity(const std::vector<DiagRow>& rows) {
  std::map<std::string, double> m;
  for (const auto& r : rows) m[r.quantity] = std::max(m.count(r.quantity) ? m[r.quantity] : -1e300, r.measured);
  return m;
}

}  // namespace

TEST_CASE("config parsing") {
  StepConfig c = parse_config(R"({"grid": {"n": 64}, "ladder.mode": "desk", "ladder": {"indices": [2, 10]},
                                   "profile": {"kind": "cosine", "c0": 1.0, "c1": 0.25},
                                   "perturb": {"N": 4}, "steps": 2})");
  CHECK(c.n == 64);
  CHECK(c.indices == std::vector<int>{2, 10});
  CHECK(c.profile_kind == ProfileKind::cosine);
  CHECK(c.profile_c1 == 0.25);
  CHECK(c.N_override == 4);
  CHECK(c.steps == 2);

  CHECK(config_error(R"({"ladder": {"mode": "desk"}})").find("grid.n: ") != std::string::npos);
  CHECK(config_error(R"({"grid": {"n": 48}})").find("grid.n: ") != std::string::npos);
  CHECK(config_error(R"({"grid": {"n": 64}, "ladder": {"mode": "fast"}})").find("ladder.mode: ") != std::string::npos);
  CHECK(config_error(R"({"grid": {"n": 64}, "ladder": {"a": "ten"}})").find("ladder.a: ") != std::string::npos);
  CHECK(config_error(R"({"grid": {"n": 64}, "beta": 0.5})").find("beta: ") != std::string::npos);
  CHECK(config_error(R"({"grid": {"n": 64}, "start": {"kind": "noise"}})").find("start.kind: ") != std::string::npos);
  CHECK(config_error(R"({"grid": {"n": 64}, "profile": {"kind": "wiggly"}})") != "");
  CHECK(config_error("{not json").find("config: ") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("run: zero start, report and determinism") {
  fs::path a = scratch("run_a"), b = scratch("run_b");
  StepResult r = run(small_run(a));
  REQUIRE(r.samples.size() == 5);  // two periods, three samples per period
  auto m = max_by_quantity(r.rows);
  // zero start: nothing to glue, nothing to transport
  CHECK(m["q0.glued_R_sup"] == 0.0);
  CHECK(m["q0.nash"] == 0.0);
  CHECK(m["q0.energy_cross"] == 0.0);
  CHECK(m["q0.div_w"] < 1e-12);
  CHECK(m["q0.er_residual_rel"] < 1e-3);
  CHECK(m["q0.absorbed_trace"] < 1e-10);
  for (const auto& s : r.samples) CHECK(s.gap_before == doctest::Approx(r.profile(s.t)).epsilon(1e-14));

  // report reads back exactly what was written
  auto rows = report(a.string());
  REQUIRE(rows.size() == r.rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].quantity == r.rows[k].quantity);
    CHECK(rows[k].t == r.rows[k].t);
    CHECK(rows[k].measured == r.rows[k].measured);
    CHECK(rows[k].ratio == r.rows[k].ratio);
  }
  CHECK(format_report(rows).find("q0.rho_q") != std::string::npos);
  CHECK(fs::exists(a / "manifest.json"));

  // same config, same bits
  run(small_run(b));
  CHECK(slurp(a / "diagnostics.csv") == slurp(b / "diagnostics.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("run: an under-resolved ladder stops with a warning") {
  fs::path a = scratch("run_steps");
  StepConfig c = small_run(a);
  c.steps = 2;
  c.samples_per_tau = 2;
  StepResult r = run(c);
  REQUIRE_FALSE(r.warnings.empty());
  CHECK(r.warnings.back().find("ladder stopped at q = 1") != std::string::npos);
  for (const auto& row : r.rows) CHECK(row.quantity.rfind("q0.", 0) == 0);
  fs::remove_all(a);
}

TEST_CASE("csv round trip") {
  fs::path d = scratch("csv");
  fs::create_directories(d);
  std::vector<DiagRow> rows{{0.1, "a", 1.0 / 3.0, 2.0, 1.0 / 6.0}, {0.2, "b", -1e-300, 0.0, 0.0}, {0.3, "c", 12345.678, 1e10, 1.2345678e-6}};
  write_csv((d / "x.csv").string(), rows);
  auto back = read_csv((d / "x.csv").string());
  REQUIRE(back.size() == rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(back[k].t == rows[k].t);
    CHECK(back[k].quantity == rows[k].quantity);
    CHECK(back[k].measured == rows[k].measured);
    CHECK(back[k].paper_bound == rows[k].paper_bound);
    CHECK(back[k].ratio == rows[k].ratio);
  }
  fs::remove_all(d);
}

TEST_CASE("vtk export") {
  fs::path d = scratch("vtk");
  StepConfig c = small_run(d);
  std::string path = export_vtk(c, 0.0, "w", d.string());
  std::ifstream in(path);
  std::vector<std::string> head(9);
  for (auto& l : head) std::getline(in, l);
  CHECK(head[0] == "# vtk DataFile Version 3.0");
  CHECK(head[2] == "ASCII");
  CHECK(head[3] == "DATASET STRUCTURED_POINTS");
  CHECK(head[4] == "DIMENSIONS 32 32 32");
  CHECK(head[7] == "POINT_DATA 32768");
  CHECK(head[8] == "VECTORS w double");
  std::size_t lines = 0;
  for (std::string l; std::getline(in, l);) {
    std::istringstream ls(l);
    double x, y, z;
    CHECK(bool(ls >> x >> y >> z));
    ++lines;
  }
  CHECK(lines == 32768);

  std::string pr = export_vtk(c, 0.0, "R", d.string());
  std::ifstream r(pr);
  std::string l;
  for (int k = 0; k < 9; ++k) std::getline(r, l);
  CHECK(l == "SCALARS R_frobenius double 1");
  CHECK_THROWS_AS(export_vtk(c, 0.0, "q", d.string()), ConfigError);
  fs::remove_all(d);
}
