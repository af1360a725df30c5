#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "onsager/errors.hpp"
#include "onsager/mikado.hpp"
#include "onsager/pipeline.hpp"
#include "onsager/schedule.hpp"

using namespace onsager;
namespace fs = std::filesystem;

namespace {

void print_audit(const AuditReport& r, bool csv) {
  if (csv) {
    std::printf("q,name,lhs,rhs,margin,pass\n");
    for (const auto& l : r.lines)
      std::printf("%d,%s,%.17g,%.17g,%.17g,%d\n", l.q, l.name.c_str(), l.lhs, l.rhs, l.margin, int(l.pass));
    return;
  }
  std::printf("%-4s %-28s %14s %14s %14s  %s\n", "q", "inequality", "lhs", "rhs", "margin", "");
  for (const auto& l : r.lines)
    std::printf("%-4d %-28s %14.6g %14.6g %14.6g  %s\n", l.q, l.name.c_str(), l.lhs, l.rhs, l.margin,
                l.pass ? "ok" : "FAIL");
  std::printf("admissible: %s\n", r.admissible ? "yes" : "no");
}

Sym6 parse_R(const std::string& s) {
  Sym6 R{};
  std::stringstream ss(s);
  std::string tok;
  int k = 0;
  while (std::getline(ss, tok, ',')) {
    if (k >= 6) throw ConfigError("--R: expected six comma separated entries xx,xy,xz,yy,yz,zz");
    R[k++] = std::stod(tok);
  }
  if (k != 6) throw ConfigError("--R: expected six comma separated entries xx,xy,xz,yy,yz,zz");
  return R;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex integration step for the Euler-Reynolds system on the periodic box"};
  app.require_subcommand(1);

  // audit
  auto* audit_cmd = app.add_subcommand("audit", "evaluate the parameter inequalities");
  ScheduleParams sp;
  int qmax = 3;
  bool scan = false, limit = false, csv = false;
  audit_cmd->add_option("--beta", sp.beta, "Hoelder exponent target");
  audit_cmd->add_option("--b", sp.b, "frequency growth exponent");
  audit_cmd->add_option("--alpha", sp.alpha, "mollification exponent");
  audit_cmd->add_option("--a", sp.a, "frequency base");
  audit_cmd->add_option("--qmax", qmax, "last stage to audit");
  audit_cmd->add_flag("--limit", limit, "exponent form in the large-a limit");
  audit_cmd->add_flag("--scan-beta", scan, "feasibility frontier over beta (CSV)");
  audit_cmd->add_flag("--csv", csv, "CSV instead of a table");

  // mikado
  auto* check_cmd = app.add_subcommand("mikado-check", "verify the Mikado family");
  double radius = 0.06;
  int nquad = 128, positivity = 100000, tests = 50;
  check_cmd->add_option("--radius", radius, "tube radius");
  check_cmd->add_option("--nquad", nquad, "quadrature grid");
  check_cmd->add_option("--samples", positivity, "positivity samples on B_1/2(Id)");
  check_cmd->add_option("--tests", tests, "random R for the moment check");

  auto* mexp_cmd = app.add_subcommand("mikado-export", "write W(R, .) on a grid as VTK");
  std::string R_text = "1,0,0,1,0,1", mexp_dir;
  int mexp_n = 64;
  mexp_cmd->add_option("--R", R_text, "xx,xy,xz,yy,yz,zz");
  mexp_cmd->add_option("--n", mexp_n, "grid size");
  mexp_cmd->add_option("--vtk", mexp_dir, "output directory")->required();

  // pipeline
  std::string config;
  auto* step_cmd = app.add_subcommand("step", "one step from the configured start");
  step_cmd->add_option("--config", config, "JSON config")->required()->check(CLI::ExistingFile);
  auto* run_cmd = app.add_subcommand("run", "the configured number of steps");
  run_cmd->add_option("--config", config, "JSON config")->required()->check(CLI::ExistingFile);

  std::string report_dir;
  auto* report_cmd = app.add_subcommand("report", "aggregate a diagnostics directory");
  report_cmd->add_option("dir", report_dir, "output directory of a run")->required()->check(CLI::ExistingDirectory);

  std::string vtk_dir, field = "w";
  double t = 0.0;
  auto* export_cmd = app.add_subcommand("export", "write a field of the perturbed state as VTK");
  export_cmd->add_option("--vtk", vtk_dir, "output directory")->required();
  export_cmd->add_option("--config", config, "JSON config")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--t", t, "time");
  export_cmd->add_option("--field", field, "v, w, p or R")->check(CLI::IsMember({"v", "w", "p", "R"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*audit_cmd) {
      if (scan) {
        std::vector<double> betas;
        for (int k = 1; k <= 100; ++k) betas.push_back(k / 303.0);
        std::printf("beta,found,b,alpha,b_upper\n");
        for (const auto& f : scan_beta(betas))
          std::printf("%.6f,%d,%.6f,%.6g,%.6f\n", f.beta, int(f.found), f.b, f.alpha, f.b_upper);
        return 0;
      }
      sp.validate();
      print_audit(limit ? audit_limit(sp.beta, sp.b, sp.alpha) : audit(sp, qmax), csv);
      return 0;
    }
    if (*check_cmd) {
      MikadoFamily fam = build_family(radius);
      VerifyReport r = verify_family(fam, nquad, random_ball(tests, 0.5, 7), positivity);
      std::printf("quantity,value\n");
      std::printf("n_quad,%d\n", r.n_quad);
      std::printf("second_moment_error,%.6e\n", r.max_second_moment_error);
      std::printf("first_moment,%.6e\n", r.max_first_moment);
      std::printf("div_W_rel,%.6e\n", r.div_W_rel);
      std::printf("div_WW_rel,%.6e\n", r.div_WW_rel);
      std::printf("decay_slope,%.4f\n", r.decay_slope);
      std::printf("Ck_k_rel,%.6e\n", r.Ck_k_rel);
      std::printf("positivity_min,%.6f\n", r.positivity_min);
      std::printf("positivity_samples,%d\n", r.positivity_samples);
      std::printf("min_separation,%.6f\n", fam.min_separation);
      return 0;
    }
    if (*mexp_cmd) {
      MikadoFamily fam = build_family();
      fs::create_directories(mexp_dir);
      std::string path = (fs::path(mexp_dir) / "mikado_W.vtk").string();
      write_vtk(path, sample_W(fam, parse_R(R_text), mexp_n), "W");
      std::printf("%s\n", path.c_str());
      return 0;
    }
    if (*step_cmd || *run_cmd) {
      StepConfig cfg = load_config(config);
      if (*step_cmd) cfg.steps = 1;
      StepResult r = run(cfg);
      for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
      std::printf("T=%.6g N=%.6g c0=%.6g M=%.6g\n", r.T, r.N, r.c0, r.M.M);
      std::printf("%s", format_report(r.rows).c_str());
      return 0;
    }
    if (*report_cmd) {
      std::printf("%s", format_report(report(report_dir)).c_str());
      return 0;
    }
    if (*export_cmd) {
      std::printf("%s\n", export_vtk(load_config(config), t, field, vtk_dir).c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
