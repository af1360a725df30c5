#include "onsager/pipeline.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "onsager/operators.hpp"

namespace onsager {

namespace fs = std::filesystem;
using json = nlohmann::json;

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::input: return "input";
    case Stage::mollified: return "mollified";
    case Stage::glued: return "glued";
    case Stage::perturbed: return "perturbed";
  }
  return "?";
}

// ---------------------------------------------------------------- providers

ERProvider zero_state(int n) {
  ERProvider p;
  p.n = n;
  p.zero = true;
  p.at = [n](double) {
    ERSnapshot s;
    s.v = VectorField(n);
    s.p = ScalarField(n);
    s.R = SymTensorField(n);
    s.R.traceless = true;
    return s;
  };
  p.dtv = [n](double) { return VectorField(n); };
  return p;
}

ERProvider er_from_velocity(int n, std::function<VectorField(double)> v, std::function<VectorField(double)> dtv) {
  ERProvider p;
  p.n = n;
  p.dtv = dtv;
  p.at = [v, dtv](double t) {
    ERSnapshot s;
    s.v = v(t);
    VectorField f = dtv(t);
    axpy(1.0, divergence(outer(s.v, s.v)), f);
    SymTensorField raw = inverse_divergence(f);
    ScalarField tr = trace(raw);
    s.R = traceless_part(raw);
    s.R.traceless = true;
    s.p = scaled(-1.0 / 3.0, tr);
    return s;
  };
  return p;
}

ERProvider mollified_provider(const ERProvider& in, double ell) {
  if (in.zero) {
    ERProvider z = zero_state(in.n);
    z.stage = Stage::mollified;
    return z;
  }
  ERProvider p;
  p.n = in.n;
  p.stage = Stage::mollified;
  p.at = [in, ell](double t) {
    ERSnapshot s = in.at(t);
    MollifiedState m = mollified_stress(s.v, s.R, ell);
    ERSnapshot out;
    out.v = std::move(m.v);
    out.p = std::move(m.p);
    out.R = std::move(m.R);
    out.R.traceless = true;
    return out;
  };
  p.dtv = [in, ell](double t) { return mollify(in.dtv(t), ell); };
  return p;
}

// ---------------------------------------------------------------- config

namespace {

const json* find_key(const json& j, const std::string& dotted) {
  if (j.contains(dotted)) return &j.at(dotted);
  const json* cur = &j;
  std::stringstream ss(dotted);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (!cur->is_object() || !cur->contains(part)) return nullptr;
    cur = &cur->at(part);
  }
  return cur;
}

template <class T>
void read_key(const json& j, const std::string& key, T& out, bool required = false) {
  const json* v = find_key(j, key);
  if (!v) {
    if (required) throw ConfigError(key + ": missing");
    return;
  }
  try {
    out = v->get<T>();
  } catch (const std::exception& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

}  // namespace

StepConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  StepConfig c;
  read_key(j, "grid.n", c.n, true);
  read_key(j, "ladder.mode", c.ladder_mode);
  read_key(j, "ladder.indices", c.indices);
  read_key(j, "ladder.a", c.a);
  read_key(j, "beta", c.beta);
  read_key(j, "b", c.b);
  read_key(j, "alpha", c.alpha);
  std::string kind = "constant";
  read_key(j, "profile.kind", kind);
  c.profile_kind = profile_kind(kind);
  read_key(j, "profile.c0", c.profile_c0);
  read_key(j, "profile.c1", c.profile_c1);
  read_key(j, "times.samples", c.samples_per_tau);
  read_key(j, "times.T", c.T);
  read_key(j, "output.dir", c.output_dir);
  read_key(j, "perturb.N", c.N_override);
  read_key(j, "perturb.bandwidth", c.bandwidth);
  read_key(j, "steps", c.steps);
  read_key(j, "start.kind", c.start);
  read_key(j, "start.amplitude", c.start_amplitude);
  try {
    GridSpec g(c.n);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("grid.n: ") + e.what());
  }
  if (c.ladder_mode != "desk" && c.ladder_mode != "paper") throw ConfigError("ladder.mode: expected desk or paper");
  if (c.samples_per_tau < 2) throw ConfigError("times.samples: need at least 2");
  if (!(c.alpha > 0 && c.alpha < 1)) throw ConfigError("alpha: must lie in (0, 1)");
  if (!(c.beta > 0 && c.beta < 1.0 / 3.0)) throw ConfigError("beta: must lie in (0, 1/3)");
  if (c.start != "zero" && c.start != "abc") throw ConfigError("start.kind: expected zero or abc");
  if (c.steps < 1) throw ConfigError("steps: need at least 1");
  return c;
}

StepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

DerivedScales step_scales(const StepConfig& cfg, int q) {
  if (cfg.ladder_mode == "paper") {
    ScheduleParams p;
    p.a = cfg.a;
    p.b = cfg.b;
    p.beta = cfg.beta;
    p.alpha = cfg.alpha;
    DerivedScales s = derive(p, q);
    if (!resolvable(s.N_q1(), cfg.n, cfg.bandwidth))
      throw GridUnderResolved("N_{q+1} = " + std::to_string(s.N_q1()) + " not resolvable at n = " + std::to_string(cfg.n));
    return s;
  }
  DeskLadder L = desk_ladder(cfg.indices, cfg.beta, cfg.alpha, cfg.n, cfg.bandwidth);
  if (q < 0 || q >= int(L.scales.size()))
    throw GridUnderResolved("ladder has no resolvable step q = " + std::to_string(q));
  return L.scales[q];
}

// ---------------------------------------------------------------- step

struct StepContext {
  StepConfig cfg;
  DerivedScales s;
  EnergyProfile e;
  double T = 0;
  double N = 0;
  double dt = 0;
  ERProvider input, mollified;
  TimePartition part;
  std::unique_ptr<GluedFlow> glued;
  EtaCutoffs eta;
  MikadoFamily fam;
  MConstant M;
};

Step::Step(const StepConfig& cfg, const ERProvider& input, const EnergyProfile& profile)
    : ctx_(std::make_shared<StepContext>()) {
  StepContext& c = *ctx_;
  c.cfg = cfg;
  c.s = step_scales(cfg, cfg.q);
  c.e = profile;
  c.T = cfg.T > 0 ? cfg.T : 2 * c.s.tau_q;
  c.N = cfg.N_override > 0 ? cfg.N_override : c.s.N_q1();
  if (!resolvable(c.N, cfg.n, cfg.bandwidth))
    throw GridUnderResolved("N = " + std::to_string(c.N) + " not resolvable at n = " + std::to_string(cfg.n));
  c.dt = c.s.tau_q / 1024;
  c.input = input;
  if (!input.zero) mollifier_symbol(cfg.n, c.s.ell);  // KernelUnresolved if ell is not resolved
  c.mollified = mollified_provider(input, c.s.ell);
  c.part = build_chi(c.s.tau_q, c.T);
  GluingOptions go;
  go.euler.alpha = cfg.alpha;
  ERProvider moll = c.mollified;
  c.glued = std::make_unique<GluedFlow>(c.part, cfg.n, [moll](double t) { return moll.at(t).v; }, go);
  c.eta = build_eta(c.part, std::min(cfg.n, 64));
  c.fam = build_family();
  c.M = constant_M(c.fam, c.eta.c0);
  c.fam.M_bar = c.M.M_bar;
  c.fam.M = c.M.M;
}

Step::~Step() = default;
const DerivedScales& Step::scales() const { return ctx_->s; }
const TimePartition& Step::partition() const { return ctx_->part; }
const EtaCutoffs& Step::eta() const { return ctx_->eta; }
const GluedFlow& Step::glued() const { return *ctx_->glued; }
const MikadoFamily& Step::family() const { return ctx_->fam; }
double Step::N() const { return ctx_->N; }
double Step::T() const { return ctx_->T; }
double Step::dt_fd() const { return ctx_->dt; }

namespace {

DecompOptions decomp_options(const StepContext& c) {
  DecompOptions o;
  o.positivity_radius = c.fam.positivity_radius;
  o.desk = c.cfg.ladder_mode == "desk";
  return o;
}

std::vector<FlowMap> shifted(const std::vector<FlowMap>& flows, const VectorField& v, double dt, bool zero) {
  if (zero) {
    std::vector<FlowMap> out = flows;
    for (auto& f : out) f.t += dt;
    return out;
  }
  std::vector<FlowMap> out;
  for (const auto& f : flows) out.push_back(shift_flow(f, v, dt));
  return out;
}

}  // namespace

PerturbationResult Step::perturbation_at(double t, bool keep_parts) const {
  const StepContext& c = *ctx_;
  GluedSnapshot g = c.glued->at(t);
  auto flows = flows_at(*c.glued, c.eta, t);
  StressDecomp d = stress_decomposition(g, c.eta, flows, c.e, c.s, t, decomp_options(c));
  return build_perturbation(d, c.fam, c.N, keep_parts);
}

Step::Built Step::build(double t) const {
  const StepContext& c = *ctx_;
  const double dt = c.dt;
  const bool zero = c.glued->zero();
  Built b;
  b.glued = c.glued->at(t);
  auto flows = flows_at(*c.glued, c.eta, t);
  const DecompOptions opt = decomp_options(c);
  b.decomp = stress_decomposition(b.glued, c.eta, flows, c.e, c.s, t, opt);
  // snapshots at t -/+ dt are dropped as soon as their velocity and w are taken; this bounds memory at n = 256
  VectorField dtw;
  {
    VectorField vm;
    {
      GluedSnapshot gm = c.glued->at(t - dt);
      StressDecomp dm = stress_decomposition(gm, c.eta, shifted(flows, b.glued.v, -dt, zero), c.e, c.s, t - dt, opt);
      dtw = build_perturbation(dm, c.fam, c.N, false).w;
      vm = std::move(gm.v);
    }
    GluedSnapshot gp = c.glued->at(t + dt);
    StressDecomp dp = stress_decomposition(gp, c.eta, shifted(flows, b.glued.v, dt, zero), c.e, c.s, t + dt, opt);
    gp.p = ScalarField();
    gp.R = SymTensorField();
    VectorField w_p = build_perturbation(dp, c.fam, c.N, false).w;
    dp = StressDecomp();
    for (int a = 0; a < 3; ++a)
      for (std::size_t p = 0; p < w_p.size(); ++p) dtw.c[a][p] = (w_p.c[a][p] - dtw.c[a][p]) * (0.5 / dt);
    w_p = VectorField();
    b.dtvbar = scaled(0.5 / dt, sub(gp.v, vm));
  }
  b.w = build_perturbation(b.decomp, c.fam, c.N, c.cfg.materialize);
  NewStressOptions so;
  so.alpha = c.s.alpha;
  so.materialize = c.cfg.materialize;
  b.next = new_stress_from_dtw(b.glued, b.dtvbar, b.w, std::move(dtw), b.decomp, so);
  return b;
}

ERProvider Step::output() const {
  auto ctx = ctx_;
  ERProvider p;
  p.n = ctx->cfg.n;
  p.stage = Stage::perturbed;
  Step self = *this;
  p.at = [self](double t) {
    Built b = self.build(t);
    ERSnapshot s;
    s.v = std::move(b.next.v);
    s.p = std::move(b.next.p);
    s.R = std::move(b.next.R);
    return s;
  };
  p.dtv = [self](double t) { return self.build(t).next.dtv; };
  return p;
}

// ---------------------------------------------------------------- full step

namespace {

void row(StepResult& r, double t, const std::string& q, double measured, double bound) {
  DiagRow d;
  d.t = t;
  d.quantity = q;
  d.measured = measured;
  d.paper_bound = bound;
  d.ratio = bound != 0 ? measured / bound : 0.0;
  r.rows.push_back(d);
}

}  // namespace

StepResult full_step(const StepConfig& cfg, const ERProvider& input, const EnergyProfile& profile) {
  auto t0 = std::chrono::steady_clock::now();
  StepResult r;
  r.config = cfg;
  r.profile = profile;
  Step step(cfg, input, profile);
  const DerivedScales& s = step.scales();
  r.scales = s;
  r.T = step.T();
  r.N = step.N();
  r.c0 = step.eta().c0;
  r.M = constant_M(step.family(), r.c0);
  const double lam1 = 2 * std::numbers::pi * r.N;
  const double sqd1 = std::sqrt(s.delta_q1);
  row(r, 0, "c0", r.c0, 0);
  row(r, 0, "M", r.M.M, 0);
  const int per = cfg.samples_per_tau - 1;
  const int count = int(std::lround(r.T / (s.tau_q / per)));
  for (int k = 0; k <= count; ++k) r.times.push_back(std::min(r.T, k * s.tau_q / per));
  for (double t : r.times) {
    Step::Built b = step.build(t);
    SampleRecord rec;
    rec.t = t;
    // glued stage
    ResidualReport gr = er_residual(b.glued.v, b.glued.p, b.glued.R, b.dtvbar);
    row(r, t, "glued_residual_rel", gr.div_R > 0 ? gr.relative() : gr.projected, 1e-3);
    row(r, t, "glued_R_sup", max_norm(b.glued.R), s.delta_q1 * std::pow(s.ell, s.alpha));
    row(r, t, "rho_q", b.decomp.rho_q, s.delta_q1);
    row(r, t, "rtilde_distance", b.decomp.max_distance, 0.5);
    for (const auto& wmsg : b.decomp.warnings) r.warnings.push_back(wmsg);
    rec.div_w = b.w.div_rel;
    rec.w_sup = b.w.sup;
    rec.w_c1 = b.w.c1;
    rec.R_sup = b.next.R_sup;
    rec.absorbed_trace = b.next.absorbed_trace;
    row(r, t, "div_w", b.w.div_rel, 1e-10);
    row(r, t, "w_est", b.w.sup + b.w.c1 / lam1, r.M.M / 2 * sqd1);
    row(r, t, "nash", b.next.nash, s.delta_q2 * std::pow(lam1, -3 * s.alpha));
    row(r, t, "transport", b.next.transport, s.delta_q2 * std::pow(lam1, -3 * s.alpha));
    row(r, t, "oscillation", b.next.oscillation, s.delta_q2 * std::pow(lam1, -3 * s.alpha));
    row(r, t, "R_next_sup", b.next.R_sup, s.delta_q2 * std::pow(lam1, -3 * s.alpha));
    row(r, t, "absorbed_trace", b.next.absorbed_trace, b.next.R_sup);
    rec.gap_before = profile(t) - energy_integral(b.glued.v);
    if (cfg.materialize) {
      ResidualReport nr = er_residual(b.next.v, b.next.p, b.next.R, b.next.dtv);
      rec.residual_rel = nr.div_R > 0 ? nr.relative() : nr.projected;
      rec.residual_abs = nr.projected;
      row(r, t, "er_residual_rel", rec.residual_rel, 1e-3);
      row(r, t, "v_next_c1", b.w.c1, r.M.M * sqd1 * lam1);
      row(r, t, "v_next_sup", max_norm(b.next.v), 1 - sqd1);
      row(r, t, "v_diff", b.w.sup + b.w.c1 / lam1, r.M.M * sqd1);
      rec.energy = energy_check(b.next.v, b.glued.v, b.w, b.decomp, s);
      rec.gap = rec.energy.gap;
      row(r, t, "energy_gap", rec.gap, s.delta_q2);
      row(r, t, "energy_gap_lower", s.delta_q2 * std::pow(lam1, -s.alpha), rec.gap);
      row(r, t, "energy_gap_target", std::abs(rec.gap - rec.energy.target), rec.energy.bound);
      row(r, t, "energy_cross", rec.energy.cross, rec.energy.bound);
      row(r, t, "energy_corrector", rec.energy.corrector, rec.energy.bound);
      row(r, t, "energy_oscillatory", rec.energy.oscillatory, rec.energy.bound);
    }
    r.samples.push_back(rec);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

namespace {

ERProvider start_state(const StepConfig& cfg) {
  if (cfg.start == "zero" || cfg.start_amplitude == 0.0) return zero_state(cfg.n);
  // scaled ABC flow: an exact steady Euler solution, R = 0
  const int n = cfg.n;
  const double A = cfg.start_amplitude;
  ERProvider p;
  p.n = n;
  p.at = [n, A](double) {
    ERSnapshot s;
    s.v = abc_field(n, A, A, A);
    s.R = SymTensorField(n);
    s.R.traceless = true;
    s.p = pressure_solve(s.v, s.R);
    return s;
  };
  p.dtv = [n](double) { return VectorField(n); };
  return p;
}

void write_manifest(const std::string& dir, const StepResult& r, int q) {
  json m;
  m["q"] = q;
  m["n"] = r.config.n;
  m["ladder"] = {{"mode", r.config.ladder_mode}, {"indices", r.config.indices}};
  m["beta"] = r.config.beta;
  m["alpha"] = r.config.alpha;
  m["T"] = r.T;
  m["N"] = r.N;
  m["tau"] = r.scales.tau_q;
  m["ell"] = r.scales.ell;
  m["delta"] = {r.scales.delta_q, r.scales.delta_q1, r.scales.delta_q2};
  m["lambda"] = {r.scales.lambda_q, r.scales.lambda_q1, r.scales.lambda_q2};
  m["c0"] = r.c0;
  m["M"] = r.M.M;
  m["M_bar"] = r.M.M_bar;
  m["times"] = r.times;
  m["warnings"] = r.warnings;
  m["stage"] = "perturbed";
  std::ofstream(fs::path(dir) / "manifest.json") << m.dump(2) << "\n";
}

}  // namespace

StepResult run(const StepConfig& cfg) {
  ERProvider input = start_state(cfg);
  DerivedScales s0 = step_scales(cfg, 0);
  EnergyProfile e;
  e.kind = cfg.profile_kind;
  e.c0 = cfg.profile_c0;
  e.c1 = cfg.profile_c1;
  e.T = cfg.T > 0 ? cfg.T : 2 * s0.tau_q;
  EnergyProfile prof = normalize(e, s0).profile;
  StepResult last;
  std::vector<DiagRow> all;
  for (int q = cfg.q; q < cfg.q + cfg.steps; ++q) {
    StepConfig c = cfg;
    c.q = q;
    try {
      last = full_step(c, input, prof);
    } catch (const GridUnderResolved& err) {
      last.warnings.push_back(std::string("ladder stopped at q = ") + std::to_string(q) + ": " + err.what());
      break;
    }
    for (auto rr : last.rows) {
      rr.quantity = "q" + std::to_string(q) + "." + rr.quantity;
      all.push_back(rr);
    }
    if (!cfg.output_dir.empty()) {
      fs::create_directories(cfg.output_dir);
      write_manifest(cfg.output_dir, last, q);
    }
    if (q + 1 < cfg.q + cfg.steps) input = Step(c, input, prof).output();
  }
  if (!cfg.output_dir.empty()) {
    fs::create_directories(cfg.output_dir);
    write_csv((fs::path(cfg.output_dir) / "diagnostics.csv").string(), all);
  }
  last.rows = all;
  return last;
}

// ---------------------------------------------------------------- CSV and report

void write_csv(const std::string& path, const std::vector<DiagRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "t,quantity,measured,paper_bound,ratio\n";
  out << std::setprecision(17);
  for (const auto& r : rows) out << r.t << ',' << r.quantity << ',' << r.measured << ',' << r.paper_bound << ',' << r.ratio << '\n';
}

std::vector<DiagRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::string line;
  std::getline(in, line);
  std::vector<DiagRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f[5];
    for (auto& x : f) std::getline(ss, x, ',');
    DiagRow r;
    r.t = std::stod(f[0]);
    r.quantity = f[1];
    r.measured = std::stod(f[2]);
    r.paper_bound = std::stod(f[3]);
    r.ratio = std::stod(f[4]);
    rows.push_back(r);
  }
  return rows;
}

std::vector<DiagRow> report(const std::string& dir) {
  fs::path p = fs::path(dir) / "diagnostics.csv";
  return read_csv(p.string());
}

std::string format_report(const std::vector<DiagRow>& rows) {
  struct Agg {
    int count = 0;
    double max_measured = -1e300, max_ratio = -1e300;
  };
  std::map<std::string, Agg> agg;
  std::vector<std::string> order;
  for (const auto& r : rows) {
    if (!agg.count(r.quantity)) order.push_back(r.quantity);
    Agg& a = agg[r.quantity];
    ++a.count;
    a.max_measured = std::max(a.max_measured, r.measured);
    a.max_ratio = std::max(a.max_ratio, r.ratio);
  }
  std::ostringstream os;
  os << std::left << std::setw(28) << "quantity" << std::right << std::setw(8) << "rows" << std::setw(16) << "max measured"
     << std::setw(16) << "max ratio" << "\n";
  for (const auto& q : order) {
    const Agg& a = agg[q];
    os << std::left << std::setw(28) << q << std::right << std::setw(8) << a.count << std::setw(16)
       << std::setprecision(6) << a.max_measured << std::setw(16) << a.max_ratio << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------- VTK

namespace {
void vtk_header(std::ofstream& out, int n, const std::string& title) {
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << n << ' ' << n << ' ' << n << "\n";
  out << "ORIGIN 0 0 0\nSPACING " << 1.0 / n << ' ' << 1.0 / n << ' ' << 1.0 / n << "\n";
  out << "POINT_DATA " << std::size_t(n) * n * n << "\n";
  out << std::setprecision(9);
}
}  // namespace

void write_vtk(const std::string& path, const VectorField& v, const std::string& name) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  vtk_header(out, v.n, name);
  out << "VECTORS " << name << " double\n";
  for (std::size_t p = 0; p < v.size(); ++p) out << v.c[0][p] << ' ' << v.c[1][p] << ' ' << v.c[2][p] << '\n';
}

void write_vtk(const std::string& path, const ScalarField& f, const std::string& name) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  vtk_header(out, f.n, name);
  out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (double x : f.c[0]) out << x << '\n';
}

std::string export_vtk(const StepConfig& cfg, double t, const std::string& which, const std::string& dir) {
  DerivedScales s0 = step_scales(cfg, 0);
  EnergyProfile e;
  e.kind = cfg.profile_kind;
  e.c0 = cfg.profile_c0;
  e.c1 = cfg.profile_c1;
  e.T = cfg.T > 0 ? cfg.T : 2 * s0.tau_q;
  Step step(cfg, start_state(cfg), normalize(e, s0).profile);
  fs::create_directories(dir);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_t%.6f.vtk", which.c_str(), t);
  std::string path = (fs::path(dir) / buf).string();
  if (which == "w") {
    write_vtk(path, step.perturbation_at(t).w, "w");
  } else if (which == "v" || which == "p" || which == "R") {
    Step::Built b = step.build(t);
    if (which == "v") write_vtk(path, b.next.v, "v");
    if (which == "p") write_vtk(path, b.next.p, "p");
    if (which == "R") {
      ScalarField fr(cfg.n);
      for (std::size_t p = 0; p < fr.size(); ++p) {
        double s = 0;
        for (int c = 0; c < 6; ++c) s += ((c == 1 || c == 2 || c == 4) ? 2.0 : 1.0) * b.next.R.c[c][p] * b.next.R.c[c][p];
        fr.c[0][p] = std::sqrt(s);
      }
      write_vtk(path, fr, "R_frobenius");
    }
  } else {
    throw ConfigError("export: unknown field '" + which + "' (expected v, w, p or R)");
  }
  return path;
}

}  // namespace onsager
