#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "onsager/energy.hpp"
#include "onsager/gluing.hpp"
#include "onsager/mikado.hpp"
#include "onsager/perturbation.hpp"
#include "onsager/schedule.hpp"

namespace onsager {

enum class Stage { input, mollified, glued, perturbed };
const char* stage_name(Stage s);

// (v, p, R) as a function of time, plus d_t v
struct ERProvider {
  int n = 0;
  Stage stage = Stage::input;
  bool zero = false;
  std::function<ERSnapshot(double)> at;
  std::function<VectorField(double)> dtv;
};

ERProvider zero_state(int n);
// R = traceless part of R(d_t v + div(v (x) v)), p = -tr/3, so that (v, p, R) solves Euler-Reynolds
ERProvider er_from_velocity(int n, std::function<VectorField(double)> v, std::function<VectorField(double)> dtv);
ERProvider mollified_provider(const ERProvider& in, double ell);

struct StepConfig {
  int n = 64;
  std::string ladder_mode = "desk";  // desk | paper
  std::vector<int> indices{2, 10};
  double a = 10.0;
  double beta = 0.25, b = 1.1, alpha = 0.1;
  int q = 0;
  ProfileKind profile_kind = ProfileKind::constant;
  double profile_c0 = 1.0, profile_c1 = 0.0;
  int samples_per_tau = 17;
  double T = 0.0;        // 0: two periods tau_q
  double bandwidth = 2.0;
  double N_override = 0;  // perturb at this frequency index instead of N_{q+1}
  bool materialize = true;
  int steps = 1;
  std::string output_dir;
  std::string start = "zero";  // zero | abc
  double start_amplitude = 0.0;
};

StepConfig load_config(const std::string& path);
StepConfig parse_config(const std::string& json_text);

struct DiagRow {
  double t = 0;
  std::string quantity;
  double measured = 0;
  double paper_bound = 0;
  double ratio = 0;
};

struct SampleRecord {
  double t = 0;
  double residual_rel = 0;   // Leray-projected ER residual / ||div R||
  double residual_abs = 0;
  double div_w = 0;
  double w_sup = 0, w_c1 = 0;
  double R_sup = 0;
  double absorbed_trace = 0;
  double gap = 0;
  double gap_before = 0;
  EnergyCheck energy;
};

struct StepResult {
  StepConfig config;
  DerivedScales scales;
  EnergyProfile profile;
  double T = 0;
  double N = 0;
  double c0 = 0;
  MConstant M;
  std::vector<double> times;
  std::vector<SampleRecord> samples;
  std::vector<DiagRow> rows;
  std::vector<std::string> warnings;
  double seconds = 0;
};

// scales for step q of the configured ladder
DerivedScales step_scales(const StepConfig& cfg, int q);

struct StepContext;  // mollified, glued and cutoff data shared by the sample builds

class Step {
 public:
  Step(const StepConfig& cfg, const ERProvider& input, const EnergyProfile& profile);
  ~Step();
  const DerivedScales& scales() const;
  const TimePartition& partition() const;
  const EtaCutoffs& eta() const;
  const GluedFlow& glued() const;
  const MikadoFamily& family() const;
  double N() const;
  double T() const;
  double dt_fd() const;

  struct Built {
    GluedSnapshot glued;
    VectorField dtvbar;
    StressDecomp decomp;
    PerturbationResult w;
    NewStress next;
  };
  PerturbationResult perturbation_at(double t, bool keep_parts = true) const;
  Built build(double t) const;
  ERProvider output() const;  // perturbed stage as a provider (recomputed lazily)

 private:
  std::shared_ptr<StepContext> ctx_;
};

StepResult full_step(const StepConfig& cfg, const ERProvider& input, const EnergyProfile& profile);
StepResult run(const StepConfig& cfg);
std::vector<DiagRow> report(const std::string& dir);
std::string format_report(const std::vector<DiagRow>& rows);
void write_csv(const std::string& path, const std::vector<DiagRow>& rows);
std::vector<DiagRow> read_csv(const std::string& path);

// legacy VTK structured points, POINT_DATA with one array per component group
void write_vtk(const std::string& path, const VectorField& v, const std::string& name);
void write_vtk(const std::string& path, const ScalarField& f, const std::string& name);
// export a field of the perturbed state at time t: which in {v, w, p, R}
std::string export_vtk(const StepConfig& cfg, double t, const std::string& which, const std::string& dir);

}  // namespace onsager
