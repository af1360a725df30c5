#pragma once

#include <string>
#include <vector>

#include "onsager/energy.hpp"
#include "onsager/euler.hpp"
#include "onsager/gluing.hpp"
#include "onsager/mikado.hpp"
#include "onsager/schedule.hpp"

namespace onsager {

// eta_i(x1, t): mollified indicator of
//   t_i + tau/6 (sin 2 pi x1 + 1/2) <= t <= t_{i+1} + tau/6 (sin 2 pi x1 - 1/2)
// at scale c1 in x1 and c2 tau in t
struct EtaCutoffs {
  double tau = 0, T = 0;
  double c1 = 1.0 / 40.0, c2 = 1.0 / 40.0;
  int i_min = -1, i_max = 0;
  double c0 = 0;  // measured min_t sum_i int eta_i^2

  double t(int i) const { return i * tau; }
  double eta(int i, double x1, double t) const;
  std::vector<double> line(int i, int n, double t) const;  // eta_i at x1 = k/n
  std::vector<int> active(double t) const;                 // eta_i(., t) not identically zero
  double sum_int_eta2(double t, int n) const;
  // exact plateau and support windows implied by the sharp boundaries and the mollification widths
  double plateau_lo(int i) const { return t(i) + tau / 4 + c2 * tau; }
  double plateau_hi(int i) const { return t(i + 1) - tau / 4 - c2 * tau; }
  double support_lo(int i) const { return t(i) - tau / 12 - c2 * tau; }
  double support_hi(int i) const { return t(i + 1) + tau / 12 + c2 * tau; }
};

// checks properties (i)-(v) on a (x1, t) sample lattice; throws PropertyViolated("(k) ...")
EtaCutoffs build_eta(const TimePartition& part, int n_check = 64, int t_samples = 600, double c1 = 1.0 / 40.0,
                     double c2 = 1.0 / 40.0);

struct StressPiece {
  int i = 0;
  std::vector<double> eta;  // along x1
  FlowMap phi;
  bool rtilde_identity = false;  // Rbar = 0 and Phi = id: Rtilde = Id exactly
  SymTensorField rtilde;        // valid where eta > 0
  double max_distance = 0;      // max |Rtilde - Id| over eta > 0
};

struct StressDecomp {
  double t = 0;
  int n = 0;
  double energy = 0;  // int |vbar|^2
  double e = 0;       // e(t)
  double rho_q = 0;
  double S = 0;       // sum_i int eta_i^2
  bool rho_window_ok = false;  // rho_q in [delta_{q+1}/(8 lambda_q^alpha), delta_{q+1}]
  double max_distance = 0;
  std::vector<std::string> warnings;
  std::vector<StressPiece> pieces;

  // rho_{q,i} along x1 for piece k
  double rho_i(std::size_t k, int x_index) const { return pieces[k].eta[x_index] * pieces[k].eta[x_index] * rho_q / S; }
};

struct DecompOptions {
  double positivity_radius = 0.5;  // Rtilde farther than this from Id is rejected
  bool desk = true;                // between 1/2 and positivity_radius: warning instead of error
};

StressDecomp stress_decomposition(const GluedSnapshot& glued, const EtaCutoffs& eta,
                                  const std::vector<FlowMap>& flows, const EnergyProfile& e,
                                  const DerivedScales& s, double t, const DecompOptions& opt = {});

// flows Phi_i for every eta index active at t (identity when the glued velocity vanishes)
std::vector<FlowMap> flows_at(const GluedFlow& glued, const EtaCutoffs& eta, double t);

struct PerturbationResult {
  VectorField w;    // w_o + w_c = curl(potential)
  VectorField w_o;
  VectorField w_c;
  double N = 0;     // lambda_{q+1} / 2 pi
  double div_rel = 0;  // ||div w||_0 / ||grad w||_0
  double sup = 0, c1 = 0;  // ||w||_0, ||w||_1
};

// Mikado bandwidth check is the caller's (schedule::resolvable); N is the integer frequency
PerturbationResult build_perturbation(const StressDecomp& d, const MikadoFamily& fam, double N,
                                      bool keep_parts = true);

struct NewStress {
  VectorField v;      // v_{q+1}
  ScalarField p;      // p_{q+1}
  SymTensorField R;   // traceless R_{q+1}
  VectorField dtv;    // centered difference used in the construction
  double nash = 0, transport = 0, oscillation = 0;  // alpha-Hoelder norms of each part
  double R_sup = 0, R_holder = 0;
  double absorbed_trace = 0;   // ||tr(raw)||_0
  double mean_drift = 0;       // removed mean of the first two arguments, relative
};

struct NewStressOptions {
  double alpha = 0.1;
  bool materialize = true;  // false: only norms, for large grids
  double mean_tol = 1e-8;
};

// w_m, w_p at t -/+ dt; vbar, pbar, Rbar and d_t vbar at t
NewStress new_stress_and_pressure(const GluedSnapshot& glued, const VectorField& dtvbar, const PerturbationResult& w,
                                  const VectorField& w_m, const VectorField& w_p, double dt, const StressDecomp& d,
                                  const NewStressOptions& opt = {});
// same, with d_t w already formed (the caller's buffer is reused)
NewStress new_stress_from_dtw(const GluedSnapshot& glued, const VectorField& dtvbar, const PerturbationResult& w,
                              VectorField dtw, const StressDecomp& d, const NewStressOptions& opt = {});

struct EnergyCheck {
  double t = 0;
  double gap = 0;          // e(t) - int |v_{q+1}|^2
  double target = 0;       // delta_{q+2} / 2
  double bound = 0;        // delta_q^{1/2} delta_{q+1}^{1/2} lambda_q / lambda_{q+1}
  double ratio = 0;        // |gap - target| / bound
  double cross = 0;        // 2 int w . vbar
  double corrector = 0;    // 2 int w_o . w_c + int |w_c|^2
  double oscillatory = 0;  // int |w_o|^2 - 3 rho_q
};
EnergyCheck energy_check(const VectorField& v_next, const VectorField& vbar, const PerturbationResult& w,
                         const StressDecomp& d, const DerivedScales& s);

}  // namespace onsager
