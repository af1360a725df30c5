#pragma once

#include <vector>

#include "onsager/grid.hpp"

namespace onsager {

// Radial bump exp(-1/(1-r^2)) on [0,1), normalized to unit mass in R^3.
struct MollifierKernel {
  double ell = 0.0;
  static double profile(double r);  // normalized, support radius 1
  double operator()(double r) const;  // ell^-3 profile(r/ell)
  static double mass();               // 4 pi int profile r^2 dr, by quadrature
};

std::vector<double> mollifier_symbol(int n, double ell);  // real multiplier over the half spectrum

template <int C>
Field<C> mollify(const Field<C>& f, double ell);

struct MollifiedState {
  VectorField v;
  ScalarField p;
  SymTensorField R;
};
MollifiedState mollified_stress(const VectorField& v, const SymTensorField& R, double ell);

VectorField biot_savart(const VectorField& v);

// symbol of R at wavenumber k applied to f; result symmetric, (a,b) in sym order
void inverse_divergence_symbol(const double k[3], const cplx f[3], cplx out[6]);
SymTensorField inverse_divergence(const VectorField& f);
// single component from precomputed spectra (memory-light path for large grids)
std::vector<double> inverse_divergence_component(const std::array<std::vector<cplx>, 3>& F, int n, int comp);
// max norm and alpha-Hoelder norm of R f without storing all six components at once
struct StressNorms {
  double sup = 0;
  double holder = 0;  // sup + component envelope of the alpha-seminorm (within sqrt 6 of the exact one)
  double trace_sup = 0;
};
StressNorms inverse_divergence_norms(const VectorField& f, double alpha);

VectorField leray_project(const VectorField& u);
ScalarField pressure_solve(const VectorField& v, const SymTensorField& R);

struct ResidualReport {
  double projected = 0;  // ||P[dtv + div(v(x)v) - div R]||_0
  double raw = 0;        // ||dtv + div(v(x)v) + grad p - div R||_0 on the resolvable band
  double div_R = 0;      // ||div R||_0, the scale the residual is compared against
  double dtv = 0;        // ||dtv||_0
  double relative() const { return div_R > 0 ? projected / div_R : projected; }
};
ResidualReport er_residual(const VectorField& v, const ScalarField& p, const SymTensorField& R,
                           const VectorField& dtv);

struct DecayProbe {
  std::vector<double> lambdas;
  std::vector<double> norms;
  double slope = 0;
};
// Phi = id + disp; probes ||R(a e^{2 pi i lambda k . Phi})||_alpha
DecayProbe oscillatory_decay_probe(const ScalarField& a, const VectorField& disp, const std::array<int, 3>& k,
                                   const std::vector<double>& lambdas, double alpha);

double cet_commutator(const ScalarField& f, const ScalarField& g, double ell);

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace onsager
