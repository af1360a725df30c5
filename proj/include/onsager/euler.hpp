#pragma once

#include <functional>
#include <vector>

#include "onsager/grid.hpp"

namespace onsager {

struct EulerOptions {
  double c_loc = 0.5;   // existence window |t - t0| <= c_loc / ||v0||_{1+alpha}
  double alpha = 0.1;
  double cfl = 0.5;     // dt <= cfl h / ||v||_0
  double dt = 0.0;      // fixed step when positive (order tests)
  bool check_window = true;
  double blowup_factor = 10.0;
};

struct EulerStats {
  double dt = 0;
  long steps = 0;
  double energy0 = 0;
  double energy_drift = 0;  // max relative |E(t) - E0| / E0 over stored slices
  double max_div = 0;       // max relative divergence over stored slices
  double grad0 = 0, grad_max = 0;
  double window = 0;        // c_loc / ||v0||_{1+alpha}
};

// spectral state: three half-spectra
using VelocitySpectrum = std::array<std::vector<cplx>, 3>;

// -P div(v (x) v) with 2/3 dealiasing of the product, Nyquist removed
VelocitySpectrum euler_rhs(const VelocitySpectrum& V, int n);
void euler_rk4_step(VelocitySpectrum& V, int n, double dt);

// Advance v0 from t0 to t_target (either direction).
VectorField solve_euler(const VectorField& v0, double t0, double t_target, const EulerOptions& opt = {},
                        EulerStats* stats = nullptr);

// Trajectory of the exact solution through (t_anchor, v0), stored on slices covering [t_lo, t_hi].
class EulerTrajectory {
 public:
  EulerTrajectory() = default;
  EulerTrajectory(const VectorField& v0, double t_anchor, double t_lo, double t_hi, double slice_dt,
                  const EulerOptions& opt = {});

  int n = 0;
  double t_anchor = 0, t_lo = 0, t_hi = 0;
  bool zero = false;  // v0 = 0, stored nothing
  EulerStats stats;

  bool covers(double t) const { return t >= t_lo - 1e-14 && t <= t_hi + 1e-14; }
  VectorField velocity(double t) const;
  ScalarField pressure(double t) const;
  VectorField dtv(double t) const;  // -P div(v (x) v), the exact time derivative
  const std::vector<double>& times() const { return times_; }

 private:
  std::vector<double> times_;
  std::vector<VelocitySpectrum> slices_;
  double dt_ = 0;
  VelocitySpectrum spectrum_at(double t) const;
};

// velocity field at time t, possibly composite (glued)
struct VelocitySource {
  int n = 0;
  bool zero = false;
  std::function<VectorField(double)> at;
};

struct FlowMap {
  int n = 0;
  double t_anchor = 0, t = 0;
  bool identity = false;  // Phi = id; disp and grad are left unallocated
  VectorField disp;   // Phi - id, periodic
  MatrixField grad;   // grad Phi, row-major (a,b) = d_b Phi_a

  double disp_at(int a, std::size_t p) const { return identity ? 0.0 : disp.c[a][p]; }
  double grad_at(int a, int b, std::size_t p) const { return identity ? (a == b ? 1.0 : 0.0) : grad.c[a * 3 + b][p]; }
  double det_error = 0;     // max |det grad Phi - 1|
  double grad_deviation = 0;  // max |grad Phi - Id| (Frobenius)
};

FlowMap identity_flow(int n, double t_anchor, double t);
// Phi(x, t) = X(t_anchor) for dX/ds = v(X, s), X(t) = x
FlowMap backward_flow(const VelocitySource& v, double t_anchor, double t, double window, int substeps = 8,
                      SampleMethod method = SampleMethod::lagrange6);
std::vector<Vec3> backward_flow_points(const VelocitySource& v, double t_anchor, double t,
                                       const std::vector<Vec3>& points, double window, int substeps = 8);
// first-order shift Phi(t + dt) ~ Phi(t) - dt (v . grad) Phi
FlowMap shift_flow(const FlowMap& phi, const VectorField& v, double dt);

VectorField abc_field(int n, double A, double B, double C);

}  // namespace onsager
