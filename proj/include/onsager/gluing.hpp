#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "onsager/euler.hpp"
#include "onsager/grid.hpp"
#include "onsager/schedule.hpp"

namespace onsager {

// 1D bump beta(s) = exp(-1/(1-s^2)) / Z on (-1, 1) and its primitive K
struct Bump1D {
  static double beta(double s);
  static double dbeta(double s);
  static double K(double s);  // 0 for s <= -1, 1 for s >= 1
};

// chi_i: mollified indicator of [t_i - tau/2, t_i + tau/2] at scale tau/6,
// first and last intervals extended to infinity
struct TimePartition {
  double tau = 0, T = 0;
  int i_min = 0, i_max = 0;

  double t(int i) const { return i * tau; }
  double eps() const { return tau / 6.0; }
  double chi(int i, double t) const;
  double dchi(int i, double t) const;
  double d2chi(int i, double t) const;
  std::vector<int> active(double t) const;  // indices with chi_i(t) != 0
  bool in_J(double t, int* i = nullptr) const;  // |t - t_i| < tau/3
  bool in_I(double t, int* i = nullptr) const;  // t in [t_i + tau/3, t_i + 2 tau/3]
};

TimePartition build_chi(double tau, double T);

struct ERSnapshot {
  VectorField v;
  ScalarField p;
  SymTensorField R;
};

struct GluedSnapshot : ERSnapshot {
  int i = 0;          // left index of the active pair
  double chi = 1.0;   // chi_i(t)
  bool in_J = false;
};

struct GluingOptions {
  double slice_fraction = 1.0 / 16.0;  // slice spacing in units of tau
  EulerOptions euler;
};

// exact solves v_i through (t_i, v_ell(t_i)), glued by the partition
class GluedFlow {
 public:
  GluedFlow(const TimePartition& part, int n, const std::function<VectorField(double)>& v_ell,
            const GluingOptions& opt = {});

  const TimePartition& partition() const { return part_; }
  int n() const { return n_; }
  bool zero() const { return zero_; }
  const EulerTrajectory& solve(int i) const;
  VectorField velocity(double t) const;
  GluedSnapshot at(double t) const;
  VelocitySource source() const;

 private:
  TimePartition part_;
  int n_;
  bool zero_ = true;
  std::vector<std::shared_ptr<EulerTrajectory>> solves_;
};

struct GluedDiagnostics {
  double t = 0;
  double v_ratio = 0;       // ||vbar - v_ell||_alpha / (delta_{q+1}^{1/2} ell^alpha)
  double R_ratio = 0;       // ||Rbar||_alpha / (delta_{q+1} ell^alpha)
  double energy_ratio = 0;  // |int |vbar|^2 - |v_ell|^2| / (delta_{q+1} ell^alpha)
  double trace_rel = 0;     // ||tr Rbar||_0 / ||Rbar||_0
  double R_sup = 0;
};
GluedDiagnostics glued_diagnostics(const GluedSnapshot& g, const VectorField& v_ell, const DerivedScales& s,
                                   double t);

}  // namespace onsager
