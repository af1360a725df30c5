#pragma once

#include <string>

#include "onsager/grid.hpp"
#include "onsager/schedule.hpp"

namespace onsager {

enum class ProfileKind { constant, affine, cosine };

// e(t) = amp * base(time_scale * t), base one of
//   constant: c0;  affine: c0 + c1 t;  cosine: c0 + c1 cos(2 pi t / T)
struct EnergyProfile {
  ProfileKind kind = ProfileKind::constant;
  double c0 = 1.0, c1 = 0.0;
  double T = 1.0;
  double amp = 1.0;
  double time_scale = 1.0;

  double operator()(double t) const;
  double derivative(double t) const;
  double sup() const;  // over [0, T]
  double inf() const;
  double sup_derivative() const;
  void validate() const;
};

ProfileKind profile_kind(const std::string& s);

struct NormalizeReport {
  EnergyProfile profile;
  double Gamma = 1.0;
  bool derivative_ok = true;  // sup |e'| <= 1
  bool lower_ok = true;       // inf e >= delta_1 lambda_0^{-alpha}
  bool upper_ok = true;       // sup e <= delta_1
};
NormalizeReport normalize(const EnergyProfile& e, const DerivedScales& s0);

struct EnergyGap {
  double energy = 0;  // int |v|^2
  double gap = 0;     // e(t) - int |v|^2
  bool strict_window = false;
  bool relaxed_window = false;
};
double energy_integral(const VectorField& v);
double parseval_energy(const VectorField& v);
EnergyGap energy_gap(const VectorField& v, const EnergyProfile& e, const DerivedScales& s, double t);

}  // namespace onsager
