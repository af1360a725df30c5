#include "onsager/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace onsager {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

double EnergyProfile::operator()(double t) const {
  double s = time_scale * t;
  switch (kind) {
    case ProfileKind::constant: return amp * c0;
    case ProfileKind::affine: return amp * (c0 + c1 * s);
    case ProfileKind::cosine: return amp * (c0 + c1 * std::cos(two_pi * s / T));
  }
  return 0.0;
}

double EnergyProfile::derivative(double t) const {
  double s = time_scale * t;
  switch (kind) {
    case ProfileKind::constant: return 0.0;
    case ProfileKind::affine: return amp * time_scale * c1;
    case ProfileKind::cosine: return -amp * time_scale * c1 * two_pi / T * std::sin(two_pi * s / T);
  }
  return 0.0;
}

double EnergyProfile::sup() const {
  switch (kind) {
    case ProfileKind::constant: return amp * c0;
    case ProfileKind::affine: return amp * std::max(c0, c0 + c1 * T);
    case ProfileKind::cosine: return amp * (c0 + std::abs(c1));
  }
  return 0.0;
}

double EnergyProfile::inf() const {
  switch (kind) {
    case ProfileKind::constant: return amp * c0;
    case ProfileKind::affine: return amp * std::min(c0, c0 + c1 * T);
    case ProfileKind::cosine: return amp * (c0 - std::abs(c1));
  }
  return 0.0;
}

double EnergyProfile::sup_derivative() const {
  switch (kind) {
    case ProfileKind::constant: return 0.0;
    case ProfileKind::affine: return amp * time_scale * std::abs(c1);
    case ProfileKind::cosine: return amp * time_scale * std::abs(c1) * two_pi / T;
  }
  return 0.0;
}

void EnergyProfile::validate() const {
  if (!(inf() > 0)) throw NonPositiveProfile("inf e = " + std::to_string(inf()));
}

ProfileKind profile_kind(const std::string& s) {
  if (s == "constant") return ProfileKind::constant;
  if (s == "affine") return ProfileKind::affine;
  if (s == "cosine") return ProfileKind::cosine;
  throw ConfigError("profile.kind: unknown kind '" + s + "'");
}

NormalizeReport normalize(const EnergyProfile& e, const DerivedScales& s0) {
  e.validate();
  NormalizeReport r;
  r.Gamma = std::sqrt(s0.delta_q1 / e.sup());
  r.profile = e;
  r.profile.amp *= r.Gamma * r.Gamma;
  r.profile.time_scale *= r.Gamma;
  // horizon of the rescaled profile is T / Gamma; sup/inf are scale-free in time
  r.derivative_ok = r.profile.sup_derivative() <= 1.0;
  r.upper_ok = r.profile.sup() <= s0.delta_q1 * (1 + 1e-12);
  r.lower_ok = r.profile.inf() >= s0.delta_q1 * std::pow(s0.lambda_q, -s0.alpha);
  return r;
}

double energy_integral(const VectorField& v) {
  long double s = 0.0L;
  for (int a = 0; a < 3; ++a)
    for (double x : v.c[a]) s += (long double)x * x;
  return double(s / (long double)v.size());
}

double parseval_energy(const VectorField& v) {
  GridSpec g(v.n);
  long double s = 0.0L;
  for (int a = 0; a < 3; ++a) {
    auto F = fft_forward(v.c[a], v.n);
    for (int i3 = 0; i3 < v.n; ++i3)
      for (int i2 = 0; i2 < v.n; ++i2)
        for (int i1 = 0; i1 < g.nh(); ++i1) {
          // interior x-planes stand for two conjugate modes
          double w = (i1 == 0 || i1 == v.n / 2) ? 1.0 : 2.0;
          s += w * std::norm(F[g.sidx(i1, i2, i3)]);
        }
  }
  return double(s);
}

EnergyGap energy_gap(const VectorField& v, const EnergyProfile& e, const DerivedScales& s, double t) {
  EnergyGap g;
  g.energy = energy_integral(v);
  g.gap = e(t) - g.energy;
  const double lam = std::pow(s.lambda_q, s.alpha);
  g.strict_window = g.gap >= s.delta_q1 / lam && g.gap <= s.delta_q1;
  g.relaxed_window = g.gap >= s.delta_q1 / (2 * lam) && g.gap <= 2 * s.delta_q1;
  return g;
}

}  // namespace onsager
