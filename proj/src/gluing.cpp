#include "onsager/gluing.hpp"

#include <boost/math/interpolators/quintic_hermite.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

#include "onsager/energy.hpp"
#include "onsager/operators.hpp"

namespace onsager {

namespace {

double raw_beta(double s) {
  double u = 1.0 - s * s;
  return u > 0 ? std::exp(-1.0 / u) : 0.0;
}

double beta_mass() {
  static const double Z = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(raw_beta, -1.0, 1.0, 15, 1e-15);
  return Z;
}

using Table = boost::math::interpolators::cardinal_quintic_hermite<std::vector<double>>;

const Table& K_table() {
  static const Table table = [] {
    const int m = 4001;
    const double h = 2.0 / (m - 1);
    std::vector<double> y(m), dy(m), d2y(m);
    double acc = 0.0;
    y[0] = 0.0;
    for (int k = 1; k < m; ++k) {
      double a = -1.0 + (k - 1) * h, b = -1.0 + k * h;
      acc += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(raw_beta, a, b, 5, 1e-15);
      y[k] = acc;
    }
    for (int k = 0; k < m; ++k) {
      double s = -1.0 + k * h;
      y[k] /= acc;
      dy[k] = Bump1D::beta(s);
      d2y[k] = Bump1D::dbeta(s);
    }
    y[m - 1] = 1.0;
    return Table(std::move(y), std::move(dy), std::move(d2y), -1.0, h);
  }();
  return table;
}

}  // namespace

double Bump1D::beta(double s) { return raw_beta(s) / beta_mass(); }

double Bump1D::dbeta(double s) {
  double u = 1.0 - s * s;
  if (u <= 0) return 0.0;
  return -2.0 * s / (u * u) * raw_beta(s) / beta_mass();
}

double Bump1D::K(double s) {
  if (s <= -1.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return std::clamp(K_table()(s), 0.0, 1.0);
}

// ---------------------------------------------------------------- partition

double TimePartition::chi(int i, double t) const {
  if (i < i_min || i > i_max) return 0.0;
  double lo = (i == i_min) ? 1.0 : Bump1D::K((t - (this->t(i) - tau / 2)) / eps());
  double hi = (i == i_max) ? 0.0 : Bump1D::K((t - (this->t(i) + tau / 2)) / eps());
  return lo - hi;
}

double TimePartition::dchi(int i, double t) const {
  if (i < i_min || i > i_max) return 0.0;
  double lo = (i == i_min) ? 0.0 : Bump1D::beta((t - (this->t(i) - tau / 2)) / eps());
  double hi = (i == i_max) ? 0.0 : Bump1D::beta((t - (this->t(i) + tau / 2)) / eps());
  return (lo - hi) / eps();
}

double TimePartition::d2chi(int i, double t) const {
  if (i < i_min || i > i_max) return 0.0;
  double lo = (i == i_min) ? 0.0 : Bump1D::dbeta((t - (this->t(i) - tau / 2)) / eps());
  double hi = (i == i_max) ? 0.0 : Bump1D::dbeta((t - (this->t(i) + tau / 2)) / eps());
  return (lo - hi) / (eps() * eps());
}

std::vector<int> TimePartition::active(double t) const {
  std::vector<int> out;
  for (int i = i_min; i <= i_max; ++i)
    if (chi(i, t) != 0.0) out.push_back(i);
  return out;
}

bool TimePartition::in_J(double t, int* i) const {
  int k = std::clamp(int(std::lround(t / tau)), i_min, i_max);
  bool inside = std::abs(t - this->t(k)) < tau / 3 || (k == i_min && t < this->t(k)) || (k == i_max && t > this->t(k));
  if (inside && i) *i = k;
  return inside;
}

bool TimePartition::in_I(double t, int* i) const {
  int k = int(std::floor(t / tau));
  if (k < i_min || k >= i_max) return false;
  double r = t - this->t(k);
  bool inside = r >= tau / 3 && r <= 2 * tau / 3;
  if (inside && i) *i = k;
  return inside;
}

TimePartition build_chi(double tau, double T) {
  if (!(tau > 0 && tau < T)) throw Error("build_chi: need 0 < tau < T");
  TimePartition p;
  p.tau = tau;
  p.T = T;
  p.i_min = 0;
  p.i_max = int(std::ceil(T / tau - 1e-12));
  return p;
}

// ---------------------------------------------------------------- glued flow

GluedFlow::GluedFlow(const TimePartition& part, int n, const std::function<VectorField(double)>& v_ell,
                     const GluingOptions& opt)
    : part_(part), n_(n) {
  const double tau = part.tau;
  const double margin = tau / 32;
  for (int i = part.i_min; i <= part.i_max; ++i) {
    double ti = part.t(i);
    // end intervals reach one extra step so flows anchored outside [0, T] are covered
    double lo = ti - (i == part.i_min ? 4 * tau / 3 : 2 * tau / 3) - margin;
    double hi = ti + (i == part.i_max ? 4 * tau / 3 : 2 * tau / 3) + margin;
    VectorField v0 = v_ell(ti);
    auto traj = std::make_shared<EulerTrajectory>(v0, ti, lo, hi, opt.slice_fraction * tau, opt.euler);
    if (!traj->zero) zero_ = false;
    solves_.push_back(traj);
  }
}

const EulerTrajectory& GluedFlow::solve(int i) const {
  if (i < part_.i_min || i > part_.i_max) throw MissingOverlap("no exact solve with index " + std::to_string(i));
  return *solves_[i - part_.i_min];
}

VectorField GluedFlow::velocity(double t) const {
  VectorField v(n_);
  if (zero_) return v;
  for (int i : part_.active(t)) {
    const EulerTrajectory& s = solve(i);
    if (!s.covers(t)) throw MissingOverlap("solve " + std::to_string(i) + " does not cover t = " + std::to_string(t));
    axpy(part_.chi(i, t), s.velocity(t), v);
  }
  return v;
}

GluedSnapshot GluedFlow::at(double t) const {
  GluedSnapshot g;
  g.v = VectorField(n_);
  g.p = ScalarField(n_);
  g.R = SymTensorField(n_);
  g.R.traceless = true;
  auto act = part_.active(t);
  if (act.empty()) throw MissingOverlap("no active interval at t = " + std::to_string(t));
  g.i = act.front();
  g.in_J = act.size() == 1;
  g.chi = part_.chi(g.i, t);
  if (zero_) return g;
  for (int i : act)
    if (!solve(i).covers(t)) throw MissingOverlap("solve " + std::to_string(i) + " does not cover t = " + std::to_string(t));
  if (act.size() == 1) {
    g.v = solve(g.i).velocity(t);
    g.p = solve(g.i).pressure(t);
    return g;
  }
  if (act.size() != 2 || act[1] != act[0] + 1) throw MissingOverlap("more than two active intervals");
  const EulerTrajectory& A = solve(act[0]);
  const EulerTrajectory& B = solve(act[1]);
  const double chi = g.chi, dchi = part_.dchi(act[0], t);
  VectorField vi = A.velocity(t), vj = B.velocity(t);
  VectorField d = sub(vi, vj);
  g.v = scaled(chi, vi);
  axpy(1.0 - chi, vj, g.v);
  ScalarField pi = A.pressure(t), pj = B.pressure(t);
  ScalarField dd = dot(d, d);
  for (std::size_t p = 0; p < g.p.size(); ++p)
    g.p.c[0][p] = chi * pi.c[0][p] + (1 - chi) * pj.c[0][p] + chi * (1 - chi) * dd.c[0][p] / 3.0;
  double m = mean(g.p);
  for (auto& x : g.p.c[0]) x -= m;
  SymTensorField Rd = inverse_divergence(d);
  SymTensorField dod = outer_traceless(d, d);
  for (int c = 0; c < 6; ++c)
    for (std::size_t p = 0; p < g.R.size(); ++p) g.R.c[c][p] = dchi * Rd.c[c][p] - chi * (1 - chi) * dod.c[c][p];
  return g;
}

VelocitySource GluedFlow::source() const {
  VelocitySource s;
  s.n = n_;
  s.zero = zero_;
  s.at = [this](double t) { return velocity(t); };
  return s;
}

GluedDiagnostics glued_diagnostics(const GluedSnapshot& g, const VectorField& v_ell, const DerivedScales& s,
                                   double t) {
  GluedDiagnostics d;
  d.t = t;
  const double la = std::pow(s.ell, s.alpha);
  d.v_ratio = holder_norm(sub(g.v, v_ell), s.alpha) / (std::sqrt(s.delta_q1) * la);
  d.R_ratio = holder_norm(g.R, s.alpha) / (s.delta_q1 * la);
  d.energy_ratio = std::abs(energy_integral(g.v) - energy_integral(v_ell)) / (s.delta_q1 * la);
  d.R_sup = max_norm(g.R);
  double tr = max_abs(trace(g.R).c[0]);
  d.trace_rel = d.R_sup > 0 ? tr / d.R_sup : tr;
  return d;
}

}  // namespace onsager
