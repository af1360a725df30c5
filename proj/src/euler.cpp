#include "onsager/euler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "onsager/operators.hpp"

namespace onsager {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

VelocitySpectrum to_spectrum(const VectorField& v) {
  VelocitySpectrum V;
  for (int a = 0; a < 3; ++a) V[a] = fft_forward(v.c[a], v.n);
  return V;
}

VectorField to_field(const VelocitySpectrum& V, int n) {
  VectorField v;
  v.n = n;
  for (int a = 0; a < 3; ++a) v.c[a] = fft_inverse(V[a], n);
  return v;
}

void axpy_spec(double a, const VelocitySpectrum& x, VelocitySpectrum& y) {
  for (int c = 0; c < 3; ++c)
    for (std::size_t s = 0; s < y[c].size(); ++s) y[c][s] += a * x[c][s];
}

double grad_sup(const VelocitySpectrum& V, int n) {
  double g = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) g = std::max(g, max_abs(fft_inverse(spec_derivative(V[a], n, b), n)));
  return g;
}

double divergence_ratio(const VelocitySpectrum& V, int n) {
  GridSpec g(n);
  std::vector<cplx> d(g.spec_size(), 0.0);
  double scale = 0.0;
  for (int a = 0; a < 3; ++a) {
    auto da = spec_derivative(V[a], n, a);
    for (std::size_t s = 0; s < d.size(); ++s) d[s] += da[s];
  }
  scale = grad_sup(V, n);
  double dv = max_abs(fft_inverse(d, n));
  return scale > 0 ? dv / scale : dv;
}

double energy_of(const VelocitySpectrum& V, int n) {
  long double s = 0.0L;
  for (int a = 0; a < 3; ++a)
    for (double x : fft_inverse(V[a], n)) s += (long double)x * x;
  return double(s / ((long double)n * n * n));
}

bool all_zero(const VectorField& v) {
  for (int a = 0; a < 3; ++a)
    for (double x : v.c[a])
      if (x != 0.0) return false;
  return true;
}

void check_initial(const VectorField& v0) {
  Vec3 m = mean(v0);
  double vmax = max_norm(v0);
  for (int a = 0; a < 3; ++a)
    if (std::abs(m[a]) > 1e-12 * std::max(vmax, 1.0)) throw NonZeroMean("solve_euler: initial mean");
  if (divergence_ratio(to_spectrum(v0), v0.n) > 1e-10) throw NotSolenoidal("solve_euler: initial divergence");
}

double window_of(const VectorField& v0, const EulerOptions& opt) {
  double nrm = holder(v0, 1.0 + opt.alpha).norm;
  return nrm > 0 ? opt.c_loc / nrm : 1e300;
}

}  // namespace

VelocitySpectrum euler_rhs(const VelocitySpectrum& V, int n) {
  GridSpec g(n);
  const Waves& w = waves(n);
  VectorField v = to_field(V, n);
  VelocitySpectrum N;
  for (auto& c : N) c.assign(g.spec_size(), 0.0);
  const int cut = n / 3;  // keep |m| < n/3 on every axis
  std::vector<char> keep(g.spec_size());
  for (int i3 = 0; i3 < n; ++i3)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < g.nh(); ++i1)
        keep[g.sidx(i1, i2, i3)] = std::abs(w.m1[i1]) < cut && std::abs(w.m2[i2]) < cut && std::abs(w.m3[i3]) < cut;
  const cplx I(0.0, 1.0);
  std::vector<double> P(g.size());
  for (int c = 0; c < 6; ++c) {
    int a = sym_pairs[c][0], b = sym_pairs[c][1];
    for (std::size_t p = 0; p < P.size(); ++p) P[p] = v.c[a][p] * v.c[b][p];
    auto F = fft_forward(P, n);
    for (int i3 = 0; i3 < n; ++i3)
      for (int i2 = 0; i2 < n; ++i2)
        for (int i1 = 0; i1 < g.nh(); ++i1) {
          std::size_t s = g.sidx(i1, i2, i3);
          if (!keep[s]) continue;
          double k[3] = {w.k1[i1], w.k2[i2], w.k3[i3]};
          N[a][s] += I * k[b] * F[s];
          if (a != b) N[b][s] += I * k[a] * F[s];
        }
  }
  for (int i3 = 0; i3 < n; ++i3)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < g.nh(); ++i1) {
        std::size_t s = g.sidx(i1, i2, i3);
        double k[3] = {w.k1[i1], w.k2[i2], w.k3[i3]};
        double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (k2 == 0.0) {
          for (int a = 0; a < 3; ++a) N[a][s] = 0.0;
          continue;
        }
        cplx kd = k[0] * N[0][s] + k[1] * N[1][s] + k[2] * N[2][s];
        for (int a = 0; a < 3; ++a) N[a][s] = -(N[a][s] - k[a] * kd / k2);
      }
  return N;
}

void euler_rk4_step(VelocitySpectrum& V, int n, double dt) {
  VelocitySpectrum k1 = euler_rhs(V, n);
  VelocitySpectrum tmp = V;
  axpy_spec(0.5 * dt, k1, tmp);
  VelocitySpectrum k2 = euler_rhs(tmp, n);
  tmp = V;
  axpy_spec(0.5 * dt, k2, tmp);
  VelocitySpectrum k3 = euler_rhs(tmp, n);
  tmp = V;
  axpy_spec(dt, k3, tmp);
  VelocitySpectrum k4 = euler_rhs(tmp, n);
  axpy_spec(dt / 6.0, k1, V);
  axpy_spec(dt / 3.0, k2, V);
  axpy_spec(dt / 3.0, k3, V);
  axpy_spec(dt / 6.0, k4, V);
}

VectorField solve_euler(const VectorField& v0, double t0, double t_target, const EulerOptions& opt,
                        EulerStats* stats) {
  EulerStats st;
  const double span = t_target - t0;
  if (all_zero(v0) || span == 0.0) {
    if (stats) *stats = st;
    return v0;
  }
  check_initial(v0);
  st.window = window_of(v0, opt);
  if (opt.check_window && std::abs(span) > st.window)
    throw CFLWindowExceeded("|t - t0| = " + std::to_string(std::abs(span)) + " > " + std::to_string(st.window));
  const int n = v0.n;
  double dt = opt.dt > 0 ? opt.dt : std::min(opt.cfl / (n * max_norm(v0)), std::abs(span) / 8.0);
  long steps = std::max(1L, long(std::ceil(std::abs(span) / dt - 1e-9)));
  double h = span / double(steps);
  VelocitySpectrum V = to_spectrum(v0);
  st.energy0 = energy_of(V, n);
  st.grad0 = grad_sup(V, n);
  for (long s = 0; s < steps; ++s) euler_rk4_step(V, n, h);
  st.dt = std::abs(h);
  st.steps = steps;
  st.grad_max = grad_sup(V, n);
  st.energy_drift = std::abs(energy_of(V, n) - st.energy0) / st.energy0;
  st.max_div = divergence_ratio(V, n);
  if (st.grad_max > opt.blowup_factor * st.grad0) throw BlowupSuspected("||v||_1 grew by more than 10x");
  if (stats) *stats = st;
  return to_field(V, n);
}

EulerTrajectory::EulerTrajectory(const VectorField& v0, double anchor, double lo, double hi, double slice_dt,
                                 const EulerOptions& opt)
    : n(v0.n), t_anchor(anchor), t_lo(std::min(lo, anchor)), t_hi(std::max(hi, anchor)) {
  if (all_zero(v0)) {
    zero = true;
    return;
  }
  check_initial(v0);
  stats.window = window_of(v0, opt);
  double reach = std::max(t_hi - t_anchor, t_anchor - t_lo);
  if (opt.check_window && reach > stats.window)
    throw CFLWindowExceeded("trajectory reach " + std::to_string(reach) + " > " + std::to_string(stats.window));
  double dt = opt.dt > 0 ? opt.dt
                         : std::min({opt.cfl / (n * max_norm(v0)), (t_hi - t_lo) / 8.0, slice_dt});
  long per_slice = std::max(1L, long(std::ceil(slice_dt / dt - 1e-9)));
  dt_ = slice_dt / double(per_slice);
  stats.dt = dt_;
  const long m_lo = long(std::floor((t_lo - t_anchor) / slice_dt + 1e-9));
  const long m_hi = long(std::ceil((t_hi - t_anchor) / slice_dt - 1e-9));
  VelocitySpectrum V0 = to_spectrum(v0);
  stats.energy0 = energy_of(V0, n);
  stats.grad0 = grad_sup(V0, n);
  stats.grad_max = stats.grad0;
  std::vector<std::pair<long, VelocitySpectrum>> fwd, bwd;
  auto record = [&](const VelocitySpectrum& V) {
    double e = energy_of(V, n);
    stats.energy_drift = std::max(stats.energy_drift, std::abs(e - stats.energy0) / stats.energy0);
    stats.max_div = std::max(stats.max_div, divergence_ratio(V, n));
    double g = grad_sup(V, n);
    stats.grad_max = std::max(stats.grad_max, g);
    if (g > opt.blowup_factor * stats.grad0) throw BlowupSuspected("||v||_1 grew by more than 10x");
  };
  {
    VelocitySpectrum V = V0;
    for (long m = 1; m <= m_hi; ++m) {
      for (long s = 0; s < per_slice; ++s) euler_rk4_step(V, n, dt_);
      stats.steps += per_slice;
      record(V);
      fwd.emplace_back(m, V);
    }
  }
  {
    VelocitySpectrum V = V0;
    for (long m = -1; m >= m_lo; --m) {
      for (long s = 0; s < per_slice; ++s) euler_rk4_step(V, n, -dt_);
      stats.steps += per_slice;
      record(V);
      bwd.emplace_back(m, V);
    }
  }
  std::reverse(bwd.begin(), bwd.end());
  for (auto& [m, V] : bwd) {
    times_.push_back(t_anchor + m * slice_dt);
    slices_.push_back(std::move(V));
  }
  times_.push_back(t_anchor);
  slices_.push_back(std::move(V0));
  for (auto& [m, V] : fwd) {
    times_.push_back(t_anchor + m * slice_dt);
    slices_.push_back(std::move(V));
  }
}

VelocitySpectrum EulerTrajectory::spectrum_at(double t) const {
  if (!covers(t)) throw OutOfWindow("trajectory does not cover t = " + std::to_string(t));
  std::size_t best = 0;
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (std::abs(times_[i] - t) < std::abs(times_[best] - t)) best = i;
  VelocitySpectrum V = slices_[best];
  double span = t - times_[best];
  if (span != 0.0) {
    long steps = std::max(1L, long(std::ceil(std::abs(span) / dt_ - 1e-9)));
    double h = span / double(steps);
    for (long s = 0; s < steps; ++s) euler_rk4_step(V, n, h);
  }
  return V;
}

VectorField EulerTrajectory::velocity(double t) const {
  if (zero) return VectorField(n);
  return to_field(spectrum_at(t), n);
}

ScalarField EulerTrajectory::pressure(double t) const {
  if (zero) return ScalarField(n);
  return pressure_solve(velocity(t), SymTensorField(n));
}

VectorField EulerTrajectory::dtv(double t) const {
  if (zero) return VectorField(n);
  return to_field(euler_rhs(spectrum_at(t), n), n);
}

// ---------------------------------------------------------------- flow maps

namespace {

void finish_flow(FlowMap& F) {
  MatrixField J = jacobian(F.disp);
  F.grad = J;
  for (int a = 0; a < 3; ++a)
    for (auto& x : F.grad.c[a * 3 + a]) x += 1.0;
  F.det_error = 0.0;
  F.grad_deviation = 0.0;
  const auto& G = F.grad.c;
  for (std::size_t p = 0; p < F.grad.size(); ++p) {
    double det = G[0][p] * (G[4][p] * G[8][p] - G[5][p] * G[7][p]) - G[1][p] * (G[3][p] * G[8][p] - G[5][p] * G[6][p]) +
                 G[2][p] * (G[3][p] * G[7][p] - G[4][p] * G[6][p]);
    F.det_error = std::max(F.det_error, std::abs(det - 1.0));
    double d2 = 0.0;
    for (int c = 0; c < 9; ++c) d2 += J.c[c][p] * J.c[c][p];
    F.grad_deviation = std::max(F.grad_deviation, std::sqrt(d2));
  }
}

void check_window(double t_anchor, double t, double window) {
  if (std::abs(t - t_anchor) > window * (1 + 1e-12))
    throw OutOfWindow("|t - t_i| = " + std::to_string(std::abs(t - t_anchor)) + " exceeds " + std::to_string(window));
}

template <class Sampler>
void integrate_characteristics(const VelocitySource& v, double t_anchor, double t, int substeps,
                               std::vector<Vec3>& X, Sampler&& sample) {
  const double h = (t_anchor - t) / substeps;
  VectorField v0 = v.at(t);
  for (int m = 0; m < substeps; ++m) {
    double s = t + m * h;
    VectorField vh = v.at(s + 0.5 * h);
    VectorField v1 = v.at(s + h);
    std::vector<Vec3> k1 = sample(v0, X), Y(X.size());
    for (std::size_t p = 0; p < X.size(); ++p)
      for (int a = 0; a < 3; ++a) Y[p][a] = X[p][a] + 0.5 * h * k1[p][a];
    std::vector<Vec3> k2 = sample(vh, Y);
    for (std::size_t p = 0; p < X.size(); ++p)
      for (int a = 0; a < 3; ++a) Y[p][a] = X[p][a] + 0.5 * h * k2[p][a];
    std::vector<Vec3> k3 = sample(vh, Y);
    for (std::size_t p = 0; p < X.size(); ++p)
      for (int a = 0; a < 3; ++a) Y[p][a] = X[p][a] + h * k3[p][a];
    std::vector<Vec3> k4 = sample(v1, Y);
    for (std::size_t p = 0; p < X.size(); ++p)
      for (int a = 0; a < 3; ++a) X[p][a] += h / 6.0 * (k1[p][a] + 2 * k2[p][a] + 2 * k3[p][a] + k4[p][a]);
    v0 = std::move(v1);
  }
}

}  // namespace

FlowMap identity_flow(int n, double t_anchor, double t) {
  FlowMap F;
  F.n = n;
  F.t_anchor = t_anchor;
  F.t = t;
  F.identity = true;
  return F;
}

FlowMap backward_flow(const VelocitySource& v, double t_anchor, double t, double window, int substeps,
                      SampleMethod method) {
  check_window(t_anchor, t, window);
  const int n = v.n;
  if (v.zero || t == t_anchor) return identity_flow(n, t_anchor, t);
  GridSpec g(n);
  std::vector<Vec3> X(g.size());
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) X[g.idx(i, j, k)] = {coord(i, n), coord(j, n), coord(k, n)};
  integrate_characteristics(v, t_anchor, t, substeps, X,
                            [method](const VectorField& f, const std::vector<Vec3>& P) { return sample_at(f, P, method); });
  FlowMap F;
  F.n = n;
  F.t_anchor = t_anchor;
  F.t = t;
  F.disp = VectorField(n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        std::size_t p = g.idx(i, j, k);
        F.disp.c[0][p] = X[p][0] - coord(i, n);
        F.disp.c[1][p] = X[p][1] - coord(j, n);
        F.disp.c[2][p] = X[p][2] - coord(k, n);
      }
  finish_flow(F);
  return F;
}

std::vector<Vec3> backward_flow_points(const VelocitySource& v, double t_anchor, double t,
                                       const std::vector<Vec3>& points, double window, int substeps) {
  check_window(t_anchor, t, window);
  std::vector<Vec3> X = points;
  if (v.zero || t == t_anchor) return X;
  integrate_characteristics(v, t_anchor, t, substeps, X, [](const VectorField& f, const std::vector<Vec3>& P) {
    return sample_at(f, P, SampleMethod::spectral);
  });
  return X;
}

FlowMap shift_flow(const FlowMap& phi, const VectorField& v, double dt) {
  FlowMap F;
  F.n = phi.n;
  F.t_anchor = phi.t_anchor;
  F.t = phi.t + dt;
  if (phi.identity) {
    bool still = true;
    for (int a = 0; a < 3 && still; ++a)
      for (double x : v.c[a])
        if (x != 0.0) {
          still = false;
          break;
        }
    if (still) {
      F.identity = true;
      return F;
    }
  }
  F.disp = phi.identity ? VectorField(phi.n) : phi.disp;
  for (std::size_t p = 0; p < F.disp.size(); ++p)
    for (int a = 0; a < 3; ++a) {
      double adv = 0.0;
      for (int b = 0; b < 3; ++b) adv += phi.grad_at(a, b, p) * v.c[b][p];
      F.disp.c[a][p] -= dt * adv;
    }
  finish_flow(F);
  return F;
}

VectorField abc_field(int n, double A, double B, double C) {
  GridSpec g(n);
  VectorField v(n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        double x = two_pi * coord(i, n), y = two_pi * coord(j, n), z = two_pi * coord(k, n);
        std::size_t p = g.idx(i, j, k);
        v.c[0][p] = A * std::sin(z) + C * std::cos(y);
        v.c[1][p] = B * std::sin(x) + A * std::cos(z);
        v.c[2][p] = C * std::sin(y) + B * std::cos(x);
      }
  return v;
}

}  // namespace onsager
