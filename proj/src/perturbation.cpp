#include "onsager/perturbation.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "onsager/operators.hpp"

namespace onsager {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

bool is_zero(const SymTensorField& R) {
  for (const auto& c : R.c)
    for (double x : c)
      if (x != 0.0) return false;
  return true;
}

bool is_zero(const VectorField& v) {
  for (const auto& c : v.c)
    for (double x : c)
      if (x != 0.0) return false;
  return true;
}

double wrap(double x) { return x - std::floor(x); }

// sup of the pointwise Frobenius norm of grad w, and of div w, one derivative at a time
void gradient_sups(const VectorField& w, double& grad_sup, double& div_sup) {
  GridSpec g(w.n);
  std::vector<double> sq(g.size(), 0.0), dv(g.size(), 0.0);
  for (int a = 0; a < 3; ++a) {
    auto F = fft_forward(w.c[a], w.n);
    for (int b = 0; b < 3; ++b) {
      auto d = fft_inverse(spec_derivative(F, w.n, b), w.n);
      for (std::size_t p = 0; p < d.size(); ++p) sq[p] += d[p] * d[p];
      if (a == b)
        for (std::size_t p = 0; p < d.size(); ++p) dv[p] += d[p];
    }
  }
  grad_sup = std::sqrt(*std::max_element(sq.begin(), sq.end()));
  div_sup = max_abs(dv);
}

}  // namespace

// ---------------------------------------------------------------- eta

double EtaCutoffs::eta(int i, double x1, double tt) const {
  if (i < i_min || i > i_max) return 0.0;
  if (tt >= plateau_lo(i) && tt <= plateau_hi(i)) return 1.0;
  if (tt <= support_lo(i) || tt >= support_hi(i)) return 0.0;
  const double w = c2 * tau;
  const double ti = t(i), tj = t(i + 1);
  auto integrand = [&](double u) {
    double y = x1 - c1 * u;
    double s = std::sin(two_pi * y);
    double lo = ti + tau / 6 * (s + 0.5);
    double hi = tj + tau / 6 * (s - 0.5);
    return Bump1D::beta(u) * (Bump1D::K((tt - lo) / w) - Bump1D::K((tt - hi) / w));
  };
  double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, -1.0, 1.0, 8, 1e-13);
  return std::clamp(v, 0.0, 1.0);
}

std::vector<double> EtaCutoffs::line(int i, int n, double tt) const {
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = eta(i, coord(k, n), tt);
  return out;
}

std::vector<int> EtaCutoffs::active(double tt) const {
  std::vector<int> out;
  for (int i = i_min; i <= i_max; ++i)
    if (tt > support_lo(i) && tt < support_hi(i)) out.push_back(i);
  return out;
}

double EtaCutoffs::sum_int_eta2(double tt, int n) const {
  long double s = 0.0L;
  for (int i : active(tt))
    for (double e : line(i, n, tt)) s += (long double)e * e;
  return double(s / n);
}

EtaCutoffs build_eta(const TimePartition& part, int n_check, int t_samples, double c1, double c2) {
  EtaCutoffs E;
  E.tau = part.tau;
  E.T = part.T;
  E.c1 = c1;
  E.c2 = c2;
  E.i_min = part.i_min - 1;
  E.i_max = part.i_max;
  const double tau = part.tau;
  // (ii) needs the two mollified boundaries of neighbouring stripes to stay apart
  double spread = tau / 6 * std::min(2.0, two_pi * c1) + c2 * tau;
  if (2 * spread >= tau / 6) throw PropertyViolated("(ii) stripes of eta_i and eta_{i+1} overlap for these c1, c2");
  std::vector<double> times;
  for (int k = 0; k <= t_samples; ++k) times.push_back(part.T * k / t_samples);
  for (int i = part.i_min; i < part.i_max; ++i) {
    double c = part.t(i) + tau / 2;
    if (c <= part.T) times.push_back(c);
  }
  E.c0 = 1e300;
  for (double tt : times) {
    std::vector<std::vector<double>> lines;
    std::vector<int> idx;
    for (int i = E.i_min; i <= E.i_max; ++i) {
      lines.push_back(E.line(i, n_check, tt));
      idx.push_back(i);
    }
    double s = 0.0;
    for (int k = 0; k < n_check; ++k) {
      int nonzero = 0;
      for (std::size_t m = 0; m < lines.size(); ++m) {
        double e = lines[m][k];
        if (e < 0.0 || e > 1.0) throw PropertyViolated("(i) eta outside [0, 1]");
        if (e > 0.0) {
          ++nonzero;
          int i = idx[m];
          if (tt <= E.t(i) - tau / 3 || tt >= E.t(i + 1) + tau / 3)
            throw PropertyViolated("(iv) eta_" + std::to_string(i) + " nonzero outside its window");
        }
        s += e * e;
      }
      if (nonzero > 1) throw PropertyViolated("(ii) two cutoffs overlap at t = " + std::to_string(tt));
    }
    int i;
    if (part.in_I(tt, &i)) {
      auto l = E.line(i, n_check, tt);
      for (double e : l)
        if (e != 1.0) throw PropertyViolated("(iii) eta_" + std::to_string(i) + " != 1 on I_i");
    }
    E.c0 = std::min(E.c0, s / n_check);
  }
  if (!(E.c0 > 0)) throw PropertyViolated("(v) sum of int eta^2 vanishes");
  return E;
}

// ---------------------------------------------------------------- decomposition

std::vector<FlowMap> flows_at(const GluedFlow& glued, const EtaCutoffs& eta, double t) {
  std::vector<FlowMap> out;
  VelocitySource src = glued.source();
  for (int i : eta.active(t)) out.push_back(backward_flow(src, eta.t(i), t, 4 * eta.tau / 3));
  return out;
}

StressDecomp stress_decomposition(const GluedSnapshot& glued, const EtaCutoffs& eta,
                                  const std::vector<FlowMap>& flows, const EnergyProfile& e,
                                  const DerivedScales& s, double t, const DecompOptions& opt) {
  StressDecomp d;
  d.t = t;
  d.n = glued.v.n;
  d.energy = energy_integral(glued.v);
  d.e = e(t);
  d.rho_q = (d.e - s.delta_q2 / 2 - d.energy) / 3.0;
  if (!(d.rho_q > 0))
    throw EnergyGapNonpositive("rho_q(" + std::to_string(t) + ") = " + std::to_string(d.rho_q));
  d.rho_window_ok = d.rho_q >= s.delta_q1 / (8 * std::pow(s.lambda_q, s.alpha)) && d.rho_q <= s.delta_q1;
  d.S = eta.sum_int_eta2(t, d.n);
  auto act = eta.active(t);
  if (act.size() != flows.size()) throw Error("stress_decomposition: one flow map per active cutoff required");
  const bool R_zero = is_zero(glued.R);
  GridSpec g(d.n);
  for (std::size_t k = 0; k < act.size(); ++k) {
    StressPiece P;
    P.i = act[k];
    P.eta = eta.line(P.i, d.n, t);
    P.phi = flows[k];
    P.rtilde_identity = R_zero && (P.phi.identity || is_zero(P.phi.disp));
    if (!P.rtilde_identity) {
      P.rtilde = SymTensorField(d.n);
      const double f = d.S / d.rho_q;
      for (int z = 0; z < d.n; ++z)
        for (int y = 0; y < d.n; ++y)
          for (int x = 0; x < d.n; ++x) {
            std::size_t p = g.idx(x, y, z);
            double A[3][3], G[3][3];
            for (int a = 0; a < 3; ++a)
              for (int b = 0; b < 3; ++b) {
                A[a][b] = (a == b ? 1.0 : 0.0) - f * glued.R.c[sym_index(a, b)][p];
                G[a][b] = P.phi.grad_at(a, b, p);
              }
            double GA[3][3];
            for (int a = 0; a < 3; ++a)
              for (int b = 0; b < 3; ++b) {
                GA[a][b] = 0;
                for (int c = 0; c < 3; ++c) GA[a][b] += G[a][c] * A[c][b];
              }
            double dist2 = 0.0;
            for (int c = 0; c < 6; ++c) {
              int a = sym_pairs[c][0], b = sym_pairs[c][1];
              double v = 0;
              for (int m = 0; m < 3; ++m) v += GA[a][m] * G[b][m];
              P.rtilde.c[c][p] = v;
              double dv = v - (a == b ? 1.0 : 0.0);
              dist2 += (a == b ? 1.0 : 2.0) * dv * dv;
            }
            if (P.eta[x] > 0) P.max_distance = std::max(P.max_distance, std::sqrt(dist2));
          }
    }
    d.max_distance = std::max(d.max_distance, P.max_distance);
    d.pieces.push_back(std::move(P));
  }
  if (d.max_distance > 0.5) {
    std::string msg = "|Rtilde - Id| = " + std::to_string(d.max_distance) + " at t = " + std::to_string(t);
    if (!opt.desk || d.max_distance > opt.positivity_radius) throw RtildeOutOfBall(msg);
    d.warnings.push_back(msg);
  }
  return d;
}

// ---------------------------------------------------------------- perturbation

PerturbationResult build_perturbation(const StressDecomp& d, const MikadoFamily& fam, double N, bool keep_parts) {
  const int n = d.n;
  GridSpec g(n);
  PerturbationResult r;
  r.N = N;
  VectorField psi(n);
  VectorField w_o(keep_parts ? n : 0);
  const std::size_t J = fam.tubes.size();
  std::vector<double> phi(J);
  std::vector<Vec3> U(J);
  const double amp = std::sqrt(d.rho_q / d.S);
  const std::vector<double> c_id(J, 1.0 / 3.0);
  for (const StressPiece& P : d.pieces) {
    for (int z = 0; z < n; ++z)
      for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
          const double eta = P.eta[x];
          if (eta == 0.0) continue;
          const std::size_t p = g.idx(x, y, z);
          const double a = eta * amp;
          double G[3][3], Gi[3][3];
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) G[i][j] = P.phi.grad_at(i, j, p);
          double det = G[0][0] * (G[1][1] * G[2][2] - G[1][2] * G[2][1]) - G[0][1] * (G[1][0] * G[2][2] - G[1][2] * G[2][0]) +
                       G[0][2] * (G[1][0] * G[2][1] - G[1][1] * G[2][0]);
          Gi[0][0] = (G[1][1] * G[2][2] - G[1][2] * G[2][1]) / det;
          Gi[0][1] = (G[0][2] * G[2][1] - G[0][1] * G[2][2]) / det;
          Gi[0][2] = (G[0][1] * G[1][2] - G[0][2] * G[1][1]) / det;
          Gi[1][0] = (G[1][2] * G[2][0] - G[1][0] * G[2][2]) / det;
          Gi[1][1] = (G[0][0] * G[2][2] - G[0][2] * G[2][0]) / det;
          Gi[1][2] = (G[0][2] * G[1][0] - G[0][0] * G[1][2]) / det;
          Gi[2][0] = (G[1][0] * G[2][1] - G[1][1] * G[2][0]) / det;
          Gi[2][1] = (G[0][1] * G[2][0] - G[0][0] * G[2][1]) / det;
          Gi[2][2] = (G[0][0] * G[1][1] - G[0][1] * G[1][0]) / det;
          std::vector<double> c;
          if (P.rtilde_identity) {
            c = c_id;
          } else {
            Sym6 R;
            for (int m = 0; m < 6; ++m) R[m] = P.rtilde.c[m][p];
            c = fam.coefficients(R);
          }
          Vec3 xi = {wrap(N * (coord(x, n) + P.phi.disp_at(0, p))), wrap(N * (coord(y, n) + P.phi.disp_at(1, p))),
                     wrap(N * (coord(z, n) + P.phi.disp_at(2, p)))};
          fam.tube_fields(xi, phi.data(), U.data());
          for (std::size_t j = 0; j < J; ++j) {
            if (phi[j] == 0.0 && U[j][0] == 0.0 && U[j][1] == 0.0 && U[j][2] == 0.0) continue;
            const double s = a * std::sqrt(c[j]);
            const Vec3& f = fam.tubes[j].fhat;
            for (int i = 0; i < 3; ++i) {
              if (keep_parts) w_o.c[i][p] += s * phi[j] * (Gi[i][0] * f[0] + Gi[i][1] * f[1] + Gi[i][2] * f[2]);
              psi.c[i][p] += s / N * (G[0][i] * U[j][0] + G[1][i] * U[j][1] + G[2][i] * U[j][2]);
            }
          }
        }
  }
  r.w = curl(psi);
  if (keep_parts) {
    r.w_c = sub(r.w, w_o);
    r.w_o = std::move(w_o);
  }
  double div_sup = 0.0;
  gradient_sups(r.w, r.c1, div_sup);
  r.sup = max_norm(r.w);
  r.div_rel = r.c1 > 0 ? div_sup / r.c1 : div_sup;
  return r;
}

// ---------------------------------------------------------------- new stress

NewStress new_stress_and_pressure(const GluedSnapshot& glued, const VectorField& dtvbar, const PerturbationResult& w,
                                  const VectorField& w_m, const VectorField& w_p, double dt, const StressDecomp& d,
                                  const NewStressOptions& opt) {
  return new_stress_from_dtw(glued, dtvbar, w, scaled(0.5 / dt, sub(w_p, w_m)), d, opt);
}

NewStress new_stress_from_dtw(const GluedSnapshot& glued, const VectorField& dtvbar, const PerturbationResult& w,
                              VectorField dtw, const StressDecomp& d, const NewStressOptions& opt) {
  const int n = d.n;
  GridSpec g(n);
  NewStress out;
  const bool vbar_zero = is_zero(glued.v);

  auto remove_mean = [&](VectorField& f) {
    Vec3 m = mean(f);
    double scale = max_norm(f);
    double mm = std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
    if (scale > 0) {
      if (mm > opt.mean_tol * scale) throw MeanDriftTooLarge("relative mean " + std::to_string(mm / scale));
      out.mean_drift = std::max(out.mean_drift, mm / scale);
    }
    for (int a = 0; a < 3; ++a)
      for (auto& x : f.c[a]) x -= m[a];
  };

  // Nash and transport arguments
  VectorField f_nash, f_trans;
  if (opt.materialize)
    f_trans = dtw;
  else
    f_trans = std::move(dtw);
  if (!vbar_zero) {
    f_nash = advect(w.w, glued.v);
    axpy(1.0, advect(glued.v, w.w), f_trans);
    remove_mean(f_nash);
  }
  remove_mean(f_trans);

  // oscillation argument div(w (x) w - Rbar), Rbar = sum_i rho_{q,i} Id - sum_i eta_i^2 Rbar_glued
  std::vector<double> rho_sum(n, 0.0), eta2_sum(n, 0.0);  // along x1
  for (std::size_t k = 0; k < d.pieces.size(); ++k)
    for (int x = 0; x < n; ++x) {
      rho_sum[x] += d.rho_i(k, x);
      eta2_sum[x] += d.pieces[k].eta[x] * d.pieces[k].eta[x];
    }
  std::array<std::vector<cplx>, 3> Fo;
  for (auto& c : Fo) c.assign(g.spec_size(), 0.0);
  {
    std::vector<double> P(g.size());
    for (int c = 0; c < 6; ++c) {
      int a = sym_pairs[c][0], b = sym_pairs[c][1];
      for (int z = 0; z < n; ++z)
        for (int y = 0; y < n; ++y)
          for (int x = 0; x < n; ++x) {
            std::size_t p = g.idx(x, y, z);
            double Rb = -eta2_sum[x] * glued.R.c[c][p] + (a == b ? rho_sum[x] : 0.0);
            P[p] = w.w.c[a][p] * w.w.c[b][p] - Rb;
          }
      auto F = fft_forward(P, n);
      auto da = spec_derivative(F, n, b);
      for (std::size_t s = 0; s < da.size(); ++s) Fo[a][s] += da[s];
      if (a != b) {
        auto db = spec_derivative(F, n, a);
        for (std::size_t s = 0; s < db.size(); ++s) Fo[b][s] += db[s];
      }
    }
  }
  VectorField f_osc;
  f_osc.n = n;
  for (int a = 0; a < 3; ++a) f_osc.c[a] = fft_inverse(Fo[a], n);
  for (auto& c : Fo) std::vector<cplx>().swap(c);

  out.nash = vbar_zero ? 0.0 : inverse_divergence_norms(f_nash, opt.alpha).holder;
  out.transport = inverse_divergence_norms(f_trans, opt.alpha).holder;
  out.oscillation = inverse_divergence_norms(f_osc, opt.alpha).holder;

  VectorField f = std::move(f_trans);
  if (!vbar_zero) axpy(1.0, f_nash, f);
  axpy(1.0, f_osc, f);
  f_nash = VectorField();
  f_osc = VectorField();
  f_trans = VectorField();

  if (!opt.materialize) {
    StressNorms s = inverse_divergence_norms(f, opt.alpha);
    out.R_sup = s.sup;
    out.R_holder = s.holder;
    out.absorbed_trace = s.trace_sup;
    return out;
  }

  SymTensorField raw = inverse_divergence(f);
  ScalarField tr = trace(raw);
  out.absorbed_trace = max_abs(tr.c[0]);
  out.R = traceless_part(raw);
  out.R.traceless = true;
  raw = SymTensorField();
  out.R_sup = max_norm(out.R);
  out.R_holder = holder_norm(out.R, opt.alpha);

  out.v = add(glued.v, w.w);
  out.dtv = add(dtvbar, dtw);
  out.p = ScalarField(n);
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        std::size_t p = g.idx(x, y, z);
        out.p.c[0][p] = glued.p.c[0][p] - rho_sum[x] - tr.c[0][p] / 3.0;
      }
  double m = mean(out.p);
  for (auto& x : out.p.c[0]) x -= m;
  return out;
}

EnergyCheck energy_check(const VectorField& v_next, const VectorField& vbar, const PerturbationResult& w,
                         const StressDecomp& d, const DerivedScales& s) {
  EnergyCheck c;
  c.t = d.t;
  c.gap = d.e - energy_integral(v_next);
  c.target = s.delta_q2 / 2;
  c.bound = std::sqrt(s.delta_q * s.delta_q1) * s.lambda_q / s.lambda_q1;
  c.ratio = std::abs(c.gap - c.target) / c.bound;
  c.cross = 2 * mean(dot(w.w, vbar));
  if (!w.w_o.c[0].empty()) {
    c.corrector = 2 * mean(dot(w.w_o, w.w_c)) + energy_integral(w.w_c);
    c.oscillatory = energy_integral(w.w_o) - 3 * d.rho_q;
  }
  return c;
}

}  // namespace onsager
