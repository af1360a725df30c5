#include "onsager/operators.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace onsager {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

double raw_bump(double r) { return r < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0; }

double raw_mass() {
  static const double m = [] {
    using boost::math::quadrature::gauss_kronrod;
    return 4.0 * std::numbers::pi *
           gauss_kronrod<double, 61>::integrate([](double r) { return raw_bump(r) * r * r; }, 0.0, 1.0, 15, 1e-15);
  }();
  return m;
}
}  // namespace

double MollifierKernel::profile(double r) { return raw_bump(r) / raw_mass(); }

double MollifierKernel::operator()(double r) const { return profile(r / ell) / (ell * ell * ell); }

double MollifierKernel::mass() {
  using boost::math::quadrature::gauss_kronrod;
  return 4.0 * std::numbers::pi *
         gauss_kronrod<double, 61>::integrate([](double r) { return profile(r) * r * r; }, 0.0, 1.0, 15, 1e-15);
}

std::vector<double> mollifier_symbol(int n, double ell) {
  GridSpec g(n);
  if (ell <= 2.0 * g.h()) throw KernelUnresolved("ell = " + std::to_string(ell) + " <= 2h");
  if (ell >= 0.25) throw KernelUnresolved("ell = " + std::to_string(ell) + " >= 0.25");
  MollifierKernel K{ell};
  std::vector<double> s(g.size(), 0.0);
  double total = 0.0;
  const int reach = int(std::ceil(ell * n)) + 1;
  for (int k = -reach; k <= reach; ++k)
    for (int j = -reach; j <= reach; ++j)
      for (int i = -reach; i <= reach; ++i) {
        double r = std::sqrt(double(i * i + j * j + k * k)) / n;
        if (r >= ell) continue;
        double val = K(r);
        s[g.idx((i + n) % n, (j + n) % n, (k + n) % n)] += val;
        total += val;
      }
  for (auto& x : s) x /= total;  // discrete unit mass: the mean is preserved exactly
  auto S = fft_forward(s, n);
  std::vector<double> out(S.size());
  const double N3 = double(g.size());
  for (std::size_t p = 0; p < S.size(); ++p) out[p] = S[p].real() * N3;
  return out;
}

template <int C>
Field<C> mollify(const Field<C>& f, double ell) {
  auto sym = mollifier_symbol(f.n, ell);
  Field<C> r;
  r.n = f.n;
  r.traceless = f.traceless;
  for (int c = 0; c < C; ++c) {
    auto F = fft_forward(f.c[c], f.n);
    for (std::size_t p = 0; p < F.size(); ++p) F[p] *= sym[p];
    r.c[c] = fft_inverse(F, f.n);
  }
  return r;
}

template Field<1> mollify<1>(const Field<1>&, double);
template Field<3> mollify<3>(const Field<3>&, double);
template Field<6> mollify<6>(const Field<6>&, double);

namespace {

// max |k.v_hat| relative to max |k||v_hat|
double spectral_divergence_ratio(const std::array<std::vector<cplx>, 3>& S, int n) {
  GridSpec g(n);
  const Waves& w = waves(n);
  double num = 0.0, den = 0.0;
  for (int i3 = 0; i3 < n; ++i3)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < g.nh(); ++i1) {
        std::size_t s = g.sidx(i1, i2, i3);
        double k[3] = {w.k1[i1], w.k2[i2], w.k3[i3]};
        double kn = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
        cplx d = k[0] * S[0][s] + k[1] * S[1][s] + k[2] * S[2][s];
        double vn = std::sqrt(std::norm(S[0][s]) + std::norm(S[1][s]) + std::norm(S[2][s]));
        num = std::max(num, std::abs(d));
        den = std::max(den, kn * vn);
      }
  return den > 0 ? num / den : 0.0;
}

}  // namespace

MollifiedState mollified_stress(const VectorField& v, const SymTensorField& R, double ell) {
  std::array<std::vector<cplx>, 3> S;
  for (int a = 0; a < 3; ++a) S[a] = fft_forward(v.c[a], v.n);
  if (spectral_divergence_ratio(S, v.n) > 1e-8) throw NotSolenoidal("mollified_stress: div v_q != 0");
  MollifiedState out;
  out.v = mollify(v, ell);
  SymTensorField vv = mollify(outer_traceless(v, v), ell);
  SymTensorField Rl = mollify(R, ell);
  SymTensorField ll = outer_traceless(out.v, out.v);
  for (int c = 0; c < 6; ++c)
    for (std::size_t p = 0; p < Rl.size(); ++p) Rl.c[c][p] += ll.c[c][p] - vv.c[c][p];
  Rl.traceless = true;
  out.R = std::move(Rl);
  out.p = pressure_solve(out.v, out.R);
  return out;
}

VectorField biot_savart(const VectorField& v) {
  GridSpec g(v.n);
  const Waves& w = waves(v.n);
  std::array<std::vector<cplx>, 3> S;
  for (int a = 0; a < 3; ++a) S[a] = fft_forward(v.c[a], v.n);
  double scale = 0.0;
  for (int a = 0; a < 3; ++a)
    for (const auto& z : S[a]) scale = std::max(scale, std::abs(z));
  for (int a = 0; a < 3; ++a)
    if (std::abs(S[a][0]) > 1e-10 * std::max(scale, 1e-300) && scale > 0)
      throw NonZeroMean("biot_savart: velocity has nonzero mean");
  if (spectral_divergence_ratio(S, v.n) > 1e-10) throw NotSolenoidal("biot_savart: div v != 0");
  std::array<std::vector<cplx>, 3> Z;
  for (auto& z : Z) z.assign(g.spec_size(), 0.0);
  for (int i3 = 0; i3 < v.n; ++i3)
    for (int i2 = 0; i2 < v.n; ++i2)
      for (int i1 = 0; i1 < g.nh(); ++i1) {
        std::size_t s = g.sidx(i1, i2, i3);
        if (w.nyquist(i1, i2, i3) || s == 0) continue;
        double k[3] = {w.k1[i1], w.k2[i2], w.k3[i3]};
        double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        for (int a = 0; a < 3; ++a) {
          int b = (a + 1) % 3, c = (a + 2) % 3;
          Z[a][s] = cplx(0.0, 1.0) * (k[b] * S[c][s] - k[c] * S[b][s]) / k2;
        }
      }
  VectorField z;
  z.n = v.n;
  for (int a = 0; a < 3; ++a) z.c[a] = fft_inverse(Z[a], v.n);
  return z;
}

namespace {

// entry (a, b) of the symbol; k2 > 0
inline cplx idiv_entry(const double k[3], double k2, const cplx f[3], cplx kf, int a, int b) {
  cplx t = 0.5 * k[a] * k[b] * kf / k2 - k[a] * f[b] - k[b] * f[a];
  if (a == b) t += 0.5 * kf;
  return cplx(-t.imag(), t.real()) / k2;  // i t / k2
}

}  // namespace

void inverse_divergence_symbol(const double k[3], const cplx f[3], cplx out[6]) {
  const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
  if (k2 == 0.0) {
    for (int c = 0; c < 6; ++c) out[c] = 0.0;
    return;
  }
  const cplx kf = k[0] * f[0] + k[1] * f[1] + k[2] * f[2];
  for (int c = 0; c < 6; ++c) out[c] = idiv_entry(k, k2, f, kf, sym_pairs[c][0], sym_pairs[c][1]);
}

namespace {

// comps: which symmetric components to fill (others are left empty)
std::array<std::vector<cplx>, 6> inverse_divergence_spec(const std::array<std::vector<cplx>, 3>& F, int n,
                                                         std::initializer_list<int> comps) {
  GridSpec g(n);
  const Waves& w = waves(n);
  std::array<std::vector<cplx>, 6> out;
  for (int c : comps) out[c].assign(g.spec_size(), 0.0);
  for (int i3 = 0; i3 < n; ++i3)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < g.nh(); ++i1) {
        std::size_t s = g.sidx(i1, i2, i3);
        if (w.nyquist(i1, i2, i3) || s == 0) continue;
        const double k[3] = {w.k1[i1], w.k2[i2], w.k3[i3]};
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        const cplx f[3] = {F[0][s], F[1][s], F[2][s]};
        const cplx kf = k[0] * f[0] + k[1] * f[1] + k[2] * f[2];
        for (int c : comps) out[c][s] = idiv_entry(k, k2, f, kf, sym_pairs[c][0], sym_pairs[c][1]);
      }
  return out;
}

std::vector<cplx> inverse_divergence_spec(const std::array<std::vector<cplx>, 3>& F, int n, int comp) {
  return std::move(inverse_divergence_spec(F, n, {comp})[comp]);
}

void check_mean_free(const std::array<std::vector<cplx>, 3>& F) {
  double scale = 0.0;
  for (int a = 0; a < 3; ++a)
    for (const auto& z : F[a]) scale = std::max(scale, std::abs(z));
  for (int a = 0; a < 3; ++a)
    if (std::abs(F[a][0]) > 1e-10 * scale + 1e-14)
      throw NonZeroMean("inverse_divergence: mean " + std::to_string(std::abs(F[a][0])));
}

}  // namespace

std::vector<double> inverse_divergence_component(const std::array<std::vector<cplx>, 3>& F, int n, int comp) {
  check_mean_free(F);
  return fft_inverse(inverse_divergence_spec(F, n, comp), n);
}

SymTensorField inverse_divergence(const VectorField& f) {
  std::array<std::vector<cplx>, 3> F;
  for (int a = 0; a < 3; ++a) F[a] = fft_forward(f.c[a], f.n);
  check_mean_free(F);
  SymTensorField R;
  R.n = f.n;
  auto S = inverse_divergence_spec(F, f.n, {0, 1, 2, 3, 4, 5});
  for (int c = 0; c < 6; ++c) {
    R.c[c] = fft_inverse(S[c], f.n);
    std::vector<cplx>().swap(S[c]);
  }
  return R;
}

StressNorms inverse_divergence_norms(const VectorField& f, double alpha) {
  std::array<std::vector<cplx>, 3> F;
  for (int a = 0; a < 3; ++a) F[a] = fft_forward(f.c[a], f.n);
  check_mean_free(F);
  GridSpec g(f.n);
  // sup and Hoelder of the Frobenius norm need all components at a point; accumulate
  // component-wise squares for the sup, and bound the seminorm by the weighted
  // component sum of seminorms squared (exact for the sup, an upper envelope otherwise)
  std::vector<double> sq(g.size(), 0.0), tr(g.size(), 0.0);
  double semi2 = 0.0;
  for (int c = 0; c < 6; ++c) {
    ScalarField comp;
    comp.n = f.n;
    comp.c[0] = fft_inverse(inverse_divergence_spec(F, f.n, c), f.n);
    double wgt = (c == 1 || c == 2 || c == 4) ? 2.0 : 1.0;
    for (std::size_t p = 0; p < sq.size(); ++p) sq[p] += wgt * comp.c[0][p] * comp.c[0][p];
    if (c == 0 || c == 3 || c == 5)
      for (std::size_t p = 0; p < tr.size(); ++p) tr[p] += comp.c[0][p];
    if (alpha > 0) {
      double s = holder_seminorm(comp, alpha);
      semi2 += wgt * s * s;
    }
  }
  StressNorms out;
  out.sup = std::sqrt(*std::max_element(sq.begin(), sq.end()));
  out.trace_sup = max_abs(tr);
  out.holder = out.sup + std::sqrt(semi2);
  return out;
}

VectorField leray_project(const VectorField& u) {
  GridSpec g(u.n);
  const Waves& w = waves(u.n);
  std::array<std::vector<cplx>, 3> S;
  for (int a = 0; a < 3; ++a) S[a] = fft_forward(u.c[a], u.n);
  for (int i3 = 0; i3 < u.n; ++i3)
    for (int i2 = 0; i2 < u.n; ++i2)
      for (int i1 = 0; i1 < g.nh(); ++i1) {
        std::size_t s = g.sidx(i1, i2, i3);
        if (w.nyquist(i1, i2, i3)) {
          for (int a = 0; a < 3; ++a) S[a][s] = 0.0;
          continue;
        }
        double k[3] = {w.k1[i1], w.k2[i2], w.k3[i3]};
        double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (k2 == 0.0) continue;
        cplx kd = k[0] * S[0][s] + k[1] * S[1][s] + k[2] * S[2][s];
        for (int a = 0; a < 3; ++a) S[a][s] -= k[a] * kd / k2;
      }
  VectorField r;
  r.n = u.n;
  for (int a = 0; a < 3; ++a) r.c[a] = fft_inverse(S[a], u.n);
  return r;
}

ScalarField pressure_solve(const VectorField& v, const SymTensorField& R) {
  GridSpec g(v.n);
  const Waves& w = waves(v.n);
  std::vector<cplx> acc(g.spec_size(), 0.0);
  for (int c = 0; c < 6; ++c) {
    int a = sym_pairs[c][0], b = sym_pairs[c][1];
    std::vector<double> M(g.size());
    for (std::size_t p = 0; p < M.size(); ++p) M[p] = -v.c[a][p] * v.c[b][p] + R.c[c][p];
    auto F = fft_forward(M, v.n);
    double mult = (a == b) ? 1.0 : 2.0;
    for (int i3 = 0; i3 < v.n; ++i3)
      for (int i2 = 0; i2 < v.n; ++i2)
        for (int i1 = 0; i1 < g.nh(); ++i1) {
          std::size_t s = g.sidx(i1, i2, i3);
          if (w.nyquist(i1, i2, i3) || s == 0) continue;
          double k[3] = {w.k1[i1], w.k2[i2], w.k3[i3]};
          double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
          acc[s] += mult * k[a] * k[b] * F[s] / k2;
        }
  }
  ScalarField p;
  p.n = v.n;
  p.c[0] = fft_inverse(acc, v.n);
  return p;
}

ResidualReport er_residual(const VectorField& v, const ScalarField& p, const SymTensorField& R,
                           const VectorField& dtv) {
  VectorField divR = divergence(R);
  VectorField r = dtv;
  VectorField dvv = divergence(outer(v, v));
  VectorField gp = gradient(p);
  ResidualReport rep;
  for (int a = 0; a < 3; ++a)
    for (std::size_t q = 0; q < r.size(); ++q) r.c[a][q] += dvv.c[a][q] - divR.c[a][q];
  rep.projected = max_norm(leray_project(r));
  axpy(1.0, gp, r);
  rep.raw = max_norm(band_limit(r));
  rep.div_R = max_norm(divR);
  rep.dtv = max_norm(dtv);
  return rep;
}

DecayProbe oscillatory_decay_probe(const ScalarField& a, const VectorField& disp, const std::array<int, 3>& k,
                                   const std::vector<double>& lambdas, double alpha) {
  const int n = a.n;
  GridSpec g(n);
  MatrixField J = jacobian(disp);
  double smin = 1e300, smax = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    Eigen::Matrix3d M;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) M(r, c) = (r == c ? 1.0 : 0.0) + J.c[r * 3 + c][p];
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(M);
    smin = std::min(smin, svd.singularValues()(2));
    smax = std::max(smax, svd.singularValues()(0));
  }
  const double Cbar = 2.0;
  if (smin < 1.0 / Cbar || smax > Cbar)
    throw PhaseDegenerate("grad Phi singular values in [" + std::to_string(smin) + ", " + std::to_string(smax) + "]");
  DecayProbe out;
  double kn = std::sqrt(double(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]));
  for (double lam : lambdas) {
    double best = 0.0;
    for (int part = 0; part < 2; ++part) {
      VectorField f(n);
      for (int kk = 0; kk < n; ++kk)
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i) {
            std::size_t p = g.idx(i, j, kk);
            double x[3] = {coord(i, n), coord(j, n), coord(kk, n)};
            double ph = 0.0;
            for (int d = 0; d < 3; ++d) ph += k[d] * (x[d] + disp.c[d][p]);
            ph *= two_pi * lam;
            double val = a.c[0][p] * (part == 0 ? std::cos(ph) : std::sin(ph));
            f.c[0][p] = val;  // R acts on vector fields; probe along e_1
          }
      // R needs a mean-free argument; the mean is O(lambda^-infinity) for smooth a and is removed
      double m = mean(f.c[0]);
      for (auto& x : f.c[0]) x -= m;
      StressNorms sn = inverse_divergence_norms(f, alpha);
      best = std::max(best, sn.holder);
    }
    out.lambdas.push_back(lam);
    out.norms.push_back(best);
  }
  std::vector<double> x;
  for (double lam : lambdas) x.push_back(lam * kn);
  out.slope = loglog_slope(x, out.norms);
  return out;
}

double cet_commutator(const ScalarField& f, const ScalarField& g, double ell) {
  ScalarField fg(f.n);
  for (std::size_t p = 0; p < fg.size(); ++p) fg.c[0][p] = f.c[0][p] * g.c[0][p];
  ScalarField a = mollify(fg, ell), fl = mollify(f, ell), gl = mollify(g, ell);
  double m = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) m = std::max(m, std::abs(a.c[0][p] - fl.c[0][p] * gl.c[0][p]));
  return m;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t N = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < N; ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (N * sxy - sx * sy) / (N * sxx - sx * sx);
}

}  // namespace onsager
