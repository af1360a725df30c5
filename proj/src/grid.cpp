#include "onsager/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>

#include "json.hpp"

namespace onsager {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct Plans {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

std::mutex plan_mutex;
std::map<int, Plans>& plan_cache() {
  static std::map<int, Plans> cache;
  return cache;
}

const Plans& plans_for(int n) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto& cache = plan_cache();
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GridSpec g(n);
  double* r = fftw_alloc_real(g.size());
  fftw_complex* c = fftw_alloc_complex(g.spec_size());
  Plans p;
  p.fwd = fftw_plan_dft_r2c_3d(n, n, n, r, c, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.inv = fftw_plan_dft_c2r_3d(n, n, n, c, r, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(r);
  fftw_free(c);
  return cache.emplace(n, p).first->second;
}

template <int C>
double comp_weight(int c) {
  if constexpr (C == 6) return (c == 1 || c == 2 || c == 4) ? 2.0 : 1.0;
  (void)c;
  return 1.0;
}

}  // namespace

const char* const sym_names[6] = {"xx", "xy", "xz", "yy", "yz", "zz"};

GridSpec::GridSpec(int n_) : n(n_) {
  if (n < 8 || (n & (n - 1)) != 0) throw InvalidGrid("n must be a power of two >= 8, got " + std::to_string(n));
}

std::vector<cplx> fft_forward(const std::vector<double>& f, int n) {
  GridSpec g(n);
  if (f.size() != g.size()) throw InvalidGrid("field size does not match grid");
  std::vector<cplx> out(g.spec_size());
  fftw_execute_dft_r2c(plans_for(n).fwd, const_cast<double*>(f.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double s = 1.0 / double(g.size());
  for (auto& z : out) z *= s;
  return out;
}

std::vector<double> fft_inverse(const std::vector<cplx>& F, int n) {
  GridSpec g(n);
  std::vector<cplx> tmp = F;  // c2r destroys its input
  std::vector<double> out(g.size());
  fftw_execute_dft_c2r(plans_for(n).inv, reinterpret_cast<fftw_complex*>(tmp.data()), out.data());
  return out;
}

Waves::Waves(int n_) : n(n_) {
  GridSpec g(n);
  k1.resize(g.nh());
  m1.resize(g.nh());
  k2.resize(n);
  m2.resize(n);
  for (int i = 0; i < g.nh(); ++i) {
    m1[i] = i;
    k1[i] = (i == n / 2) ? 0.0 : two_pi * i;
  }
  for (int i = 0; i < n; ++i) {
    m2[i] = g.mode(i);
    k2[i] = (i == n / 2) ? 0.0 : two_pi * g.mode(i);
  }
  k3 = k2;
  m3 = m2;
}

const Waves& waves(int n) {
  static std::mutex m;
  static std::map<int, std::unique_ptr<Waves>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto& p = cache[n];
  if (!p) p = std::make_unique<Waves>(n);
  return *p;
}

std::vector<cplx> spec_derivative(const std::vector<cplx>& F, int n, int axis) {
  const Waves& w = waves(n);
  GridSpec g(n);
  std::vector<cplx> out(F.size());
  const int nh = g.nh();
  for (int i3 = 0; i3 < n; ++i3)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < nh; ++i1) {
        std::size_t s = g.sidx(i1, i2, i3);
        double k = axis == 0 ? w.k1[i1] : axis == 1 ? w.k2[i2] : w.k3[i3];
        out[s] = cplx(0.0, k) * F[s];
      }
  return out;
}

void spec_zero_nyquist(std::vector<cplx>& F, int n) {
  GridSpec g(n);
  const int h = n / 2;
  for (int i3 = 0; i3 < n; ++i3)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < g.nh(); ++i1)
        if (i1 == h || i2 == h || i3 == h) F[g.sidx(i1, i2, i3)] = 0.0;
}

void spec_zero_mean(std::vector<cplx>& F) { F[0] = 0.0; }

double mean(const std::vector<double>& f) {
  // pairwise-ish accumulation in long double keeps the mean accurate at n = 256
  long double s = 0.0L;
  for (double x : f) s += x;
  return double(s / (long double)f.size());
}

double mean(const ScalarField& f) { return mean(f.c[0]); }

Vec3 mean(const VectorField& v) { return {mean(v.c[0]), mean(v.c[1]), mean(v.c[2])}; }

double max_abs(const std::vector<double>& f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

template <int C>
double max_norm(const Field<C>& f) {
  double m = 0.0;
  const std::size_t N = f.size();
  for (std::size_t p = 0; p < N; ++p) {
    double s = 0.0;
    for (int c = 0; c < C; ++c) s += comp_weight<C>(c) * f.c[c][p] * f.c[c][p];
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

template double max_norm<1>(const Field<1>&);
template double max_norm<3>(const Field<3>&);
template double max_norm<6>(const Field<6>&);
template double max_norm<9>(const Field<9>&);

ScalarField derivative(const ScalarField& f, int axis) {
  ScalarField r;
  r.n = f.n;
  r.c[0] = fft_inverse(spec_derivative(fft_forward(f.c[0], f.n), f.n, axis), f.n);
  return r;
}

VectorField gradient(const ScalarField& f) {
  VectorField r;
  r.n = f.n;
  auto F = fft_forward(f.c[0], f.n);
  for (int a = 0; a < 3; ++a) r.c[a] = fft_inverse(spec_derivative(F, f.n, a), f.n);
  return r;
}

ScalarField divergence(const VectorField& v) {
  GridSpec g(v.n);
  std::vector<cplx> acc(g.spec_size(), 0.0);
  for (int a = 0; a < 3; ++a) {
    auto d = spec_derivative(fft_forward(v.c[a], v.n), v.n, a);
    for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += d[s];
  }
  ScalarField r;
  r.n = v.n;
  r.c[0] = fft_inverse(acc, v.n);
  return r;
}

VectorField divergence(const SymTensorField& R) {
  GridSpec g(R.n);
  std::array<std::vector<cplx>, 6> S;
  for (int c = 0; c < 6; ++c) S[c] = fft_forward(R.c[c], R.n);
  VectorField r;
  r.n = R.n;
  for (int a = 0; a < 3; ++a) {
    std::vector<cplx> acc(g.spec_size(), 0.0);
    for (int b = 0; b < 3; ++b) {
      auto d = spec_derivative(S[sym_index(a, b)], R.n, b);
      for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += d[s];
    }
    r.c[a] = fft_inverse(acc, R.n);
  }
  return r;
}

VectorField curl(const VectorField& v) {
  GridSpec g(v.n);
  std::array<std::vector<cplx>, 3> S;
  for (int a = 0; a < 3; ++a) S[a] = fft_forward(v.c[a], v.n);
  VectorField r;
  r.n = v.n;
  for (int a = 0; a < 3; ++a) {
    int b = (a + 1) % 3, c = (a + 2) % 3;
    auto d1 = spec_derivative(S[c], v.n, b);
    auto d2 = spec_derivative(S[b], v.n, c);
    for (std::size_t s = 0; s < d1.size(); ++s) d1[s] -= d2[s];
    r.c[a] = fft_inverse(d1, v.n);
  }
  return r;
}

MatrixField jacobian(const VectorField& v) {
  MatrixField J;
  J.n = v.n;
  for (int a = 0; a < 3; ++a) {
    auto F = fft_forward(v.c[a], v.n);
    for (int b = 0; b < 3; ++b) J.c[a * 3 + b] = fft_inverse(spec_derivative(F, v.n, b), v.n);
  }
  return J;
}

ScalarField laplacian(const ScalarField& f) {
  GridSpec g(f.n);
  const Waves& w = waves(f.n);
  auto F = fft_forward(f.c[0], f.n);
  for (int i3 = 0; i3 < f.n; ++i3)
    for (int i2 = 0; i2 < f.n; ++i2)
      for (int i1 = 0; i1 < g.nh(); ++i1) {
        double k2 = w.k1[i1] * w.k1[i1] + w.k2[i2] * w.k2[i2] + w.k3[i3] * w.k3[i3];
        F[g.sidx(i1, i2, i3)] *= -k2;
      }
  ScalarField r;
  r.n = f.n;
  r.c[0] = fft_inverse(F, f.n);
  return r;
}

ScalarField laplacian_inverse(const ScalarField& f) {
  GridSpec g(f.n);
  const double scale = std::max(max_abs(f.c[0]), 1e-300);
  const double m = mean(f);
  if (std::abs(m) > 1e-10 * scale) throw NonZeroMean("laplacian_inverse: mean " + std::to_string(m));
  const Waves& w = waves(f.n);
  auto F = fft_forward(f.c[0], f.n);
  for (int i3 = 0; i3 < f.n; ++i3)
    for (int i2 = 0; i2 < f.n; ++i2)
      for (int i1 = 0; i1 < g.nh(); ++i1) {
        std::size_t s = g.sidx(i1, i2, i3);
        if (w.nyquist(i1, i2, i3) || s == 0) {
          F[s] = 0.0;
          continue;
        }
        double k2 = w.k1[i1] * w.k1[i1] + w.k2[i2] * w.k2[i2] + w.k3[i3] * w.k3[i3];
        F[s] /= -k2;
      }
  ScalarField r;
  r.n = f.n;
  r.c[0] = fft_inverse(F, f.n);
  return r;
}

ScalarField trace(const SymTensorField& R) {
  ScalarField t(R.n);
  for (std::size_t p = 0; p < t.size(); ++p) t.c[0][p] = R.c[0][p] + R.c[3][p] + R.c[5][p];
  return t;
}

SymTensorField traceless_part(const SymTensorField& R) {
  SymTensorField r = R;
  for (std::size_t p = 0; p < r.size(); ++p) {
    double t = (R.c[0][p] + R.c[3][p] + R.c[5][p]) / 3.0;
    r.c[0][p] -= t;
    r.c[3][p] -= t;
    r.c[5][p] = -(r.c[0][p] + r.c[3][p]);  // the trace sums to exactly zero in floating point
  }
  r.traceless = true;
  return r;
}

SymTensorField outer(const VectorField& u, const VectorField& v) {
  SymTensorField r(u.n);
  for (int c = 0; c < 6; ++c) {
    int a = sym_pairs[c][0], b = sym_pairs[c][1];
    for (std::size_t p = 0; p < r.size(); ++p)
      r.c[c][p] = 0.5 * (u.c[a][p] * v.c[b][p] + u.c[b][p] * v.c[a][p]);
  }
  return r;
}

SymTensorField outer_traceless(const VectorField& u, const VectorField& v) {
  return traceless_part(outer(u, v));
}

ScalarField dot(const VectorField& u, const VectorField& v) {
  ScalarField r(u.n);
  for (std::size_t p = 0; p < r.size(); ++p)
    r.c[0][p] = u.c[0][p] * v.c[0][p] + u.c[1][p] * v.c[1][p] + u.c[2][p] * v.c[2][p];
  return r;
}

VectorField advect(const VectorField& u, const VectorField& v) {
  VectorField r(u.n);
  for (int a = 0; a < 3; ++a) {
    auto F = fft_forward(v.c[a], v.n);
    for (int b = 0; b < 3; ++b) {
      auto d = fft_inverse(spec_derivative(F, v.n, b), v.n);
      for (std::size_t p = 0; p < d.size(); ++p) r.c[a][p] += u.c[b][p] * d[p];
    }
  }
  return r;
}

ScalarField band_limit(const ScalarField& f) {
  auto F = fft_forward(f.c[0], f.n);
  spec_zero_nyquist(F, f.n);
  ScalarField r;
  r.n = f.n;
  r.c[0] = fft_inverse(F, f.n);
  return r;
}

VectorField band_limit(const VectorField& f) {
  VectorField r;
  r.n = f.n;
  for (int a = 0; a < 3; ++a) {
    auto F = fft_forward(f.c[a], f.n);
    spec_zero_nyquist(F, f.n);
    r.c[a] = fft_inverse(F, f.n);
  }
  return r;
}

// ---------------------------------------------------------------- sampling

namespace {

inline double wrap01(double x) {
  x -= std::floor(x);
  return x >= 1.0 ? 0.0 : x;
}

double trilinear(const std::vector<double>& f, int n, const Vec3& x) {
  GridSpec g(n);
  int i0[3];
  double t[3];
  for (int a = 0; a < 3; ++a) {
    double u = wrap01(x[a]) * n;
    int i = int(std::floor(u));
    t[a] = u - i;
    i0[a] = i % n;
  }
  double s = 0.0;
  for (int dz = 0; dz < 2; ++dz)
    for (int dy = 0; dy < 2; ++dy)
      for (int dx = 0; dx < 2; ++dx) {
        double w = (dx ? t[0] : 1 - t[0]) * (dy ? t[1] : 1 - t[1]) * (dz ? t[2] : 1 - t[2]);
        s += w * f[g.idx((i0[0] + dx) % n, (i0[1] + dy) % n, (i0[2] + dz) % n)];
      }
  return s;
}

double lagrange6(const std::vector<double>& f, int n, const Vec3& x) {
  GridSpec g(n);
  int base[3];
  double w[3][6];
  for (int a = 0; a < 3; ++a) {
    double u = wrap01(x[a]) * n;
    int i = int(std::floor(u));
    double t = u - i;
    base[a] = i - 2;
    for (int m = 0; m < 6; ++m) {
      double num = 1.0, den = 1.0;
      for (int l = 0; l < 6; ++l) {
        if (l == m) continue;
        num *= (t - (l - 2));
        den *= double(m - l);
      }
      w[a][m] = num / den;
    }
  }
  double s = 0.0;
  for (int mz = 0; mz < 6; ++mz) {
    int k = ((base[2] + mz) % n + n) % n;
    for (int my = 0; my < 6; ++my) {
      int j = ((base[1] + my) % n + n) % n;
      double wyz = w[2][mz] * w[1][my];
      const double* row = &f[g.idx(0, j, k)];
      double sx = 0.0;
      for (int mx = 0; mx < 6; ++mx) sx += w[0][mx] * row[((base[0] + mx) % n + n) % n];
      s += wyz * sx;
    }
  }
  return s;
}

}  // namespace

double spectral_eval(const std::vector<cplx>& F, int n, const Vec3& x) {
  GridSpec g(n);
  const int nh = g.nh();
  std::vector<cplx> e1(nh), e2(n), e3(n);
  for (int i = 0; i < nh; ++i) e1[i] = std::polar(1.0, two_pi * i * x[0]);
  for (int i = 0; i < n; ++i) {
    e2[i] = std::polar(1.0, two_pi * g.mode(i) * x[1]);
    e3[i] = std::polar(1.0, two_pi * g.mode(i) * x[2]);
  }
  const int h = n / 2;
  cplx total = 0.0;
  for (int i3 = 0; i3 < n; ++i3) {
    if (i3 == h) continue;
    cplx s3 = 0.0;
    for (int i2 = 0; i2 < n; ++i2) {
      if (i2 == h) continue;
      const cplx* row = &F[g.sidx(0, i2, i3)];
      cplx s2 = row[0];
      for (int i1 = 1; i1 < h; ++i1) s2 += 2.0 * row[i1] * e1[i1];
      s3 += s2 * e2[i2];
    }
    total += s3 * e3[i3];
  }
  return total.real();
}

std::vector<double> sample_at(const ScalarField& f, const std::vector<Vec3>& points,
                              SampleMethod method) {
  std::vector<double> out(points.size());
  if (method == SampleMethod::spectral) {
    auto F = fft_forward(f.c[0], f.n);
    for (std::size_t p = 0; p < points.size(); ++p) out[p] = spectral_eval(F, f.n, points[p]);
  } else if (method == SampleMethod::lagrange6) {
    for (std::size_t p = 0; p < points.size(); ++p) out[p] = lagrange6(f.c[0], f.n, points[p]);
  } else {
    for (std::size_t p = 0; p < points.size(); ++p) out[p] = trilinear(f.c[0], f.n, points[p]);
  }
  return out;
}

std::vector<Vec3> sample_at(const VectorField& f, const std::vector<Vec3>& points,
                            SampleMethod method) {
  std::vector<Vec3> out(points.size());
  for (int a = 0; a < 3; ++a) {
    ScalarField s;
    s.n = f.n;
    s.c[0] = f.c[a];
    auto v = sample_at(s, points, method);
    for (std::size_t p = 0; p < points.size(); ++p) out[p][a] = v[p];
  }
  return out;
}

// ---------------------------------------------------------------- Hoelder

std::vector<std::array<int, 3>> holder_offsets(int n) {
  std::vector<std::array<int, 3>> H;
  for (int s = 1; s <= n / 4; s *= 2) {
    H.push_back({s, 0, 0});
    H.push_back({0, s, 0});
    H.push_back({0, 0, s});
    H.push_back({s, s, 0});
    H.push_back({s, -s, 0});
    H.push_back({s, 0, s});
    H.push_back({s, 0, -s});
    H.push_back({0, s, s});
    H.push_back({0, s, -s});
  }
  return H;
}

namespace {

template <int C>
double alpha_seminorm(const std::array<std::vector<double>, C>& d, int n, double alpha) {
  GridSpec g(n);
  double best = 0.0;
  for (const auto& h : holder_offsets(n)) {
    double len = std::sqrt(double(h[0] * h[0] + h[1] * h[1] + h[2] * h[2])) / n;
    double inv = 1.0 / std::pow(len, alpha);
    double m = 0.0;
    for (int k = 0; k < n; ++k) {
      int k2 = ((k + h[2]) % n + n) % n;
      for (int j = 0; j < n; ++j) {
        int j2 = ((j + h[1]) % n + n) % n;
        std::size_t r0 = g.idx(0, j, k), r1 = g.idx(0, j2, k2);
        for (int i = 0; i < n; ++i) {
          int i2 = ((i + h[0]) % n + n) % n;
          double s = 0.0;
          for (int c = 0; c < C; ++c) {
            double diff = d[c][r1 + i2] - d[c][r0 + i];
            s += comp_weight<C>(c) * diff * diff;
          }
          m = std::max(m, s);
        }
      }
    }
    best = std::max(best, std::sqrt(m) * inv);
  }
  return best;
}

std::vector<std::array<int, 3>> multi_indices(int order) {
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a <= order; ++a)
    for (int b = 0; a + b <= order; ++b) out.push_back({a, b, order - a - b});
  return out;
}

std::vector<cplx> spec_multi_derivative(const std::vector<cplx>& F, int n, const std::array<int, 3>& th) {
  std::vector<cplx> out = F;
  for (int axis = 0; axis < 3; ++axis)
    for (int r = 0; r < th[axis]; ++r) out = spec_derivative(out, n, axis);
  return out;
}

}  // namespace

template <int C>
HolderReport holder(const Field<C>& f, double s) {
  if (s < 0 || s >= 4.0) throw Error("holder: s must lie in [0, 4)");
  const int m = int(std::floor(s + 1e-12));
  const double alpha = std::max(0.0, s - m);
  HolderReport rep;
  rep.sup = max_norm(f);
  std::array<std::vector<cplx>, C> S;
  if (m > 0) for (int c = 0; c < C; ++c) S[c] = fft_forward(f.c[c], f.n);
  for (int j = 0; j <= m; ++j) {
    double best = 0.0, best_semi = 0.0;
    for (const auto& th : multi_indices(j)) {
      Field<C> d;
      d.n = f.n;
      if (j == 0) {
        d = f;
      } else {
        for (int c = 0; c < C; ++c) d.c[c] = fft_inverse(spec_multi_derivative(S[c], f.n, th), f.n);
      }
      best = std::max(best, max_norm(d));
      if (j == m && alpha > 0) best_semi = std::max(best_semi, alpha_seminorm<C>(d.c, f.n, alpha));
    }
    rep.integer.push_back(best);
    if (j == m) rep.seminorm = best_semi;
  }
  rep.norm = rep.seminorm;
  for (double x : rep.integer) rep.norm += x;
  return rep;
}

template <int C>
double holder_seminorm(const Field<C>& f, double s) {
  HolderReport r = holder(f, s);
  const int m = int(std::floor(s + 1e-12));
  return (s - m > 0) ? r.seminorm : r.integer.back();
}

template HolderReport holder<1>(const Field<1>&, double);
template HolderReport holder<3>(const Field<3>&, double);
template HolderReport holder<6>(const Field<6>&, double);
template HolderReport holder<9>(const Field<9>&, double);
template double holder_seminorm<1>(const Field<1>&, double);
template double holder_seminorm<3>(const Field<3>&, double);
template double holder_seminorm<6>(const Field<6>&, double);

// ---------------------------------------------------------------- random fields

namespace {

std::vector<double> random_component(int n, int kmax, std::mt19937_64& rng, bool zero_mean) {
  GridSpec g(n);
  kmax = std::min(kmax, n / 2 - 1);
  std::normal_distribution<double> N01(0.0, 1.0);
  std::vector<cplx> F(g.spec_size(), 0.0);
  for (int i3 = 0; i3 < n; ++i3)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < g.nh(); ++i1) {
        int m1 = i1, m2 = g.mode(i2), m3 = g.mode(i3);
        if (m1 > kmax || std::abs(m2) > kmax || std::abs(m3) > kmax) continue;
        double a = N01(rng), b = N01(rng);
        double amp = 1.0 / (1.0 + double(m1 * m1 + m2 * m2 + m3 * m3));
        F[g.sidx(i1, i2, i3)] = amp * cplx(a, b);
      }
  if (zero_mean) F[0] = 0.0;
  // c2r keeps only the Hermitian part of the m1 = 0 plane, so r is real and band limited
  auto r = fft_inverse(F, n);
  double s = max_abs(r);
  if (s > 0)
    for (auto& x : r) x /= s;
  return r;
}

}  // namespace

ScalarField random_scalar(int n, int kmax, std::uint64_t seed, bool zero_mean) {
  std::mt19937_64 rng(seed);
  ScalarField f;
  f.n = n;
  f.c[0] = random_component(n, kmax, rng, zero_mean);
  return f;
}

VectorField random_vector(int n, int kmax, std::uint64_t seed, bool zero_mean) {
  std::mt19937_64 rng(seed);
  VectorField f;
  f.n = n;
  for (int a = 0; a < 3; ++a) f.c[a] = random_component(n, kmax, rng, zero_mean);
  return f;
}

VectorField random_solenoidal(int n, int kmax, std::uint64_t seed) {
  VectorField v = random_vector(n, kmax, seed, true);
  GridSpec g(n);
  const Waves& w = waves(n);
  std::array<std::vector<cplx>, 3> S;
  for (int a = 0; a < 3; ++a) S[a] = fft_forward(v.c[a], n);
  for (int i3 = 0; i3 < n; ++i3)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < g.nh(); ++i1) {
        std::size_t s = g.sidx(i1, i2, i3);
        double k[3] = {w.k1[i1], w.k2[i2], w.k3[i3]};
        double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (k2 == 0.0) continue;
        cplx kd = k[0] * S[0][s] + k[1] * S[1][s] + k[2] * S[2][s];
        for (int a = 0; a < 3; ++a) S[a][s] -= k[a] * kd / k2;
      }
  for (int a = 0; a < 3; ++a) v.c[a] = fft_inverse(S[a], n);
  return v;
}

// ---------------------------------------------------------------- snapshots

template <int C>
void write_snapshot(const std::string& dir, const std::string& name, const Field<C>& f,
                    const std::vector<std::string>& component_names, const std::string& stage,
                    double time) {
  static_assert(std::endian::native == std::endian::little, "snapshot format is little-endian");
  std::filesystem::create_directories(dir);
  nlohmann::json man;
  man["n"] = f.n;
  man["stage"] = stage;
  man["time"] = time;
  man["layout"] = "x-fastest float64 little-endian";
  man["components"] = nlohmann::json::array();
  for (int c = 0; c < C; ++c) {
    std::string cname = c < int(component_names.size()) ? component_names[c] : std::to_string(c);
    std::string file = name + "_" + cname + ".bin";
    std::ofstream os(std::filesystem::path(dir) / file, std::ios::binary);
    os.write(reinterpret_cast<const char*>(f.c[c].data()), std::streamsize(f.c[c].size() * sizeof(double)));
    man["components"].push_back({{"name", cname}, {"file", file}});
  }
  std::ofstream js(std::filesystem::path(dir) / (name + ".json"));
  js << man.dump(2) << "\n";
}

template <int C>
Field<C> read_snapshot(const std::string& dir, const std::string& name) {
  std::ifstream js(std::filesystem::path(dir) / (name + ".json"));
  if (!js) throw Error("snapshot manifest not found: " + name);
  nlohmann::json man = nlohmann::json::parse(js);
  int n = man.at("n").get<int>();
  Field<C> f(n);
  const auto& comps = man.at("components");
  if (int(comps.size()) != C) throw Error("snapshot component count mismatch: " + name);
  for (int c = 0; c < C; ++c) {
    std::ifstream is(std::filesystem::path(dir) / comps[c].at("file").get<std::string>(), std::ios::binary);
    is.read(reinterpret_cast<char*>(f.c[c].data()), std::streamsize(f.c[c].size() * sizeof(double)));
    if (!is) throw Error("snapshot data truncated: " + name);
  }
  return f;
}

#define SNAP(C)                                                                                     \
  template void write_snapshot<C>(const std::string&, const std::string&, const Field<C>&,          \
                                  const std::vector<std::string>&, const std::string&, double);     \
  template Field<C> read_snapshot<C>(const std::string&, const std::string&);
SNAP(1)
SNAP(3)
SNAP(6)
SNAP(9)
#undef SNAP

}  // namespace onsager
