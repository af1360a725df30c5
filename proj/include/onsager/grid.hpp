#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "onsager/errors.hpp"

namespace onsager {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

// Periodic grid on [0,1)^3. Physical arrays are x-fastest: i + n*(j + n*k).
// Spectral arrays hold the r2c half along x: m1 in [0, n/2], shape [n][n][n/2+1].
struct GridSpec {
  int n = 64;

  GridSpec() = default;
  explicit GridSpec(int n);

  std::size_t size() const { return std::size_t(n) * n * n; }
  int nh() const { return n / 2 + 1; }
  std::size_t spec_size() const { return std::size_t(n) * n * nh(); }
  double h() const { return 1.0 / n; }
  std::size_t idx(int i, int j, int k) const {
    return std::size_t(i) + std::size_t(n) * (std::size_t(j) + std::size_t(n) * k);
  }
  std::size_t sidx(int i1, int i2, int i3) const {
    return std::size_t(i1) + std::size_t(nh()) * (std::size_t(i2) + std::size_t(n) * i3);
  }
  int mode(int i) const { return i <= n / 2 ? i : i - n; }
  bool operator==(const GridSpec& o) const { return n == o.n; }
};

template <int C>
struct Field {
  int n = 0;
  std::array<std::vector<double>, C> c;
  bool traceless = false;  // only meaningful for C == 6

  Field() = default;
  explicit Field(int n_, double value = 0.0) : n(n_) {
    for (auto& v : c) v.assign(std::size_t(n_) * n_ * n_, value);
  }
  GridSpec grid() const { return GridSpec(n); }
  std::size_t size() const { return c[0].size(); }
};

template <int C>
struct Spectrum {
  int n = 0;
  std::array<std::vector<cplx>, C> c;

  Spectrum() = default;
  explicit Spectrum(int n_) : n(n_) {
    for (auto& v : c) v.assign(GridSpec(n_).spec_size(), cplx(0.0, 0.0));
  }
};

using ScalarField = Field<1>;
using VectorField = Field<3>;
using SymTensorField = Field<6>;
using MatrixField = Field<9>;  // row-major a*3+b

// symmetric component order: xx, xy, xz, yy, yz, zz
constexpr int sym_index(int a, int b) {
  if (a > b) { int t = a; a = b; b = t; }
  return a == 0 ? b : (a == 1 ? 2 + b : 5);
}
constexpr std::array<std::array<int, 2>, 6> sym_pairs{{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};
extern const char* const sym_names[6];

// ---- transforms ----
std::vector<cplx> fft_forward(const std::vector<double>& f, int n);
std::vector<double> fft_inverse(const std::vector<cplx>& F, int n);

template <int C>
Spectrum<C> transform(const Field<C>& f) {
  Spectrum<C> s;
  s.n = f.n;
  for (int a = 0; a < C; ++a) s.c[a] = fft_forward(f.c[a], f.n);
  return s;
}

template <int C>
Field<C> transform(const Spectrum<C>& s) {
  Field<C> f;
  f.n = s.n;
  for (int a = 0; a < C; ++a) f.c[a] = fft_inverse(s.c[a], s.n);
  return f;
}

// Wavenumbers 2*pi*m per axis with the Nyquist entry set to zero.
struct Waves {
  int n;
  std::vector<double> k1, k2, k3;
  std::vector<int> m1, m2, m3;
  explicit Waves(int n);
  bool nyquist(int i1, int i2, int i3) const {
    return i1 == n / 2 || i2 == n / 2 || i3 == n / 2;
  }
  const std::vector<double>& k(int axis) const { return axis == 0 ? k1 : axis == 1 ? k2 : k3; }
};

const Waves& waves(int n);

// ---- spectral calculus on single components ----
std::vector<cplx> spec_derivative(const std::vector<cplx>& F, int n, int axis);
void spec_zero_nyquist(std::vector<cplx>& F, int n);
void spec_zero_mean(std::vector<cplx>& F);

// ---- physical calculus ----
double mean(const std::vector<double>& f);
double mean(const ScalarField& f);
Vec3 mean(const VectorField& v);
double max_abs(const std::vector<double>& f);
template <int C>
double max_norm(const Field<C>& f);  // pointwise Euclidean / Frobenius max

ScalarField derivative(const ScalarField& f, int axis);
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
VectorField divergence(const SymTensorField& R);
VectorField curl(const VectorField& v);
MatrixField jacobian(const VectorField& v);  // (a,b) = d_b v_a
ScalarField laplacian(const ScalarField& f);
ScalarField laplacian_inverse(const ScalarField& f);
SymTensorField traceless_part(const SymTensorField& R);
ScalarField trace(const SymTensorField& R);
SymTensorField outer(const VectorField& u, const VectorField& v);           // sym(u (x) v)
SymTensorField outer_traceless(const VectorField& u, const VectorField& v);  // u (x)o v
ScalarField dot(const VectorField& u, const VectorField& v);
VectorField advect(const VectorField& u, const VectorField& v);  // (u . grad) v
ScalarField band_limit(const ScalarField& f);  // drop Nyquist modes
VectorField band_limit(const VectorField& f);

// ---- grid arithmetic ----
template <int C>
Field<C>& axpy(double a, const Field<C>& x, Field<C>& y) {
  for (int c = 0; c < C; ++c)
    for (std::size_t p = 0; p < y.c[c].size(); ++p) y.c[c][p] += a * x.c[c][p];
  return y;
}
template <int C>
Field<C> scaled(double a, Field<C> x) {
  for (auto& v : x.c)
    for (auto& e : v) e *= a;
  return x;
}
template <int C>
Field<C> sub(const Field<C>& x, const Field<C>& y) {
  Field<C> r = x;
  return axpy(-1.0, y, r);
}
template <int C>
Field<C> add(const Field<C>& x, const Field<C>& y) {
  Field<C> r = x;
  return axpy(1.0, y, r);
}

// ---- sampling ----
enum class SampleMethod { trilinear, spectral, lagrange6 };
std::vector<double> sample_at(const ScalarField& f, const std::vector<Vec3>& points,
                              SampleMethod method);
std::vector<Vec3> sample_at(const VectorField& f, const std::vector<Vec3>& points,
                            SampleMethod method);
double spectral_eval(const std::vector<cplx>& F, int n, const Vec3& x);

// ---- Hoelder norms ----
struct HolderReport {
  double sup = 0;                 // ||f||_0
  std::vector<double> integer;    // [f]_j for j = 0..m
  double seminorm = 0;            // [f]_{m+alpha}, zero when alpha == 0
  double norm = 0;                // sum per the appendix definition
};
std::vector<std::array<int, 3>> holder_offsets(int n);
template <int C>
HolderReport holder(const Field<C>& f, double s);
template <int C>
double holder_norm(const Field<C>& f, double s) { return holder(f, s).norm; }
template <int C>
double holder_seminorm(const Field<C>& f, double s);

// ---- random band-limited fields ----
ScalarField random_scalar(int n, int kmax, std::uint64_t seed, bool zero_mean = true);
VectorField random_vector(int n, int kmax, std::uint64_t seed, bool zero_mean = true);
VectorField random_solenoidal(int n, int kmax, std::uint64_t seed);

// ---- coordinates ----
inline double coord(int i, int n) { return double(i) / n; }

// ---- snapshots ----
template <int C>
void write_snapshot(const std::string& dir, const std::string& name, const Field<C>& f,
                    const std::vector<std::string>& component_names, const std::string& stage,
                    double time);
template <int C>
Field<C> read_snapshot(const std::string& dir, const std::string& name);

}  // namespace onsager
