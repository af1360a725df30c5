#include "onsager/mikado.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <cstdio>
#include <random>

namespace onsager {

namespace {
constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;
const double r2 = std::sqrt(2.0);

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

using Vec6e = Eigen::Matrix<double, 6, 1>;
Vec6e as_eigen(const Vec6& v) {
  Vec6e e;
  for (int i = 0; i < 6; ++i) e(i) = v[i];
  return e;
}
}  // namespace

Vec6 to_vec6(const Sym6& S) { return {S[0], S[3], S[5], r2 * S[1], r2 * S[2], r2 * S[4]}; }
Sym6 from_vec6(const Vec6& v) { return {v[0], v[3] / r2, v[4] / r2, v[1], v[5] / r2, v[2]}; }
Sym6 sym_identity() { return {1, 0, 0, 1, 0, 1}; }
double frobenius(const Sym6& S) {
  return std::sqrt(S[0] * S[0] + S[3] * S[3] + S[5] * S[5] + 2 * (S[1] * S[1] + S[2] * S[2] + S[4] * S[4]));
}

// ---------------------------------------------------------------- profile

double TubeProfile::psi(double s) const {
  double u = 1.0 - s * s;
  return u > 0 ? std::exp(-c / u) : 0.0;
}

double TubeProfile::dpsi_over_s(double s) const {
  double u = 1.0 - s * s;
  if (u <= 0) return 0.0;
  return -2.0 * c * std::exp(-c / u) / (u * u);
}

double TubeProfile::lap(double s) const {
  double u = 1.0 - s * s;
  if (u <= 0) return 0.0;
  double p = std::exp(-c / u);
  if (p == 0.0) return 0.0;
  double u2 = u * u;
  return p * (4 * c * c * s * s / (u2 * u2) - 4 * c / u2 - 8 * c * s * s / (u2 * u));
}

double TubeProfile::lap_square_moment() const {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate([this](double s) { double l = lap(s); return l * l * s; }, 0.0, 1.0,
                                              10, 1e-13);
}

double TubeProfile::hankel(double x) const {
  using boost::math::quadrature::gauss_kronrod;
  // Hankel transform of a planar Laplacian: -x^2 times that of psi
  double I = gauss_kronrod<double, 61>::integrate(
      [this, x](double s) { return psi(s) * boost::math::cyl_bessel_j(0, x * s) * s; }, 0.0, 1.0, 10, 1e-13);
  return -x * x * I;
}

// ---------------------------------------------------------------- geometry

std::vector<std::array<int, 3>> default_directions() {
  return {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, -1, 0}, {0, 1, 1}, {0, 1, -1}, {1, 0, 1}, {1, 0, -1}};
}

std::vector<Vec3> default_base_points() {
  static const int table[9][3] = {{541, 121, 286}, {658, 733, 569}, {981, 973, 696},
                                  {806, 18, 911},  {752, 634, 114}, {469, 354, 261},
                                  {142, 527, 124}, {976, 399, 401}, {390, 626, 186}};
  std::vector<Vec3> out;
  for (auto& r : table) out.push_back({r[0] / 1024.0, r[1] / 1024.0, r[2] / 1024.0});
  return out;
}

namespace {

std::array<Vec3, 2> transverse_basis(const std::array<int, 3>& f) {
  std::vector<int> nz;
  for (int a = 0; a < 3; ++a)
    if (f[a] != 0) nz.push_back(a);
  std::array<Vec3, 2> b{};
  if (nz.size() == 1) {
    int a = nz[0];
    b[0][(a + 1) % 3] = 1.0;
    b[1][(a + 2) % 3] = 1.0;
    return b;
  }
  int p = nz[0], q = nz[1], r = 3 - p - q;
  double s = double(f[q]) / double(f[p]);
  b[0][p] = 0.5;
  b[0][q] = -0.5 * s;
  b[1][r] = 1.0;
  return b;
}

int gcd3(int a, int b, int c) { return std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c)); }

}  // namespace

double line_distance(const TubeSpec& a, const TubeSpec& b) {
  const auto& f = a.direction;
  const auto& g = b.direction;
  std::array<int, 3> m = {f[1] * g[2] - f[2] * g[1], f[2] * g[0] - f[0] * g[2], f[0] * g[1] - f[1] * g[0]};
  int G = gcd3(m[0], m[1], m[2]);
  if (G == 0) throw DisjointnessFailed("parallel tube directions");
  double v = 0.0;
  for (int i = 0; i < 3; ++i) v += (b.base_point[i] - a.base_point[i]) * m[i];
  double r = v - G * std::round(v / G);
  return std::abs(r) / std::sqrt(double(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]));
}

double MikadoFamily::tube_distance(int j, const Vec3& xi, Vec3* y) const {
  const TubeSpec& t = tubes[j];
  Vec3 d = {xi[0] - t.base_point[0], xi[1] - t.base_point[1], xi[2] - t.base_point[2]};
  Vec3 yy{0, 0, 0};
  for (int e = 0; e < 2; ++e) {
    const Vec3& b = t.transverse[e];
    double bb = dot3(b, b);
    double a = dot3(d, b) / bb;
    a -= std::round(a);
    for (int i = 0; i < 3; ++i) yy[i] += a * b[i];
  }
  if (y) *y = yy;
  return std::sqrt(dot3(yy, yy));
}

void MikadoFamily::tube_fields(const Vec3& xi, double* phi, Vec3* U) const {
  for (std::size_t j = 0; j < tubes.size(); ++j) {
    const TubeSpec& t = tubes[j];
    Vec3 y;
    double rho = tube_distance(int(j), xi, &y);
    double s = rho / t.radius;
    if (s >= 1.0) {
      if (phi) phi[j] = 0.0;
      if (U) U[j] = {0, 0, 0};
      continue;
    }
    if (phi) phi[j] = t.amplitude * profile.lap(s);
    if (U) {
      double g = t.amplitude * profile.dpsi_over_s(s);
      Vec3 fy = cross(t.fhat, y);
      U[j] = {g * fy[0], g * fy[1], g * fy[2]};
    }
  }
}

// ---------------------------------------------------------------- coefficient maps

std::vector<double> MikadoFamily::coefficients(const Sym6& R) const {
  const std::size_t J = dyads.size();
  std::vector<double> c(J);
  Vec6 r = to_vec6(R);
  if (map == CoeffMapKind::affine) {
    Vec6 e = to_vec6(sym_identity());
    for (std::size_t j = 0; j < J; ++j) {
      double s = gamma[j];
      for (int i = 0; i < 6; ++i) s += L[j][i] * (r[i] - e[i]);
      c[j] = s;
    }
    return c;
  }
  // entropic map: c_j = exp(<mu, v_j>) with sum_j c_j v_j = vec(R); Newton on the convex dual
  Vec6e target = as_eigen(r);
  Vec6e mu = std::log(1.0 / 3.0) * as_eigen(to_vec6(sym_identity()));
  std::vector<Vec6e> V(J);
  for (std::size_t j = 0; j < J; ++j) V[j] = as_eigen(dyads[j]);
  auto dual = [&](const Vec6e& m) {
    double s = -m.dot(target);
    for (std::size_t j = 0; j < J; ++j) s += std::exp(m.dot(V[j]));
    return s;
  };
  auto gradient = [&](const Vec6e& m) {
    Vec6e F = -target;
    for (std::size_t j = 0; j < J; ++j) F += std::exp(m.dot(V[j])) * V[j];
    return F;
  };
  const double scale = std::max(1.0, target.norm());
  for (int it = 0; it < 100; ++it) {
    Vec6e F = gradient(mu);
    if (F.norm() <= 1e-14 * scale) break;
    Eigen::Matrix<double, 6, 6> H = Eigen::Matrix<double, 6, 6>::Zero();
    for (std::size_t j = 0; j < J; ++j) H += std::exp(mu.dot(V[j])) * V[j] * V[j].transpose();
    Vec6e step = H.ldlt().solve(-F);
    // accept the full step when it reduces the gradient, else backtrack on the dual
    if (gradient(mu + step).norm() < F.norm()) {
      mu += step;
      continue;
    }
    double t = 0.5, f0 = dual(mu);
    while (dual(mu + t * step) > f0 + 1e-4 * t * F.dot(step) && t > 1e-12) t *= 0.5;
    mu += t * step;
  }
  for (std::size_t j = 0; j < J; ++j) c[j] = std::exp(mu.dot(V[j]));
  Vec6e resid = -target;
  for (std::size_t j = 0; j < J; ++j) resid += c[j] * V[j];
  if (!(resid.norm() <= 1e-11 * scale)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", resid.norm() / scale);
    throw ROutOfRange(std::string("coefficient map residual ") + buf);
  }
  return c;
}

double affine_positivity_radius(const MikadoFamily& fam) {
  // min over the sphere ||R - Id|| = r of gamma_j + <l_j, E> is gamma_j - r |l_j|
  double r = 1e300;
  for (std::size_t j = 0; j < fam.L.size(); ++j) r = std::min(r, fam.gamma[j] / as_eigen(fam.L[j]).norm());
  return r;
}

double cone_inradius(const MikadoFamily& fam) {
  const int J = int(fam.dyads.size());
  Vec6e id = as_eigen(to_vec6(sym_identity()));
  double best = 1e300;
  std::vector<int> sel(5);
  std::vector<bool> mask(J, false);
  std::fill(mask.begin(), mask.begin() + 5, true);
  do {
    Eigen::Matrix<double, 5, 6> A;
    int r = 0;
    for (int j = 0; j < J; ++j)
      if (mask[j]) A.row(r++) = as_eigen(fam.dyads[j]).transpose();
    Eigen::JacobiSVD<Eigen::Matrix<double, 5, 6>> svd(A, Eigen::ComputeFullV);
    if (svd.singularValues()(4) < 1e-10) continue;
    Vec6e y = svd.matrixV().col(5);
    for (int sgn : {1, -1}) {
      Vec6e yy = double(sgn) * y;
      bool ok = yy.dot(id) > 1e-12;
      for (int j = 0; j < J && ok; ++j) ok = yy.dot(as_eigen(fam.dyads[j])) >= -1e-12;
      if (ok) best = std::min(best, yy.dot(id) / yy.norm());
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

// ---------------------------------------------------------------- build

MikadoFamily build_family(double radius, int verification_n, CoeffMapKind map, double profile_c) {
  if (!(radius > 0 && radius <= 0.06)) throw DisjointnessFailed("radius must lie in (0, 0.06]");
  MikadoFamily fam;
  fam.map = map;
  fam.profile.c = profile_c;
  const double I2 = fam.profile.lap_square_moment();
  auto dirs = default_directions();
  auto base = default_base_points();
  for (std::size_t j = 0; j < dirs.size(); ++j) {
    TubeSpec t;
    t.direction = dirs[j];
    double len = std::sqrt(double(dirs[j][0] * dirs[j][0] + dirs[j][1] * dirs[j][1] + dirs[j][2] * dirs[j][2]));
    t.length = len;
    t.fhat = {dirs[j][0] / len, dirs[j][1] / len, dirs[j][2] / len};
    t.base_point = base[j];
    t.radius = radius;
    t.amplitude = 1.0 / std::sqrt(len * two_pi * radius * radius * I2);
    t.transverse = transverse_basis(dirs[j]);
    fam.tubes.push_back(t);
  }
  // disjointness: analytic axis distances, then sampling with a one-cell margin
  double sep = 1e300;
  for (std::size_t a = 0; a < fam.tubes.size(); ++a)
    for (std::size_t b = a + 1; b < fam.tubes.size(); ++b) sep = std::min(sep, line_distance(fam.tubes[a], fam.tubes[b]));
  fam.min_separation = sep;
  const double h = 1.0 / verification_n;
  if (sep < 2 * radius + h) throw DisjointnessFailed("axis separation " + std::to_string(sep));
  for (int k = 0; k < verification_n; ++k)
    for (int j = 0; j < verification_n; ++j)
      for (int i = 0; i < verification_n; ++i) {
        Vec3 x = {double(i) / verification_n, double(j) / verification_n, double(k) / verification_n};
        int hits = 0;
        for (std::size_t t = 0; t < fam.tubes.size(); ++t)
          if (fam.tube_distance(int(t), x) < radius + 0.5 * h) ++hits;
        if (hits > 1) throw DisjointnessFailed("two tubes within one cell at a sample point");
      }
  // frame data
  Eigen::Matrix<double, 6, Eigen::Dynamic> D(6, fam.tubes.size());
  for (std::size_t j = 0; j < fam.tubes.size(); ++j) {
    const Vec3& f = fam.tubes[j].fhat;
    Sym6 S = {f[0] * f[0], f[0] * f[1], f[0] * f[2], f[1] * f[1], f[1] * f[2], f[2] * f[2]};
    fam.dyads.push_back(to_vec6(S));
    D.col(j) = as_eigen(fam.dyads.back());
  }
  fam.gamma.assign(fam.tubes.size(), 1.0 / 3.0);
  Eigen::MatrixXd Lm = D.transpose() * (D * D.transpose()).inverse();
  for (std::size_t j = 0; j < fam.tubes.size(); ++j) {
    Vec6 row;
    for (int i = 0; i < 6; ++i) row[i] = Lm(j, i);
    fam.L.push_back(row);
  }
  fam.positivity_radius = (map == CoeffMapKind::affine) ? affine_positivity_radius(fam) : cone_inradius(fam);
  if (fam.positivity_radius < 0.5)
    throw PositivityRadiusTooSmall("certified radius " + std::to_string(fam.positivity_radius) + " < 1/2");
  return fam;
}

// ---------------------------------------------------------------- evaluation

namespace {
void check_range(const MikadoFamily& fam, const Sym6& R) {
  Sym6 E = R;
  E[0] -= 1;
  E[3] -= 1;
  E[5] -= 1;
  if (frobenius(E) > fam.positivity_radius) throw ROutOfRange("|R - Id| = " + std::to_string(frobenius(E)));
}
}  // namespace

std::vector<Vec3> eval_W(const MikadoFamily& fam, const Sym6& R, const std::vector<Vec3>& xi) {
  check_range(fam, R);
  auto c = fam.coefficients(R);
  const std::size_t J = fam.tubes.size();
  std::vector<double> phi(J);
  std::vector<Vec3> out(xi.size(), Vec3{0, 0, 0});
  for (std::size_t p = 0; p < xi.size(); ++p) {
    fam.tube_fields(xi[p], phi.data(), nullptr);
    for (std::size_t j = 0; j < J; ++j) {
      if (phi[j] == 0.0) continue;
      double a = std::sqrt(c[j]) * phi[j];
      for (int d = 0; d < 3; ++d) out[p][d] += a * fam.tubes[j].fhat[d];
    }
  }
  return out;
}

std::vector<Vec3> eval_U(const MikadoFamily& fam, const Sym6& R, const std::vector<Vec3>& xi) {
  check_range(fam, R);
  auto c = fam.coefficients(R);
  const std::size_t J = fam.tubes.size();
  std::vector<Vec3> U(J);
  std::vector<Vec3> out(xi.size(), Vec3{0, 0, 0});
  for (std::size_t p = 0; p < xi.size(); ++p) {
    fam.tube_fields(xi[p], nullptr, U.data());
    for (std::size_t j = 0; j < J; ++j) {
      double a = std::sqrt(c[j]);
      for (int d = 0; d < 3; ++d) out[p][d] += a * U[j][d];
    }
  }
  return out;
}

namespace {
std::vector<Vec3> grid_points(int n) {
  std::vector<Vec3> pts;
  pts.reserve(std::size_t(n) * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) pts.push_back({double(i) / n, double(j) / n, double(k) / n});
  return pts;
}
}  // namespace

VectorField sample_W(const MikadoFamily& fam, const Sym6& R, int n) {
  auto vals = eval_W(fam, R, grid_points(n));
  VectorField f(n);
  for (std::size_t p = 0; p < vals.size(); ++p)
    for (int d = 0; d < 3; ++d) f.c[d][p] = vals[p][d];
  return f;
}

VectorField sample_U(const MikadoFamily& fam, const Sym6& R, int n) {
  auto vals = eval_U(fam, R, grid_points(n));
  VectorField f(n);
  for (std::size_t p = 0; p < vals.size(); ++p)
    for (int d = 0; d < 3; ++d) f.c[d][p] = vals[p][d];
  return f;
}

// ---------------------------------------------------------------- verification

TubeMoments tube_moments(const MikadoFamily& fam, int n) {
  const std::size_t J = fam.tubes.size();
  std::vector<std::array<long double, 6>> m2(J);
  std::vector<std::array<long double, 3>> m1(J);
  for (auto& a : m2) a.fill(0.0L);
  for (auto& a : m1) a.fill(0.0L);
  std::vector<double> phi(J);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        fam.tube_fields({double(i) / n, double(j) / n, double(k) / n}, phi.data(), nullptr);
        for (std::size_t t = 0; t < J; ++t) {
          if (phi[t] == 0.0) continue;
          const Vec3& f = fam.tubes[t].fhat;
          for (int c = 0; c < 6; ++c) m2[t][c] += (long double)phi[t] * phi[t] * f[sym_pairs[c][0]] * f[sym_pairs[c][1]];
          for (int d = 0; d < 3; ++d) m1[t][d] += (long double)phi[t] * f[d];
        }
      }
  const long double N = (long double)n * n * n;
  TubeMoments M;
  for (std::size_t t = 0; t < J; ++t) {
    Sym6 s;
    Vec3 v;
    for (int c = 0; c < 6; ++c) s[c] = double(m2[t][c] / N);
    for (int d = 0; d < 3; ++d) v[d] = double(m1[t][d] / N);
    M.second.push_back(s);
    M.first.push_back(v);
  }
  return M;
}

std::vector<Sym6> random_ball(int count, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N01(0.0, 1.0);
  std::uniform_real_distribution<double> U01(0.0, 1.0);
  std::vector<Sym6> out;
  for (int i = 0; i < count; ++i) {
    Vec6 e;
    double nrm = 0;
    for (auto& x : e) {
      x = N01(rng);
      nrm += x * x;
    }
    nrm = std::sqrt(nrm);
    double r = radius * std::pow(U01(rng), 1.0 / 6.0);
    for (auto& x : e) x *= r / nrm;
    Sym6 E = from_vec6(e);
    E[0] += 1;
    E[3] += 1;
    E[5] += 1;
    out.push_back(E);
  }
  return out;
}

VerifyReport verify_family(const MikadoFamily& fam, int n, const std::vector<Sym6>& tests, int positivity_samples,
                           bool spectral_checks) {
  VerifyReport rep;
  rep.n_quad = n;
  TubeMoments M = tube_moments(fam, n);
  for (const Sym6& R : tests) {
    auto c = fam.coefficients(R);
    Sym6 S{};
    Vec3 m{0, 0, 0};
    for (std::size_t j = 0; j < c.size(); ++j) {
      for (int q = 0; q < 6; ++q) S[q] += c[j] * M.second[j][q];
      for (int d = 0; d < 3; ++d) m[d] += std::sqrt(c[j]) * M.first[j][d];
    }
    for (int q = 0; q < 6; ++q) rep.max_second_moment_error = std::max(rep.max_second_moment_error, std::abs(S[q] - R[q]));
    rep.max_first_moment = std::max(rep.max_first_moment, std::sqrt(dot3(m, m)));
  }
  rep.positivity_samples = positivity_samples;
  rep.positivity_min = 1e300;
  for (const Sym6& R : random_ball(positivity_samples, 0.5, 20240611)) {
    auto c = fam.coefficients(R);
    rep.positivity_min = std::min(rep.positivity_min, *std::min_element(c.begin(), c.end()));
  }
  if (!spectral_checks) return rep;

  GridSpec g(n);
  const Waves& w = waves(n);
  VectorField W = sample_W(fam, sym_identity(), n);
  std::array<std::vector<cplx>, 3> S;
  for (int a = 0; a < 3; ++a) S[a] = fft_forward(W.c[a], n);
  // div W and the gradient scale
  {
    std::vector<cplx> acc(g.spec_size(), 0.0);
    double grad_max = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        auto d = spec_derivative(S[a], n, b);
        if (a == b)
          for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += d[s];
        grad_max = std::max(grad_max, max_abs(fft_inverse(d, n)));
      }
    rep.div_W_rel = max_abs(fft_inverse(acc, n)) / grad_max;
  }
  // shell maxima of |W_k|
  {
    std::vector<double> shell(n, 0.0);
    for (int i3 = 0; i3 < n; ++i3)
      for (int i2 = 0; i2 < n; ++i2)
        for (int i1 = 0; i1 < g.nh(); ++i1) {
          std::size_t s = g.sidx(i1, i2, i3);
          double m = std::sqrt(double(w.m1[i1] * w.m1[i1] + w.m2[i2] * w.m2[i2] + w.m3[i3] * w.m3[i3]));
          int sh = int(std::lround(m));
          if (sh >= n) continue;
          double amp = std::sqrt(std::norm(S[0][s]) + std::norm(S[1][s]) + std::norm(S[2][s]));
          shell[sh] = std::max(shell[sh], amp);
        }
    std::vector<double> xs, ys;
    for (int sh = 4; sh <= n / 4; ++sh)
      if (shell[sh] > 1e-14) {
        xs.push_back(sh);
        ys.push_back(shell[sh]);
      }
    if (xs.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
      }
      double N = double(xs.size());
      rep.decay_slope = (N * sxy - sx * sy) / (N * sxx - sx * sx);
    }
  }
  for (auto& s : S) std::vector<cplx>().swap(s);
  // W (x) W spectra, div(W (x) W), C_k k
  std::array<std::vector<cplx>, 6> C;
  double prod_grad_max = 0.0;
  for (int c = 0; c < 6; ++c) {
    int a = sym_pairs[c][0], b = sym_pairs[c][1];
    std::vector<double> P(g.size());
    for (std::size_t p = 0; p < P.size(); ++p) P[p] = W.c[a][p] * W.c[b][p];
    C[c] = fft_forward(P, n);
  }
  VectorField().c.swap(W.c);
  double div_max = 0.0;
  for (int a = 0; a < 3; ++a) {
    std::vector<cplx> acc(g.spec_size(), 0.0);
    for (int b = 0; b < 3; ++b) {
      auto d = spec_derivative(C[sym_index(a, b)], n, b);
      prod_grad_max = std::max(prod_grad_max, max_abs(fft_inverse(d, n)));
      for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += d[s];
    }
    div_max = std::max(div_max, max_abs(fft_inverse(acc, n)));
  }
  rep.div_WW_rel = div_max / prod_grad_max;
  // 20 largest nonzero modes of W (x) W
  std::vector<std::pair<double, std::size_t>> mags;
  for (int i3 = 0; i3 < n; ++i3)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < g.nh(); ++i1) {
        std::size_t s = g.sidx(i1, i2, i3);
        if (s == 0 || w.nyquist(i1, i2, i3)) continue;
        double m = 0;
        for (int c = 0; c < 6; ++c) m += ((c == 1 || c == 2 || c == 4) ? 2.0 : 1.0) * std::norm(C[c][s]);
        mags.push_back({std::sqrt(m), s});
      }
  std::partial_sort(mags.begin(), mags.begin() + std::min<std::size_t>(20, mags.size()), mags.end(),
                    [](auto& x, auto& y) { return x.first > y.first; });
  for (std::size_t r = 0; r < std::min<std::size_t>(20, mags.size()); ++r) {
    std::size_t s = mags[r].second;
    int i1 = int(s % g.nh()), i2 = int((s / g.nh()) % n), i3 = int(s / (std::size_t(g.nh()) * n));
    double k[3] = {double(w.m1[i1]), double(w.m2[i2]), double(w.m3[i3])};
    double kn = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    double ck = 0;
    for (int a = 0; a < 3; ++a) {
      cplx t = 0;
      for (int b = 0; b < 3; ++b) t += C[sym_index(a, b)][s] * k[b];
      ck += std::norm(t);
    }
    rep.Ck_k_rel = std::max(rep.Ck_k_rel, std::sqrt(ck) / (mags[r].first * kn));
  }
  return rep;
}

// ---------------------------------------------------------------- Fourier data and M

cplx tube_fourier(const MikadoFamily& fam, int j, const std::array<int, 3>& k, int comp) {
  const TubeSpec& t = fam.tubes[j];
  int kf = k[0] * t.direction[0] + k[1] * t.direction[1] + k[2] * t.direction[2];
  if (kf != 0) return 0.0;
  double kn = std::sqrt(double(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]));
  double H = two_pi * t.amplitude * t.radius * t.radius * fam.profile.hankel(two_pi * kn * t.radius);
  double ph = -two_pi * (k[0] * t.base_point[0] + k[1] * t.base_point[1] + k[2] * t.base_point[2]);
  return t.fhat[comp] * t.length * H * std::polar(1.0, ph);
}

double lattice_sum_inverse_fourth(int kmax) {
  long double s = 0.0L;
  const long double K2 = (long double)kmax * kmax;
  for (int a = -kmax; a <= kmax; ++a)
    for (int b = -kmax; b <= kmax; ++b)
      for (int c = -kmax; c <= kmax; ++c) {
        long double r2v = (long double)a * a + (long double)b * b + (long double)c * c;
        if (r2v == 0 || r2v > K2) continue;
        s += 1.0L / (r2v * r2v);
      }
  return double(s) + 4.0 * pi / kmax;
}

MConstant constant_M(const MikadoFamily& fam, double c0, int kmax) {
  MConstant out;
  const std::size_t J = fam.tubes.size();
  // largest coefficient each tube takes on the closed ball B_{1/2}(Id), measured
  std::vector<double> cmax(J, 0.0);
  auto samples = random_ball(4000, 0.5, 99);
  for (std::size_t j = 0; j < J; ++j)
    for (double sgn : {1.0, -1.0}) {
      Vec6 e = fam.dyads[j];
      for (auto& x : e) x *= 0.5 * sgn * (1 - 1e-9);
      Sym6 E = from_vec6(e);
      E[0] += 1;
      E[3] += 1;
      E[5] += 1;
      samples.push_back(E);
    }
  for (const Sym6& R : samples) {
    auto c = fam.coefficients(R);
    for (std::size_t j = 0; j < J; ++j) cmax[j] = std::max(cmax[j], c[j]);
  }
  std::map<long, double> hank;
  const long K2 = long(kmax) * kmax;
  for (int a = -kmax; a <= kmax; ++a)
    for (int b = -kmax; b <= kmax; ++b)
      for (int c = -kmax; c <= kmax; ++c) {
        long q = long(a) * a + long(b) * b + long(c) * c;
        if (q == 0 || q > K2) continue;
        double bound = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
          const auto& f = fam.tubes[j].direction;
          if (a * f[0] + b * f[1] + c * f[2] != 0) continue;
          auto it = hank.find(q);
          if (it == hank.end())
            it = hank.emplace(q, fam.profile.hankel(two_pi * std::sqrt(double(q)) * fam.tubes[j].radius)).first;
          const TubeSpec& t = fam.tubes[j];
          double amp = std::abs(two_pi * t.amplitude * t.radius * t.radius * it->second) * t.length;
          bound += std::sqrt(cmax[j]) * amp;
        }
        out.C_bar = std::max(out.C_bar, double(q) * double(q) * bound);
      }
  out.M_bar = out.C_bar / std::sqrt(c0);
  out.lattice_sum = lattice_sum_inverse_fourth(kmax);
  out.M = 64.0 * out.M_bar * out.lattice_sum;
  return out;
}

}  // namespace onsager
