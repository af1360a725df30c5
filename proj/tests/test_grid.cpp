#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "onsager/grid.hpp"

using namespace onsager;
constexpr double pi = std::numbers::pi;

namespace {

ScalarField from_fn(int n, auto f) {
  ScalarField s(n);
  GridSpec g(n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) s.c[0][g.idx(i, j, k)] = f(coord(i, n), coord(j, n), coord(k, n));
  return s;
}

double rel_err(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0, den = 0;
  for (std::size_t p = 0; p < a.size(); ++p) {
    num = std::max(num, std::abs(a[p] - b[p]));
    den = std::max(den, std::abs(b[p]));
  }
  return den > 0 ? num / den : num;
}

}  // namespace

TEST_CASE("grid: invalid sizes are rejected") {
  CHECK_THROWS_AS(GridSpec(0), InvalidGrid);
  CHECK_THROWS_AS(GridSpec(63), InvalidGrid);
  CHECK_NOTHROW(GridSpec(16));
}

TEST_CASE("grid: zero field transforms to zero") {
  ScalarField z(16);
  auto F = fft_forward(z.c[0], 16);
  for (auto c : F) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("grid: cosine has two modes of weight 1/2") {
  const int n = 16;
  ScalarField f = from_fn(n, [](double x, double, double) { return std::cos(2 * pi * x); });
  auto F = fft_forward(f.c[0], n);
  GridSpec g(n);
  // half spectrum stores m1 = +1; m1 = -1 is its conjugate
  CHECK(std::abs(F[g.sidx(1, 0, 0)] - cplx(0.5, 0)) < 1e-14);
  double other = 0;
  for (std::size_t p = 0; p < F.size(); ++p)
    if (p != g.sidx(1, 0, 0)) other = std::max(other, std::abs(F[p]));
  CHECK(other < 1e-14);
}

TEST_CASE("grid: round trip of random fields") {
  for (int n : {8, 32, 64}) {
    std::mt19937_64 rng(n);
    std::normal_distribution<double> N01;
    std::vector<double> f(std::size_t(n) * n * n);
    for (auto& x : f) x = N01(rng);
    auto back = fft_inverse(fft_forward(f, n), n);
    // an unrestricted random field has Nyquist content that the inverse keeps
    CHECK(rel_err(back, f) < 1e-12);
  }
}

TEST_CASE("grid: curl of a gradient vanishes") {
  ScalarField s = random_scalar(32, 6, 11);
  VectorField c = curl(gradient(s));
  CHECK(max_norm(c) / max_norm(gradient(s)) < 1e-12);
}

TEST_CASE("grid: divergence of a shear is zero") {
  const int n = 16;
  VectorField v(n);
  v.c[0] = from_fn(n, [](double, double y, double) { return std::sin(2 * pi * y); }).c[0];
  CHECK(max_abs(divergence(v).c[0]) < 1e-13);
}

TEST_CASE("grid: inverse Laplacian of a cosine") {
  const int n = 16;
  ScalarField f = from_fn(n, [](double x, double, double) { return std::cos(2 * pi * x); });
  ScalarField u = laplacian_inverse(f);
  ScalarField expect = from_fn(n, [](double x, double, double) { return -std::cos(2 * pi * x) / (4 * pi * pi); });
  CHECK(rel_err(u.c[0], expect.c[0]) < 1e-12);
}

TEST_CASE("grid: Laplacian and its inverse agree on mean-free band-limited fields") {
  ScalarField f = random_scalar(32, 8, 3);
  ScalarField back = laplacian(laplacian_inverse(f));
  CHECK(rel_err(back.c[0], f.c[0]) < 1e-12);
}

TEST_CASE("grid: sampling") {
  const int n = 16;
  SUBCASE("constant") {
    ScalarField f(n, 2.5);
    std::vector<Vec3> pts{{0.1, 0.77, 0.3}, {0.999, 0.0, 0.5}};
    for (auto m : {SampleMethod::trilinear, SampleMethod::spectral, SampleMethod::lagrange6})
      for (double x : sample_at(f, pts, m)) CHECK(x == doctest::Approx(2.5).epsilon(1e-13));
  }
  SUBCASE("cosine zero") {
    ScalarField f = from_fn(n, [](double x, double, double) { return std::cos(2 * pi * x); });
    auto v = sample_at(f, {{0.25, 0.3, 0.7}}, SampleMethod::spectral);
    CHECK(std::abs(v[0]) < 1e-12);
  }
  SUBCASE("spectral matches direct mode summation") {
    const int m = 16;
    ScalarField f = random_scalar(m, 4, 5);
    auto F = fft_forward(f.c[0], m);
    GridSpec g(m);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U;
    std::vector<Vec3> pts(100);
    for (auto& p : pts) p = {U(rng), U(rng), U(rng)};
    auto got = sample_at(f, pts, SampleMethod::spectral);
    double worst = 0;
    for (std::size_t q = 0; q < pts.size(); ++q) {
      // full-spectrum sum over all (m1, m2, m3) using conjugate symmetry for m1 < 0
      double s = 0;
      for (int i3 = 0; i3 < m; ++i3)
        for (int i2 = 0; i2 < m; ++i2)
          for (int i1 = 0; i1 < m; ++i1) {
            int a = g.mode(i1), b = g.mode(i2), c = g.mode(i3);
            if (i1 == m / 2 || i2 == m / 2 || i3 == m / 2) continue;
            cplx Fk = a >= 0 ? F[g.sidx(a, i2, i3)] : std::conj(F[g.sidx(-a, (m - i2) % m, (m - i3) % m)]);
            double ph = 2 * pi * (a * pts[q][0] + b * pts[q][1] + c * pts[q][2]);
            s += (Fk * cplx(std::cos(ph), std::sin(ph))).real();
          }
      worst = std::max(worst, std::abs(s - got[q]));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("grid: Hoelder norms") {
  const int n = 64;
  SUBCASE("constant") {
    ScalarField f(n, -3.0);
    auto h = holder(f, 0.1);
    CHECK(h.norm == doctest::Approx(3.0));
    CHECK(h.seminorm == doctest::Approx(0.0));
  }
  SUBCASE("cosine") {
    ScalarField f = from_fn(n, [](double x, double, double) { return std::cos(2 * pi * x); });
    CHECK(holder(f, 0.0).sup == doctest::Approx(1.0));
    auto h = holder(f, 1.0);
    REQUIRE(h.integer.size() >= 2);
    CHECK(h.integer[1] == doctest::Approx(2 * pi).epsilon(0.02));
  }
}

TEST_CASE("grid: random solenoidal fields are mean free and divergence free") {
  VectorField v = random_solenoidal(32, 6, 1);
  auto m = mean(v);
  CHECK(std::abs(m[0]) + std::abs(m[1]) + std::abs(m[2]) < 1e-15);
  CHECK(max_abs(divergence(v).c[0]) < 1e-12 * max_norm(jacobian(v)));
}

TEST_CASE("grid: snapshots round trip") {
  auto dir = std::filesystem::temp_directory_path() / "onsager_snap_test";
  VectorField v = random_solenoidal(8, 3, 2);
  write_snapshot(dir.string(), "v", v, {"vx", "vy", "vz"}, "input", 0.25);
  VectorField back = read_snapshot<3>(dir.string(), "v");
  for (int c = 0; c < 3; ++c) CHECK(back.c[c] == v.c[c]);
  std::filesystem::remove_all(dir);
}
