#include <doctest.h>

#include <cmath>
#include <random>

#include "onsager/gluing.hpp"
#include "onsager/operators.hpp"

using namespace onsager;

TEST_CASE("bump: K is the normalized primitive of beta") {
  CHECK(Bump1D::K(-1.0) == 0.0);
  CHECK(Bump1D::K(1.0) == 1.0);
  CHECK(Bump1D::K(-3.0) == 0.0);
  CHECK(Bump1D::K(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  // independent midpoint rule
  for (double s : {-0.6, -0.1, 0.35, 0.8}) {
    const int m = 200000;
    double acc = 0;
    for (int i = 0; i < m; ++i) {
      double u = -1.0 + (s + 1.0) * (i + 0.5) / m;
      acc += Bump1D::beta(u);
    }
    acc *= (s + 1.0) / m;
    CHECK(Bump1D::K(s) == doctest::Approx(acc).epsilon(1e-9));
  }
  // K' = beta
  for (double s : {-0.7, 0.0, 0.5}) {
    double h = 1e-5;
    CHECK((Bump1D::K(s + h) - Bump1D::K(s - h)) / (2 * h) == doctest::Approx(Bump1D::beta(s)).epsilon(1e-6));
  }
}

TEST_CASE("partition of unity") {
  const double tau = 0.05;
  TimePartition P = build_chi(tau, 3 * tau);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-tau, 4 * tau);
  double worst = 0;
  for (int k = 0; k < 1000; ++k) {
    double t = U(rng), s = 0;
    for (int i = P.i_min; i <= P.i_max; ++i) s += P.chi(i, t);
    worst = std::max(worst, std::abs(s - 1));
  }
  CHECK(worst < 1e-10);
  for (int i = P.i_min; i <= P.i_max; ++i) {
    CHECK(P.chi(i, P.t(i)) == 1.0);
    if (i > P.i_min) CHECK(P.chi(i, P.t(i) - 2 * tau / 3) == 0.0);
    if (i < P.i_max) CHECK(P.chi(i, P.t(i) + 2 * tau / 3) == 0.0);
  }
  // derivative scale
  double dmax = 0;
  for (int k = 0; k <= 4000; ++k) dmax = std::max(dmax, std::abs(P.dchi(1, -tau + 5 * tau * k / 4000.0)));
  CHECK(dmax * tau >= 1.0);
  CHECK(dmax * tau <= 6.0);
  // dchi against a centered difference
  for (double t : {0.4 * tau, 0.55 * tau, 1.45 * tau}) {
    double h = 1e-7;
    CHECK((P.chi(1, t + h) - P.chi(1, t - h)) / (2 * h) == doctest::Approx(P.dchi(1, t)).epsilon(1e-5));
  }
  // interval bookkeeping
  int i = -1;
  CHECK(P.in_J(0.1 * tau, &i));
  CHECK(i == 0);
  CHECK(P.in_I(0.5 * tau, &i));
  CHECK(i == 0);
  CHECK_FALSE(P.in_J(0.5 * tau));
  CHECK_THROWS(build_chi(0.2, 0.1));
}

namespace {

VectorField small_field(int n, double amp, std::uint64_t seed) {
  VectorField v = random_solenoidal(n, 2, seed);
  return scaled(amp / max_norm(v), v);
}

}  // namespace

TEST_CASE("gluing: an exact solution is reproduced") {
  const int n = 16;
  const double tau = 0.05;
  TimePartition P = build_chi(tau, 2 * tau);
  VectorField a = abc_field(n, 0.05, 0.05, 0.05);
  GluedFlow G(P, n, [&](double) { return a; });
  for (double t : {0.0, 0.3 * tau, 0.5 * tau, 1.5 * tau}) {
    GluedSnapshot g = G.at(t);
    CHECK(max_norm(sub(g.v, a)) < 1e-12);
    CHECK(max_norm(g.R) < 1e-12);
  }
  DerivedScales s;
  s.delta_q1 = 0.1;
  s.ell = 0.1;
  s.alpha = 0.1;
  GluedDiagnostics d = glued_diagnostics(G.at(0.5 * tau), a, s, 0.5 * tau);
  CHECK(d.v_ratio < 1e-10);
  CHECK(d.R_ratio < 1e-10);
}

TEST_CASE("gluing: generic run") {
  const int n = 32;
  const double tau = 0.05;
  TimePartition P = build_chi(tau, 2 * tau);
  VectorField v0 = small_field(n, 0.1, 3);
  // v_ell(t) is not an Euler solution, so the exact solves differ and the stress is nonzero
  GluedFlow G(P, n, [&](double t) { return scaled(1.0 + 2.0 * t, v0); });
  CHECK_FALSE(G.zero());

  // J intervals: the glued state is the single exact solve
  for (double t : {0.0, 0.2 * tau, tau, 1.8 * tau}) {
    GluedSnapshot g = G.at(t);
    REQUIRE(g.in_J);
    CHECK(max_norm(g.R) == 0.0);
    int i = int(std::lround(t / tau));
    CHECK(max_norm(sub(g.v, G.solve(i).velocity(t))) == 0.0);
    CHECK(max_norm(sub(g.p, G.solve(i).pressure(t))) == 0.0);
  }

  // I intervals: Leray-projected residual with a centered time difference
  const double dt = tau / 1024;
  double scale = 0, worst = 0, trace_worst = 0;
  std::vector<double> times;
  for (int k = 0; k <= 12; ++k) times.push_back(tau / 3 + k * tau / 36);
  std::vector<ResidualReport> reps;
  for (double t : times) {
    GluedSnapshot g = G.at(t);
    VectorField dtv = scaled(0.5 / dt, sub(G.velocity(t + dt), G.velocity(t - dt)));
    ResidualReport r = er_residual(g.v, g.p, g.R, dtv);
    scale = std::max(scale, r.div_R);
    worst = std::max(worst, r.projected);
    trace_worst = std::max(trace_worst, max_abs(trace(g.R).c[0]));
  }
  CHECK(scale > 0);
  CHECK(worst <= 1e-3 * scale);
  CHECK(trace_worst <= 1e-8 * scale);
  CHECK_THROWS_AS(G.solve(7), MissingOverlap);
}
