#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "onsager/energy.hpp"
#include "onsager/schedule.hpp"

using namespace onsager;
constexpr double pi = std::numbers::pi;

TEST_CASE("schedule: q = 0 scales") {
  ScheduleParams p;
  p.a = 10;
  p.b = 1.1;
  p.beta = 0.25;
  DerivedScales s = derive(p, 0);
  CHECK(s.lambda_q == doctest::Approx(2 * pi * 10).epsilon(1e-12));
  CHECK(s.delta_q == doctest::Approx(0.12616).epsilon(1e-4));
  CHECK(s.delta_q == doctest::Approx(1.0 / std::sqrt(2 * pi * 10)).epsilon(1e-14));
}

TEST_CASE("schedule: delta_q lambda_q^{2 beta} = 1") {
  for (double beta : {0.05, 0.17, 0.3}) {
    ScheduleParams p;
    p.beta = beta;
    p.b = 1.1;
    for (int q = 0; q < 4; ++q) {
      DerivedScales s = derive(p, q);
      CHECK(s.delta_q * std::pow(s.lambda_q, 2 * beta) == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("schedule: ceiling bounds on lambda_q") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> A(1.5, 40.0), B(1.01, 2.0);
  std::uniform_int_distribution<int> Q(0, 4);
  for (int k = 0; k < 100; ++k) {
    double a = A(rng), b = B(rng);
    int q = Q(rng);
    double r = lambda_of(a, b, q) / std::pow(a, std::pow(b, q));
    CHECK(r >= 2 * pi * (1 - 1e-12));
    CHECK(r <= 4 * pi * (1 + 1e-12));
  }
}

TEST_CASE("schedule: choice of b polynomial") {
  double P = choice_of_b_polynomial(0.25, 1.1, 0.002);
  // independent arithmetic: -0.25 - 0.275 + 1 - 1.1 + 0.605 + 0.0176
  CHECK(P == doctest::Approx(-0.0024).epsilon(1e-9));
  CHECK(P < 0);
  AuditReport lim = audit_limit(0.25, 1.1, 0.002);
  CHECK(lim.admissible);
  FrontierPoint fp = search_b_alpha(0.25);
  CHECK(fp.b_upper == doctest::Approx(1.5));
  // b = 1 fails the strict inequality
  AuditReport one = audit_limit(0.25, 1.0, 0.002);
  CHECK_FALSE(one.admissible);
  bool b_line_failed = false;
  for (const auto& l : one.lines)
    if (l.name == "b_gt_1") b_line_failed = !l.pass;
  CHECK(b_line_failed);
}

TEST_CASE("schedule: beta scan finds admissible (b, alpha)") {
  std::vector<double> betas{0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
  for (const auto& fp : scan_beta(betas)) {
    CHECK(fp.found);
    CHECK(audit_limit(fp.beta, fp.b, fp.alpha).admissible);
  }
}

TEST_CASE("schedule: parameter validation") {
  ScheduleParams p;
  p.b = 1.0;
  CHECK_THROWS(p.validate());
  p.b = 1.6;  // above (1 - beta) / (2 beta) = 1.5
  CHECK_THROWS(p.validate());
}

TEST_CASE("desk ladder") {
  DeskLadder L = desk_ladder({2, 10}, 0.25, 0.1, 128);
  REQUIRE(L.scales.size() == 1);
  CHECK(L.scales[0].delta_q == doctest::Approx(0.2821).epsilon(1e-4));
  CHECK(L.scales[0].delta_q == doctest::Approx(1.0 / std::sqrt(4 * pi)).epsilon(1e-14));
  CHECK(L.extrapolated);
  CHECK_THROWS_AS(desk_ladder({2, 40}, 0.25, 0.1, 64), GridUnderResolved);
  CHECK_THROWS_AS(desk_ladder({5, 5}, 0.25, 0.1, 64), InvalidLadder);
  CHECK_THROWS_AS(desk_ladder({5}, 0.25, 0.1, 64), InvalidLadder);
  CHECK(resolvable(10, 64, 2.0));
  CHECK_FALSE(resolvable(11, 64, 2.0));
}

TEST_CASE("energy profile normalization") {
  DerivedScales s;
  s.delta_q1 = 0.3;
  s.lambda_q = 2 * pi * 2;
  s.alpha = 0.1;
  EnergyProfile e;
  e.c0 = 0.3;
  auto r = normalize(e, s);
  CHECK(r.Gamma == doctest::Approx(1.0));
  CHECK(r.profile(0.7) == doctest::Approx(0.3));

  s.delta_q1 = 1.0;
  e.c0 = 4.0;
  r = normalize(e, s);
  CHECK(r.Gamma == doctest::Approx(0.5));
  CHECK(r.profile(0.0) == doctest::Approx(1.0));
  CHECK(r.profile(3.0) == doctest::Approx(1.0));

  for (auto kind : {ProfileKind::affine, ProfileKind::cosine}) {
    EnergyProfile g;
    g.kind = kind;
    g.c0 = 2.0;
    g.c1 = 0.7;
    g.T = 1.5;
    auto n = normalize(g, s);
    CHECK(n.profile.sup() == doctest::Approx(s.delta_q1).epsilon(1e-14));
  }

  EnergyProfile bad;
  bad.c0 = -1.0;
  CHECK_THROWS_AS(normalize(bad, s), NonPositiveProfile);
  CHECK_THROWS_AS(profile_kind("sawtooth"), ConfigError);
}

TEST_CASE("energy gap") {
  DeskLadder L = desk_ladder({2, 10}, 0.25, 0.1, 64);
  DerivedScales s = L.scales[0];
  EnergyProfile e;
  e.c0 = s.delta_q1;
  VectorField zero(32);
  EnergyGap g = energy_gap(zero, e, s, 0.0);
  CHECK(g.gap == doctest::Approx(s.delta_q1));
  CHECK(g.strict_window);

  VectorField v = random_solenoidal(32, 5, 3);
  EnergyProfile exact;
  exact.c0 = energy_integral(v);
  EnergyGap z = energy_gap(v, exact, s, 0.0);
  CHECK(std::abs(z.gap) < 1e-15);
  CHECK_FALSE(z.strict_window);
  CHECK_FALSE(z.relaxed_window);
}

TEST_CASE("energy: Parseval") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    VectorField v = random_vector(32, 15, seed, false);
    CHECK(parseval_energy(v) == doctest::Approx(energy_integral(v)).epsilon(1e-12));
  }
}
