#include <doctest.h>

#include <cmath>
#include <string>

#include "onsager/energy.hpp"
#include "onsager/operators.hpp"
#include "onsager/perturbation.hpp"
#include "onsager/pipeline.hpp"

using namespace onsager;

namespace {

StepConfig desk(int n) {
  StepConfig c;
  c.n = n;
  return c;
}

EnergyProfile profile_for(const StepConfig& cfg) {
  DerivedScales s0 = step_scales(cfg, 0);
  EnergyProfile e;
  e.T = 2 * s0.tau_q;
  return normalize(e, s0).profile;
}

double sum_int_rho(const StressDecomp& d) {
  double s = 0;
  for (std::size_t k = 0; k < d.pieces.size(); ++k)
    for (int x = 0; x < d.n; ++x) s += d.rho_i(k, x) / d.n;
  return s;
}

}  // namespace

TEST_CASE("eta cutoffs") {
  const double tau = 0.05;
  TimePartition P = build_chi(tau, 3 * tau);
  EtaCutoffs E = build_eta(P);
  CHECK(E.c0 > 0);
  for (int i = P.i_min; i < P.i_max; ++i) {
    const double c = P.t(i) + tau / 2;
    auto act = E.active(c);
    REQUIRE(act.size() == 1);
    CHECK(act[0] == i);
    for (double e : E.line(i, 64, c)) CHECK(e == 1.0);
    for (int j = E.i_min; j <= E.i_max; ++j)
      if (j != i)
        for (double e : E.line(j, 64, c)) CHECK(e == 0.0);
    CHECK(E.sum_int_eta2(c, 64) == doctest::Approx(1.0).epsilon(1e-14));
    // plateau and support windows
    CHECK(E.eta(i, 0.3, E.plateau_lo(i)) == 1.0);
    CHECK(E.eta(i, 0.8, E.plateau_hi(i)) == 1.0);
    CHECK(E.eta(i, 0.3, E.support_lo(i) - 1e-9) == 0.0);
    CHECK(E.eta(i, 0.8, E.support_hi(i) + 1e-9) == 0.0);
  }
  // the min over t of sum int eta^2 sits in the transition bands
  CHECK(E.c0 < 1.0);
  CHECK(E.c0 <= E.sum_int_eta2(tau / 4 + 0.0137 * tau, 64) + 1e-12);

  // with c1 = c2 = 1/20 the mollified stripes of neighbouring cutoffs overlap
  try {
    build_eta(P, 64, 600, 1.0 / 20, 1.0 / 20);
    FAIL("expected PropertyViolated");
  } catch (const PropertyViolated& e) {
    CHECK(std::string(e.what()).find("(ii)") != std::string::npos);
  }
}

TEST_CASE("stress decomposition of the zero state") {
  StepConfig cfg = desk(64);
  EnergyProfile prof = profile_for(cfg);
  Step step(cfg, zero_state(cfg.n), prof);
  const DerivedScales& s = step.scales();
  const double tau = s.tau_q;
  for (double t : {tau / 2, 0.27 * tau, tau}) {
    GluedSnapshot g = step.glued().at(t);
    auto flows = flows_at(step.glued(), step.eta(), t);
    StressDecomp d = stress_decomposition(g, step.eta(), flows, prof, s, t);
    CHECK(d.energy == 0.0);
    CHECK(3 * d.rho_q == doctest::Approx(prof(t) - s.delta_q2 / 2).epsilon(1e-14));
    CHECK(sum_int_rho(d) == doctest::Approx(d.rho_q).epsilon(1e-12));
    CHECK(d.max_distance == 0.0);
    for (const auto& P : d.pieces) CHECK(P.rtilde_identity);
    // one flow per active cutoff
    flows.push_back(flows.front());
    CHECK_THROWS_AS(stress_decomposition(g, step.eta(), flows, prof, s, t), Error);
  }
  // no energy left to distribute
  EnergyProfile low = prof;
  low.amp = 0.0;
  GluedSnapshot g = step.glued().at(tau / 2);
  CHECK_THROWS_AS(stress_decomposition(g, step.eta(), flows_at(step.glued(), step.eta(), tau / 2), low, s, tau / 2),
                  EnergyGapNonpositive);
}

TEST_CASE("stress decomposition of a generic glued state") {
  const int n = 32;
  const double tau = 0.05;
  TimePartition P = build_chi(tau, 2 * tau);
  VectorField v0 = random_solenoidal(n, 2, 3);
  v0 = scaled(0.1 / max_norm(v0), v0);
  GluedFlow G(P, n, [&](double t) { return scaled(1.0 + 2.0 * t, v0); });
  EtaCutoffs E = build_eta(P);
  DerivedScales s;
  s.delta_q = 1.0;
  s.delta_q1 = 1.0;
  s.delta_q2 = 0.02;
  s.lambda_q = 2 * 3.141592653589793 * 2;
  s.lambda_q1 = 2 * 3.141592653589793 * 10;
  s.alpha = 0.1;
  EnergyProfile e;
  e.c0 = 5.0;
  for (double t : {0.3 * tau, 0.5 * tau, 1.5 * tau}) {
    GluedSnapshot g = G.at(t);
    StressDecomp d = stress_decomposition(g, E, flows_at(G, E, t), e, s, t);
    CHECK(3 * d.rho_q == doctest::Approx(5.0 - 0.01 - energy_integral(g.v)).epsilon(1e-13));
    CHECK(sum_int_rho(d) == doctest::Approx(d.rho_q).epsilon(1e-12));
    for (const auto& p : d.pieces) CHECK_FALSE(p.rtilde_identity);
    CHECK(d.max_distance > 0);
    CHECK(d.max_distance < 0.5);
    // Rtilde stays symmetric positive near Id
    for (const auto& p : d.pieces)
      for (std::size_t q = 0; q < p.rtilde.c[0].size(); q += 97) CHECK(p.rtilde.c[0][q] > 0.5);
  }
  // a huge stress relative to rho_q pushes Rtilde out of the ball
  DecompOptions strict;
  strict.desk = false;
  const double t = 0.5 * tau;
  GluedSnapshot g = G.at(t);
  g.R = SymTensorField(n);
  for (auto& x : g.R.c[0]) x = 4.0;
  for (auto& x : g.R.c[3]) x = -4.0;
  CHECK_THROWS_AS(stress_decomposition(g, E, flows_at(G, E, t), e, s, t, strict), RtildeOutOfBall);
}

TEST_CASE("perturbation: zero rho gives zero w") {
  StepConfig cfg = desk(32);
  cfg.indices = {1, 3};
  EnergyProfile prof = profile_for(cfg);
  Step step(cfg, zero_state(cfg.n), prof);
  const double t = step.scales().tau_q / 2;
  StressDecomp d = stress_decomposition(step.glued().at(t), step.eta(), flows_at(step.glued(), step.eta(), t), prof,
                                        step.scales(), t);
  d.rho_q = 0.0;
  PerturbationResult w = build_perturbation(d, step.family(), step.N());
  CHECK(max_norm(w.w) == 0.0);
  CHECK(max_norm(w.w_o) == 0.0);
}

TEST_CASE("perturbation: frozen flow at the plateau, N = 1, 128^3") {
  StepConfig cfg = desk(128);
  cfg.N_override = 1;
  EnergyProfile prof = profile_for(cfg);
  Step step(cfg, zero_state(cfg.n), prof);
  const double t = step.scales().tau_q / 2;
  Step::Built b = step.build(t);
  const StressDecomp& d = b.decomp;
  REQUIRE(d.pieces.size() == 1);
  CHECK(d.S == doctest::Approx(1.0).epsilon(1e-14));
  // the tubes carry rho_q Id each, so the oscillatory energy is the trace 3 rho_q
  CHECK(energy_integral(b.w.w_o) == doctest::Approx(3 * d.rho_q).epsilon(1e-5));
  CHECK(b.w.div_rel < 1e-12);
  CHECK(max_norm(b.w.w_o) <= step.family().M / 4 * std::sqrt(step.scales().delta_q1));
  // Rbar = rho_q Id is constant on the plateau, so w = 0 would leave no stress at all
  PerturbationResult zero;
  zero.w = VectorField(cfg.n);
  NewStress ns = new_stress_and_pressure(b.glued, b.dtvbar, zero, zero.w, zero.w, step.dt_fd(), d);
  CHECK(max_norm(ns.R) < 1e-14);
  CHECK(max_norm(sub(ns.v, b.glued.v)) == 0.0);
  EnergyCheck ec = energy_check(ns.v, b.glued.v, zero, d, step.scales());
  CHECK(ec.gap == doctest::Approx(3 * d.rho_q + step.scales().delta_q2 / 2).epsilon(1e-13));
  CHECK(ec.cross == 0.0);
}

TEST_CASE("new stress: identities at a transition time") {
  StepConfig cfg = desk(64);
  EnergyProfile prof = profile_for(cfg);
  Step step(cfg, zero_state(cfg.n), prof);
  const double t = 0.27 * step.scales().tau_q;
  Step::Built b = step.build(t);
  CHECK(b.w.div_rel < 1e-12);
  CHECK(b.next.absorbed_trace <= 1e-10 * b.next.R_sup);
  ResidualReport r = er_residual(b.next.v, b.next.p, b.next.R, b.next.dtv);
  CHECK(r.div_R > 0);
  CHECK(r.projected <= 1e-3 * r.div_R);
  CHECK(std::abs(mean(b.next.p)) < 1e-14);
  CHECK(b.next.nash == 0.0);  // vbar = 0
  CHECK(b.next.oscillation > 0);
  CHECK(b.next.transport > 0);

  // a drifting mean in d_t w is refused
  VectorField wp = b.w.w;
  for (auto& x : wp.c[1]) x += 1e-3;
  CHECK_THROWS_AS(new_stress_and_pressure(b.glued, b.dtvbar, b.w, b.w.w, wp, step.dt_fd(), b.decomp), MeanDriftTooLarge);
}
