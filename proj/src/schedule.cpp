#include "onsager/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "onsager/errors.hpp"

namespace onsager {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

AuditLine leq(int q, const std::string& name, double lhs, double rhs) {
  AuditLine l;
  l.q = q;
  l.name = name;
  l.lhs = lhs;
  l.rhs = rhs;
  l.margin = std::log(rhs) - std::log(lhs);
  l.pass = lhs <= rhs;
  return l;
}

AuditLine strict(int q, const std::string& name, double lhs, double rhs) {
  AuditLine l;
  l.q = q;
  l.name = name;
  l.lhs = lhs;
  l.rhs = rhs;
  l.margin = rhs - lhs;
  l.pass = lhs < rhs;
  return l;
}

void add_q_independent(AuditReport& rep, double beta, double b, double alpha) {
  rep.lines.push_back(strict(-1, "choice_of_b", choice_of_b_polynomial(beta, b, alpha), 0.0));
  rep.lines.push_back(strict(-1, "b_gt_1", 1.0, b));
  rep.lines.push_back(strict(-1, "b_beta_rel", b, (1.0 - beta) / (2.0 * beta)));
}

void add_scale_lines(AuditReport& rep, const DerivedScales& s) {
  const int q = s.q;
  const double ratio = std::pow(s.delta_q / s.delta_q1, 1.5);
  rep.lines.push_back(leq(q, "param_lower", std::pow(s.lambda_q, 3 * s.alpha), ratio));
  rep.lines.push_back(leq(q, "param_upper", ratio, s.lambda_q1 / s.lambda_q));
  rep.lines.push_back(leq(q, "nash",
                          std::sqrt(s.delta_q * s.delta_q1) * s.lambda_q / s.lambda_q1,
                          s.delta_q2 / std::pow(s.lambda_q1, 8 * s.alpha)));
  rep.lines.push_back(leq(q, "ell_lambda_q1", 1.0, s.ell * s.lambda_q1));
  rep.lines.push_back(leq(q, "ell_lower", std::pow(s.lambda_q, -1.5), s.ell));
  rep.lines.push_back(leq(q, "ell_upper", s.ell, 1.0 / s.lambda_q));
}

void finish(AuditReport& rep) {
  rep.admissible = std::all_of(rep.lines.begin(), rep.lines.end(), [](const AuditLine& l) { return l.pass; });
}

}  // namespace

void ScheduleParams::validate() const {
  if (!(a > 1)) throw Error("ScheduleParams: a must exceed 1");
  if (!(b > 1)) throw Error("ScheduleParams: b must exceed 1");
  if (!(beta > 0 && beta < 1.0 / 3.0)) throw Error("ScheduleParams: beta must lie in (0, 1/3)");
  if (!(alpha > 0 && alpha < 1)) throw Error("ScheduleParams: alpha must lie in (0, 1)");
  if (!(b < (1 - beta) / (2 * beta))) throw Error("ScheduleParams: b must be below (1-beta)/(2 beta)");
}

double DerivedScales::N_q() const { return lambda_q / two_pi; }
double DerivedScales::N_q1() const { return lambda_q1 / two_pi; }

double lambda_of(double a, double b, int q) { return two_pi * std::ceil(std::pow(a, std::pow(b, q))); }

DerivedScales scales_from_lambdas(int q, double lq, double lq1, double lq2, double beta, double alpha) {
  DerivedScales s;
  s.q = q;
  s.alpha = alpha;
  s.lambda_q = lq;
  s.lambda_q1 = lq1;
  s.lambda_q2 = lq2;
  s.delta_q = std::pow(lq, -2 * beta);
  s.delta_q1 = std::pow(lq1, -2 * beta);
  s.delta_q2 = std::pow(lq2, -2 * beta);
  s.ell = std::sqrt(s.delta_q1 / s.delta_q) * std::pow(lq, -1.0 - 1.5 * alpha);
  s.tau_q = std::pow(s.ell, 2 * alpha) / (std::sqrt(s.delta_q) * lq);
  s.ell_window_ok = std::pow(lq, -1.5) <= s.ell && s.ell <= 1.0 / lq;
  return s;
}

DerivedScales derive(const ScheduleParams& p, int q) {
  p.validate();
  DerivedScales s = scales_from_lambdas(q, lambda_of(p.a, p.b, q), lambda_of(p.a, p.b, q + 1),
                                        lambda_of(p.a, p.b, q + 2), p.beta, p.alpha);
  double ratio = s.lambda_q / std::pow(p.a, std::pow(p.b, q));
  if (ratio < two_pi * (1 - 1e-12) || ratio > 2 * two_pi * (1 + 1e-12))
    throw Error("derive: ceiling bound violated");
  return s;
}

double choice_of_b_polynomial(double beta, double b, double alpha) {
  return -beta - beta * b + 1 - b + 2 * b * b * beta + 8 * b * alpha;
}

AuditReport audit(const ScheduleParams& p, int q_max) {
  AuditReport rep;
  add_q_independent(rep, p.beta, p.b, p.alpha);
  for (int q = 0; q <= q_max; ++q) {
    DerivedScales s = scales_from_lambdas(q, lambda_of(p.a, p.b, q), lambda_of(p.a, p.b, q + 1),
                                          lambda_of(p.a, p.b, q + 2), p.beta, p.alpha);
    add_scale_lines(rep, s);
    double base = std::pow(p.a, std::pow(p.b, q));
    double ratio = s.lambda_q / base;
    rep.lines.push_back(leq(q, "ceiling_lower", two_pi, ratio * (1 + 1e-12)));
    rep.lines.push_back(leq(q, "ceiling_upper", ratio, 2 * two_pi * (1 + 1e-12)));
  }
  finish(rep);
  return rep;
}

AuditReport audit_limit(double beta, double b, double alpha) {
  AuditReport rep;
  add_q_independent(rep, beta, b, alpha);
  // exponents of a^{b^q}; every inequality must hold strictly
  rep.lines.push_back(strict(0, "param_lower", 3 * alpha, 3 * beta * (b - 1)));
  rep.lines.push_back(strict(0, "param_upper", 3 * beta * (b - 1), b - 1));
  rep.lines.push_back(strict(0, "nash", -beta - beta * b + 1 - b, -2 * beta * b * b - 8 * alpha * b));
  rep.lines.push_back(strict(0, "ell_lambda_q1", 1.5 * alpha, (b - 1) * (1 - beta)));
  rep.lines.push_back(strict(0, "ell_lower", beta * (b - 1) + 1.5 * alpha, 0.5));
  finish(rep);
  return rep;
}

FrontierPoint search_b_alpha(double beta) {
  FrontierPoint fp;
  fp.beta = beta;
  fp.b_upper = (1 - beta) / (2 * beta);
  const int nb = 400;
  for (int ib = 1; ib < nb; ++ib) {
    double b = 1 + (std::min(fp.b_upper, 3.0) - 1) * ib / nb;
    // alpha grid: geometric from 0.2 downwards
    for (double alpha = 0.2; alpha > 1e-7; alpha *= 0.9) {
      if (audit_limit(beta, b, alpha).admissible) {
        if (alpha > fp.alpha) {
          fp.found = true;
          fp.alpha = alpha;
          fp.b = b;
        }
        break;
      }
    }
  }
  return fp;
}

std::vector<FrontierPoint> scan_beta(const std::vector<double>& betas) {
  std::vector<FrontierPoint> out;
  for (double beta : betas) out.push_back(search_b_alpha(beta));
  return out;
}

bool resolvable(double N, int n, double mikado_bandwidth) { return N * mikado_bandwidth <= n / 3.0; }

DeskLadder desk_ladder(const std::vector<int>& lambda_indices, double beta, double alpha, int n,
                       double mikado_bandwidth) {
  if (lambda_indices.size() < 2) throw InvalidLadder("desk ladder needs at least two indices");
  for (std::size_t i = 0; i < lambda_indices.size(); ++i) {
    if (lambda_indices[i] < 1) throw InvalidLadder("indices must be positive");
    if (i > 0 && lambda_indices[i] <= lambda_indices[i - 1])
      throw InvalidLadder("ladder must be strictly increasing");
  }
  for (std::size_t i = 1; i < lambda_indices.size(); ++i)
    if (!resolvable(lambda_indices[i], n, mikado_bandwidth))
      throw GridUnderResolved("N = " + std::to_string(lambda_indices[i]) + " times bandwidth " +
                              std::to_string(mikado_bandwidth) + " exceeds n/3 = " + std::to_string(n / 3.0));
  DeskLadder L;
  for (int k : lambda_indices) L.indices.push_back(k);
  // lambda_{q+2} by power-law extrapolation N_{q+2} = N_{q+1}^{b_eff}
  const std::size_t m = L.indices.size();
  double N0 = L.indices[m - 2], N1 = L.indices[m - 1];
  double beff = (N0 > 1) ? std::log(N1) / std::log(N0) : 2.0;
  L.indices.push_back(std::pow(N1, beff));
  L.extrapolated = true;
  for (std::size_t q = 0; q + 2 < L.indices.size(); ++q) {
    DerivedScales s = scales_from_lambdas(int(q), two_pi * L.indices[q], two_pi * L.indices[q + 1],
                                          two_pi * L.indices[q + 2], beta, alpha);
    L.scales.push_back(s);
    add_scale_lines(L.audit, s);
  }
  add_q_independent(L.audit, beta, beff, alpha);
  finish(L.audit);
  return L;
}

}  // namespace onsager
