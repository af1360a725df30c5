#pragma once

#include <string>
#include <vector>

namespace onsager {

struct ScheduleParams {
  double a = 10.0;
  double b = 1.1;
  double beta = 0.25;
  double alpha = 0.002;
  double M = 1.0;
  double T = 1.0;
  void validate() const;
};

struct DerivedScales {
  int q = 0;
  double lambda_q = 0, lambda_q1 = 0, lambda_q2 = 0;
  double delta_q = 0, delta_q1 = 0, delta_q2 = 0;
  double ell = 0;
  double tau_q = 0;
  double alpha = 0;
  bool ell_window_ok = true;  // lambda_q^{-3/2} <= ell <= lambda_q^{-1}
  // integer frequency indices N = lambda / 2 pi
  double N_q() const;
  double N_q1() const;
};

double lambda_of(double a, double b, int q);  // 2 pi ceil(a^{b^q})
DerivedScales scales_from_lambdas(int q, double lq, double lq1, double lq2, double beta, double alpha);
DerivedScales derive(const ScheduleParams& p, int q);

struct AuditLine {
  int q = 0;
  std::string name;
  double lhs = 0, rhs = 0;
  double margin = 0;  // rhs - lhs (positive = pass) for <=, or the negated polynomial
  bool pass = false;
};

struct AuditReport {
  std::vector<AuditLine> lines;
  bool admissible = false;
};

double choice_of_b_polynomial(double beta, double b, double alpha);
AuditReport audit(const ScheduleParams& p, int q_max);
// exponent form of every inequality in the a -> infinity limit
AuditReport audit_limit(double beta, double b, double alpha);

struct FrontierPoint {
  double beta = 0;
  bool found = false;
  double b = 0;
  double alpha = 0;      // largest alpha on the search grid passing for b
  double b_upper = 0;    // (1-beta)/(2 beta)
};
FrontierPoint search_b_alpha(double beta);
std::vector<FrontierPoint> scan_beta(const std::vector<double>& betas);

// desk ladder from integer indices N_q (lambda_q = 2 pi N_q)
struct DeskLadder {
  std::vector<double> indices;  // includes the extrapolated N_{q+2}
  std::vector<DerivedScales> scales;
  AuditReport audit;
  bool extrapolated = false;
};
DeskLadder desk_ladder(const std::vector<int>& lambda_indices, double beta, double alpha, int n,
                       double mikado_bandwidth = 2.0);
bool resolvable(double N, int n, double mikado_bandwidth);

}  // namespace onsager
