#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "onsager/grid.hpp"

namespace onsager {

using Sym6 = std::array<double, 6>;  // xx, xy, xz, yy, yz, zz
using Vec6 = std::array<double, 6>;  // Frobenius-isometric coordinates (xx, yy, zz, r2 xy, r2 xz, r2 yz)

Vec6 to_vec6(const Sym6& S);
Sym6 from_vec6(const Vec6& v);
Sym6 sym_identity();
double frobenius(const Sym6& S);

// radial building block psi(s) = exp(-c/(1-s^2)); the tube profile is its planar Laplacian
struct TubeProfile {
  double c = 12.0;
  double psi(double s) const;
  double dpsi_over_s(double s) const;  // psi'(s)/s
  double lap(double s) const;          // psi'' + psi'/s
  double lap_square_moment() const;    // int_0^1 lap(s)^2 s ds
  double hankel(double kappa_r0) const;  // int_0^1 lap(s) J0(kappa_r0 s) s ds
};

struct TubeSpec {
  std::array<int, 3> direction{};
  Vec3 fhat{};
  double length = 1.0;  // |f|
  Vec3 base_point{};
  double radius = 0.06;
  double amplitude = 1.0;  // A_j, fixes int phi^2 dA = 1/|f|
  std::array<Vec3, 2> transverse{};  // orthogonal generators of the projected lattice
};

enum class CoeffMapKind { entropic, affine };

struct MikadoFamily {
  std::vector<TubeSpec> tubes;
  TubeProfile profile;
  std::vector<double> gamma;
  CoeffMapKind map = CoeffMapKind::entropic;
  std::vector<Vec6> dyads;   // vec(fhat fhat^T)
  std::vector<Vec6> L;       // rows of the pseudoinverse (affine map)
  double positivity_radius = 0;
  double min_separation = 0;  // analytic minimum distance between tube axes
  double M_bar = 0, M = 0;

  std::vector<double> coefficients(const Sym6& R) const;
  // tube-local quantities at xi (1-periodic): phi_j and U_j for every tube
  void tube_fields(const Vec3& xi, double* phi, Vec3* U) const;
  double tube_distance(int j, const Vec3& xi, Vec3* y = nullptr) const;
};

std::vector<Vec3> default_base_points();
std::vector<std::array<int, 3>> default_directions();

MikadoFamily build_family(double radius = 0.06, int verification_n = 64,
                          CoeffMapKind map = CoeffMapKind::entropic, double profile_c = 12.0);

double affine_positivity_radius(const MikadoFamily& fam);
double cone_inradius(const MikadoFamily& fam);  // largest r with B_r(Id) inside the dyad cone
double line_distance(const TubeSpec& a, const TubeSpec& b);

std::vector<Vec3> eval_W(const MikadoFamily& fam, const Sym6& R, const std::vector<Vec3>& xi);
std::vector<Vec3> eval_U(const MikadoFamily& fam, const Sym6& R, const std::vector<Vec3>& xi);
VectorField sample_W(const MikadoFamily& fam, const Sym6& R, int n);
VectorField sample_U(const MikadoFamily& fam, const Sym6& R, int n);

struct TubeMoments {
  std::vector<Sym6> second;  // grid mean of W_j (x) W_j
  std::vector<Vec3> first;   // grid mean of W_j
};
TubeMoments tube_moments(const MikadoFamily& fam, int n_quad);

struct VerifyReport {
  int n_quad = 0;
  double max_second_moment_error = 0;  // max over test R of ||mean W(x)W - R||_max
  double max_first_moment = 0;
  double div_W_rel = 0;
  double div_WW_rel = 0;
  double decay_slope = 0;   // log |W_k| shell maxima vs log |k|
  double Ck_k_rel = 0;      // max over the 20 largest modes of |C_k k| / (|C_k| |k|)
  double positivity_min = 0;
  int positivity_samples = 0;
};
std::vector<Sym6> random_ball(int count, double radius, std::uint64_t seed);
VerifyReport verify_family(const MikadoFamily& fam, int n_quad, const std::vector<Sym6>& tests,
                           int positivity_samples = 100000, bool spectral_checks = true);

// exact Fourier coefficient of a single tube at integer k (zero unless k . f = 0)
cplx tube_fourier(const MikadoFamily& fam, int j, const std::array<int, 3>& k, int comp);

struct MConstant {
  double C_bar = 0;  // max_k |k|^4 max_R |W_k(R)|
  double M_bar = 0;  // C_bar c0^{-1/2}
  double lattice_sum = 0;  // sum_{0<|k|<=64} |k|^-4 + 4 pi / 64
  double M = 0;
};
double lattice_sum_inverse_fourth(int kmax);
MConstant constant_M(const MikadoFamily& fam, double c0, int kmax = 64);

}  // namespace onsager
