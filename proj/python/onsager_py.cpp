#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <string>

#include "onsager/energy.hpp"
#include "onsager/euler.hpp"
#include "onsager/gluing.hpp"
#include "onsager/mikado.hpp"
#include "onsager/operators.hpp"
#include "onsager/pipeline.hpp"
#include "onsager/schedule.hpp"

namespace py = pybind11;
using namespace onsager;

namespace {

// numpy layout: (components, n, n, n) indexed [c, i1, i2, i3]; the grid stores i1 fastest
template <int C>
py::array_t<double> to_numpy(const Field<C>& f) {
  const py::ssize_t n = f.n, d = sizeof(double);
  py::array_t<double> out({py::ssize_t(C), n, n, n}, {n * n * n * d, d, n * d, n * n * d});
  double* p = out.mutable_data();
  for (int c = 0; c < C; ++c) std::copy(f.c[c].begin(), f.c[c].end(), p + c * f.size());
  return out;
}

template <int C>
Field<C> from_numpy(const py::array& in) {
  py::array_t<double, py::array::forcecast> a(in);
  if (a.ndim() == 3 && C == 1) a = a.reshape({py::ssize_t(1), a.shape(0), a.shape(1), a.shape(2)});
  if (a.ndim() != 4 || a.shape(0) != C || a.shape(1) != a.shape(2) || a.shape(2) != a.shape(3))
    throw InvalidGrid("expected an array of shape (" + std::to_string(C) + ", n, n, n)");
  const int n = int(a.shape(1));
  Field<C> f(n);
  GridSpec g(n);
  auto r = a.unchecked<4>();
  for (int c = 0; c < C; ++c)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) f.c[c][g.idx(i, j, k)] = r(c, i, j, k);
  return f;
}

Sym6 to_sym6(const std::array<double, 6>& a) { return a; }

py::dict scales_dict(const DerivedScales& s) {
  py::dict d;
  d["q"] = s.q;
  d["lambda_q"] = s.lambda_q;
  d["lambda_q1"] = s.lambda_q1;
  d["lambda_q2"] = s.lambda_q2;
  d["delta_q"] = s.delta_q;
  d["delta_q1"] = s.delta_q1;
  d["delta_q2"] = s.delta_q2;
  d["ell"] = s.ell;
  d["tau_q"] = s.tau_q;
  d["alpha"] = s.alpha;
  d["ell_window_ok"] = s.ell_window_ok;
  return d;
}

py::dict audit_dict(const AuditReport& r) {
  py::list lines;
  for (const auto& l : r.lines) {
    py::dict d;
    d["q"] = l.q;
    d["name"] = l.name;
    d["lhs"] = l.lhs;
    d["rhs"] = l.rhs;
    d["margin"] = l.margin;
    d["pass"] = l.pass;
    lines.append(d);
  }
  py::dict out;
  out["admissible"] = r.admissible;
  out["lines"] = lines;
  return out;
}

py::list rows_list(const std::vector<DiagRow>& rows) {
  py::list out;
  for (const auto& r : rows) {
    py::dict d;
    d["t"] = r.t;
    d["quantity"] = r.quantity;
    d["measured"] = r.measured;
    d["paper_bound"] = r.paper_bound;
    d["ratio"] = r.ratio;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_onsager, m) {
  m.doc() = "Convex integration step for the Euler-Reynolds system on the periodic box";

  auto base = py::register_exception<Error>(m, "OnsagerError", PyExc_RuntimeError);
#define REG(Name) py::register_exception<Name>(m, #Name, base.ptr())
  REG(InvalidGrid);
  REG(NonZeroMean);
  REG(KernelUnresolved);
  REG(NotSolenoidal);
  REG(PhaseDegenerate);
  REG(GridUnderResolved);
  REG(InvalidLadder);
  REG(NonPositiveProfile);
  REG(DisjointnessFailed);
  REG(PositivityRadiusTooSmall);
  REG(ROutOfRange);
  REG(CFLWindowExceeded);
  REG(BlowupSuspected);
  REG(OutOfWindow);
  REG(MissingOverlap);
  REG(PropertyViolated);
  REG(EnergyGapNonpositive);
  REG(RtildeOutOfBall);
  REG(MeanDriftTooLarge);
  REG(ConfigError);
#undef REG

  // grid and operators
  m.def("random_solenoidal", [](int n, int kmax, std::uint64_t seed) { return to_numpy(random_solenoidal(n, kmax, seed)); },
        py::arg("n"), py::arg("kmax"), py::arg("seed"));
  m.def("random_vector", [](int n, int kmax, std::uint64_t seed) { return to_numpy(random_vector(n, kmax, seed)); },
        py::arg("n"), py::arg("kmax"), py::arg("seed"));
  m.def("abc_field", [](int n, double A, double B, double C) { return to_numpy(abc_field(n, A, B, C)); }, py::arg("n"),
        py::arg("A") = 1.0, py::arg("B") = 1.0, py::arg("C") = 1.0);
  m.def("divergence", [](const py::array& a) {
    py::array_t<double, py::array::forcecast> arr(a);
    if (arr.ndim() == 4 && arr.shape(0) == 6) return to_numpy(divergence(from_numpy<6>(a)));
    return to_numpy(divergence(from_numpy<3>(a)));
  }, "divergence of a (3, n, n, n) vector or a (6, n, n, n) symmetric tensor (xx, xy, xz, yy, yz, zz)");
  m.def("curl", [](const py::array& v) { return to_numpy(curl(from_numpy<3>(v))); });
  m.def("inverse_divergence", [](const py::array& f) { return to_numpy(inverse_divergence(from_numpy<3>(f))); },
        "R f as a (6, n, n, n) array, div R f = f, tr R f = 0");
  m.def("biot_savart", [](const py::array& v) { return to_numpy(biot_savart(from_numpy<3>(v))); });
  m.def("leray_project", [](const py::array& v) { return to_numpy(leray_project(from_numpy<3>(v))); });
  m.def("mollify", [](const py::array& v, double ell) { return to_numpy(mollify(from_numpy<3>(v), ell)); });
  m.def("cet_commutator", [](const py::array& f, const py::array& g, double ell) {
    return cet_commutator(from_numpy<1>(f), from_numpy<1>(g), ell);
  });
  m.def("energy", [](const py::array& v) { return energy_integral(from_numpy<3>(v)); }, "int |v|^2 over the unit torus");

  // schedule
  m.def("derive", [](double a, double b, double beta, double alpha, int q) {
    ScheduleParams p;
    p.a = a;
    p.b = b;
    p.beta = beta;
    p.alpha = alpha;
    p.validate();
    return scales_dict(derive(p, q));
  }, py::arg("a"), py::arg("b"), py::arg("beta"), py::arg("alpha"), py::arg("q"));
  m.def("audit", [](double a, double b, double beta, double alpha, int q_max) {
    ScheduleParams p;
    p.a = a;
    p.b = b;
    p.beta = beta;
    p.alpha = alpha;
    p.validate();
    return audit_dict(audit(p, q_max));
  }, py::arg("a"), py::arg("b"), py::arg("beta"), py::arg("alpha"), py::arg("q_max") = 3);
  m.def("audit_limit", [](double beta, double b, double alpha) { return audit_dict(audit_limit(beta, b, alpha)); },
        py::arg("beta"), py::arg("b"), py::arg("alpha"));
  m.def("choice_of_b_polynomial", &choice_of_b_polynomial, py::arg("beta"), py::arg("b"), py::arg("alpha"));
  m.def("scan_beta", [](const std::vector<double>& betas) {
    py::list out;
    for (const auto& f : scan_beta(betas)) {
      py::dict d;
      d["beta"] = f.beta;
      d["found"] = f.found;
      d["b"] = f.b;
      d["alpha"] = f.alpha;
      d["b_upper"] = f.b_upper;
      out.append(d);
    }
    return out;
  });

  // mikado
  py::class_<MikadoFamily>(m, "MikadoFamily")
      .def(py::init([](double radius) { return build_family(radius); }), py::arg("radius") = 0.06)
      .def_property_readonly("size", [](const MikadoFamily& f) { return f.tubes.size(); })
      .def_readonly("min_separation", &MikadoFamily::min_separation)
      .def_readonly("positivity_radius", &MikadoFamily::positivity_radius)
      .def("coefficients", [](const MikadoFamily& f, const std::array<double, 6>& R) { return f.coefficients(to_sym6(R)); })
      .def("W", [](const MikadoFamily& f, const std::array<double, 6>& R, const std::vector<Vec3>& xi) {
        return eval_W(f, to_sym6(R), xi);
      })
      .def("sample_W", [](const MikadoFamily& f, const std::array<double, 6>& R, int n) {
        return to_numpy(sample_W(f, to_sym6(R), n));
      })
      .def("verify", [](const MikadoFamily& f, int n_quad, int tests, int positivity) {
        VerifyReport r = verify_family(f, n_quad, random_ball(tests, 0.5, 7), positivity);
        py::dict d;
        d["second_moment_error"] = r.max_second_moment_error;
        d["first_moment"] = r.max_first_moment;
        d["div_W_rel"] = r.div_W_rel;
        d["div_WW_rel"] = r.div_WW_rel;
        d["decay_slope"] = r.decay_slope;
        d["positivity_min"] = r.positivity_min;
        return d;
      }, py::arg("n_quad") = 128, py::arg("tests") = 50, py::arg("positivity") = 100000)
      .def("constant_M", [](const MikadoFamily& f, double c0) {
        MConstant M = constant_M(f, c0);
        py::dict d;
        d["C_bar"] = M.C_bar;
        d["M_bar"] = M.M_bar;
        d["lattice_sum"] = M.lattice_sum;
        d["M"] = M.M;
        return d;
      });

  // euler and gluing
  m.def("solve_euler", [](const py::array& v0, double t0, double t1, bool check_window) {
    EulerOptions o;
    o.check_window = check_window;
    return to_numpy(solve_euler(from_numpy<3>(v0), t0, t1, o));
  }, py::arg("v0"), py::arg("t0"), py::arg("t1"), py::arg("check_window") = true);
  py::class_<TimePartition>(m, "TimePartition")
      .def(py::init([](double tau, double T) { return build_chi(tau, T); }), py::arg("tau"), py::arg("T"))
      .def_readonly("i_min", &TimePartition::i_min)
      .def_readonly("i_max", &TimePartition::i_max)
      .def("chi", &TimePartition::chi)
      .def("dchi", &TimePartition::dchi)
      .def("active", &TimePartition::active);

  // pipeline
  m.def("run", [](const std::string& config_json) {
    StepResult r = run(parse_config(config_json));
    py::dict d;
    d["T"] = r.T;
    d["N"] = r.N;
    d["c0"] = r.c0;
    d["M"] = r.M.M;
    d["scales"] = scales_dict(r.scales);
    d["rows"] = rows_list(r.rows);
    d["warnings"] = r.warnings;
    return d;
  }, py::arg("config_json"), "run the configured steps; returns the diagnostic rows");
  m.def("report", [](const std::string& dir) { return rows_list(report(dir)); });
  m.def("format_report", [](const std::string& dir) { return format_report(report(dir)); });
}
