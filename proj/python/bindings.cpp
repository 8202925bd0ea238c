#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zollfins/errors.hpp"
#include "zollfins/finsler.hpp"
#include "zollfins/geodesics.hpp"
#include "zollfins/jacobi.hpp"
#include "zollfins/moduli.hpp"
#include "zollfins/profile.hpp"

namespace py = pybind11;
using namespace zollfins;

namespace {

py::dict geodesic_dict(const GeodesicTrace& tr) {
  py::list t, r, theta, sign;
  for (const GeodesicSample& s : tr.samples) {
    t.append(s.t);
    r.append(s.r);
    theta.append(s.theta);
    sign.append(s.sign);
  }
  py::dict d;
  d["c"] = tr.c;
  d["t"] = t;
  d["r"] = r;
  d["theta"] = theta;
  d["sign"] = sign;
  d["steps"] = tr.steps;
  return d;
}

py::dict finsler_dict(const FinslerTrace& tr) {
  py::list t, R, Theta, vR, vTheta, F;
  for (const FinslerSample& s : tr.samples) {
    t.append(s.t);
    R.append(s.R);
    Theta.append(s.Theta);
    vR.append(s.vR);
    vTheta.append(s.vTheta);
    F.append(s.F);
  }
  py::dict d;
  d["t"] = t;
  d["R"] = R;
  d["Theta"] = Theta;
  d["vR"] = vR;
  d["vTheta"] = vTheta;
  d["F"] = F;
  d["max_f_drift"] = tr.max_f_drift;
  return d;
}

}  // namespace

PYBIND11_MODULE(_zollfins, m) {
  m.doc() = "Zoll surfaces of revolution and the associated Finsler metrics";

  py::register_exception<ConvexityError>(m, "ConvexityError", PyExc_RuntimeError);
  py::register_exception<ChartExitError>(m, "ChartExitError", PyExc_RuntimeError);

  py::class_<ZollProfile>(m, "ZollProfile")
      .def(py::init<>())
      .def(py::init<std::vector<double>>(), py::arg("odd_coeffs"))
      .def_static("parse", &ZollProfile::parse, py::arg("literal"))
      .def_static("example1", &ZollProfile::example1, py::arg("eps"))
      .def_static("example2", &ZollProfile::example2)
      .def_property_readonly("odd_coeffs", [](const ZollProfile& p) {
        return std::vector<double>(p.odd_coeffs().begin(), p.odd_coeffs().end());
      })
      .def("h", &ZollProfile::h, py::arg("x"))
      .def("curvature_at_x", &ZollProfile::curvature_at_x, py::arg("x"))
      .def("literal", &ZollProfile::literal)
      .def("__repr__", [](const ZollProfile& p) { return "ZollProfile('" + p.literal() + "')"; });

  m.def("gauss_curvature", &gauss_curvature, py::arg("profile"), py::arg("r"));
  m.def(
      "check_positive_curvature",
      [](const ZollProfile& p) {
        const CurvatureWitness w = check_positive_curvature(p);
        return py::make_tuple(w.positive, w.x, w.g);
      },
      py::arg("profile"), "(positive, x_min, G_min)");
  m.def(
      "curvature_critical_points",
      [](const ZollProfile& p) {
        std::vector<std::pair<double, double>> out;
        for (const CriticalPoint& c : curvature_critical_points(p)) out.emplace_back(c.x, c.g);
        return out;
      },
      py::arg("profile"));

  m.def(
      "closure_integrals",
      [](const ZollProfile& p, double c) {
        const ClosureIntegrals ci = closure_integrals(p, c);
        return py::make_tuple(ci.period, ci.advance);
      },
      py::arg("profile"), py::arg("c"), "(T, Theta_adv) over one passage between the turning latitudes");
  m.def(
      "integrate_geodesic",
      [](const ZollProfile& p, double r, double theta, double c, int sign, double t_end, double tol, int samples) {
        return geodesic_dict(integrate_geodesic(p, {r, theta, c, sign}, t_end, tol, samples));
      },
      py::arg("profile"), py::arg("r"), py::arg("theta"), py::arg("c"), py::arg("sign") = 1, py::arg("t_end") = 6.283185307179586,
      py::arg("tol") = 1e-10, py::arg("samples_per_period") = 512);

  m.def(
      "jacobi_pair",
      [](const ZollProfile& p, double c, double r, int sign) {
        const JacobiPair j = jacobi_pair(p, c, r, sign);
        return py::make_tuple(j.y1, j.dy1, j.y2, j.dy2);
      },
      py::arg("profile"), py::arg("c"), py::arg("r"), py::arg("sign") = 1, "(y1, y1', y2, y2')");

  m.def(
      "coords_of_geodesic",
      [](const ZollProfile& p, double r, double theta, double c, int sign) {
        const ModuliPoint mp = coords_of_geodesic(p, {r, theta, c, sign});
        return py::make_tuple(mp.R, mp.Theta);
      },
      py::arg("profile"), py::arg("r"), py::arg("theta"), py::arg("c"), py::arg("sign") = 1);
  m.def(
      "indicatrix_parametric",
      [](const ZollProfile& p, double R, double r, int branch) {
        const IndicatrixSample s = indicatrix_parametric(p, R, r, branch);
        return py::make_tuple(s.v1, s.v2);
      },
      py::arg("profile"), py::arg("R"), py::arg("r"), py::arg("branch") = 1);
  m.def(
      "indicatrix_regularized",
      [](const ZollProfile& p, double R, double r, int branch) {
        const IndicatrixSample s = indicatrix_regularized(p, R, r, branch);
        return py::make_tuple(s.v1, s.v2);
      },
      py::arg("profile"), py::arg("R"), py::arg("r"), py::arg("branch") = 1);
  m.def(
      "indicatrix_curve",
      [](const ZollProfile& p, double R, int samples_per_branch) {
        const IndicatrixCurve c = indicatrix_curve(p, R, samples_per_branch);
        std::vector<std::pair<double, double>> pts;
        for (const IndicatrixSample& s : c.samples) pts.emplace_back(s.v1, s.v2);
        py::dict d;
        d["points"] = pts;
        d["closure_gap"] = c.closure_gap;
        d["winding"] = c.winding;
        d["convex"] = c.convex;
        d["violation"] = c.violation;
        return d;
      },
      py::arg("profile"), py::arg("R"), py::arg("samples_per_branch") = 200);
  m.def("implicit_residual", &implicit_residual, py::arg("profile"), py::arg("R"), py::arg("v1"), py::arg("v2"));
  m.def(
      "f_equation_degree", [](const ZollProfile& p, double R) { return implicit_polynomial(p, R).f_degree; },
      py::arg("profile"), py::arg("R"));
  m.def(
      "indicatrix_curvature",
      [](const ZollProfile& p, double R, double r, int branch) {
        const CurvaturePair k = indicatrix_curvature(p, R, r, branch);
        return py::make_tuple(k.from_curve, k.from_metric);
      },
      py::arg("profile"), py::arg("R"), py::arg("r"), py::arg("branch") = 1);

  py::class_<FinslerMetric>(m, "FinslerMetric")
      .def(py::init<ZollProfile>(), py::arg("profile"))
      .def(
          "F", [](const FinslerMetric& fm, double R, double v1, double v2) { return fm.F(R, {v1, v2}); },
          py::arg("R"), py::arg("v1"), py::arg("v2"))
      .def(
          "fundamental_tensor",
          [](const FinslerMetric& fm, double R, double v1, double v2) {
            const FinslerEval e = fundamental_tensor(fm, R, 0.0, {v1, v2});
            return py::make_tuple(py::make_tuple(e.g11, e.g12), py::make_tuple(e.g12, e.g22));
          },
          py::arg("R"), py::arg("v1"), py::arg("v2"))
      .def(
          "unit_direction",
          [](const FinslerMetric& fm, double R, double phi) {
            const Vec2 v = unit_direction(fm, R, phi);
            return py::make_tuple(v[0], v[1]);
          },
          py::arg("R"), py::arg("phi"))
      .def(
          "geodesic",
          [](const FinslerMetric& fm, double R, double Theta, double v1, double v2, double t_end, double tol,
             int samples) {
            py::gil_scoped_release release;
            FinslerTrace tr = finsler_geodesic(fm, {R, Theta}, {v1, v2}, t_end, tol, samples);
            py::gil_scoped_acquire acquire;
            return finsler_dict(tr);
          },
          py::arg("R"), py::arg("Theta"), py::arg("v1"), py::arg("v2"), py::arg("t_end") = 6.283185307179586,
          py::arg("tol") = 1e-9, py::arg("samples_per_period") = 256);

  m.def(
      "invariants_IJ",
      [](const ZollProfile& p, double r, double phi) {
        const InvariantPair ij = invariants_IJ(p, r, phi);
        return py::make_tuple(ij.I, ij.J);
      },
      py::arg("profile"), py::arg("r"), py::arg("phi"));
  m.def("invariant_flow_check", &invariant_flow_check, py::arg("profile"), py::arg("r"), py::arg("phi"),
        py::arg("dphi") = 1e-5, py::arg("sigma") = kFiberRotationSign);
}
