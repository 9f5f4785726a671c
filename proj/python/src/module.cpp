#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "beamkit/bem.hpp"
#include "beamkit/coherence.hpp"
#include "beamkit/designer.hpp"
#include "beamkit/freefield.hpp"
#include "beamkit/metrics.hpp"
#include "beamkit/sphere_scatter.hpp"

namespace py = pybind11;
using namespace beamkit;

namespace {

using Positions = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

MicArrayGeometry to_geometry(const Positions& p, std::size_t reference) {
  std::vector<Point3> pts;
  pts.reserve(static_cast<std::size_t>(p.rows()));
  for (Eigen::Index i = 0; i < p.rows(); ++i) pts.emplace_back(p(i, 0), p(i, 1), p(i, 2));
  return MicArrayGeometry(std::move(pts), reference);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Steering vectors, rigid-body scattering and robust MVDR design";
  m.attr("__version__") = "0.1.0";

  // Translators are tried newest first, so the base class goes in first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_ValueError);

  py::class_<Direction>(m, "Direction")
      .def(py::init<double, double>(), py::arg("theta"), py::arg("phi"))
      .def_static("from_degrees", &Direction::from_degrees, py::arg("theta_deg"), py::arg("phi_deg"))
      .def_property_readonly("theta", &Direction::theta)
      .def_property_readonly("phi", &Direction::phi)
      .def_property_readonly("theta_deg", &Direction::theta_deg)
      .def_property_readonly("phi_deg", &Direction::phi_deg)
      .def("unit_vector", [](const Direction& d) { return unit_vector(d); })
      .def("__repr__", [](const Direction& d) {
        return "Direction.from_degrees(" + std::to_string(d.theta_deg()) + ", " + std::to_string(d.phi_deg()) + ")";
      });

  py::class_<RigidSphere>(m, "RigidSphere")
      .def(py::init([](double radius, const Point3& center) { return RigidSphere{radius, center}; }),
           py::arg("radius"), py::arg("center") = Point3::Zero())
      .def_readwrite("radius", &RigidSphere::radius)
      .def_readwrite("center", &RigidSphere::center);

  py::class_<TriMesh>(m, "TriMesh")
      .def("__len__", &TriMesh::size)
      .def_property_readonly("volume", &TriMesh::volume)
      .def_property_readonly("max_edge_length", &TriMesh::max_edge_length)
      .def("centroids", [](const TriMesh& mesh) {
        Positions out(static_cast<Eigen::Index>(mesh.size()), 3);
        for (std::size_t t = 0; t < mesh.size(); ++t) out.row(static_cast<Eigen::Index>(t)) = mesh.centroid(t);
        return out;
      });

  m.def("make_icosphere", &make_icosphere, py::arg("subdivisions"), py::arg("radius") = 1.0,
        py::arg("center") = Point3::Zero());

  m.def(
      "plane_wave_steering",
      [](const Positions& mics, double f, const Direction& d, double c) {
        return plane_wave_steering(to_geometry(mics, 0), f, d, PhysicalConstants{c}).values;
      },
      py::arg("mics"), py::arg("frequency"), py::arg("direction"), py::arg("speed_of_sound") = 343.0);

  m.def(
      "rigid_sphere_surface_pressure",
      [](double ka, double cos_gamma, std::optional<int> order) {
        return rigid_sphere_surface_pressure(ka, cos_gamma, SeriesConfig{order});
      },
      py::arg("ka"), py::arg("cos_gamma"), py::arg("order") = py::none());

  m.def(
      "rigid_sphere_steering",
      [](const Positions& mics, const RigidSphere& s, double f, const Direction& d, double c) {
        return rigid_sphere_steering(to_geometry(mics, 0), s, f, d, {}, PhysicalConstants{c}).values;
      },
      py::arg("mics"), py::arg("sphere"), py::arg("frequency"), py::arg("direction"),
      py::arg("speed_of_sound") = 343.0);

  m.def(
      "coherence",
      [](const Positions& mics, double f, std::optional<RigidSphere> sphere, int n_theta, int n_phi) {
        const MicArrayGeometry g = to_geometry(mics, 0);
        const SphereQuadrature q = make_quadrature(n_theta, n_phi);
        if (sphere) return coherence_matrix(RigidSphereModel(g, *sphere), f, diffuse_noise(), q).psi;
        return coherence_matrix(PlaneWaveModel(g), f, diffuse_noise(), q).psi;
      },
      py::arg("mics"), py::arg("frequency"), py::arg("sphere") = py::none(),
      py::arg("n_theta") = kDefaultQuadratureTheta, py::arg("n_phi") = kDefaultQuadraturePhi,
      "Diffuse-noise coherence matrix, free field or on a rigid sphere.");

  m.def(
      "diffuse_sinc_coherence",
      [](const Positions& mics, double f, double c) {
        return diffuse_sinc_coherence(to_geometry(mics, 0), f, PhysicalConstants{c}).psi;
      },
      py::arg("mics"), py::arg("frequency"), py::arg("speed_of_sound") = 343.0);

  m.def(
      "robust_mvdr",
      [](const Eigen::MatrixXcd& psi, const Eigen::VectorXcd& v, double gamma_db) {
        CoherenceMatrix c;
        c.psi = psi;
        const auto out = robust_mvdr(c, v, DesignSpec::from_db(gamma_db, Direction{}));
        py::dict diag;
        diag["loading"] = out.diagnostics.loading;
        diag["wng"] = out.diagnostics.achieved_wng;
        diag["constraint_active"] = out.diagnostics.constraint_active;
        diag["iterations"] = out.diagnostics.iterations;
        return py::make_tuple(out.w, diag);
      },
      py::arg("psi"), py::arg("v"), py::arg("gamma_db") = -25.0,
      "Returns (weights, diagnostics) for the WNG-constrained MVDR design.");

  m.def("array_gain", &array_gain, py::arg("w"), py::arg("v"), py::arg("psi"));
  m.def("white_noise_gain", &white_noise_gain, py::arg("w"), py::arg("v"));
  m.def(
      "macc", [](const Eigen::MatrixXcd& psi, const Eigen::VectorXcd& v, double p) {
        return macc(psi, v, MetricConfig{p});
      },
      py::arg("psi"), py::arg("v"), py::arg("input_power") = 1.0);

  m.def(
      "solve_scattering",
      [](const TriMesh& mesh, double f, const Direction& d, bool chief) {
        const ChiefConfig cfg = chief ? ChiefConfig::automatic(mesh) : ChiefConfig{};
        py::gil_scoped_release release;
        return solve_scattering(mesh, f, Incidence{d}, cfg).surface_pressure;
      },
      py::arg("mesh"), py::arg("frequency"), py::arg("direction"), py::arg("chief") = true,
      "Total surface pressure at the element centroids for a plane wave.");
}
