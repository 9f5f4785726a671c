#include "beamkit/bem.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "beamkit/parallel.hpp"

namespace beamkit {

ChiefConfig ChiefConfig::automatic(const TriMesh& mesh, std::size_t count) {
  const Point3 center = mesh.volume_centroid();
  double inscribed = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < mesh.size(); ++t) {
    inscribed = std::min(inscribed, mesh.normal(t).dot(mesh.centroid(t) - center));
  }
  if (!(inscribed > 0.0)) throw MeshError("volume centroid is not inside the mesh; give CHIEF points explicitly");

  const double golden = kPi * (3.0 - std::sqrt(5.0));
  ChiefConfig cfg;
  for (std::size_t i = 0; i < count; ++i) {
    const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
    const double rho = std::sqrt(1.0 - z * z);
    const double phi = golden * static_cast<double>(i);
    const Point3 p = center + 0.4 * inscribed * Point3(rho * std::cos(phi), rho * std::sin(phi), z);
    if (!mesh.contains(p)) throw MeshError("automatic CHIEF point fell outside the mesh");
    cfg.interior_points.push_back(p);
  }
  return cfg;
}

Complex incident_field(const Incidence& inc, double frequency_hz, const Point3& x, const PhysicalConstants& consts) {
  const double k = wavenumber(frequency_hz, consts);
  if (const auto* d = std::get_if<Direction>(&inc)) {
    const double phase = k * unit_vector(*d).dot(x);
    return {std::cos(phase), std::sin(phase)};
  }
  const double r = (x - std::get<SourcePoint>(inc).position).norm();
  if (!(r > 0.0)) throw DomainError("field point coincides with the point source");
  return Complex(std::cos(k * r), -std::sin(k * r)) / (4.0 * kPi * r);
}

Complex dlp_kernel(const Point3& x, const Point3& y, const Point3& normal_y, double k) {
  const Point3 diff = y - x;
  const double r = diff.norm();
  const Complex outgoing(std::cos(k * r), -std::sin(k * r));
  return -outgoing * Complex(1.0, k * r) * diff.dot(normal_y) / (4.0 * kPi * r * r * r);
}

namespace {

// Seven-point degree-5 rule on the reference triangle (barycentric weights).
struct QuadPoint {
  double l0, l1, l2, w;
};
constexpr double kA1 = 0.059715871789770, kB1 = 0.470142064105115, kW1 = 0.132394152788506;
constexpr double kA2 = 0.797426985353087, kB2 = 0.101286507323456, kW2 = 0.125939180544827;
constexpr QuadPoint kNearRule[7] = {
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
    {kA1, kB1, kB1, kW1}, {kB1, kA1, kB1, kW1}, {kB1, kB1, kA1, kW1},
    {kA2, kB2, kB2, kW2}, {kB2, kA2, kB2, kW2}, {kB2, kB2, kA2, kW2},
};

// Elements closer than this many longest-edge lengths get the 7-point rule.
constexpr double kNearFieldFactor = 2.0;

Complex element_dlp(const TriMesh& mesh, std::size_t j, const Point3& x, double k, bool near_field) {
  const Point3& c = mesh.centroid(j);
  if (!near_field || (x - c).norm() > kNearFieldFactor * mesh.edge_length(j)) {
    return dlp_kernel(x, c, mesh.normal(j), k) * mesh.area(j);
  }
  const auto& tri = mesh.triangles()[j];
  const auto& v = mesh.vertices();
  Complex sum = 0.0;
  for (const QuadPoint& q : kNearRule) {
    const Point3 y = q.l0 * v[static_cast<std::size_t>(tri[0])] + q.l1 * v[static_cast<std::size_t>(tri[1])] +
                     q.l2 * v[static_cast<std::size_t>(tri[2])];
    sum += q.w * dlp_kernel(x, y, mesh.normal(j), k);
  }
  return sum * mesh.area(j);
}

}  // namespace

Eigen::MatrixXcd assemble_dlp(const TriMesh& mesh, double k, unsigned workers, bool near_field) {
  if (!(k > 0.0)) throw DomainError("wavenumber must be positive");
  const auto n = static_cast<Eigen::Index>(mesh.size());
  Eigen::MatrixXcd a(n, n);
  parallel_for(mesh.size(), workers, [&](std::size_t i) {
    const Point3& x = mesh.centroid(i);
    for (std::size_t j = 0; j < mesh.size(); ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          i == j ? Complex(0.0, 0.0) : element_dlp(mesh, j, x, k, near_field);
    }
  });
  return a;
}

namespace {

constexpr double kConditionFloor = 1e-13;

}  // namespace

BemSolver::BemSolver(const TriMesh& mesh, double frequency_hz, const ChiefConfig& chief,
                     const PhysicalConstants& consts, const BemOptions& options)
    : mesh_(&mesh), frequency_(frequency_hz), consts_(consts), chief_points_(chief.interior_points) {
  if (mesh.size() > options.max_triangles) {
    throw DomainError(
        fmt::format("mesh has {} triangles, above the cap of {}", mesh.size(), options.max_triangles));
  }
  for (const Point3& p : chief_points_) {
    if (!mesh.contains(p)) {
      throw DomainError(fmt::format("CHIEF point ({}, {}, {}) is not inside the mesh", p.x(), p.y(), p.z()));
    }
  }
  const double k = wavenumber(frequency_hz, consts);
  const double per_wavelength = 2.0 * kPi / (k * mesh.max_edge_length());
  if (per_wavelength < 6.0) {
    warning_ = fmt::format("{:.2f} elements per wavelength at {} Hz (below 6); expect reduced accuracy",
                           per_wavelength, frequency_hz);
  }

  const auto n = static_cast<Eigen::Index>(mesh.size());
  Eigen::MatrixXcd system = -assemble_dlp(mesh, k, options.workers, options.near_field_quadrature);
  system.diagonal().array() += 0.5;

  if (chief_points_.empty()) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(system);
    if (!(lu.rcond() > kConditionFloor)) {
      throw SolveError(fmt::format("collocation system is singular at {} Hz (rcond {})", frequency_hz, lu.rcond()));
    }
    factor_ = std::move(lu);
    return;
  }

  const auto c = static_cast<Eigen::Index>(chief_points_.size());
  Eigen::MatrixXcd stacked(n + c, n);
  stacked.topRows(n) = system;
  for (Eigen::Index r = 0; r < c; ++r) {
    const Point3& x = chief_points_[static_cast<std::size_t>(r)];
    for (std::size_t j = 0; j < mesh.size(); ++j) {
      stacked(n + r, static_cast<Eigen::Index>(j)) = dlp_kernel(x, mesh.centroid(j), mesh.normal(j), k) * mesh.area(j);
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(stacked);
  const auto diag = qr.matrixQR().diagonal().cwiseAbs();
  if (!(diag.minCoeff() > kConditionFloor * diag.maxCoeff())) {
    throw SolveError(fmt::format("CHIEF least-squares system is rank deficient at {} Hz", frequency_hz));
  }
  factor_ = std::move(qr);
}

Eigen::MatrixXcd BemSolver::rhs(std::span<const Incidence> incs) const {
  const std::size_t n = mesh_->size();
  const std::size_t rows = n + (std::holds_alternative<Eigen::PartialPivLU<Eigen::MatrixXcd>>(factor_)
                                    ? 0
                                    : chief_points_.size());
  Eigen::MatrixXcd b(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(incs.size()));
  for (std::size_t col = 0; col < incs.size(); ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col)) =
          incident_field(incs[col], frequency_, mesh_->centroid(i), consts_);
    }
    for (std::size_t r = n; r < rows; ++r) {
      b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) =
          -incident_field(incs[col], frequency_, chief_points_[r - n], consts_);
    }
  }
  return b;
}

std::vector<ScatterSolution> BemSolver::solve_all(std::span<const Incidence> incs) const {
  const Eigen::MatrixXcd b = rhs(incs);
  const Eigen::MatrixXcd x = std::visit([&](const auto& f) -> Eigen::MatrixXcd { return f.solve(b); }, factor_);
  if (!x.allFinite()) throw SolveError(fmt::format("non-finite surface pressure at {} Hz", frequency_));
  std::vector<ScatterSolution> out;
  out.reserve(incs.size());
  for (std::size_t col = 0; col < incs.size(); ++col) {
    out.push_back({frequency_, incs[col], x.col(static_cast<Eigen::Index>(col))});
  }
  return out;
}

ScatterSolution BemSolver::solve(const Incidence& inc) const {
  return std::move(solve_all(std::span<const Incidence>(&inc, 1)).front());
}

ScatterSolution solve_scattering(const TriMesh& mesh, double frequency_hz, const Incidence& inc,
                                 const ChiefConfig& chief, const PhysicalConstants& consts,
                                 const BemOptions& options) {
  return BemSolver(mesh, frequency_hz, chief, consts, options).solve(inc);
}

std::vector<std::size_t> nearest_elements(const TriMesh& mesh, const MicArrayGeometry& g) {
  std::vector<std::size_t> out(g.size());
  for (std::size_t m = 0; m < g.size(); ++m) {
    const Point3& r = g.position(m);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < mesh.size(); ++t) {
      const double d = (mesh.centroid(t) - r).squaredNorm();
      if (d < best) {
        best = d;
        out[m] = t;
      }
    }
    const double dist = std::sqrt(best);
    if (dist > 2.0 * mesh.edge_length(out[m])) {
      throw DomainError(fmt::format("microphone {} is {} m from the nearest element centroid, beyond twice the "
                                    "local edge length {} m",
                                    m, dist, mesh.edge_length(out[m])));
    }
  }
  return out;
}

SteeringVector sample_at_mics(const ScatterSolution& sol, const TriMesh& mesh, const MicArrayGeometry& g) {
  if (static_cast<std::size_t>(sol.surface_pressure.size()) != mesh.size()) {
    throw DomainError("solution does not belong to this mesh");
  }
  const auto idx = nearest_elements(mesh, g);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(g.size()));
  for (std::size_t m = 0; m < g.size(); ++m) v[static_cast<Eigen::Index>(m)] = sol.surface_pressure[static_cast<Eigen::Index>(idx[m])];
  return {std::move(v), sol.frequency, sol.incidence};
}

SteeringDictionary build_dictionary(const TriMesh& mesh, const MicArrayGeometry& g, const FrequencyGrid& freqs,
                                    const std::vector<Direction>& dirs, const ChiefConfig& chief,
                                    const PhysicalConstants& consts, const BemOptions& options) {
  BemModel model(mesh, g, chief, consts, options);
  std::vector<Complex> entries;
  entries.reserve(freqs.size() * dirs.size() * g.size());
  for (double f : freqs.values()) {
    std::vector<Eigen::VectorXcd> vs;
    try {
      vs = model.evaluate_all(f, dirs);
    } catch (const Error& e) {
      throw Error(fmt::format("dictionary solve failed at f={} Hz: {}", f, e.what()));
    }
    for (const auto& v : vs) entries.insert(entries.end(), v.data(), v.data() + v.size());
  }
  return SteeringDictionary(g, freqs, dirs, std::move(entries));
}

BemModel::BemModel(TriMesh mesh, MicArrayGeometry g, ChiefConfig chief, PhysicalConstants consts,
                   BemOptions options, std::optional<double> range)
    : mesh_(std::move(mesh)),
      geometry_(std::move(g)),
      chief_(std::move(chief)),
      consts_(consts),
      options_(options),
      range_(range) {
  consts_.validate();
  if (range_ && !(*range_ > 0.0)) throw DomainError("source range must be positive");
  sample_elements_ = nearest_elements(mesh_, geometry_);
}

Incidence BemModel::incidence_for(const Direction& d) const {
  if (range_) return SourcePoint{*range_ * unit_vector(d)};
  return d;
}

Complex BemModel::normalization(double frequency_hz, const Incidence& inc) const {
  if (std::holds_alternative<Direction>(inc)) return {1.0, 0.0};
  return 1.0 / incident_field(inc, frequency_hz, geometry_.position(geometry_.reference_index()), consts_);
}

std::vector<Eigen::VectorXcd> BemModel::evaluate_all(double frequency_hz, std::span<const Direction> dirs) const {
  std::vector<Incidence> incs;
  incs.reserve(dirs.size());
  for (const Direction& d : dirs) incs.push_back(incidence_for(d));
  const BemSolver solver(mesh_, frequency_hz, chief_, consts_, options_);
  const auto sols = solver.solve_all(incs);
  std::vector<Eigen::VectorXcd> out;
  out.reserve(sols.size());
  for (std::size_t i = 0; i < sols.size(); ++i) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(geometry_.size()));
    const Complex scale = normalization(frequency_hz, incs[i]);
    for (std::size_t m = 0; m < geometry_.size(); ++m) {
      v[static_cast<Eigen::Index>(m)] = scale * sols[i].surface_pressure[static_cast<Eigen::Index>(sample_elements_[m])];
    }
    out.push_back(std::move(v));
  }
  return out;
}

Eigen::VectorXcd BemModel::evaluate(double frequency_hz, const Direction& d) const {
  return std::move(evaluate_all(frequency_hz, std::span<const Direction>(&d, 1)).front());
}

Eigen::VectorXcd BemModel::incident(double frequency_hz, const Direction& d) const {
  const Incidence inc = incidence_for(d);
  const Complex scale = normalization(frequency_hz, inc);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(geometry_.size()));
  for (std::size_t m = 0; m < geometry_.size(); ++m) {
    v[static_cast<Eigen::Index>(m)] = scale * incident_field(inc, frequency_hz, mesh_.centroid(sample_elements_[m]), consts_);
  }
  return v;
}

}  // namespace beamkit
