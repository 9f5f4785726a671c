#include "beamkit/freefield.hpp"

#include <cmath>

#include <fmt/format.h>

namespace beamkit {

std::vector<Eigen::VectorXcd> SteeringModel::evaluate_all(double frequency_hz,
                                                          std::span<const Direction> dirs) const {
  std::vector<Eigen::VectorXcd> out;
  out.reserve(dirs.size());
  for (const Direction& d : dirs) {
    try {
      out.push_back(evaluate(frequency_hz, d));
    } catch (const Error& e) {
      throw Error(fmt::format("steering evaluation failed at f={} Hz, theta={} deg, phi={} deg: {}",
                              frequency_hz, d.theta_deg(), d.phi_deg(), e.what()));
    }
  }
  return out;
}

FieldDecomposition scattered_field(const SteeringModel& model, double frequency_hz, const Direction& d) {
  if (!model.has_scattering()) throw DomainError("free-field model has no scattered component");
  FieldDecomposition out{model.evaluate(frequency_hz, d), model.incident(frequency_hz, d), {}};
  out.scattered = out.total - out.incident;
  return out;
}

SteeringVector plane_wave_steering(const MicArrayGeometry& g, double frequency_hz, const Direction& d,
                                   const PhysicalConstants& consts) {
  const double k = wavenumber(frequency_hz, consts);
  const Point3 u = unit_vector(d);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(g.size()));
  for (std::size_t m = 0; m < g.size(); ++m) {
    const double phase = k * u.dot(g.position(m));
    v[static_cast<Eigen::Index>(m)] = Complex(std::cos(phase), std::sin(phase));
  }
  return {std::move(v), frequency_hz, d};
}

SteeringVector spherical_wave_steering(const MicArrayGeometry& g, double frequency_hz, const SourcePoint& s,
                                       const PhysicalConstants& consts) {
  const double k = wavenumber(frequency_hz, consts);
  std::vector<double> dist(g.size());
  for (std::size_t m = 0; m < g.size(); ++m) {
    dist[m] = (s.position - g.position(m)).norm();
    if (!(dist[m] > 0.0)) throw DomainError(fmt::format("source coincides with microphone {}", m));
  }
  const double r_ref = dist[g.reference_index()];
  Eigen::VectorXcd v(static_cast<Eigen::Index>(g.size()));
  for (std::size_t m = 0; m < g.size(); ++m) {
    const double phase = -k * (dist[m] - r_ref);
    v[static_cast<Eigen::Index>(m)] = (r_ref / dist[m]) * Complex(std::cos(phase), std::sin(phase));
  }
  v[static_cast<Eigen::Index>(g.reference_index())] = Complex(1.0, 0.0);
  return {std::move(v), frequency_hz, s};
}

PlaneWaveModel::PlaneWaveModel(MicArrayGeometry g, PhysicalConstants consts)
    : geometry_(std::move(g)), consts_(consts) {
  consts_.validate();
}

Eigen::VectorXcd PlaneWaveModel::evaluate(double frequency_hz, const Direction& d) const {
  return plane_wave_steering(geometry_, frequency_hz, d, consts_).values;
}

SphericalWaveModel::SphericalWaveModel(MicArrayGeometry g, double range, PhysicalConstants consts)
    : geometry_(std::move(g)), range_(range), consts_(consts) {
  consts_.validate();
  if (!(range_ > 0.0)) throw DomainError("source range must be positive");
}

Eigen::VectorXcd SphericalWaveModel::evaluate(double frequency_hz, const Direction& d) const {
  const SourcePoint s{range_ * unit_vector(d)};
  return spherical_wave_steering(geometry_, frequency_hz, s, consts_).values;
}

}  // namespace beamkit
