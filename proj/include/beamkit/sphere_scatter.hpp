#pragma once

#include <optional>
#include <vector>

#include "beamkit/core.hpp"
#include "beamkit/steering_model.hpp"

namespace beamkit {

struct RigidSphere {
  double radius = 0.05;
  Point3 center = Point3::Zero();
};

/// Partial-wave truncation; `std::nullopt` selects the automatic order.
struct SeriesConfig {
  std::optional<int> truncation_order;
};

/// Relative size of the last retained term below which AUTO truncation stops.
inline constexpr double kSeriesTailTolerance = 1e-10;

/// Automatic truncation order for the surface series at `ka`:
/// ceil(ka) + 12, extended until the tail bound drops below the tolerance.
int auto_truncation_order(double ka);

/// Series coefficients c_n = j^n (2n+1) / h_n^(2)'(ka), n = 0..N.
std::vector<Complex> rigid_sphere_coefficients(double ka, const SeriesConfig& cfg = {});

/// Total pressure p_t / p_0 on a rigid sphere at angle gamma from the point
/// facing the source, phase referenced to the sphere center:
///   p_t = (-j / (ka)^2) sum_n j^n (2n+1) P_n(cos gamma) / h_n^(2)'(ka).
Complex rigid_sphere_surface_pressure(double ka, double cos_gamma, const SeriesConfig& cfg = {});

/// Total-field steering vector for microphones on a rigid sphere, phase
/// referenced to the array origin like the free-field plane wave.
SteeringVector rigid_sphere_steering(const MicArrayGeometry& g, const RigidSphere& s, double frequency_hz,
                                     const Direction& d, const SeriesConfig& cfg = {},
                                     const PhysicalConstants& consts = {});

class RigidSphereModel final : public SteeringModel {
 public:
  RigidSphereModel(MicArrayGeometry g, RigidSphere sphere, SeriesConfig cfg = {}, PhysicalConstants consts = {});

  std::size_t mic_count() const override { return geometry_.size(); }
  Eigen::VectorXcd evaluate(double frequency_hz, const Direction& d) const override;
  std::vector<Eigen::VectorXcd> evaluate_all(double frequency_hz, std::span<const Direction> dirs) const override;
  Eigen::VectorXcd incident(double frequency_hz, const Direction& d) const override;
  bool has_scattering() const override { return true; }

 private:
  Eigen::VectorXcd evaluate_with(const std::vector<Complex>& coeffs, double k, const Direction& d) const;

  MicArrayGeometry geometry_;
  RigidSphere sphere_;
  SeriesConfig cfg_;
  PhysicalConstants consts_;
};

}  // namespace beamkit
