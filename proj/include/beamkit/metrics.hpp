#pragma once

#include <vector>

#include "beamkit/core.hpp"
#include "beamkit/steering_model.hpp"

namespace beamkit {

struct MetricConfig {
  double input_power = 1.0;
  /// Eigenvalues of Psi below floor_ratio * trace(Psi) / M are raised to it.
  double eigen_floor_ratio = 1e-12;
};

/// |w^H v|^2 / (w^H Psi w), linear.
double array_gain(const Eigen::VectorXcd& w, const Eigen::VectorXcd& v_look, const Eigen::MatrixXcd& psi);

/// |w^H v|^2 / (w^H w), linear.
double white_noise_gain(const Eigen::VectorXcd& w, const Eigen::VectorXcd& v_look);

/// Channel capacity of the array toward the look direction, in nats:
/// log(1 + P ||S^-1/2 U^H v||^2) with Psi = U S U^H.
double macc(const Eigen::MatrixXcd& psi, const Eigen::VectorXcd& v_look, const MetricConfig& cfg = {});

/// B(d) = w^H v(d) for each direction.
std::vector<Complex> beampattern(const Eigen::VectorXcd& w, const SteeringModel& provider, double frequency_hz,
                                 std::span<const Direction> dirs);

struct MetricRow {
  double frequency = 0.0;
  Direction look_direction;
  double ag = 0.0;
  double wng = 0.0;
  double macc = 0.0;
};

using MetricSweep = std::vector<MetricRow>;

}  // namespace beamkit
