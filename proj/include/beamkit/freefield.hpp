#pragma once

#include "beamkit/core.hpp"
#include "beamkit/steering_model.hpp"

namespace beamkit {

/// Plane wave of unit amplitude arriving from `d`: v_m = exp(+j k u(d).r_m).
SteeringVector plane_wave_steering(const MicArrayGeometry& g, double frequency_hz, const Direction& d,
                                   const PhysicalConstants& consts = {});

/// Point source at `s`, normalized so the reference microphone reads 1:
/// v_m = (R_ref / R_m) exp(-j k (R_m - R_ref)).
SteeringVector spherical_wave_steering(const MicArrayGeometry& g, double frequency_hz, const SourcePoint& s,
                                       const PhysicalConstants& consts = {});

class PlaneWaveModel final : public SteeringModel {
 public:
  PlaneWaveModel(MicArrayGeometry g, PhysicalConstants consts = {});

  std::size_t mic_count() const override { return geometry_.size(); }
  Eigen::VectorXcd evaluate(double frequency_hz, const Direction& d) const override;
  Eigen::VectorXcd incident(double frequency_hz, const Direction& d) const override {
    return evaluate(frequency_hz, d);
  }

 private:
  MicArrayGeometry geometry_;
  PhysicalConstants consts_;
};

/// Near-field model: the source for direction d sits at distance `range`
/// from the array origin along u(d).
class SphericalWaveModel final : public SteeringModel {
 public:
  SphericalWaveModel(MicArrayGeometry g, double range, PhysicalConstants consts = {});

  std::size_t mic_count() const override { return geometry_.size(); }
  Eigen::VectorXcd evaluate(double frequency_hz, const Direction& d) const override;
  Eigen::VectorXcd incident(double frequency_hz, const Direction& d) const override {
    return evaluate(frequency_hz, d);
  }

 private:
  MicArrayGeometry geometry_;
  double range_;
  PhysicalConstants consts_;
};

}  // namespace beamkit
