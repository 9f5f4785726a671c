#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "beamkit/error.hpp"

namespace beamkit {

using Complex = std::complex<double>;
using Point3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegree = kPi / 180.0;

struct PhysicalConstants {
  double speed_of_sound = 343.0;  // m/s, air at 20 C

  void validate() const;
};

/// Arrival direction: polar angle theta in [0, pi] from +z, azimuth phi in
/// [0, 2pi) from +x. The unit vector points from the array origin toward the
/// source; the wave propagates along its negative.
class Direction {
 public:
  Direction() = default;
  Direction(double theta, double phi);

  static Direction from_degrees(double theta_deg, double phi_deg);

  double theta() const noexcept { return theta_; }
  double phi() const noexcept { return phi_; }
  double theta_deg() const noexcept { return theta_ / kDegree; }
  double phi_deg() const noexcept { return phi_ / kDegree; }

  /// True when both angles agree within `tol` radians (azimuth compared on
  /// the circle).
  bool near(const Direction& other, double tol) const noexcept;

  friend bool operator==(const Direction&, const Direction&) = default;

 private:
  double theta_ = 0.0;
  double phi_ = 0.0;
};

/// Near-field point source location in meters.
struct SourcePoint {
  Point3 position = Point3::Zero();
};

/// What drives a steering vector: a far-field plane wave or a point source.
using Incidence = std::variant<Direction, SourcePoint>;

class MicArrayGeometry {
 public:
  MicArrayGeometry() = default;
  explicit MicArrayGeometry(std::vector<Point3> positions, std::size_t reference_index = 0);

  std::size_t size() const noexcept { return positions_.size(); }
  const std::vector<Point3>& positions() const noexcept { return positions_; }
  const Point3& position(std::size_t m) const { return positions_.at(m); }
  std::size_t reference_index() const noexcept { return reference_; }

  /// Largest pairwise microphone distance.
  double aperture() const;

 private:
  std::vector<Point3> positions_;
  std::size_t reference_ = 0;
};

class FrequencyGrid {
 public:
  FrequencyGrid() = default;
  explicit FrequencyGrid(std::vector<double> hz);

  static FrequencyGrid linear(double start, double stop, std::size_t count);
  static FrequencyGrid logarithmic(double start, double stop, std::size_t count);

  std::size_t size() const noexcept { return hz_.size(); }
  double operator[](std::size_t i) const { return hz_[i]; }
  const std::vector<double>& values() const noexcept { return hz_; }

  /// Index of the node within `tol` hertz of `f`, if any.
  std::optional<std::size_t> find(double f, double tol) const;

 private:
  std::vector<double> hz_;
};

struct SteeringVector {
  Eigen::VectorXcd values;
  double frequency = 0.0;
  Incidence incidence = Direction{};

  std::size_t size() const noexcept { return static_cast<std::size_t>(values.size()); }
};

Point3 unit_vector(const Direction& d);

/// k = 2 pi f / c.
double wavenumber(double frequency_hz, const PhysicalConstants& consts = {});

/// Divides every entry by the entry at `ref`; the result is exactly 1 there.
SteeringVector normalize_to_reference(const SteeringVector& v, std::size_t ref);

/// Dense frequency x direction x microphone grid of steering vectors.
class SteeringDictionary {
 public:
  static constexpr double kGridTolerance = 1e-9;

  SteeringDictionary(MicArrayGeometry geometry, FrequencyGrid frequencies,
                     std::vector<Direction> directions, std::vector<Complex> entries);

  const MicArrayGeometry& geometry() const noexcept { return geometry_; }
  const FrequencyGrid& frequencies() const noexcept { return frequencies_; }
  const std::vector<Direction>& directions() const noexcept { return directions_; }
  const std::vector<Complex>& entries() const noexcept { return entries_; }
  std::size_t mic_count() const noexcept { return geometry_.size(); }

  Eigen::VectorXcd at(std::size_t freq_index, std::size_t dir_index) const;

  std::optional<std::size_t> find_direction(const Direction& d, double tol = kGridTolerance) const;

 private:
  MicArrayGeometry geometry_;
  FrequencyGrid frequencies_;
  std::vector<Direction> directions_;
  std::vector<Complex> entries_;
  std::vector<std::size_t> by_theta_;  // direction indices sorted by theta
};

/// Exact-node retrieval; throws LookupError naming the nearest node otherwise.
SteeringVector dictionary_lookup(const SteeringDictionary& dict, double frequency_hz,
                                 const Direction& d);

}  // namespace beamkit
