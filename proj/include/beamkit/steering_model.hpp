#pragma once

#include <span>
#include <vector>

#include "beamkit/core.hpp"

namespace beamkit {

/// A source of steering vectors over (frequency, arrival direction).
///
/// Implementations are immutable once built, so a single model may be shared
/// between worker threads.
class SteeringModel {
 public:
  virtual ~SteeringModel() = default;

  virtual std::size_t mic_count() const = 0;

  virtual Eigen::VectorXcd evaluate(double frequency_hz, const Direction& d) const = 0;

  /// Batch evaluation at one frequency. Models with per-frequency setup cost
  /// (the boundary-element solver) override this to factor once. Errors from
  /// individual nodes are rethrown annotated with the failing direction.
  virtual std::vector<Eigen::VectorXcd> evaluate_all(double frequency_hz,
                                                     std::span<const Direction> dirs) const;

  /// Incident field at the sampling points the model uses for each
  /// microphone. For free-field models this equals `evaluate`.
  virtual Eigen::VectorXcd incident(double frequency_hz, const Direction& d) const = 0;

  /// Whether the model carries a scattered component at all.
  virtual bool has_scattering() const { return false; }
};

/// Total, incident and scattered (total minus incident) pressure at the
/// microphones for one arrival direction.
struct FieldDecomposition {
  Eigen::VectorXcd total;
  Eigen::VectorXcd incident;
  Eigen::VectorXcd scattered;
};

FieldDecomposition scattered_field(const SteeringModel& model, double frequency_hz, const Direction& d);

}  // namespace beamkit
