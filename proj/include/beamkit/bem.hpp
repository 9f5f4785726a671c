#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "beamkit/core.hpp"
#include "beamkit/mesh.hpp"
#include "beamkit/steering_model.hpp"

namespace beamkit {

/// Interior points whose Kirchhoff identities are appended to the surface
/// equations to suppress irregular frequencies. Empty means plain collocation.
struct ChiefConfig {
  std::vector<Point3> interior_points;

  /// `count` golden-spiral points at 40% of the inscribed radius around the
  /// volume centroid. Throws MeshError if any of them falls outside the mesh.
  static ChiefConfig automatic(const TriMesh& mesh, std::size_t count = 6);
};

struct BemOptions {
  std::size_t max_triangles = 4000;
  unsigned workers = 1;
  /// Refine elements near the collocation point with a seven-point rule.
  /// Off gives pure centroid quadrature for every off-diagonal entry.
  bool near_field_quadrature = true;
};

/// Total surface pressure at every triangle centroid.
struct ScatterSolution {
  double frequency = 0.0;
  Incidence incidence = Direction{};
  Eigen::VectorXcd surface_pressure;
};

/// Background field at x. Plane: exp(+j k u(d).x). Spherical:
/// exp(-j k R) / (4 pi R) with R = |x - s|.
Complex incident_field(const Incidence& inc, double frequency_hz, const Point3& x,
                       const PhysicalConstants& consts = {});

/// Normal derivative of G = exp(-j k R) / (4 pi R) with respect to the source
/// point y along n_y.
Complex dlp_kernel(const Point3& x, const Point3& y, const Point3& normal_y, double k);

/// A[i][j] = integral of dG/dn_y(c_i, y) over element j, collocated at centroids.
/// Far elements use the centroid rule, elements within two edge lengths a
/// seven-point rule unless `near_field` is false; A[i][i] = 0 for flat elements.
Eigen::MatrixXcd assemble_dlp(const TriMesh& mesh, double k, unsigned workers = 1, bool near_field = true);

/// Rigid (Neumann) exterior problem at one frequency. The system
/// (1/2 I - A) p = p_inc, stacked with CHIEF rows sum_j B[c][j] p_j = -p_inc(x_c),
/// is factored once and reused for every incident field.
class BemSolver {
 public:
  BemSolver(const TriMesh& mesh, double frequency_hz, const ChiefConfig& chief, const PhysicalConstants& consts = {},
            const BemOptions& options = {});

  ScatterSolution solve(const Incidence& inc) const;
  std::vector<ScatterSolution> solve_all(std::span<const Incidence> incs) const;

  /// Set when the mesh has fewer than six elements per wavelength.
  const std::optional<std::string>& resolution_warning() const noexcept { return warning_; }

 private:
  Eigen::MatrixXcd rhs(std::span<const Incidence> incs) const;

  const TriMesh* mesh_;
  double frequency_;
  PhysicalConstants consts_;
  std::vector<Point3> chief_points_;
  std::variant<Eigen::PartialPivLU<Eigen::MatrixXcd>, Eigen::HouseholderQR<Eigen::MatrixXcd>> factor_;
  std::optional<std::string> warning_;
};

ScatterSolution solve_scattering(const TriMesh& mesh, double frequency_hz, const Incidence& inc,
                                 const ChiefConfig& chief, const PhysicalConstants& consts = {},
                                 const BemOptions& options = {});

/// Index of the triangle whose centroid is nearest each microphone. Throws if
/// a microphone is farther than twice that triangle's longest edge.
std::vector<std::size_t> nearest_elements(const TriMesh& mesh, const MicArrayGeometry& g);

SteeringVector sample_at_mics(const ScatterSolution& sol, const TriMesh& mesh, const MicArrayGeometry& g);

/// One solve per (frequency, direction), frequency-major.
SteeringDictionary build_dictionary(const TriMesh& mesh, const MicArrayGeometry& g, const FrequencyGrid& freqs,
                                    const std::vector<Direction>& dirs, const ChiefConfig& chief,
                                    const PhysicalConstants& consts = {}, const BemOptions& options = {});

/// Steering model backed by the boundary-element solver. With `range` set the
/// background is a point source at range * u(d), and results are normalized
/// by the free-field point-source value at the reference microphone.
class BemModel final : public SteeringModel {
 public:
  BemModel(TriMesh mesh, MicArrayGeometry g, ChiefConfig chief, PhysicalConstants consts = {},
           BemOptions options = {}, std::optional<double> range = std::nullopt);

  std::size_t mic_count() const override { return geometry_.size(); }
  Eigen::VectorXcd evaluate(double frequency_hz, const Direction& d) const override;
  std::vector<Eigen::VectorXcd> evaluate_all(double frequency_hz, std::span<const Direction> dirs) const override;
  Eigen::VectorXcd incident(double frequency_hz, const Direction& d) const override;
  bool has_scattering() const override { return true; }

  const TriMesh& mesh() const noexcept { return mesh_; }

 private:
  Incidence incidence_for(const Direction& d) const;
  Complex normalization(double frequency_hz, const Incidence& inc) const;

  TriMesh mesh_;
  MicArrayGeometry geometry_;
  ChiefConfig chief_;
  PhysicalConstants consts_;
  BemOptions options_;
  std::optional<double> range_;
  std::vector<std::size_t> sample_elements_;
};

}  // namespace beamkit
