#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "beamkit/core.hpp"
#include "beamkit/mesh.hpp"
#include "beamkit/metrics.hpp"
#include "beamkit/steering_model.hpp"

namespace beamkit {

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

/// Angle in degrees rounded to 12 significant digits, so that values entered
/// in degrees print back unchanged after the trip through radians.
std::string format_angle(double degrees);

struct GeometryFile {
  MicArrayGeometry geometry;
  PhysicalConstants constants;
};

/// JSON: {"speed_of_sound": 343.0, "reference_index": 0, "mics": [[x, y, z], ...]}.
GeometryFile parse_geometry(const std::string& text, const std::string& origin = "<geometry>");
GeometryFile load_geometry(const std::filesystem::path& path);

/// ASCII mesh: `v x y z` vertex lines, `f i j k` 1-based triangle lines.
/// Blank lines and lines starting with `#` are ignored.
TriMesh read_mesh(std::istream& in, const std::string& origin = "<mesh>");
TriMesh load_mesh(const std::filesystem::path& path);
void write_mesh(std::ostream& out, const TriMesh& mesh);

inline constexpr const char* kDictionaryHeader = "freq_hz,theta_deg,phi_deg,mic_index,real,imag";
inline constexpr const char* kWeightsHeader =
    "freq_hz,ld_theta_deg,ld_phi_deg,mic_index,real,imag,loading,wng_db_achieved";
inline constexpr const char* kSweepHeader = "freq_hz,ld_theta_deg,ld_phi_deg,ag_lin,ag_db,wng_lin,wng_db,macc_nats";

/// Rows sorted by frequency, then theta, then phi, then microphone.
void write_dictionary_csv(std::ostream& out, const SteeringDictionary& dict);

/// Reads a dense dictionary; every (frequency, direction, mic) triple must
/// appear exactly once. Microphone count must match `geometry`.
SteeringDictionary read_dictionary_csv(std::istream& in, const MicArrayGeometry& geometry,
                                       const std::string& origin = "<dictionary>");
SteeringDictionary load_dictionary(const std::filesystem::path& path, const MicArrayGeometry& geometry);

void write_sweep_csv(std::ostream& out, const MetricSweep& sweep);
MetricSweep read_sweep_csv(std::istream& in, const std::string& origin = "<sweep>");
MetricSweep load_sweep(const std::filesystem::path& path);

/// Exact-node lookups into a loaded dictionary.
class DictionaryModel final : public SteeringModel {
 public:
  explicit DictionaryModel(SteeringDictionary dict) : dict_(std::move(dict)) {}

  std::size_t mic_count() const override { return dict_.mic_count(); }
  Eigen::VectorXcd evaluate(double frequency_hz, const Direction& d) const override;
  std::vector<Eigen::VectorXcd> evaluate_all(double frequency_hz, std::span<const Direction> dirs) const override;
  /// Dictionaries store only the total field; always throws.
  Eigen::VectorXcd incident(double frequency_hz, const Direction& d) const override;

  const SteeringDictionary& dictionary() const noexcept { return dict_; }

 private:
  SteeringDictionary dict_;
};

}  // namespace beamkit
