#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "beamkit/bem.hpp"
#include "beamkit/core.hpp"
#include "beamkit/metrics.hpp"
#include "beamkit/sphere_scatter.hpp"
#include "beamkit/steering_model.hpp"

namespace beamkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitPartial = 3;

enum class ModelKind { FreefieldPlane, FreefieldSpherical, RigidSphere, Bem, DictionaryFile };

std::string to_string(ModelKind kind);

struct GridSpec {
  int n_theta = 0;
  int n_phi = 0;
};

/// Parsed batch configuration. Relative paths are resolved against the
/// directory holding the config file.
struct RunConfig {
  std::filesystem::path geometry_path;
  MicArrayGeometry geometry;
  PhysicalConstants constants;

  ModelKind model = ModelKind::FreefieldPlane;
  std::optional<RigidSphere> sphere;
  SeriesConfig series;
  std::optional<std::filesystem::path> mesh_path;
  std::optional<std::filesystem::path> dictionary_path;
  std::optional<double> source_range;

  FrequencyGrid frequencies;
  GridSpec directions{16, 32};
  GridSpec quadrature{64, 128};
  double gamma_db = -25.0;
  std::vector<Direction> look_directions;
  MetricConfig metrics;

  std::optional<std::vector<Point3>> chief_points;
  std::size_t chief_count = 6;
  std::size_t max_triangles = 4000;
  bool near_field_quadrature = true;
  unsigned workers = 1;

  std::filesystem::path output_dir = "out";
  std::optional<std::filesystem::path> compare_a;
  std::optional<std::filesystem::path> compare_b;
};

/// Throws ConfigError with `path:line:column` diagnostics for syntax errors
/// and the offending key for schema errors.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                       const std::string& origin = "<config>");
RunConfig load_config(const std::filesystem::path& path);

std::unique_ptr<SteeringModel> make_model(const RunConfig& cfg);

/// Direction grid nodes followed by any look directions not already on it.
std::vector<Direction> steering_directions(const RunConfig& cfg);

/// Each command writes its files into `out_dir` and returns an exit code.
/// `steering`: dictionary.csv. `design`: weights.csv and sweep.csv.
/// `compare`: compare.csv and compare_summary.csv. `scatterfield`: scatterfield.csv.
int cmd_steering(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_design(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_compare(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_scatterfield(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

struct CompareRow {
  double frequency = 0.0;
  Direction look_direction;
  double ag_delta_db = 0.0;
  double wng_delta_db = 0.0;
  double macc_delta_db = 0.0;
};

/// Per-row 10 log10(b / a) for AG, WNG and MACC. Throws ConfigError when the
/// (frequency, look direction) grids differ.
std::vector<CompareRow> compare_sweeps(const MetricSweep& a, const MetricSweep& b);

/// Full command-line entry point: `beamkit <command> --config <path> [--out <dir>] [--workers N]`.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace beamkit::cli
