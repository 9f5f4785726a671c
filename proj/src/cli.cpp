#include "beamkit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "beamkit/coherence.hpp"
#include "beamkit/designer.hpp"
#include "beamkit/freefield.hpp"
#include "beamkit/io.hpp"
#include "beamkit/parallel.hpp"

namespace beamkit::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const std::set<std::string> kKnownKeys = {
    "geometry",   "model",     "sphere",    "mesh",          "dictionary",    "source_range",
    "series_order", "frequencies", "directions", "quadrature", "gamma_db",    "look_directions",
    "metrics",    "chief",     "max_triangles", "workers",   "output_dir",    "compare",
    "near_field_quadrature"};

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

Point3 parse_point(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(fmt::format("'{}' must be [x, y, z]", key));
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

GridSpec parse_grid(const json& j, const std::string& key) {
  GridSpec g{j.at("n_theta").get<int>(), j.at("n_phi").get<int>()};
  if (g.n_theta < 2 || g.n_phi < 2) throw ConfigError(fmt::format("'{}' needs n_theta >= 2 and n_phi >= 2", key));
  return g;
}

FrequencyGrid parse_frequencies(const json& j) {
  if (j.contains("values")) return FrequencyGrid(j.at("values").get<std::vector<double>>());
  const double start = j.at("start").get<double>();
  const double stop = j.at("stop").get<double>();
  const auto count = j.at("count").get<std::size_t>();
  const std::string spacing = j.value("spacing", std::string("log"));
  if (spacing == "log") return FrequencyGrid::logarithmic(start, stop, count);
  if (spacing == "linear") return FrequencyGrid::linear(start, stop, count);
  throw ConfigError(fmt::format("'frequencies.spacing' must be 'log' or 'linear', got '{}'", spacing));
}

ModelKind parse_model(const std::string& s) {
  if (s == "freefield-plane") return ModelKind::FreefieldPlane;
  if (s == "freefield-spherical") return ModelKind::FreefieldSpherical;
  if (s == "rigid-sphere") return ModelKind::RigidSphere;
  if (s == "bem") return ModelKind::Bem;
  if (s == "dictionary-file") return ModelKind::DictionaryFile;
  throw ConfigError(fmt::format(
      "unknown model '{}' (expected freefield-plane, freefield-spherical, rigid-sphere, bem, dictionary-file)", s));
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  out << text;
}

void warn_resolution(const RunConfig& cfg, const SteeringModel& model, std::ostream& log) {
  const auto* bem = dynamic_cast<const BemModel*>(&model);
  if (bem == nullptr) return;
  const double f = cfg.frequencies.values().back();
  const double per_wavelength = 2.0 * kPi / (wavenumber(f, cfg.constants) * bem->mesh().max_edge_length());
  if (per_wavelength < 6.0) {
    log << fmt::format("warning: {:.2f} elements per wavelength at {} Hz (below 6)\n", per_wavelength, f);
  }
}

std::string dir_fields(const Direction& d) { return format_angle(d.theta_deg()) + ',' + format_angle(d.phi_deg()); }

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::FreefieldPlane: return "freefield-plane";
    case ModelKind::FreefieldSpherical: return "freefield-spherical";
    case ModelKind::RigidSphere: return "rigid-sphere";
    case ModelKind::Bem: return "bem";
    case ModelKind::DictionaryFile: return "dictionary-file";
  }
  return "unknown";
}

RunConfig parse_config(const std::string& text, const fs::path& base_dir, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError(fmt::format("{}:{}:{}: {}", origin, line, col, e.what()));
  }
  if (!j.is_object()) throw ConfigError(fmt::format("{}: top level must be an object", origin));
  for (const auto& [key, unused] : j.items()) {
    if (!kKnownKeys.contains(key)) throw ConfigError(fmt::format("{}: unknown key '{}'", origin, key));
  }

  std::string current = "geometry";
  try {
    RunConfig cfg;
    cfg.geometry_path = resolve(base_dir, j.at("geometry").get<std::string>());
    auto geo = load_geometry(cfg.geometry_path);
    cfg.geometry = std::move(geo.geometry);
    cfg.constants = geo.constants;

    current = "model";
    cfg.model = parse_model(j.at("model").get<std::string>());
    switch (cfg.model) {
      case ModelKind::RigidSphere: {
        current = "sphere";
        const json& s = j.at("sphere");
        RigidSphere sphere;
        sphere.radius = s.at("radius").get<double>();
        if (s.contains("center")) sphere.center = parse_point(s.at("center"), "sphere.center");
        cfg.sphere = sphere;
        break;
      }
      case ModelKind::Bem:
        current = "mesh";
        cfg.mesh_path = resolve(base_dir, j.at("mesh").get<std::string>());
        break;
      case ModelKind::DictionaryFile:
        current = "dictionary";
        cfg.dictionary_path = resolve(base_dir, j.at("dictionary").get<std::string>());
        break;
      case ModelKind::FreefieldSpherical:
        current = "source_range";
        cfg.source_range = j.at("source_range").get<double>();
        break;
      case ModelKind::FreefieldPlane:
        break;
    }
    if (cfg.model == ModelKind::Bem && j.contains("source_range")) {
      current = "source_range";
      cfg.source_range = j.at("source_range").get<double>();
    }
    if (cfg.source_range && !(*cfg.source_range > 0.0)) throw ConfigError("must be positive");
    if (j.contains("series_order") && !j.at("series_order").is_null()) {
      current = "series_order";
      cfg.series.truncation_order = j.at("series_order").get<int>();
    }

    current = "frequencies";
    cfg.frequencies = parse_frequencies(j.at("frequencies"));
    current = "quadrature";
    if (j.contains("quadrature")) cfg.quadrature = parse_grid(j.at("quadrature"), "quadrature");
    current = "directions";
    cfg.directions = j.contains("directions") ? parse_grid(j.at("directions"), "directions") : cfg.quadrature;
    current = "gamma_db";
    cfg.gamma_db = j.value("gamma_db", -25.0);
    if (!std::isfinite(cfg.gamma_db)) throw ConfigError("must be finite");
    current = "look_directions";
    if (j.contains("look_directions")) {
      for (const auto& d : j.at("look_directions")) {
        if (!d.is_array() || d.size() != 2) throw ConfigError("each entry must be [theta_deg, phi_deg]");
        cfg.look_directions.push_back(Direction::from_degrees(d[0].get<double>(), d[1].get<double>()));
      }
    }
    current = "metrics";
    if (j.contains("metrics")) {
      cfg.metrics.input_power = j.at("metrics").value("input_power", 1.0);
      if (!(cfg.metrics.input_power > 0.0)) throw ConfigError("input_power must be positive");
    }
    current = "chief";
    if (j.contains("chief")) {
      const json& c = j.at("chief");
      if (c.contains("points")) {
        std::vector<Point3> pts;
        for (const auto& p : c.at("points")) pts.push_back(parse_point(p, "chief.points"));
        cfg.chief_points = std::move(pts);
      } else {
        cfg.chief_count = c.value("count", std::size_t{6});
      }
    }
    current = "max_triangles";
    cfg.max_triangles = j.value("max_triangles", std::size_t{4000});
    current = "near_field_quadrature";
    cfg.near_field_quadrature = j.value("near_field_quadrature", true);
    current = "workers";
    cfg.workers = std::max(1u, j.value("workers", 1u));
    current = "output_dir";
    cfg.output_dir = resolve(base_dir, j.value("output_dir", std::string("out")));
    current = "compare";
    if (j.contains("compare")) {
      cfg.compare_a = resolve(base_dir, j.at("compare").at("a").get<std::string>());
      cfg.compare_b = resolve(base_dir, j.at("compare").at("b").get<std::string>());
    }
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: key '{}': {}", origin, current, e.what()));
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.rfind(origin, 0) == 0 || current == "geometry") throw;
    throw ConfigError(fmt::format("{}: key '{}': {}", origin, current, what));
  } catch (const DomainError& e) {
    throw ConfigError(fmt::format("{}: key '{}': {}", origin, current, e.what()));
  }
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open config {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path(), path.string());
}

std::unique_ptr<SteeringModel> make_model(const RunConfig& cfg) {
  try {
    switch (cfg.model) {
      case ModelKind::FreefieldPlane:
        return std::make_unique<PlaneWaveModel>(cfg.geometry, cfg.constants);
      case ModelKind::FreefieldSpherical:
        return std::make_unique<SphericalWaveModel>(cfg.geometry, *cfg.source_range, cfg.constants);
      case ModelKind::RigidSphere:
        return std::make_unique<RigidSphereModel>(cfg.geometry, *cfg.sphere, cfg.series, cfg.constants);
      case ModelKind::Bem: {
        TriMesh mesh = load_mesh(*cfg.mesh_path);
        ChiefConfig chief = cfg.chief_points ? ChiefConfig{*cfg.chief_points}
                                             : ChiefConfig::automatic(mesh, cfg.chief_count);
        BemOptions options{cfg.max_triangles, 1, cfg.near_field_quadrature};
        return std::make_unique<BemModel>(std::move(mesh), cfg.geometry, std::move(chief), cfg.constants, options,
                                          cfg.source_range);
      }
      case ModelKind::DictionaryFile:
        return std::make_unique<DictionaryModel>(load_dictionary(*cfg.dictionary_path, cfg.geometry));
    }
  } catch (const DomainError& e) {
    throw ConfigError(fmt::format("model '{}': {}", to_string(cfg.model), e.what()));
  } catch (const MeshError& e) {
    throw ConfigError(fmt::format("model '{}': {}", to_string(cfg.model), e.what()));
  }
  throw ConfigError("unhandled model kind");
}

std::vector<Direction> steering_directions(const RunConfig& cfg) {
  std::vector<Direction> dirs = make_quadrature(cfg.directions.n_theta, cfg.directions.n_phi).nodes;
  for (const Direction& d : cfg.look_directions) {
    const bool present = std::any_of(dirs.begin(), dirs.end(), [&](const Direction& e) {
      return e.near(d, SteeringDictionary::kGridTolerance);
    });
    if (!present) dirs.push_back(d);
  }
  return dirs;
}

int cmd_steering(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  const auto model = make_model(cfg);
  warn_resolution(cfg, *model, log);
  const auto dirs = steering_directions(cfg);
  const std::size_t nf = cfg.frequencies.size();
  std::vector<std::vector<Eigen::VectorXcd>> per_freq(nf);
  parallel_for(nf, cfg.workers, [&](std::size_t i) {
    per_freq[i] = model->evaluate_all(cfg.frequencies[i], dirs);
  });
  std::vector<Complex> entries;
  entries.reserve(nf * dirs.size() * cfg.geometry.size());
  for (const auto& vs : per_freq)
    for (const auto& v : vs) entries.insert(entries.end(), v.data(), v.data() + v.size());
  const SteeringDictionary dict(cfg.geometry, cfg.frequencies, dirs, std::move(entries));

  fs::create_directories(out_dir);
  std::ostringstream csv;
  write_dictionary_csv(csv, dict);
  write_text(out_dir / "dictionary.csv", csv.str());
  log << fmt::format("steering: {} frequencies x {} directions x {} mics -> {}\n", nf, dirs.size(),
                     cfg.geometry.size(), (out_dir / "dictionary.csv").string());
  return kExitOk;
}

int cmd_design(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  if (cfg.look_directions.empty()) throw ConfigError("design needs at least one entry in 'look_directions'");
  const auto model = make_model(cfg);
  warn_resolution(cfg, *model, log);
  const SphereQuadrature q = make_quadrature(cfg.quadrature.n_theta, cfg.quadrature.n_phi);
  std::vector<Direction> dirs = q.nodes;
  dirs.insert(dirs.end(), cfg.look_directions.begin(), cfg.look_directions.end());
  const auto noise = diffuse_noise();

  struct Outcome {
    std::vector<std::optional<BeamformerWeights>> weights;
    std::vector<MetricRow> rows;
    std::vector<std::string> failures;
  };
  const std::size_t nf = cfg.frequencies.size();
  std::vector<Outcome> outcomes(nf);
  parallel_for(nf, cfg.workers, [&](std::size_t i) {
    const double f = cfg.frequencies[i];
    const auto samples = model->evaluate_all(f, dirs);
    const CoherenceMatrix psi =
        coherence_from_samples(f, std::span<const Eigen::VectorXcd>(samples).first(q.size()), noise, q);
    Outcome& out = outcomes[i];
    for (std::size_t l = 0; l < cfg.look_directions.size(); ++l) {
      const Direction& look = cfg.look_directions[l];
      const Eigen::VectorXcd& v = samples[q.size() + l];
      try {
        BeamformerWeights bw = robust_mvdr(psi, v, DesignSpec::from_db(cfg.gamma_db, look));
        out.rows.push_back({f, look, array_gain(bw.w, v, psi.psi), white_noise_gain(bw.w, v),
                            macc(psi.psi, v, cfg.metrics)});
        out.weights.emplace_back(std::move(bw));
      } catch (const InfeasibleError& e) {
        out.weights.emplace_back(std::nullopt);
        out.failures.push_back(fmt::format("f={} Hz, look=({}, {}) deg: {}", format_double(f),
                                           format_angle(look.theta_deg()), format_angle(look.phi_deg()), e.what()));
      }
    }
  });

  std::ostringstream weights_csv;
  weights_csv << kWeightsHeader << '\n';
  MetricSweep sweep;
  std::size_t failures = 0;
  for (const Outcome& o : outcomes) {
    for (const auto& bw : o.weights) {
      if (!bw) continue;
      const std::string prefix = format_double(bw->frequency) + ',' + dir_fields(bw->look_direction);
      const std::string suffix =
          format_double(bw->diagnostics.loading) + ',' + format_double(linear_to_db(bw->diagnostics.achieved_wng));
      for (Eigen::Index m = 0; m < bw->w.size(); ++m) {
        weights_csv << prefix << ',' << m << ',' << format_double(bw->w[m].real()) << ','
                    << format_double(bw->w[m].imag()) << ',' << suffix << '\n';
      }
    }
    sweep.insert(sweep.end(), o.rows.begin(), o.rows.end());
    for (const auto& msg : o.failures) log << "infeasible: " << msg << '\n';
    failures += o.failures.size();
  }

  fs::create_directories(out_dir);
  write_text(out_dir / "weights.csv", weights_csv.str());
  std::ostringstream sweep_csv;
  write_sweep_csv(sweep_csv, sweep);
  write_text(out_dir / "sweep.csv", sweep_csv.str());
  log << fmt::format("design: {} of {} designs written to {}\n", sweep.size(), sweep.size() + failures,
                     out_dir.string());
  if (failures > 0) {
    log << fmt::format("design: {} infeasible designs skipped\n", failures);
    return kExitPartial;
  }
  return kExitOk;
}

std::vector<CompareRow> compare_sweeps(const MetricSweep& a, const MetricSweep& b) {
  if (a.size() != b.size()) {
    throw ConfigError(fmt::format("sweep grids differ: {} rows vs {} rows", a.size(), b.size()));
  }
  std::vector<CompareRow> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const MetricRow& ra = a[i];
    const MetricRow& rb = b[i];
    if (std::abs(ra.frequency - rb.frequency) > SteeringDictionary::kGridTolerance * std::max(1.0, ra.frequency) ||
        !ra.look_direction.near(rb.look_direction, SteeringDictionary::kGridTolerance)) {
      throw ConfigError(fmt::format("sweep grids differ at row {}: f={} Hz vs f={} Hz", i + 2, ra.frequency,
                                    rb.frequency));
    }
    out.push_back({ra.frequency, ra.look_direction, linear_to_db(rb.ag / ra.ag), linear_to_db(rb.wng / ra.wng),
                   linear_to_db(rb.macc / ra.macc)});
  }
  return out;
}

int cmd_compare(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  if (!cfg.compare_a || !cfg.compare_b) throw ConfigError("compare needs 'compare': {\"a\": ..., \"b\": ...}");
  const auto rows = compare_sweeps(load_sweep(*cfg.compare_a), load_sweep(*cfg.compare_b));

  std::ostringstream csv;
  csv << "freq_hz,ld_theta_deg,ld_phi_deg,ag_delta_db,wng_delta_db,macc_delta_db\n";
  for (const CompareRow& r : rows) {
    csv << format_double(r.frequency) << ',' << dir_fields(r.look_direction) << ',' << format_double(r.ag_delta_db)
        << ',' << format_double(r.wng_delta_db) << ',' << format_double(r.macc_delta_db) << '\n';
  }
  std::ostringstream summary;
  summary << "metric,mean_delta_db,min_delta_db,max_delta_db\n";
  auto summarize = [&](const char* name, double CompareRow::*field) {
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const CompareRow& r : rows) {
      sum += r.*field;
      lo = std::min(lo, r.*field);
      hi = std::max(hi, r.*field);
    }
    const double mean = rows.empty() ? 0.0 : sum / static_cast<double>(rows.size());
    summary << name << ',' << format_double(mean) << ',' << format_double(rows.empty() ? 0.0 : lo) << ','
            << format_double(rows.empty() ? 0.0 : hi) << '\n';
    log << fmt::format("compare: {:<4} mean {:+.3f} dB, min {:+.3f} dB, max {:+.3f} dB\n", name, mean,
                       rows.empty() ? 0.0 : lo, rows.empty() ? 0.0 : hi);
  };
  summarize("ag", &CompareRow::ag_delta_db);
  summarize("wng", &CompareRow::wng_delta_db);
  summarize("macc", &CompareRow::macc_delta_db);

  fs::create_directories(out_dir);
  write_text(out_dir / "compare.csv", csv.str());
  write_text(out_dir / "compare_summary.csv", summary.str());
  return kExitOk;
}

int cmd_scatterfield(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  if (cfg.look_directions.empty()) throw ConfigError("scatterfield needs at least one entry in 'look_directions'");
  const auto model = make_model(cfg);
  if (!model->has_scattering()) {
    throw ConfigError(fmt::format("scatterfield needs a total-field model (rigid-sphere or bem), got '{}'",
                                  to_string(cfg.model)));
  }
  warn_resolution(cfg, *model, log);
  const std::size_t nf = cfg.frequencies.size();
  std::vector<std::string> blocks(nf);
  parallel_for(nf, cfg.workers, [&](std::size_t i) {
    const double f = cfg.frequencies[i];
    const auto totals = model->evaluate_all(f, cfg.look_directions);
    std::ostringstream block;
    for (std::size_t l = 0; l < cfg.look_directions.size(); ++l) {
      const Direction& d = cfg.look_directions[l];
      const Eigen::VectorXcd ps = totals[l] - model->incident(f, d);
      for (Eigen::Index m = 0; m < ps.size(); ++m) {
        block << format_double(f) << ',' << dir_fields(d) << ',' << m << ','
              << format_double(20.0 * std::log10(std::abs(ps[m]))) << '\n';
      }
    }
    blocks[i] = block.str();
  });
  std::string csv = "freq_hz,theta_deg,phi_deg,mic_index,ps_db\n";
  for (const auto& b : blocks) csv += b;
  fs::create_directories(out_dir);
  write_text(out_dir / "scatterfield.csv", csv);
  log << fmt::format("scatterfield: {} frequencies x {} directions -> {}\n", nf, cfg.look_directions.size(),
                     (out_dir / "scatterfield.csv").string());
  return kExitOk;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Beamformer design for microphone arrays on rigid bodies", "beamkit"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_override;
  unsigned workers = 0;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"steering", "build a steering-vector dictionary"},
      {"design", "design robust MVDR weights and evaluate AG/WNG/MACC"},
      {"compare", "compare two metric sweeps"},
      {"scatterfield", "scattered-field magnitude at the microphones"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_override, "output directory (overrides output_dir)");
    sub->add_option("--workers", workers, "worker threads (overrides workers)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg = load_config(config_path);
    if (workers > 0) cfg.workers = workers;
    const fs::path out_dir = out_override.empty() ? cfg.output_dir : fs::path(out_override);
    if (command == "steering") return cmd_steering(cfg, out_dir, out);
    if (command == "design") return cmd_design(cfg, out_dir, out);
    if (command == "compare") return cmd_compare(cfg, out_dir, out);
    return cmd_scatterfield(cfg, out_dir, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace beamkit::cli
