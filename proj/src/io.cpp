#include "beamkit/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace beamkit {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view field, const std::string& origin, std::size_t line) {
  field = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ConfigError(fmt::format("{}:{}: '{}' is not a number", origin, line, field));
  }
  return value;
}

std::size_t parse_index(std::string_view field, const std::string& origin, std::size_t line) {
  field = trim(field);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ConfigError(fmt::format("{}:{}: '{}' is not a nonnegative integer", origin, line, field));
  }
  return value;
}

void expect_header(std::istream& in, const char* header, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != header) {
    throw ConfigError(fmt::format("{}:1: expected header '{}'", origin, header));
  }
}

}  // namespace

std::string format_double(double x) {
  if (x == 0.0) return "0";
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

std::string format_angle(double degrees) {
  const double rounded = std::stod(fmt::format("{:.12g}", degrees));
  return format_double(rounded);
}

GeometryFile parse_geometry(const std::string& text, const std::string& origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", origin, e.what()));
  }
  try {
    GeometryFile out;
    out.constants.speed_of_sound = j.value("speed_of_sound", 343.0);
    out.constants.validate();
    std::vector<Point3> mics;
    for (const auto& m : j.at("mics")) {
      if (!m.is_array() || m.size() != 3) throw ConfigError(fmt::format("{}: each mic needs [x, y, z]", origin));
      mics.emplace_back(m[0].get<double>(), m[1].get<double>(), m[2].get<double>());
    }
    out.geometry = MicArrayGeometry(std::move(mics), j.value("reference_index", std::size_t{0}));
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", origin, e.what()));
  } catch (const DomainError& e) {
    throw ConfigError(fmt::format("{}: {}", origin, e.what()));
  }
}

GeometryFile load_geometry(const std::filesystem::path& path) { return parse_geometry(read_file(path), path.string()); }

TriMesh read_mesh(std::istream& in, const std::string& origin) {
  std::vector<Point3> vertices;
  std::vector<Triangle> triangles;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag.front() == '#') continue;
    if (tag == "v") {
      double x = 0.0, y = 0.0, z = 0.0;
      if (!(ls >> x >> y >> z)) throw ConfigError(fmt::format("{}:{}: malformed vertex line", origin, lineno));
      vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      long a = 0, b = 0, c = 0;
      if (!(ls >> a >> b >> c)) throw ConfigError(fmt::format("{}:{}: malformed face line", origin, lineno));
      for (long idx : {a, b, c}) {
        if (idx < 1 || idx > static_cast<long>(vertices.size())) {
          throw ConfigError(fmt::format("{}:{}: vertex index {} out of range", origin, lineno, idx));
        }
      }
      triangles.push_back({static_cast<int>(a - 1), static_cast<int>(b - 1), static_cast<int>(c - 1)});
    } else {
      throw ConfigError(fmt::format("{}:{}: unknown record '{}'", origin, lineno, tag));
    }
  }
  try {
    return TriMesh(std::move(vertices), std::move(triangles));
  } catch (const MeshError& e) {
    throw ConfigError(fmt::format("{}: {}", origin, e.what()));
  }
}

TriMesh load_mesh(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return read_mesh(in, path.string());
}

void write_mesh(std::ostream& out, const TriMesh& mesh) {
  for (const Point3& p : mesh.vertices()) {
    out << "v " << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
  }
  for (const Triangle& t : mesh.triangles()) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void write_dictionary_csv(std::ostream& out, const SteeringDictionary& dict) {
  const auto& dirs = dict.directions();
  std::vector<std::size_t> order(dirs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::make_pair(dirs[a].theta(), dirs[a].phi()) < std::make_pair(dirs[b].theta(), dirs[b].phi());
  });
  out << kDictionaryHeader << '\n';
  for (std::size_t fi = 0; fi < dict.frequencies().size(); ++fi) {
    const std::string f = format_double(dict.frequencies()[fi]);
    for (std::size_t di : order) {
      const std::string dir = format_angle(dirs[di].theta_deg()) + ',' + format_angle(dirs[di].phi_deg());
      const Eigen::VectorXcd v = dict.at(fi, di);
      for (Eigen::Index m = 0; m < v.size(); ++m) {
        out << f << ',' << dir << ',' << m << ',' << format_double(v[m].real()) << ',' << format_double(v[m].imag())
            << '\n';
      }
    }
  }
}

SteeringDictionary read_dictionary_csv(std::istream& in, const MicArrayGeometry& geometry, const std::string& origin) {
  expect_header(in, kDictionaryHeader, origin);
  using Key = std::tuple<double, double, double, std::size_t>;
  std::map<Key, Complex> rows;
  std::map<double, int> freqs;
  std::map<std::pair<double, double>, int> dirs;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 6) throw ConfigError(fmt::format("{}:{}: expected 6 fields, got {}", origin, lineno, fields.size()));
    const double f = parse_number(fields[0], origin, lineno);
    const double th = parse_number(fields[1], origin, lineno);
    const double ph = parse_number(fields[2], origin, lineno);
    const std::size_t m = parse_index(fields[3], origin, lineno);
    if (m >= geometry.size()) {
      throw ConfigError(fmt::format("{}:{}: mic index {} but the geometry has {} microphones", origin, lineno, m,
                                    geometry.size()));
    }
    const Complex value(parse_number(fields[4], origin, lineno), parse_number(fields[5], origin, lineno));
    if (!rows.emplace(Key{f, th, ph, m}, value).second) {
      throw ConfigError(fmt::format("{}:{}: duplicate entry", origin, lineno));
    }
    freqs.emplace(f, 0);
    dirs.emplace(std::make_pair(th, ph), 0);
  }
  if (rows.empty()) throw ConfigError(fmt::format("{}: dictionary has no rows", origin));
  const std::size_t expected = freqs.size() * dirs.size() * geometry.size();
  if (rows.size() != expected) {
    throw ConfigError(fmt::format("{}: {} rows but a dense grid of {} freqs x {} dirs x {} mics needs {}", origin,
                                  rows.size(), freqs.size(), dirs.size(), geometry.size(), expected));
  }
  std::vector<double> hz;
  for (const auto& [f, unused] : freqs) hz.push_back(f);
  std::vector<Direction> directions;
  try {
    for (const auto& [d, unused] : dirs) directions.push_back(Direction::from_degrees(d.first, d.second));
  } catch (const DomainError& e) {
    throw ConfigError(fmt::format("{}: {}", origin, e.what()));
  }
  // Keys iterate frequency-major, then theta, phi, mic: the dense layout.
  std::vector<Complex> entries;
  entries.reserve(rows.size());
  for (const auto& [key, value] : rows) entries.push_back(value);
  try {
    return SteeringDictionary(geometry, FrequencyGrid(std::move(hz)), std::move(directions), std::move(entries));
  } catch (const DomainError& e) {
    throw ConfigError(fmt::format("{}: {}", origin, e.what()));
  }
}

SteeringDictionary load_dictionary(const std::filesystem::path& path, const MicArrayGeometry& geometry) {
  std::istringstream in(read_file(path));
  return read_dictionary_csv(in, geometry, path.string());
}

void write_sweep_csv(std::ostream& out, const MetricSweep& sweep) {
  out << kSweepHeader << '\n';
  for (const MetricRow& r : sweep) {
    out << format_double(r.frequency) << ',' << format_angle(r.look_direction.theta_deg()) << ','
        << format_angle(r.look_direction.phi_deg()) << ',' << format_double(r.ag) << ','
        << format_double(10.0 * std::log10(r.ag)) << ',' << format_double(r.wng) << ','
        << format_double(10.0 * std::log10(r.wng)) << ',' << format_double(r.macc) << '\n';
  }
}

MetricSweep read_sweep_csv(std::istream& in, const std::string& origin) {
  expect_header(in, kSweepHeader, origin);
  MetricSweep out;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 8) throw ConfigError(fmt::format("{}:{}: expected 8 fields, got {}", origin, lineno, fields.size()));
    MetricRow r;
    r.frequency = parse_number(fields[0], origin, lineno);
    try {
      r.look_direction =
          Direction::from_degrees(parse_number(fields[1], origin, lineno), parse_number(fields[2], origin, lineno));
    } catch (const DomainError& e) {
      throw ConfigError(fmt::format("{}:{}: {}", origin, lineno, e.what()));
    }
    r.ag = parse_number(fields[3], origin, lineno);
    r.wng = parse_number(fields[5], origin, lineno);
    r.macc = parse_number(fields[7], origin, lineno);
    out.push_back(r);
  }
  return out;
}

MetricSweep load_sweep(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return read_sweep_csv(in, path.string());
}

Eigen::VectorXcd DictionaryModel::evaluate(double frequency_hz, const Direction& d) const {
  return dictionary_lookup(dict_, frequency_hz, d).values;
}

std::vector<Eigen::VectorXcd> DictionaryModel::evaluate_all(double frequency_hz,
                                                            std::span<const Direction> dirs) const {
  std::vector<Eigen::VectorXcd> out;
  out.reserve(dirs.size());
  for (const Direction& d : dirs) out.push_back(evaluate(frequency_hz, d));
  return out;
}

Eigen::VectorXcd DictionaryModel::incident(double, const Direction&) const {
  throw DomainError("a steering dictionary stores only the total field");
}

}  // namespace beamkit
