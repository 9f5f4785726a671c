#include "beamkit/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace beamkit {

void PhysicalConstants::validate() const {
  if (!(speed_of_sound > 0.0) || !std::isfinite(speed_of_sound)) {
    throw DomainError(fmt::format("speed of sound must be positive, got {}", speed_of_sound));
  }
}

Direction::Direction(double theta, double phi) {
  constexpr double slack = 1e-12;
  if (!std::isfinite(theta) || !std::isfinite(phi) || theta < -slack || theta > kPi + slack) {
    throw DomainError(fmt::format("polar angle {} rad outside [0, pi]", theta));
  }
  theta_ = std::clamp(theta, 0.0, kPi);
  phi_ = std::fmod(phi, 2.0 * kPi);
  if (phi_ < 0.0) phi_ += 2.0 * kPi;
  if (phi_ >= 2.0 * kPi) phi_ = 0.0;
}

Direction Direction::from_degrees(double theta_deg, double phi_deg) {
  return Direction(theta_deg * kDegree, phi_deg * kDegree);
}

bool Direction::near(const Direction& other, double tol) const noexcept {
  if (std::abs(theta_ - other.theta_) > tol) return false;
  double dphi = std::abs(phi_ - other.phi_);
  dphi = std::min(dphi, 2.0 * kPi - dphi);
  return dphi <= tol;
}

MicArrayGeometry::MicArrayGeometry(std::vector<Point3> positions, std::size_t reference_index)
    : positions_(std::move(positions)), reference_(reference_index) {
  if (positions_.empty()) throw DomainError("microphone array needs at least one microphone");
  if (reference_ >= positions_.size()) {
    throw DomainError(fmt::format("reference index {} out of range for {} microphones",
                                  reference_, positions_.size()));
  }
  for (std::size_t m = 0; m < positions_.size(); ++m) {
    if (!positions_[m].allFinite()) throw DomainError(fmt::format("microphone {} has a non-finite position", m));
    for (std::size_t q = 0; q < m; ++q) {
      if ((positions_[m] - positions_[q]).norm() == 0.0) {
        throw DomainError(fmt::format("microphones {} and {} coincide", q, m));
      }
    }
  }
}

double MicArrayGeometry::aperture() const {
  double best = 0.0;
  for (std::size_t m = 0; m < positions_.size(); ++m)
    for (std::size_t q = m + 1; q < positions_.size(); ++q)
      best = std::max(best, (positions_[m] - positions_[q]).norm());
  return best;
}

FrequencyGrid::FrequencyGrid(std::vector<double> hz) : hz_(std::move(hz)) {
  if (hz_.empty()) throw DomainError("frequency grid is empty");
  for (std::size_t i = 0; i < hz_.size(); ++i) {
    if (!(hz_[i] > 0.0) || !std::isfinite(hz_[i])) {
      throw DomainError(fmt::format("frequency {} Hz is not positive", hz_[i]));
    }
    if (i > 0 && !(hz_[i] > hz_[i - 1])) throw DomainError("frequency grid must be strictly increasing");
  }
}

FrequencyGrid FrequencyGrid::linear(double start, double stop, std::size_t count) {
  if (count == 0) throw DomainError("frequency count must be positive");
  if (count == 1) return FrequencyGrid({start});
  std::vector<double> hz(count);
  for (std::size_t i = 0; i < count; ++i) {
    hz[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  hz.back() = stop;
  return FrequencyGrid(std::move(hz));
}

FrequencyGrid FrequencyGrid::logarithmic(double start, double stop, std::size_t count) {
  if (count == 0) throw DomainError("frequency count must be positive");
  if (!(start > 0.0) || !(stop > 0.0)) throw DomainError("logarithmic grid needs positive bounds");
  if (count == 1) return FrequencyGrid({start});
  std::vector<double> hz(count);
  const double ratio = std::log(stop / start);
  for (std::size_t i = 0; i < count; ++i) {
    hz[i] = start * std::exp(ratio * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  hz.front() = start;
  hz.back() = stop;
  return FrequencyGrid(std::move(hz));
}

std::optional<std::size_t> FrequencyGrid::find(double f, double tol) const {
  auto it = std::lower_bound(hz_.begin(), hz_.end(), f - tol);
  if (it != hz_.end() && std::abs(*it - f) <= tol) return static_cast<std::size_t>(it - hz_.begin());
  return std::nullopt;
}

Point3 unit_vector(const Direction& d) {
  const double st = std::sin(d.theta());
  return {st * std::cos(d.phi()), st * std::sin(d.phi()), std::cos(d.theta())};
}

double wavenumber(double frequency_hz, const PhysicalConstants& consts) {
  if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz)) {
    throw DomainError(fmt::format("frequency must be positive, got {} Hz", frequency_hz));
  }
  consts.validate();
  return 2.0 * kPi * frequency_hz / consts.speed_of_sound;
}

SteeringVector normalize_to_reference(const SteeringVector& v, std::size_t ref) {
  if (ref >= v.size()) throw DomainError(fmt::format("reference index {} out of range", ref));
  const Complex pivot = v.values[static_cast<Eigen::Index>(ref)];
  if (pivot == Complex(0.0, 0.0)) throw DomainError("reference entry is zero");
  SteeringVector out = v;
  out.values /= pivot;
  out.values[static_cast<Eigen::Index>(ref)] = Complex(1.0, 0.0);
  return out;
}

SteeringDictionary::SteeringDictionary(MicArrayGeometry geometry, FrequencyGrid frequencies,
                                       std::vector<Direction> directions, std::vector<Complex> entries)
    : geometry_(std::move(geometry)),
      frequencies_(std::move(frequencies)),
      directions_(std::move(directions)),
      entries_(std::move(entries)) {
  if (directions_.empty()) throw DomainError("dictionary has no directions");
  const std::size_t expected = frequencies_.size() * directions_.size() * geometry_.size();
  if (entries_.size() != expected) {
    throw DomainError(fmt::format("dictionary holds {} entries, expected {} ({} freqs x {} dirs x {} mics)",
                                  entries_.size(), expected, frequencies_.size(), directions_.size(),
                                  geometry_.size()));
  }
  for (const Complex& c : entries_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw DomainError("dictionary entry is not finite");
  }
  by_theta_.resize(directions_.size());
  for (std::size_t i = 0; i < by_theta_.size(); ++i) by_theta_[i] = i;
  std::stable_sort(by_theta_.begin(), by_theta_.end(), [&](std::size_t a, std::size_t b) {
    return directions_[a].theta() < directions_[b].theta();
  });
}

Eigen::VectorXcd SteeringDictionary::at(std::size_t freq_index, std::size_t dir_index) const {
  const std::size_t m = geometry_.size();
  const std::size_t offset = (freq_index * directions_.size() + dir_index) * m;
  Eigen::VectorXcd out(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) out[static_cast<Eigen::Index>(i)] = entries_.at(offset + i);
  return out;
}

std::optional<std::size_t> SteeringDictionary::find_direction(const Direction& d, double tol) const {
  auto lo = std::lower_bound(by_theta_.begin(), by_theta_.end(), d.theta() - tol,
                             [&](std::size_t i, double t) { return directions_[i].theta() < t; });
  for (auto it = lo; it != by_theta_.end() && directions_[*it].theta() <= d.theta() + tol; ++it) {
    if (directions_[*it].near(d, tol)) return *it;
  }
  return std::nullopt;
}

SteeringVector dictionary_lookup(const SteeringDictionary& dict, double frequency_hz, const Direction& d) {
  constexpr double tol = SteeringDictionary::kGridTolerance;
  const auto fi = dict.frequencies().find(frequency_hz, tol);
  const auto di = dict.find_direction(d, tol);
  if (fi && di) return {dict.at(*fi, *di), frequency_hz, d};

  const auto& hz = dict.frequencies().values();
  const auto nearest_f = *std::min_element(hz.begin(), hz.end(), [&](double a, double b) {
    return std::abs(a - frequency_hz) < std::abs(b - frequency_hz);
  });
  const Point3 u = unit_vector(d);
  const auto& dirs = dict.directions();
  const auto nearest_d = *std::max_element(dirs.begin(), dirs.end(), [&](const Direction& a, const Direction& b) {
    return unit_vector(a).dot(u) < unit_vector(b).dot(u);
  });
  throw LookupError(fmt::format(
      "no dictionary node at f={:.10g} Hz, theta={:.10g} deg, phi={:.10g} deg; nearest node is f={:.10g} Hz, "
      "theta={:.10g} deg, phi={:.10g} deg",
      frequency_hz, d.theta_deg(), d.phi_deg(), nearest_f, nearest_d.theta_deg(), nearest_d.phi_deg()));
}

}  // namespace beamkit
