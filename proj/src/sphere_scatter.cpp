#include "beamkit/sphere_scatter.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "beamkit/freefield.hpp"
#include "beamkit/special_functions.hpp"

namespace beamkit {
namespace {

constexpr int kMaxExtraTerms = 400;

// h_n^(2)'(x) for n = 0..nmax. Orders whose y_n overflowed come back infinite.
std::vector<Complex> hankel2_derivatives(int nmax, double x) {
  const auto j = sph_bessel_j_all(nmax + 1, x);
  const auto y = sph_bessel_y_all(nmax + 1, x);
  std::vector<Complex> out(static_cast<std::size_t>(nmax) + 1);
  for (int n = 0; n <= nmax; ++n) {
    const auto i = static_cast<std::size_t>(n);
    double jd = 0.0;
    double yd = 0.0;
    if (n == 0) {
      jd = -j[1];
      yd = -y[1];
    } else {
      jd = j[i - 1] - (n + 1.0) / x * j[i];
      yd = y[i - 1] - (n + 1.0) / x * y[i];
    }
    out[i] = Complex(jd, -yd);
  }
  return out;
}

Complex j_power(int n) {
  switch (n % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Upper bound of |term_n| in the surface sum, using |P_n| <= 1.
double term_bound(int n, Complex hd, double ka) {
  if (!std::isfinite(std::abs(hd))) return 0.0;
  return (2.0 * n + 1.0) / (std::abs(hd) * ka * ka);
}

void check_ka(double ka) {
  if (!(ka > 0.0) || !std::isfinite(ka)) throw DomainError(fmt::format("ka must be positive, got {}", ka));
}

}  // namespace

int auto_truncation_order(double ka) {
  check_ka(ka);
  int n = static_cast<int>(std::ceil(ka)) + 12;
  const int limit = n + kMaxExtraTerms;
  auto hd = hankel2_derivatives(limit, ka);
  while (term_bound(n, hd[static_cast<std::size_t>(n)], ka) >= kSeriesTailTolerance) {
    if (++n > limit) {
      throw Error(fmt::format("rigid-sphere series did not converge at ka={} within {} terms", ka, limit));
    }
  }
  return n;
}

std::vector<Complex> rigid_sphere_coefficients(double ka, const SeriesConfig& cfg) {
  check_ka(ka);
  int order = 0;
  if (cfg.truncation_order) {
    order = *cfg.truncation_order;
    if (order < 0) throw DomainError(fmt::format("truncation order must be nonnegative, got {}", order));
  } else {
    order = auto_truncation_order(ka);
  }
  const auto hd = hankel2_derivatives(order, ka);
  std::vector<Complex> coeffs(static_cast<std::size_t>(order) + 1);
  for (int n = 0; n <= order; ++n) {
    const Complex h = hd[static_cast<std::size_t>(n)];
    coeffs[static_cast<std::size_t>(n)] =
        std::isfinite(std::abs(h)) ? j_power(n) * (2.0 * n + 1.0) / h : Complex(0.0, 0.0);
  }
  return coeffs;
}

namespace {

Complex sum_series(const std::vector<Complex>& coeffs, double ka, double cos_gamma) {
  const auto p = legendre_p_all(static_cast<int>(coeffs.size()) - 1, std::clamp(cos_gamma, -1.0, 1.0));
  Complex sum(0.0, 0.0);
  for (std::size_t n = 0; n < coeffs.size(); ++n) sum += coeffs[n] * p[n];
  return Complex(0.0, -1.0) / (ka * ka) * sum;
}

}  // namespace

Complex rigid_sphere_surface_pressure(double ka, double cos_gamma, const SeriesConfig& cfg) {
  if (!(std::abs(cos_gamma) <= 1.0)) throw DomainError(fmt::format("cos(gamma)={} outside [-1, 1]", cos_gamma));
  return sum_series(rigid_sphere_coefficients(ka, cfg), ka, cos_gamma);
}

namespace {

void check_on_surface(const MicArrayGeometry& g, const RigidSphere& s) {
  if (!(s.radius > 0.0)) throw DomainError("sphere radius must be positive");
  for (std::size_t m = 0; m < g.size(); ++m) {
    const double r = (g.position(m) - s.center).norm();
    if (std::abs(r - s.radius) > 1e-9 * s.radius) {
      throw DomainError(fmt::format("microphone {} is {} m from the sphere center, radius is {} m", m, r, s.radius));
    }
  }
}

}  // namespace

SteeringVector rigid_sphere_steering(const MicArrayGeometry& g, const RigidSphere& s, double frequency_hz,
                                     const Direction& d, const SeriesConfig& cfg, const PhysicalConstants& consts) {
  RigidSphereModel model(g, s, cfg, consts);
  return {model.evaluate(frequency_hz, d), frequency_hz, d};
}

RigidSphereModel::RigidSphereModel(MicArrayGeometry g, RigidSphere sphere, SeriesConfig cfg,
                                   PhysicalConstants consts)
    : geometry_(std::move(g)), sphere_(std::move(sphere)), cfg_(cfg), consts_(consts) {
  consts_.validate();
  check_on_surface(geometry_, sphere_);
}

Eigen::VectorXcd RigidSphereModel::evaluate_with(const std::vector<Complex>& coeffs, double k,
                                                 const Direction& d) const {
  const Point3 u = unit_vector(d);
  const double ka = k * sphere_.radius;
  const double center_phase = k * u.dot(sphere_.center);
  const Complex shift(std::cos(center_phase), std::sin(center_phase));
  Eigen::VectorXcd v(static_cast<Eigen::Index>(geometry_.size()));
  for (std::size_t m = 0; m < geometry_.size(); ++m) {
    const double cos_gamma = u.dot(geometry_.position(m) - sphere_.center) / sphere_.radius;
    v[static_cast<Eigen::Index>(m)] = shift * sum_series(coeffs, ka, cos_gamma);
  }
  return v;
}

Eigen::VectorXcd RigidSphereModel::evaluate(double frequency_hz, const Direction& d) const {
  const double k = wavenumber(frequency_hz, consts_);
  return evaluate_with(rigid_sphere_coefficients(k * sphere_.radius, cfg_), k, d);
}

std::vector<Eigen::VectorXcd> RigidSphereModel::evaluate_all(double frequency_hz,
                                                             std::span<const Direction> dirs) const {
  const double k = wavenumber(frequency_hz, consts_);
  const auto coeffs = rigid_sphere_coefficients(k * sphere_.radius, cfg_);
  std::vector<Eigen::VectorXcd> out;
  out.reserve(dirs.size());
  for (const Direction& d : dirs) out.push_back(evaluate_with(coeffs, k, d));
  return out;
}

Eigen::VectorXcd RigidSphereModel::incident(double frequency_hz, const Direction& d) const {
  return plane_wave_steering(geometry_, frequency_hz, d, consts_).values;
}

}  // namespace beamkit
