#include "beamkit/special_functions.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace beamkit {
namespace {

void check_args(int n, double x) {
  if (n < 0) throw DomainError(fmt::format("Bessel order must be nonnegative, got {}", n));
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(fmt::format("Bessel argument must be positive, got {}", x));
}

// Miller's algorithm for j_0..j_nmax when some order exceeds the argument.
std::vector<double> downward_j(int nmax, double x) {
  const int start = nmax + 20 + static_cast<int>(std::sqrt(40.0 * (nmax + x))) + static_cast<int>(x);
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  double above = 0.0;
  double cur = 1e-300;
  for (int l = start; l >= 1; --l) {
    const double below = (2.0 * l + 1.0) / x * cur - above;
    above = cur;
    cur = below;
    if (l - 1 <= nmax) out[static_cast<std::size_t>(l - 1)] = cur;
    if (std::abs(cur) > 1e250) {
      const double s = 1e-250;
      cur *= s;
      above *= s;
      for (int i = l - 1; i <= nmax; ++i) out[static_cast<std::size_t>(i)] *= s;
    }
  }
  // `cur` is now the unnormalized j_0 and `above` the unnormalized j_1.
  const double j0 = std::sin(x) / x;
  const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  const double scale = std::abs(j0) >= std::abs(j1) ? j0 / cur : j1 / above;
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace

std::vector<double> sph_bessel_j_all(int nmax, double x) {
  check_args(nmax, x);
  if (x <= static_cast<double>(nmax)) return downward_j(nmax, x);
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1);
  out[0] = std::sin(x) / x;
  if (nmax >= 1) out[1] = std::sin(x) / (x * x) - std::cos(x) / x;
  for (int l = 1; l < nmax; ++l) {
    out[static_cast<std::size_t>(l + 1)] =
        (2.0 * l + 1.0) / x * out[static_cast<std::size_t>(l)] - out[static_cast<std::size_t>(l - 1)];
  }
  return out;
}

std::vector<double> sph_bessel_y_all(int nmax, double x) {
  check_args(nmax, x);
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1);
  out[0] = -std::cos(x) / x;
  if (nmax >= 1) out[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
  for (int l = 1; l < nmax; ++l) {
    const double prev = out[static_cast<std::size_t>(l)];
    if (!std::isfinite(prev)) {
      out[static_cast<std::size_t>(l + 1)] = -std::numeric_limits<double>::infinity();
      continue;
    }
    out[static_cast<std::size_t>(l + 1)] = (2.0 * l + 1.0) / x * prev - out[static_cast<std::size_t>(l - 1)];
  }
  return out;
}

double sph_bessel_j(int n, double x) { return sph_bessel_j_all(n, x).back(); }

double sph_bessel_y(int n, double x) { return sph_bessel_y_all(n, x).back(); }

Complex sph_hankel2(int n, double x) { return {sph_bessel_j(n, x), -sph_bessel_y(n, x)}; }

// f'_n = f_{n-1} - (n+1)/x f_n, with f'_0 = -f_1.
double sph_bessel_j_derivative(int n, double x) {
  const auto j = sph_bessel_j_all(n + 1, x);
  if (n == 0) return -j[1];
  return j[static_cast<std::size_t>(n - 1)] - (n + 1.0) / x * j[static_cast<std::size_t>(n)];
}

double sph_bessel_y_derivative(int n, double x) {
  const auto y = sph_bessel_y_all(n + 1, x);
  if (n == 0) return -y[1];
  return y[static_cast<std::size_t>(n - 1)] - (n + 1.0) / x * y[static_cast<std::size_t>(n)];
}

Complex sph_hankel2_derivative(int n, double x) {
  return {sph_bessel_j_derivative(n, x), -sph_bessel_y_derivative(n, x)};
}

std::vector<double> legendre_p_all(int nmax, double x) {
  if (nmax < 0) throw DomainError(fmt::format("Legendre order must be nonnegative, got {}", nmax));
  if (!(std::abs(x) <= 1.0)) throw DomainError(fmt::format("Legendre argument {} outside [-1, 1]", x));
  std::vector<double> p(static_cast<std::size_t>(nmax) + 1);
  p[0] = 1.0;
  if (nmax >= 1) p[1] = x;
  for (int l = 1; l < nmax; ++l) {
    p[static_cast<std::size_t>(l + 1)] =
        ((2.0 * l + 1.0) * x * p[static_cast<std::size_t>(l)] - l * p[static_cast<std::size_t>(l - 1)]) / (l + 1.0);
  }
  return p;
}

double legendre_p(int n, double x) { return legendre_p_all(n, x).back(); }

}  // namespace beamkit
