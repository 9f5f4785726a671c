#include "beamkit/coherence.hpp"

#include <cmath>

#include <fmt/format.h>

namespace beamkit {

NoisePowerModel diffuse_noise() {
  return [](double, const Direction&) { return 1.0; };
}

namespace {

// Returns P_n(x) and writes P_n'(x).
double legendre_with_derivative(int n, double x, double& derivative) {
  double p0 = 1.0;
  double p1 = x;
  for (int l = 1; l < n; ++l) {
    const double p2 = ((2.0 * l + 1.0) * x * p1 - l * p0) / (l + 1.0);
    p0 = p1;
    p1 = p2;
  }
  derivative = n * (x * p1 - p0) / (x * x - 1.0);
  return p1;
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double dx = legendre_with_derivative(n, x, dp) / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre_with_derivative(n, x, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

SphereQuadrature make_quadrature(int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 2) {
    throw DomainError(fmt::format("quadrature needs n_theta >= 2 and n_phi >= 2, got {} x {}", n_theta, n_phi));
  }
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(n_theta, x, w);
  SphereQuadrature q;
  q.nodes.reserve(static_cast<std::size_t>(n_theta * n_phi));
  q.weights.reserve(static_cast<std::size_t>(n_theta * n_phi));
  const double dphi = 2.0 * kPi / n_phi;
  // Descending cos(theta) gives ascending theta.
  for (int i = n_theta - 1; i >= 0; --i) {
    const double theta = std::acos(x[static_cast<std::size_t>(i)]);
    for (int j = 0; j < n_phi; ++j) {
      q.nodes.emplace_back(theta, j * dphi);
      q.weights.push_back(w[static_cast<std::size_t>(i)] * dphi);
    }
  }
  return q;
}

CoherenceMatrix coherence_matrix(const SteeringModel& provider, double frequency_hz, const NoisePowerModel& noise,
                                 const SphereQuadrature& q) {
  std::vector<Eigen::VectorXcd> vs;
  try {
    vs = provider.evaluate_all(frequency_hz, q.nodes);
  } catch (const Error& e) {
    throw Error(fmt::format("coherence at {} Hz: {}", frequency_hz, e.what()));
  }
  return coherence_from_samples(frequency_hz, vs, noise, q);
}

CoherenceMatrix coherence_from_samples(double frequency_hz, std::span<const Eigen::VectorXcd> samples,
                                       const NoisePowerModel& noise, const SphereQuadrature& q) {
  if (samples.size() < q.size() || samples.empty()) throw DomainError("fewer samples than quadrature nodes");
  const Eigen::Index m = samples.front().size();
  CoherenceMatrix out;
  out.frequency = frequency_hz;
  out.lambda = Eigen::MatrixXcd::Zero(m, m);
  double beta = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double sigma2 = noise(frequency_hz, q.nodes[i]);
    if (!(sigma2 >= 0.0)) {
      throw DomainError(fmt::format("noise power {} is negative at theta={} deg, phi={} deg", sigma2,
                                    q.nodes[i].theta_deg(), q.nodes[i].phi_deg()));
    }
    const Eigen::VectorXcd& v = samples[i];
    if (v.size() != m || !v.allFinite()) {
      throw Error(fmt::format("provider returned an invalid vector at theta={} deg, phi={} deg",
                              q.nodes[i].theta_deg(), q.nodes[i].phi_deg()));
    }
    const double w = q.weights[i] * sigma2;
    out.lambda.noalias() += w * (v * v.adjoint());
    beta += w;
  }
  if (!(beta > 0.0)) throw DomainError("noise power integrates to zero");
  out.beta = beta;
  out.lambda = 0.5 * (out.lambda + out.lambda.adjoint()).eval();
  out.psi = out.lambda / beta;
  return out;
}

CoherenceMatrix diffuse_sinc_coherence(const MicArrayGeometry& g, double frequency_hz,
                                       const PhysicalConstants& consts) {
  const double k = wavenumber(frequency_hz, consts);
  const auto m = static_cast<Eigen::Index>(g.size());
  CoherenceMatrix out;
  out.frequency = frequency_hz;
  out.beta = 4.0 * kPi;
  out.psi = Eigen::MatrixXcd::Identity(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = a + 1; b < m; ++b) {
      const double kd = k * (g.position(static_cast<std::size_t>(a)) - g.position(static_cast<std::size_t>(b))).norm();
      const double s = std::sin(kd) / kd;
      out.psi(a, b) = s;
      out.psi(b, a) = s;
    }
  }
  out.lambda = out.psi * out.beta;
  return out;
}

}  // namespace beamkit
