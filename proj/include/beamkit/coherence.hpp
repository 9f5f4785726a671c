#pragma once

#include <functional>
#include <span>
#include <vector>

#include "beamkit/core.hpp"
#include "beamkit/steering_model.hpp"

namespace beamkit {

/// Noise power distribution sigma^2(f, direction); nonnegative.
using NoisePowerModel = std::function<double(double frequency_hz, const Direction& d)>;

/// sigma^2 = 1 everywhere: the spherically diffuse field.
NoisePowerModel diffuse_noise();

/// Product rule on the unit sphere: Gauss-Legendre in cos(theta) times a
/// uniform azimuth grid. Weights sum to 4 pi.
struct SphereQuadrature {
  std::vector<Direction> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

inline constexpr int kDefaultQuadratureTheta = 64;
inline constexpr int kDefaultQuadraturePhi = 128;

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

SphereQuadrature make_quadrature(int n_theta = kDefaultQuadratureTheta, int n_phi = kDefaultQuadraturePhi);

/// Psi = Lambda / beta for one frequency.
struct CoherenceMatrix {
  Eigen::MatrixXcd psi;
  double frequency = 0.0;
  double beta = 0.0;
  Eigen::MatrixXcd lambda;
};

/// Lambda_mq = sum_i w_i sigma^2(node_i) v_m(node_i) conj(v_q(node_i)),
/// beta = sum_i w_i sigma^2(node_i); the result is Hermitian-symmetrized.
CoherenceMatrix coherence_matrix(const SteeringModel& provider, double frequency_hz, const NoisePowerModel& noise,
                                 const SphereQuadrature& q);

/// Same as `coherence_matrix`, from steering vectors already evaluated at the
/// quadrature nodes (in node order).
CoherenceMatrix coherence_from_samples(double frequency_hz, std::span<const Eigen::VectorXcd> samples,
                                       const NoisePowerModel& noise, const SphereQuadrature& q);

/// Closed-form diffuse-field coherence for free-field propagation:
/// Psi_mq = sin(k d_mq) / (k d_mq).
CoherenceMatrix diffuse_sinc_coherence(const MicArrayGeometry& g, double frequency_hz,
                                       const PhysicalConstants& consts = {});

}  // namespace beamkit
