#pragma once

#include <optional>

#include "beamkit/coherence.hpp"
#include "beamkit/core.hpp"

namespace beamkit {

double db_to_linear(double db);
double linear_to_db(double linear);

struct DesignSpec {
  double gamma = 1e-2;  // WNG floor, linear power ratio
  Direction look_direction;
  /// Absolute loading floor; defaults to 1e-12 * trace(Psi) / M.
  std::optional<double> loading_floor;
  double tolerance = 1e-6;  // relative, on the loading
  int max_iterations = 200;

  static DesignSpec from_db(double gamma_db, const Direction& look);
};

struct DesignDiagnostics {
  double loading = 0.0;
  double achieved_wng = 0.0;
  bool constraint_active = false;
  int iterations = 0;
};

struct BeamformerWeights {
  Eigen::VectorXcd w;
  double frequency = 0.0;
  Direction look_direction;
  DesignDiagnostics diagnostics;
};

/// Distortionless MVDR with diagonal loading:
///   w = (Psi + eps I)^-1 v / (v^H (Psi + eps I)^-1 v).
/// Uses a Cholesky factorization; throws SolveError if Psi + eps I is not
/// numerically positive definite.
Eigen::VectorXcd mvdr_closed_form(const Eigen::MatrixXcd& psi, const Eigen::VectorXcd& v, double loading);

/// Largest WNG any distortionless weight can reach for v: ||v||^2.
double max_achievable_wng(const Eigen::VectorXcd& v);

/// MVDR subject to WNG >= gamma. Under the distortionless constraint the WNG
/// row is ||w||^2 <= 1/gamma, and the diagonally loaded MVDR family traces the
/// optimal frontier, so the smallest feasible loading is found by log-space
/// bisection over [floor, 1e6 * trace(Psi) / M].
BeamformerWeights robust_mvdr(const CoherenceMatrix& psi, const Eigen::VectorXcd& v, const DesignSpec& spec);

}  // namespace beamkit
