#include "beamkit/designer.hpp"

#include <cmath>

#include <fmt/format.h>

#include "beamkit/metrics.hpp"

namespace beamkit {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

DesignSpec DesignSpec::from_db(double gamma_db, const Direction& look) {
  DesignSpec spec;
  spec.gamma = db_to_linear(gamma_db);
  spec.look_direction = look;
  return spec;
}

Eigen::VectorXcd mvdr_closed_form(const Eigen::MatrixXcd& psi, const Eigen::VectorXcd& v, double loading) {
  if (psi.rows() != psi.cols() || psi.rows() != v.size()) throw DomainError("coherence and steering sizes differ");
  if (!(loading >= 0.0)) throw DomainError("loading must be nonnegative");
  Eigen::MatrixXcd loaded = psi;
  loaded.diagonal().array() += loading;
  const Eigen::LLT<Eigen::MatrixXcd> llt(loaded);
  if (llt.info() != Eigen::Success) {
    throw SolveError(fmt::format("loaded coherence matrix is not positive definite (loading {})", loading));
  }
  const Eigen::VectorXcd x = llt.solve(v);
  const Complex denom = v.dot(x);  // v^H x
  if (!(std::abs(denom) > 0.0) || !x.allFinite()) {
    throw SolveError(fmt::format("loaded coherence matrix is numerically singular (loading {})", loading));
  }
  return x / std::conj(denom);
}

double max_achievable_wng(const Eigen::VectorXcd& v) {
  const double n2 = v.squaredNorm();
  if (!(n2 > 0.0)) throw DomainError("steering vector is zero");
  return n2;
}

BeamformerWeights robust_mvdr(const CoherenceMatrix& psi, const Eigen::VectorXcd& v, const DesignSpec& spec) {
  if (!(spec.gamma > 0.0)) throw DomainError("WNG floor must be positive");
  const double wng_max = max_achievable_wng(v);
  if (spec.gamma > wng_max) {
    throw InfeasibleError(fmt::format("WNG floor {:.4f} dB exceeds the achievable {:.4f} dB at {} Hz",
                                      linear_to_db(spec.gamma), linear_to_db(wng_max), psi.frequency),
                          wng_max);
  }
  const double scale = psi.psi.trace().real() / static_cast<double>(psi.psi.rows());
  const double floor = spec.loading_floor.value_or(1e-12 * scale);

  BeamformerWeights out;
  out.frequency = psi.frequency;
  out.look_direction = spec.look_direction;
  auto wng_at = [&](double eps, Eigen::VectorXcd& w) {
    w = mvdr_closed_form(psi.psi, v, eps);
    return white_noise_gain(w, v);
  };

  Eigen::VectorXcd w;
  const double wng_floor = wng_at(floor, w);
  if (wng_floor >= spec.gamma) {
    out.w = std::move(w);
    out.diagnostics = {floor, wng_floor, false, 0};
    return out;
  }

  double lo = floor;
  double hi = 1e6 * scale;
  Eigen::VectorXcd w_hi;
  double wng_hi = wng_at(hi, w_hi);
  if (wng_hi < spec.gamma) {
    throw SolveError(fmt::format("loading bisection does not bracket the WNG floor at {} Hz: WNG {:.6g} at {:.3g}, "
                                 "{:.6g} at {:.3g}, target {:.6g}",
                                 psi.frequency, wng_floor, lo, wng_hi, hi, spec.gamma));
  }
  int iter = 0;
  while (hi / lo - 1.0 > spec.tolerance && iter < spec.max_iterations) {
    const double mid = std::sqrt(lo * hi);
    const double wng_mid = wng_at(mid, w);
    if (wng_mid >= spec.gamma) {
      hi = mid;
      w_hi = w;
      wng_hi = wng_mid;
    } else {
      lo = mid;
    }
    ++iter;
  }
  out.w = std::move(w_hi);
  out.diagnostics = {hi, wng_hi, true, iter};
  return out;
}

}  // namespace beamkit
