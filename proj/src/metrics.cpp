#include "beamkit/metrics.hpp"

#include <cmath>
#include <complex>

#include <fmt/format.h>

namespace beamkit {

double array_gain(const Eigen::VectorXcd& w, const Eigen::VectorXcd& v_look, const Eigen::MatrixXcd& psi) {
  if (w.size() != v_look.size() || psi.rows() != w.size() || psi.cols() != w.size()) {
    throw DomainError("array gain: size mismatch");
  }
  // The noise output power of a well-designed beamformer is a small residual
  // of large cancelling terms, so it is accumulated in extended precision.
  using ComplexL = std::complex<long double>;
  const Eigen::Matrix<ComplexL, Eigen::Dynamic, 1> wl = w.cast<ComplexL>();
  const long double denom = wl.dot(psi.cast<ComplexL>() * wl).real();
  if (!(denom > 0.0L)) throw DomainError("array gain: w^H Psi w is not positive");
  return static_cast<double>(std::norm(wl.dot(v_look.cast<ComplexL>())) / denom);
}

double white_noise_gain(const Eigen::VectorXcd& w, const Eigen::VectorXcd& v_look) {
  if (w.size() != v_look.size()) throw DomainError("white noise gain: size mismatch");
  const double denom = w.squaredNorm();
  if (!(denom > 0.0)) throw DomainError("white noise gain: weights are zero");
  return std::norm(w.dot(v_look)) / denom;
}

double macc(const Eigen::MatrixXcd& psi, const Eigen::VectorXcd& v_look, const MetricConfig& cfg) {
  if (!(cfg.input_power > 0.0)) throw DomainError("input power must be positive");
  if (psi.rows() != psi.cols() || psi.rows() != v_look.size()) throw DomainError("macc: size mismatch");
  const double asym = (psi - psi.adjoint()).norm();
  if (asym > 1e-10 * std::max(psi.norm(), 1e-300)) {
    throw DomainError(fmt::format("macc: coherence matrix is not Hermitian (asymmetry {:.3g})", asym));
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(psi);
  if (eig.info() != Eigen::Success) throw SolveError("macc: eigendecomposition failed");
  const double floor = cfg.eigen_floor_ratio * psi.trace().real() / static_cast<double>(psi.rows());
  const Eigen::VectorXd s = eig.eigenvalues().cwiseMax(floor);
  const Eigen::VectorXcd proj = eig.eigenvectors().adjoint() * v_look;
  double quad = 0.0;
  for (Eigen::Index i = 0; i < proj.size(); ++i) quad += std::norm(proj[i]) / s[i];
  return std::log1p(cfg.input_power * quad);
}

std::vector<Complex> beampattern(const Eigen::VectorXcd& w, const SteeringModel& provider, double frequency_hz,
                                 std::span<const Direction> dirs) {
  const auto vs = provider.evaluate_all(frequency_hz, dirs);
  std::vector<Complex> out;
  out.reserve(vs.size());
  for (const auto& v : vs) {
    if (v.size() != w.size()) throw DomainError("beampattern: size mismatch");
    out.push_back(w.dot(v));
  }
  return out;
}

}  // namespace beamkit
