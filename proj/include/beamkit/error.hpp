#pragma once

#include <stdexcept>
#include <string>

namespace beamkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Off-grid dictionary query.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent triangle mesh.
class MeshError : public Error {
 public:
  using Error::Error;
};

/// Linear system that could not be solved to the required accuracy.
class SolveError : public Error {
 public:
  using Error::Error;
};

/// WNG floor above what the steering vector permits.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double max_wng)
      : Error(what), max_achievable_wng_(max_wng) {}
  double max_achievable_wng() const noexcept { return max_achievable_wng_; }

 private:
  double max_achievable_wng_;
};

/// Malformed configuration or input file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace beamkit
