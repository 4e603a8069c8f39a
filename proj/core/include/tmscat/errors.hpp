#pragma once

#include <stdexcept>
#include <string>

namespace tmscat {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Short machine-readable category used in structured diagnostics.
  virtual const char* kind() const noexcept { return "error"; }
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid argument"; }
};

/// Raised when a symbolic factor (a delta function in x or q) would have to be sampled.
class UnsupportedEvaluation : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "unsupported evaluation"; }
};

class SpectralSingularity : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "spectral singularity"; }
};

class NearResonance : public Error {
 public:
  NearResonance(const std::string& what, double pole_estimate)
      : Error(what), pole_estimate_(pole_estimate) {}
  const char* kind() const noexcept override { return "near resonance"; }
  double pole_estimate() const noexcept { return pole_estimate_; }

 private:
  double pole_estimate_;
};

class NoRoot : public Error {
 public:
  NoRoot(const std::string& what, double residual) : Error(what), residual_(residual) {}
  const char* kind() const noexcept override { return "no root"; }
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "divergence"; }
};

class ResourceLimit : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "resource limit"; }
};

class ParseError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "parse error"; }
};

}  // namespace tmscat
