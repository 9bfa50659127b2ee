#pragma once

#include <stdexcept>
#include <string>

namespace solvable_pg {

enum class ErrorKind {
  InvalidEnv,
  DimensionMismatch,
  PrecisionLoss,
  DomainError,
  GridTooCoarse,
  NoAbsorbingClass,
  NonConvergence,
  TooLarge,
  Io,
};

/// Base of every error thrown by the library. `kind()` drives the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidEnv : public Error {
 public:
  explicit InvalidEnv(const std::string& reason)
      : Error(ErrorKind::InvalidEnv, "invalid environment: " + reason), reason_(reason) {}
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string reason_;
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error(ErrorKind::DimensionMismatch, what) {}
};

/// Floating evaluation of a closed form could not be rounded unambiguously.
class PrecisionLoss : public Error {
 public:
  explicit PrecisionLoss(double residual)
      : Error(ErrorKind::PrecisionLoss,
              "precision loss: rounding residual " + std::to_string(residual) + " >= 0.25"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::DomainError, what) {}
};

class GridTooCoarse : public Error {
 public:
  explicit GridTooCoarse(const std::string& what) : Error(ErrorKind::GridTooCoarse, what) {}
};

class NoAbsorbingClass : public Error {
 public:
  NoAbsorbingClass() : Error(ErrorKind::NoAbsorbingClass, "kernel has no absorbing bin") {}
};

class NonConvergence : public Error {
 public:
  explicit NonConvergence(double residual)
      : Error(ErrorKind::NonConvergence,
              "matrix power did not converge, residual " + std::to_string(residual)),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class TooLarge : public Error {
 public:
  explicit TooLarge(const std::string& what) : Error(ErrorKind::TooLarge, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

}  // namespace solvable_pg
