#pragma once

#include <stdexcept>
#include <string>

namespace qb {

enum class ErrorKind {
  DimensionMismatch,
  NotHermitian,
  NotPositive,
  Singular,
  SingularWeight,
  InvalidArgument,
  NotMeasureBasis,
  NotWignerBasis,
  NotSic,
  NotState,
  NotPovm,
  BiasedReference,
  ConvergenceFailure,
  PathDisagreement,
  Io,
};

const char* to_string(ErrorKind kind);

// Library-wide exception. `residual` carries the numeric deviation that
// triggered the failure when one exists (0 otherwise).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, double residual = 0.0)
      : std::runtime_error(what), kind_(kind), residual_(residual) {}

  ErrorKind kind() const noexcept { return kind_; }
  double residual() const noexcept { return residual_; }

 private:
  ErrorKind kind_;
  double residual_;
};

}  // namespace qb
