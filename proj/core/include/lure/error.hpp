#pragma once

#include <stdexcept>
#include <string>

namespace lure {

enum class ErrorKind {
  Structural,          // dimension mismatch, malformed problem
  AssumptionViolated,  // standing assumption fails (A not Schur)
  UnsupportedMode,     // operation not defined for this band/class/size
  NumericFailure,      // iteration cap, non-convergence
  ConeViolation,       // matrix outside the cone it must belong to
  CertificateInconsistent,
  InternalContradiction,
  Input,               // unreadable or malformed input files
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lure
