#include "lure/error.hpp"

namespace lure {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Structural: return "structural";
    case ErrorKind::AssumptionViolated: return "assumption_violated";
    case ErrorKind::UnsupportedMode: return "unsupported_mode";
    case ErrorKind::NumericFailure: return "numeric_failure";
    case ErrorKind::ConeViolation: return "cone_violation";
    case ErrorKind::CertificateInconsistent: return "certificate_inconsistent";
    case ErrorKind::InternalContradiction: return "internal_contradiction";
    case ErrorKind::Input: return "input";
  }
  return "unknown";
}

}  // namespace lure
