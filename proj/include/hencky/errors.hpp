#pragma once

#include <stdexcept>
#include <string>

namespace hencky {

// Machine-readable failure categories; the CLI maps these onto exit codes.
enum class ErrorCode {
  not_positive_definite,
  non_invertible,
  coalesced_eigenvalue,
  arity_mismatch,
  non_finite_energy,
  pattern_violation,
  parse_error,
  validation_error,
  ill_conditioned,
  invalid_config,
  fit_failure,
  newton_divergence,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }
  const char* category() const {
    switch (code_) {
      case ErrorCode::not_positive_definite: return "not_positive_definite";
      case ErrorCode::non_invertible: return "non_invertible";
      case ErrorCode::coalesced_eigenvalue: return "coalesced_eigenvalue";
      case ErrorCode::arity_mismatch: return "arity_mismatch";
      case ErrorCode::non_finite_energy: return "non_finite_energy";
      case ErrorCode::pattern_violation: return "pattern_violation";
      case ErrorCode::parse_error: return "parse_error";
      case ErrorCode::validation_error: return "validation_error";
      case ErrorCode::ill_conditioned: return "ill_conditioned";
      case ErrorCode::invalid_config: return "invalid_config";
      case ErrorCode::fit_failure: return "fit_failure";
      case ErrorCode::newton_divergence: return "newton_divergence";
    }
    return "unknown";
  }

 private:
  ErrorCode code_;
};

}  // namespace hencky
