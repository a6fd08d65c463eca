#pragma once

#include <stdexcept>
#include <string>

namespace npent {

// Domain-level failure with a stable machine-readable code, e.g.
// VACUUM_ZERO, NONCONVERGED, DEGENERATE, ILL_CONDITIONED,
// SINGULAR_FACTORIZATION, NOT_IN_GENERIC_ORBIT, UNSUPPORTED_FORM, AMBIGUOUS.
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace npent
