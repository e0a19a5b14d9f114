#pragma once

#include <stdexcept>
#include <string>

namespace lraz {

// Raised when an input violates an operation's precondition.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised by exhaustive oracles whose search space exceeds the size guard.
class OracleTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Nonzero singular values that coincide within tolerance: the Eckart-Young
// critical points are then not isolated.
class NonGenericSpectrum : public std::runtime_error {
 public:
  explicit NonGenericSpectrum(const std::string& what, std::string context = {})
      : std::runtime_error(context.empty() ? what : what + " [" + context + "]"),
        context_(std::move(context)) {}
  const std::string& context() const { return context_; }

 private:
  std::string context_;
};

}  // namespace lraz
