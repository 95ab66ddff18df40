#pragma once

#include <stdexcept>
#include <string>

namespace fqh {

// Raised when an operation is called outside its stated domain.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class AdmissibilityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError(what);
}

}  // namespace fqh
