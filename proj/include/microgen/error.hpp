#pragma once

#include <stdexcept>
#include <string>

namespace microgen {

/// Coarse error category. The CLI maps each one to an exit code.
enum class ErrorCategory {
  domain,     // invalid argument or precondition
  parse,      // device file or option syntax/validation
  infeasible, // design target cannot be met within bounds
  numerical,  // quadrature non-convergence, integrator instability
};

inline const char* to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::domain: return "domain";
    case ErrorCategory::parse: return "parse";
    case ErrorCategory::infeasible: return "infeasible";
    case ErrorCategory::numerical: return "numerical";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& what)
      : Error(ErrorCategory::domain, what) {}
};

struct InfeasibleError : Error {
  explicit InfeasibleError(const std::string& what)
      : Error(ErrorCategory::infeasible, what) {}
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& what)
      : Error(ErrorCategory::numerical, what) {}
};

/// Raised when quadrature exhausts its refinement budget. Carries the best
/// estimate reached and its error bound.
struct QuadratureError : NumericalError {
  QuadratureError(const std::string& what, double estimate, double bound)
      : NumericalError(what), estimate(estimate), error_bound(bound) {}
  double estimate;
  double error_bound;
};

struct ParseError : Error {
  ParseError(const std::string& what, int line = 0, std::string key = {})
      : Error(ErrorCategory::parse, what), line(line), key(std::move(key)) {}
  int line;
  std::string key;
};

namespace detail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

}  // namespace detail
}  // namespace microgen
