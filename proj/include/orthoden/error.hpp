#ifndef ORTHODEN_ERROR_HPP
#define ORTHODEN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace orthoden {

/// Input or precondition violation (bad parameters, malformed files,
/// out-of-domain points). The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical failure: quadrature that does not converge, orthonormality
/// lost beyond tolerance, degenerate denominators. The CLI maps this to
/// exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace orthoden

#endif  // ORTHODEN_ERROR_HPP
