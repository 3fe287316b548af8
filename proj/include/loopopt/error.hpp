#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace loopopt {

/// Input violates a documented precondition (bad sizes, nonpositive step, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A curve-dependent quantity was requested at a curve outside Imm(S^1, R^2),
/// or a derived linear system became singular.
class GeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The descent iteration could not stay inside the admissible open set.
class AdmissibilityError : public std::runtime_error {
 public:
  AdmissibilityError(const std::string& what, std::size_t iteration)
      : std::runtime_error(what), iteration_(iteration) {}
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace loopopt
