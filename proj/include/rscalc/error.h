#pragma once

#include <stdexcept>
#include <string>

namespace rscalc {

/// A square rational or real matrix has no inverse.
class SingularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter bundle or payload violates one of its defining identities,
/// membership classes or causality requirements.
class ConstraintError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The FIR synthesis constraint set is empty at the requested horizon.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A fixed-point iteration did not settle within its iteration budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rscalc
