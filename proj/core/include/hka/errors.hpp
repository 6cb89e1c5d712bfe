#pragma once

#include <stdexcept>
#include <string>

namespace hka {

// Input outside the documented domain of an operation (bad parameter,
// unsupported regime, violated precondition).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An iterative scheme failed to reach its tolerance: quadrature refinement
// stalled, Newton ran out of iterations, a node-doubling rule did not settle.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hka
