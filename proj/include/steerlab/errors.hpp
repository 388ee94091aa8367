#pragma once

#include <stdexcept>
#include <string>

namespace steerlab {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A request exceeds a configured size budget (qubits, hidden strategies).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input documents.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A tomography set whose direction matrix is singular.
class CompletenessError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Conic solver failure (no convergence, numerical breakdown).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Outer optimization could not produce a usable result.
class SearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace steerlab
