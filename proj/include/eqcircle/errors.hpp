#pragma once

#include <stdexcept>
#include <string>

namespace eqcircle {

/// A parameter lies outside the domain of the operation (negative argument,
/// out-of-range lattice index, mismatched basis, ...).
class DomainError : public std::domain_error {
public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A discretization (quadrature grid or lattice cutoff) is too coarse to
/// represent the requested object to the advertised accuracy.
class ResolutionError : public std::runtime_error {
public:
  explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

/// Time step rejected by the stability heuristic of the integrator.
class StepSizeError : public std::runtime_error {
public:
  explicit StepSizeError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical invariant that the library guarantees was found violated.
class ContractViolation : public std::runtime_error {
public:
  explicit ContractViolation(const std::string& what) : std::runtime_error(what) {}
};

} // namespace eqcircle
