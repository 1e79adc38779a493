#pragma once

#include <stdexcept>
#include <string>

namespace josephson {

/// Invalid arguments or violated preconditions.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// The computation ran but could not produce a trustworthy number
/// (step exhaustion, blow-up, singular path, non-convergence).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// A search completed without finding the requested object.
class NotFoundError : public std::runtime_error {
 public:
  explicit NotFoundError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace josephson
