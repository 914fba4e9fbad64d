#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kobball {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input vectors are linearly dependent, non-orthonormal or a matrix is singular.
class RankError : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the domain where an interior point is required,
/// or a representation does not support the requested query.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The domain (or a slice of it) is unbounded where boundedness is required.
class UnboundedError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An iterative solver failed. `slice_index` is the minimal-basis step that
/// failed, or npos outside the basis construction.
class SolverError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit SolverError(const std::string& what, std::size_t slice_index = npos)
      : Error(what), slice_index_(slice_index) {}

  std::size_t slice_index() const noexcept { return slice_index_; }

 private:
  std::size_t slice_index_;
};

/// A computed W_j normal has a vanishing pivot coefficient.
class DegenerateNormalError : public Error {
 public:
  using Error::Error;
};

}  // namespace kobball
