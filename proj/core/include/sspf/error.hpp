#ifndef SSPF_ERROR_HPP_
#define SSPF_ERROR_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace sspf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, std::optional<std::size_t> node = {})
      : std::runtime_error(what), node_(node) {}

  /// Flat node index the error refers to, when there is one.
  std::optional<std::size_t> node() const noexcept { return node_; }

 private:
  std::optional<std::size_t> node_;
};

/// Nonpositive density or sound speed, vacuum, or an out-of-range enthalpy.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold for its inputs.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Even reflection requested across an edge where the slip condition fails.
class ReflectionError : public Error {
 public:
  using Error::Error;
};

/// The nonlinear solve keeps hitting the sound-speed floor.
class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or configuration.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace sspf

#endif  // SSPF_ERROR_HPP_
