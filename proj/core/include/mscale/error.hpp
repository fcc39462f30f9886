#pragma once

#include <stdexcept>
#include <string>

namespace mscale {

/// Base class for all errors raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error line.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("invalid_argument", what) {}
};

/// Input is valid but carries no scaling information (zero moments, constant segments).
class DegenerateInput : public Error {
 public:
  explicit DegenerateInput(const std::string& what) : Error("degenerate_input", what) {}
};

/// Circulant embedding has eigenvalues too negative to clip.
class EmbeddingError : public Error {
 public:
  explicit EmbeddingError(const std::string& what) : Error("embedding_error", what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error("numerical_error", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io_error", what) {}
};

}  // namespace mscale
