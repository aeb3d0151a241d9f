#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace collabnet {

// Base of every error raised by the library. `module()` and `operation()`
// name the failing stage so the CLI can emit structured error reports.
class Error : public std::runtime_error {
 public:
  Error(std::string module, std::string operation, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)), operation_(std::move(operation)) {}

  const std::string& module() const noexcept { return module_; }
  const std::string& operation() const noexcept { return operation_; }

 private:
  std::string module_;
  std::string operation_;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed XML/GraphML input. `offset()` is the byte offset reported by the
// tokenizer at the point of failure.
class ParseError : public Error {
 public:
  ParseError(std::string module, std::string operation, const std::string& what,
             std::int64_t offset)
      : Error(std::move(module), std::move(operation),
              what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::int64_t offset() const noexcept { return offset_; }

 private:
  std::int64_t offset_;
};

class InsufficientSamplesError : public Error {
 public:
  using Error::Error;
};

// The likelihood maximum lies on (or beyond) the exponent search bracket.
class UnboundedFitError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(std::string module, std::string operation, int iterations, double residual)
      : Error(std::move(module), std::move(operation),
              "power iteration did not converge after " + std::to_string(iterations) +
                  " iterations (residual " + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}

  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace collabnet
