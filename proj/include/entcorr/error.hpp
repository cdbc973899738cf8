#pragma once

#include <stdexcept>
#include <string>

namespace entcorr {

enum class ErrorKind {
  kInvalidArgument,
  kParse,
  kUnsupported,
  kLinearDependence,
  kSize,
  kIo,
  kNumerical,
};

// Base exception for everything thrown by the library. The C API maps the
// kind onto its status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorKind::kInvalidArgument, what) {}
};

// Text-format error with the 1-based line it was found on (0 if unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(ErrorKind::kParse, line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class Unsupported : public Error {
 public:
  explicit Unsupported(const std::string& what) : Error(ErrorKind::kUnsupported, what) {}
};

class LinearDependence : public Error {
 public:
  LinearDependence(const std::string& what, double eigenvalue)
      : Error(ErrorKind::kLinearDependence, what), eigenvalue_(eigenvalue) {}

  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

class SizeError : public Error {
 public:
  explicit SizeError(const std::string& what) : Error(ErrorKind::kSize, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::kNumerical, what) {}
};

}  // namespace entcorr
