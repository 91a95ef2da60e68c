#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ows {

using Index = std::int64_t;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class SingularWeight : public Error {
 public:
  using Error::Error;
};

class ZeroVector : public Error {
 public:
  ZeroVector() : Error("operation requires a non-zero vector") {}
  using Error::Error;
};

class ZeroLambda : public Error {
 public:
  ZeroLambda() : Error("lambda must be non-zero") {}
};

class OutsideDisc : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent weight specification. `path` names the
/// offending field, e.g. "data.matrices[1][3]".
class SpecError : public Error {
 public:
  SpecError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace ows
