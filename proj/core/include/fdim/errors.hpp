#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace fdm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that violates a documented precondition (bad box, too few samples, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DegenerateJacobian : public Error {
 public:
  using Error::Error;
};

class QuadratureNotConverged : public Error {
 public:
  QuadratureNotConverged(const std::string& what, std::complex<double> previous,
                         std::complex<double> last)
      : Error(what), previous_(previous), last_(last) {}
  std::complex<double> previous() const { return previous_; }
  std::complex<double> last() const { return last_; }

 private:
  std::complex<double> previous_;
  std::complex<double> last_;
};

class NewtonStall : public Error {
 public:
  using Error::Error;
};

class DegenerateCritical : public Error {
 public:
  using Error::Error;
};

class ValidityCollapse : public Error {
 public:
  using Error::Error;
};

class AllFloored : public Error {
 public:
  using Error::Error;
};

class RankMismatch : public Error {
 public:
  using Error::Error;
};

class AmbientDimError : public Error {
 public:
  using Error::Error;
};

}  // namespace fdm
