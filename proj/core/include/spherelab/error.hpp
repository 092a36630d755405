#pragma once

#include <stdexcept>
#include <string>

namespace spherelab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Operands live on different Fock bases.
class BasisMismatch : public Error {
 public:
  using Error::Error;
};

/// A function of S is not finite at a value of S that the operation needs.
class SingularFunction : public Error {
 public:
  SingularFunction(int total_n, const std::string& what)
      : Error(what), total_n_(total_n) {}
  int total_n() const noexcept { return total_n_; }

 private:
  int total_n_;
};

/// exp(eta*S) dressing would leave the double range at the top of the basis.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// The (j,m) <-> (n1,n2) identification failed its angular momentum check.
class CalibrationError : public Error {
 public:
  using Error::Error;
};

}  // namespace spherelab
