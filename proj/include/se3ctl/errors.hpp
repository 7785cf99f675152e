#pragma once

#include <stdexcept>
#include <string>

namespace se3ctl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix lacks the expected Lie-algebra structure (vee of a non-hat matrix).
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the documented domain (negative sigma, dt <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Rotation angle too close to pi for the principal-branch logarithm.
class BranchError : public Error {
 public:
  using Error::Error;
};

/// Covariance inversion or Cholesky factorisation failed.
class IllConditionedError : public Error {
 public:
  using Error::Error;
};

/// Euler extraction at (or within 1e-6 of) pitch = +-pi/2.
class GimbalLockError : public Error {
 public:
  using Error::Error;
};

/// Combined precision of a fusion with prior is not positive definite.
class DegenerateFusionError : public Error {
 public:
  using Error::Error;
};

/// BCH small-argument flag used with an argument that is not small.
class ApproximationDomainError : public Error {
 public:
  using Error::Error;
};

/// Shape mismatch between label and prediction tables.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Target coincides with the contact frame origin (bearing undefined).
class SingularTargetError : public Error {
 public:
  using Error::Error;
};

/// Differential pushing step larger than the model allows.
class StepSizeError : public Error {
 public:
  using Error::Error;
};

/// Scenario or CLI configuration rejected.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Closed-loop state left the sane region (NaN or runaway position).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace se3ctl
