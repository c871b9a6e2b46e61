#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace curvfun {

/// Ambient vectors are stored in three components; planar bodies keep the
/// third component at zero.
using Vec = Eigen::Vector3d;
using Mat = Eigen::Matrix3d;

/// Selects between the OpenMP kernels and the serial reference path.
/// Both produce bit-identical results: parallelism only affects the
/// evaluation of independent per-node (or per-trial) values, never the
/// order in which they are accumulated.
enum class Execution { serial, parallel };

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a body fails the strictly-positive-curvature gate.
class CurvatureError : public Error {
 public:
  using Error::Error;
};

/// Raised for parameters outside a formula's domain (p = -n, alpha = 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

std::string format_vec(const Vec& v, int dim);

}  // namespace curvfun
