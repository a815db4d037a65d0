#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace stoprule {

using Index = Eigen::Index;

/// Dense column vector templated on the scalar type, following the
/// convention that numeric tables are Eigen objects and everything that
/// touches them is a free function template.
template <typename Scalar>
using Vx = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Vxd = Vx<double>;

/// Rejected input: unknown identifiers, parameters out of range,
/// preconditions not met.  Maps to exit code 1 in the command line tool.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Internal inconsistency detected while computing: non-finite values,
/// certification rules that disagree, searches without a bracket.
/// Maps to exit code 2 in the command line tool.
class DiagnosticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stoprule
