#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace agfti {

using Index = Eigen::Index;

/// Dense row-major matrix. Sample-by-anchor graphs (Z, P, H) are stored this
/// way so that the per-row simplex solves touch contiguous memory.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for shape mismatches and violated preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Raised when a numerical kernel fails (SVD non-convergence, singular solve,
/// a transform whose imaginary residual is too large to drop).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace agfti
