#pragma once

#include <complex>

#include <Eigen/Dense>

namespace tam {

using Real = double;
using Scalar = std::complex<double>;

// Base-space points and chart data are real; fibre algebra is kept complex
// throughout so real and complex bundles share one code path.
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

enum class Field { real, complex };

/// Scalar field of a fibre model together with its rank.
struct FibreModel {
  int rank = 1;
  Field field = Field::real;
};

enum class Smoothness { C0, C1, C2 };

inline double default_step(const RealVector& l) {
  double scale = l.size() > 0 ? l.cwiseAbs().maxCoeff() : 0.0;
  return 1e-5 * std::max(1.0, scale);
}

}  // namespace tam
