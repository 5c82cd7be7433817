#include "tam/ode.hpp"

#include <algorithm>
#include <cmath>

#include "tam/errors.hpp"

namespace tam {

namespace {

// Dormand-Prince coefficients (RK5(4)7M).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Matrix integrate_matrix_ode(
    const std::function<Matrix(double, const Matrix&)>& f, double t0,
    double t1, Matrix y0, double tol) {
  const double span = t1 - t0;
  if (span == 0.0) return y0;
  const double dir = span > 0 ? 1.0 : -1.0;
  double t = t0;
  double h = dir * std::min(std::abs(span), 0.05 * std::abs(span) + 1e-3);
  Matrix y = std::move(y0);
  Matrix k1 = f(t, y);
  const double hmin = 1e-14 * std::max(1.0, std::abs(span));
  int steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > 2000000) {
      throw IntegrationError("step budget exhausted");
    }
    if (dir * (t + h - t1) > 0.0) h = t1 - t;
    Matrix k2 = f(t + c2 * h, y + h * (a21 * k1));
    Matrix k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    Matrix k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    Matrix k5 =
        f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    Matrix k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 +
                                  a65 * k5));
    Matrix y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    Matrix k7 = f(t + h, y5);
    Matrix err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
    double emax = err.cwiseAbs().maxCoeff() / scale;
    if (emax <= tol) {
      t += h;
      y = std::move(y5);
      k1 = std::move(k7);  // FSAL
    }
    double factor = 0.9 * std::pow(tol / std::max(emax, 1e-300), 0.2);
    factor = std::clamp(factor, 0.2, 5.0);
    h *= factor;
    if (std::abs(h) < hmin) {
      throw IntegrationError("step size underflow in adaptive integrator");
    }
  }
  return y;
}

}  // namespace tam
