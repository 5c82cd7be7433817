#include "tam/sphere.hpp"

#include <cmath>

namespace tam {

ChartDomain sphere_chart() {
  const double pi = std::acos(-1.0);
  Box box({Interval{0.2, pi - 0.2}, Interval{-7.0, 7.0}});
  return ChartDomain{box, "sphere"};
}

Matrix round_metric(const RealVector& x) {
  Matrix g = Matrix::Zero(2, 2);
  double s = std::sin(x[0]);
  g(0, 0) = 1.0;
  g(1, 1) = s * s;
  return g;
}

LinearConnection levi_civita_sphere() {
  LinearConnection c;
  c.base_dim = 2;
  c.rank = 2;
  c.coeff = [](const RealVector& x, int k) {
    const double theta = x[0];
    const double cot = std::cos(theta) / std::sin(theta);
    Matrix g = Matrix::Zero(2, 2);
    if (k == 0) {
      g(1, 1) = cot;
    } else {
      g(0, 1) = -std::sin(theta) * std::cos(theta);
      g(1, 0) = cot;
    }
    return g;
  };
  return c;
}

Matrix sphere_curvature_matrix(double theta) {
  Matrix r = Matrix::Zero(2, 2);
  r(0, 1) = std::sin(theta) * std::sin(theta);
  r(1, 0) = -1.0;
  return r;
}

SmoothMap latitude_circle(double colatitude) {
  const double pi = std::acos(-1.0);
  SmoothMap m;
  m.domain = ParamDomain{Box({Interval{-0.5, 2.0 * pi + 0.5}})};
  m.codomain = sphere_chart();
  m.eval = [colatitude](const RealVector& t) {
    RealVector x(2);
    x[0] = colatitude;
    x[1] = t[0];
    return x;
  };
  m.analytic_jacobian = [](const RealVector&) {
    RealMatrix j(2, 1);
    j << 0.0, 1.0;
    return j;
  };
  m.name = "latitude_circle";
  return m;
}

SmoothMap great_circle(double tilt) {
  SmoothMap m;
  m.domain = ParamDomain{Box({Interval{-1.2, 1.2}})};
  m.codomain = sphere_chart();
  const double a = tilt;
  m.eval = [a](const RealVector& t) {
    double s = std::sin(t[0]);
    double c = std::cos(t[0]);
    RealVector x(2);
    x[0] = std::acos(std::sin(a) * s);
    x[1] = std::atan2(std::cos(a) * s, c);
    return x;
  };
  m.analytic_jacobian = [a](const RealVector& t) {
    double s = std::sin(t[0]);
    double c = std::cos(t[0]);
    double sa = std::sin(a), ca = std::cos(a);
    RealMatrix j(2, 1);
    j(0, 0) = -sa * c / std::sqrt(1.0 - sa * sa * s * s);
    j(1, 0) = ca / (c * c + ca * ca * s * s);
    return j;
  };
  m.name = "great_circle";
  return m;
}

double latitude_holonomy_angle(double colatitude, double ode_tol) {
  const double pi = std::acos(-1.0);
  GammaField g = levi_civita_sphere().along(latitude_circle(colatitude));
  Matrix h = transport_from_gamma(g, 0.0, 2.0 * pi, ode_tol);
  // measure the rotation in an orthonormal frame of the round metric
  double s = std::sin(colatitude);
  Matrix scale = Matrix::Zero(2, 2);
  scale(0, 0) = 1.0;
  scale(1, 1) = s;
  Matrix r = scale * h * scale.inverse();
  double angle = std::atan2(r(1, 0).real(), r(0, 0).real());
  if (angle < 0.0) angle += 2.0 * pi;
  return angle;
}

}  // namespace tam
