#pragma once

#include "tam/geometry.hpp"
#include "tam/linear.hpp"
#include "tam/types.hpp"

namespace tam {

/// Chart of the unit round sphere in colatitude/longitude coordinates,
/// excluding a band around the poles where the chart degenerates.
ChartDomain sphere_chart();

/// Metric matrix diag(1, sin^2 theta) at x = (theta, phi).
Matrix round_metric(const RealVector& x);

/// Metric-compatible torsion-free connection of the round metric, in
/// coordinate components.
LinearConnection levi_civita_sphere();

/// Curvature matrix of the round metric for the coordinate plane
/// (theta, phi): acting on tangent components, [[0, sin^2 theta], [-1, 0]].
Matrix sphere_curvature_matrix(double theta);

/// Circle of constant colatitude, t -> (theta0, t), t in [0, 2 pi].
SmoothMap latitude_circle(double colatitude);

/// Great circle through (pi/2, 0) tilted out of the equator; stays inside
/// the chart for |tilt| < 1.1.
SmoothMap great_circle(double tilt = 0.5);

/// Rotation angle picked up by a tangent vector carried once around a
/// latitude circle, measured in an orthonormal frame and wrapped to
/// [0, 2 pi).  Equals 2 pi (1 - cos theta0) on the unit sphere.
double latitude_holonomy_angle(double colatitude, double ode_tol = 1e-12);

}  // namespace tam
