#pragma once

#include <functional>

#include "tam/linear.hpp"
#include "tam/types.hpp"

namespace tam {

/// Tensor field of type (p, q) whose components carry a |Jacobian|^w factor
/// relative to a fixed reference frame.  Stored components are taken with
/// respect to the reference frame (where the Jacobian factor is 1),
/// flattened row-major with the p upper slots first.
struct TensorDensity {
  int base_dim = 2;
  int p = 0;
  int q = 0;
  double weight = 0.0;
  std::function<Vector(const RealVector& x)> components;
  Frame reference;
  Frame active;
  Smoothness smoothness = Smoothness::C2;

  int component_count() const;
};

/// Flattened change-of-basis matrix for (p, q) tensor components under the
/// slot transition P: upper slots contract with P^{-1}, lower with P^T.
Matrix tensor_transform(const Matrix& P, int dim, int p, int q);

/// Derivation matrix on (p, q) tensor components induced by a tangent-slot
/// matrix: sum over upper slots of G and lower slots of -G^T.
Matrix leibniz_lift(const Matrix& tangent_gamma, int dim, int p, int q);

/// Density components in the requested frame, including the weight-w
/// Jacobian power.
Vector density_components(const TensorDensity& d, const Frame& frame,
                          const RealVector& x);

enum class DensitySign { plus, minus };

/// Derivative components of the density along kappa in the active frame:
/// the partial derivative plus the lifted connection term plus the signed
/// weight correction by the appropriate connection trace.  tangent_gamma is
/// the tangent-slot component field along kappa in the reference frame.
Vector density_derivative(const TensorDensity& d,
                          const GammaField& tangent_gamma,
                          const SmoothMap& kappa, const RealVector& l, int a,
                          DensitySign sign, double h = 1e-5);

/// Norm of the difference between the two routes to the same derivative:
/// deriving the density as a plain tensor field (plus the reference-frame
/// trace correction) versus the density-component formula scaled back to
/// ordinary components.  Both sides are evaluated independently.
double density_law_defect(const TensorDensity& d,
                          const GammaField& tangent_gamma,
                          const SmoothMap& kappa, const RealVector& l, int a,
                          DensitySign sign, double h = 1e-5);

/// Connection traces of the active-frame tangent components: the
/// contravariant-slot trace (minus branch) and its dual (plus branch).
std::pair<double, double> density_trace_pair(const TensorDensity& d,
                                             const GammaField& tangent_gamma,
                                             const SmoothMap& kappa,
                                             const RealVector& l, int a,
                                             double h = 1e-5);

}  // namespace tam
