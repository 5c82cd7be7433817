#pragma once

#include <cstdint>
#include <functional>
#include <tuple>
#include <utility>
#include <vector>

#include "tam/composite.hpp"
#include "tam/geometry.hpp"
#include "tam/transport.hpp"
#include "tam/types.hpp"

namespace tam {

/// Nondegenerate Hermitian (symmetric in the real case) matrix field with a
/// fixed inertia.
struct HermitianMetric {
  int rank = 2;
  Field field = Field::complex;
  std::function<Matrix(const RealVector& x)> G;
  std::pair<int, int> signature{2, 0};
};

/// diag(+1 x p, -1 x q).
Matrix signature_matrix(int p, int q);

/// Counts of positive and negative eigenvalues.
std::pair<int, int> inertia(const Matrix& hermitian, double tol = 1e-12);

/// Hermiticity, nondegeneracy and inertia constancy on sample points;
/// throws HermiticityError or SignatureError.
void validate_metric(const HermitianMetric& g,
                     const std::vector<RealVector>& samples);

/// Deterministic congruence factor: G = D^dagger S D with S the signature
/// matrix.  Eigenvalues are sorted descending and eigenvector phases fixed
/// so D is unique; D is unitary only when every |eigenvalue| is 1.
Matrix congruence_factor(const Matrix& G, int p, int q);

/// Flat transport on the rank-1 tensor pair bundle: two fibre slots over
/// the base, glued by the factor pairs (C, G_x) and (*C, *G_x).  The slot
/// crossing at coinciding points is the metric.
struct Rank1FlatTransport {
  int rank = 2;
  Field field = Field::complex;
  std::pair<int, int> signature{2, 0};
  ChartDomain base;
  Matrix C, Cstar;
  std::function<Matrix(const RealVector& x)> Gfac;
  std::function<Matrix(const RealVector& x)> Gstar;

  Matrix F(const RealVector& x) const;      // C  * Gfac(x)
  Matrix Fstar(const RealVector& x) const;  // *C * Gstar(x)

  Matrix L(const RealVector& x, const RealVector& y) const;      // slot 0 -> 0
  Matrix Lstar(const RealVector& x, const RealVector& y) const;  // slot 1 -> 1
  Matrix L10(const RealVector& x, const RealVector& y) const;    // slot 0 -> 1
  Matrix L01(const RealVector& x, const RealVector& y) const;    // slot 1 -> 0

  /// The same object as one transport over the two-slot composite domain.
  CompositeTransport as_composite() const;
};

/// Builds the flat pair transport whose slot crossing reproduces g.
/// A must be unitary.  C_choice must satisfy its gauge relation:
/// C^dagger C = A^dagger S A for definite signatures; for indefinite ones
/// that relation has no solution and the starred factor absorbs the
/// signature matrix instead, so C_choice is required to be unitary.
Rank1FlatTransport transport_from_metric(const HermitianMetric& g,
                                         const Matrix& A,
                                         const Matrix& C_choice,
                                         const ChartDomain& base);

/// Reads the metric back from the slot crossing at coinciding points:
/// G(x) = Fstar(x)^{-1} F(x).  Throws HermiticityError (with the defect
/// norm) when the factors violate the conjugation gauge, SignatureError
/// when the inertia drifts across samples.
HermitianMetric metric_from_transport(const Rank1FlatTransport& t,
                                      const std::vector<RealVector>& samples,
                                      double tol = 1e-10);

/// Linear combination of vectors living in different fibres, pulled to x
/// through a flat transport along the identity map.
Vector cross_fiber_combine(
    const TransportFamily& t0,
    const std::vector<std::tuple<Scalar, Vector, RealVector>>& terms,
    const RealVector& x);

/// Extension of a fibre pairing to vectors at different points.
Scalar extend_binary_op(const BinaryForm& beta, const TransportFamily& t0,
                        const RealVector& x, const Vector& u,
                        const RealVector& y, const Vector& v,
                        const RealVector& z);

struct QuadratureGrid {
  std::vector<RealVector> points;
  std::vector<double> weights;
};

/// Tensor-product trapezoid rule with n points per axis.
QuadratureGrid trapezoid_grid(const Box& box, int n_per_axis);

/// Fibre-valued integral: sum of w_j K_{y_j -> x} sigma(y_j).
Vector integrate_section(const Section& s, const TransportFamily& t0,
                         const RealVector& x, const QuadratureGrid& grid);

}  // namespace tam
