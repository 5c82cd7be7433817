#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "tam/geometry.hpp"
#include "tam/report.hpp"
#include "tam/transport.hpp"
#include "tam/types.hpp"

namespace tam {

/// Field of bases over the chart: basis(x) is an invertible r x r matrix
/// whose columns are the frame vectors in ambient coordinates.
struct Frame {
  std::string name = "coordinate";
  std::function<Matrix(const RealVector& x)> basis;

  static Frame coordinate(int rank);
};

/// Linear transport described, in a frame, by its transfer matrices:
/// components at kappa(m) of the image of the frame at kappa(l) are
/// v(m) = transfer(m, l) v(l).
struct LinearTransportRep {
  FibreModel fibre;
  SmoothMap map;  // kappa, parameters in R^k
  std::function<Matrix(const RealVector& m, const RealVector& l)> transfer;
  Frame frame = Frame::coordinate(1);

  TransportFamily family() const;
};

/// Connection-coefficient matrices of a linear transport along one map:
/// gamma(l, a) is the r x r matrix of the a-th component field.
struct GammaField {
  int axes = 1;
  int rank = 1;
  std::function<Matrix(const RealVector& l, int a)> gamma;
};

/// Builds a linear rep from a pointwise invertible matrix factor field:
/// transfer(m, l) = F(m)^{-1} F(l).
LinearTransportRep rep_from_factor_field(
    FibreModel fibre, SmoothMap map,
    std::function<Matrix(const RealVector& l)> factors,
    Frame frame = Frame::coordinate(1));

/// Components of the transport: derivative of transfer(l, .) at the
/// diagonal.  Verifies the equivalent first-argument form on a few sampled
/// points and throws AxiomError on gross disagreement.
GammaField gamma_from_transfer(const LinearTransportRep& rep, double h = 1e-5,
                               std::size_t verify_samples = 6);

/// Difference between the two equivalent component formulas at l (second-
/// versus negated first-argument derivative of the transfer matrix).
double gamma_sign_defect(const LinearTransportRep& rep, const RealVector& l,
                         int a, double h = 1e-5);

/// Derivation of a component field given along the map:
/// (d/dl^a) field + gamma_a field.
Vector derive_field(const GammaField& g,
                    const std::function<Vector(const RealVector&)>& field,
                    const RealVector& l, int a, double h = 1e-5);

/// Derivation of a section of the bundle along the map (components read
/// through kappa).  Throws SmoothnessError for sections declared C0.
Vector derive_section(const GammaField& g, const SmoothMap& kappa,
                      const Section& s, const RealVector& l, int a,
                      double h = 1e-5);

/// Symmetrized difference quotient of the defining limit of the derivation,
/// evaluated at finite eps through the transfer matrices.
Vector derive_section_limit(const LinearTransportRep& rep, const Section& s,
                            const RealVector& l, int a, double eps = 1e-4);

AxiomReport check_derivation_linearity(const GammaField& g,
                                       const SmoothMap& kappa,
                                       const Section& s1, const Section& s2,
                                       Scalar lam, Scalar mu,
                                       std::size_t samples, std::uint64_t seed,
                                       double tolerance = 1e-8);

/// Rewrites the rep in the frame e'_j = A^i_j e_i (A a matrix field over the
/// base).  The transformed components obey the inhomogeneous law.
LinearTransportRep frame_change(
    const LinearTransportRep& rep,
    const std::function<Matrix(const RealVector& x)>& transition);

/// Path case (k = 1): reconstructs the transfer matrix from the components
/// by integrating dH(t,l)/dt = -gamma(t) H(t,l), H(l,l) = I.
Matrix transport_from_gamma(const GammaField& g, double l, double m,
                            double tol = 1e-10);

/// Connection data over the base: coefficient matrix per base direction.
/// Induces component fields along any C^1 map by contraction with the
/// tangent vectors of the map.
struct LinearConnection {
  int base_dim = 1;
  int rank = 1;
  std::function<Matrix(const RealVector& x, int k)> coeff;

  GammaField along(const SmoothMap& kappa) const;
  static LinearConnection flat(int base_dim, int rank);
};

/// Connection of a flat transport built from a pointwise factor field:
/// coeff_a(x) = F(x)^{-1} d_a F(x); its curvature vanishes.
LinearConnection connection_from_factors(
    int base_dim, FibreModel fibre,
    const std::function<Matrix(const RealVector& x)>& factors, double h = 1e-5);

/// Two-parameter map eta(l, m) stored as one joint map with the first
/// `split` axes forming l.
struct TwoParamMap {
  SmoothMap joint;
  int split = 1;

  int first_dim() const { return split; }
  int second_dim() const { return joint.domain.dim() - split; }
  RealVector join(const RealVector& l, const RealVector& m) const;
  SmoothMap fix_second(const RealVector& m) const;  // eta(., m)
  SmoothMap fix_first(const RealVector& l) const;   // eta(l, .)
};

/// Torsion operator of a tangent-bundle transport on a two-parameter map:
/// derivative of the second velocity field along the first slot minus the
/// mirrored term.  Requires eta of class C^2.
Vector torsion(const LinearConnection& conn, const TwoParamMap& eta,
               const RealVector& l, const RealVector& m, int a, int b,
               double h = 1e-4);

/// Curvature operator: commutator of the two slot derivations applied to a
/// C^2 section, evaluated at eta(l, m).
Vector curvature(const LinearConnection& conn, const TwoParamMap& eta,
                 const Section& s, const RealVector& l, const RealVector& m,
                 int a, int b, double h_outer = 1e-4, double h_inner = 1e-4);

struct CompositeTransport;

/// Typed partial derivative over a composite domain: the beta-indexed
/// version of the derivation, carrying the difference quotient through the
/// cross-index transport before taking the limit.  For a singleton index
/// set it reduces to the plain derivation.
Vector typed_partial_derivative(const CompositeTransport& t, const Section& s,
                                std::size_t alpha, const RealVector& x, int a,
                                std::size_t beta, double eps = 1e-5);

}  // namespace tam
