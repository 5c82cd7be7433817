#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "tam/report.hpp"
#include "tam/transport.hpp"
#include "tam/types.hpp"

namespace tam {

/// Fibre-map family F_x : fibre1(x) -> fibre2(f(x)) over a base map f.
/// A morphism is either a field over the whole first chart or, when built
/// from a pair of transports, a family indexed by the parameters of the map
/// it is restricted to.
struct BundleMorphism {
  SmoothMap base_map;  // f, defined on the first chart
  std::function<Matrix(const RealVector& x)> field;       // F_x
  std::function<Matrix(const RealVector& l)> along;       // F_{kappa(l)}
  std::optional<SmoothMap> restriction;                   // kappa, with along

  /// Fibre map at kappa(l); uses the parameter-indexed family when this
  /// morphism is a restriction, otherwise evaluates the field at kappa(l).
  Matrix fibre_at(const RealVector& l, const SmoothMap& kappa) const;
};

/// Commutation of the morphism with a pair of transports: t1 along kappa in
/// the first bundle, t2 along f.kappa in the second.
AxiomReport check_consistency(const BundleMorphism& m,
                              const TransportFamily& t1,
                              const TransportFamily& t2,
                              const SmoothMap& kappa, std::size_t samples,
                              std::uint64_t seed, double tolerance = 1e-9);

/// F_{kappa(l)} := K2_{l0->l} . C . K1_{l->l0}; consistent along kappa by
/// construction and independent of the anchor l0.
BundleMorphism build_consistent_morphism(const TransportFamily& t1,
                                         const TransportFamily& t2,
                                         const SmoothMap& kappa,
                                         const SmoothMap& f,
                                         const RealVector& l0,
                                         const Matrix& C);

/// The natural transport on the bundle of fibre maps: morphism fibres are
/// carried by conjugation, K0_{l->m}(Phi) = K2_{l->m} . Phi . K1_{m->l}.
/// Fibre vectors are column-major flattenings of the r2 x r1 maps.
TransportFamily natural_transport(const TransportFamily& t1,
                                  const TransportFamily& t2,
                                  const SmoothMap& kappa);

Matrix unflatten_morphism(const Vector& v, int r2, int r1);
Vector flatten_morphism(const Matrix& m);

/// Checks that the direct commutation law and the transported-section law
/// for the natural transport pass or fail together at every sample.
struct EquivalenceReport {
  AxiomReport direct;       // check "eq5.1"
  AxiomReport transported;  // check "eq5.11"
  bool biconditional = true;
};
EquivalenceReport check_morphism_equivalence(const BundleMorphism& m,
                                             const TransportFamily& t1,
                                             const TransportFamily& t2,
                                             const SmoothMap& kappa,
                                             std::size_t samples,
                                             std::uint64_t seed,
                                             double tolerance = 1e-9);

/// The fibre-pairing consistency condition rewritten as a morphism
/// commutation, with the pair transport in the first slot and the trivial
/// bundle in the second.  Produces the same samples and arithmetic as
/// check_binary_consistency, so the two agree bit for bit.
AxiomReport binary_op_as_morphism(const TransportFamily& t,
                                  const BinaryForm& beta, std::size_t samples,
                                  std::uint64_t seed, double tolerance = 1e-9);

}  // namespace tam
