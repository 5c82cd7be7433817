#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "tam/report.hpp"
#include "tam/transport.hpp"
#include "tam/types.hpp"

namespace tam {

/// Parameter domain A x M with finite index part A.  Composite points are
/// flattened as [index; x] so transport families over them reuse the plain
/// machinery; the index coordinate is exact (small integers).
struct CompositeDomain {
  std::size_t index_count = 1;
  ParamDomain slice;  // M

  RealVector join(std::size_t a, const RealVector& x) const;
  std::pair<std::size_t, RealVector> split(const RealVector& p) const;
  ParamDomain joined() const;
};

/// A transport over a composite domain together with its domain structure.
struct CompositeTransport {
  CompositeDomain domain;
  TransportFamily family;

  Vector apply(std::size_t a, const RealVector& x, std::size_t b,
               const RealVector& y, const Vector& v) const;
  AffineMap affine(std::size_t a, const RealVector& x, std::size_t b,
                   const RealVector& y) const;
};

/// Builds a composite transport from factor maps indexed by (a, x).
CompositeTransport make_composite_transport(
    const CompositeDomain& domain, FibreModel fibre,
    std::function<RealVector(std::size_t, const RealVector&)> eta,
    const ChartDomain& codomain,
    std::function<AffineMap(std::size_t, const RealVector&)> factor);

/// The five factor families of the canonical anchor gauge.  All model
/// spaces are identified with the fibre, so every entry is a fibre
/// bijection.
struct CompositeFactorization {
  CompositeDomain domain;
  FibreModel fibre;
  SmoothMap map;  // eta over the joined domain
  std::size_t anchor_index = 0;
  RealVector anchor_slice;

  std::function<AffineMap(std::size_t a, const RealVector& x)> G;  // a-slice
  std::function<AffineMap(std::size_t a, const RealVector& x)> H;  // x-slice
  std::function<AffineMap(std::size_t a)> C;
  std::function<AffineMap(const RealVector& x)> D;
  std::function<AffineMap(std::size_t a, const RealVector& x)> F;
};

/// Canonical factorization anchored at (a0, x0): F(a,x) = K_{(a,x)->(a0,x0)}
/// and the other four families read off the anchor slices.  The transport's
/// two defining laws are checked first; AxiomError on failure.
CompositeFactorization factorize(const CompositeTransport& t, std::size_t a0,
                                 const RealVector& x0,
                                 std::size_t law_samples = 40,
                                 std::uint64_t seed = 1);

/// K_{(a,x)->(b,y)} = F(b,y)^{-1} . F(a,x).
CompositeTransport reconstruct(const CompositeFactorization& f);

/// The two restricted families induced by a factorization, plus their
/// commuting recombination.
struct RestrictedTransports {
  std::function<AffineMap(std::size_t a, std::size_t b, const RealVector& x)>
      index_slice;  // {}^x K_{a->b}
  std::function<AffineMap(std::size_t a, const RealVector& x,
                          const RealVector& y)>
      slice;  // {}_a K_{x->y}
};
RestrictedTransports restricted_transports(const CompositeFactorization& f);

/// Gauge freedom of the composite families: left factors per index, per
/// slice point, and one constant re-gauge of the common model space.
struct CompositeGauge {
  std::function<AffineMap(std::size_t a)> PG;
  std::function<AffineMap(const RealVector& x)> PH;
  AffineMap PC;
};
CompositeFactorization apply_gauge(const CompositeFactorization& f,
                                   const CompositeGauge& g);

/// Family of bundles over one base glued into a single flat transport over
/// the composite domain.  The pairwise maps must satisfy the two-index
/// composition and identity laws; violations raise AxiomError with a
/// witness in the message.
CompositeTransport family_to_product(
    const CompositeDomain& domain, FibreModel fibre,
    std::function<AffineMap(std::size_t a, std::size_t b, const RealVector& x,
                            const RealVector& y)>
        link,
    std::size_t law_samples = 40, std::uint64_t seed = 1);

/// Transport along a product map induced by a transport in a reference
/// bundle and fibre isomorphisms indexed by the first factor:
/// K_{(a,x)->(b,y)} = h(kappa1(b))^{-1} . K0_{x->y} . h(kappa1(a)).
TransportFamily induced_product_transport(
    const TransportFamily& t0, const SmoothMap& kappa1,
    std::function<AffineMap(const RealVector& a1)> h);

}  // namespace tam
