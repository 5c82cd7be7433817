#pragma once

#include <cstdint>
#include <functional>

#include "tam/geometry.hpp"
#include "tam/report.hpp"
#include "tam/types.hpp"

namespace tam {

/// Invertible affine fibre bijection v -> A v + b.  The general (nonlinear)
/// factor maps are restricted to this class so invertibility stays
/// certifiable; linear families simply carry b = 0.
struct AffineMap {
  Matrix linear;
  Vector offset;

  static AffineMap identity(int rank);
  static AffineMap pure(Matrix a);

  int rank() const { return static_cast<int>(linear.rows()); }
  Vector operator()(const Vector& v) const { return linear * v + offset; }
  AffineMap inverse() const;
  /// Composition this after g:  (this . g)(v) = this(g(v)).
  AffineMap after(const AffineMap& g) const;
  double condition() const;
};

/// Family of invertible factor maps l -> F_l from the fibre over kappa(l)
/// into the model space.
struct FactorFamily {
  FibreModel fibre;
  SmoothMap map;  // kappa
  std::function<AffineMap(const RealVector&)> factor;
};

/// Two-point family K_{l->m} between fibres over kappa(l) and kappa(m).
struct TransportFamily {
  enum class Source { factors, raw };

  FibreModel fibre;
  SmoothMap map;  // kappa
  std::function<Vector(const RealVector& l, const RealVector& m,
                       const Vector& v)>
      apply;
  Source source = Source::raw;

  /// Reconstructs K_{l->m} as an affine map by probing basis vectors.
  AffineMap affine(const RealVector& l, const RealVector& m) const;
};

/// Field of fibre vectors over the chart, with components in the active
/// frame and a declared smoothness class.
struct Section {
  FibreModel fibre;
  std::function<Vector(const RealVector& x)> components;
  Smoothness smoothness = Smoothness::C2;
};

/// Restriction of a section to the track of a map: m -> value over kappa(m).
struct SectionAlongMap {
  SmoothMap map;
  std::function<Vector(const RealVector& m)> values;
};

/// Assignment of a transport family to every map; the locality and
/// reparametrization conditions constrain this assignment, not a single
/// family, so their checks consume a rule.
using TransportRule = std::function<TransportFamily(const SmoothMap&)>;

/// Scalar-valued fibre pairing field beta_x(u, v).
using BinaryForm =
    std::function<Scalar(const RealVector& x, const Vector& u, const Vector& v)>;

/// K_{l->m} := F_m^{-1} . F_l.  The two defining laws hold by construction.
/// Throws SingularFactorError when a sampled factor is ill-conditioned.
TransportFamily from_factor_maps(const FactorFamily& f,
                                 std::size_t invertibility_samples = 8);

/// Left-composes every factor with d; the induced transport is unchanged.
FactorFamily gauge_transform(const FactorFamily& f, const AffineMap& d);

GroupoidReport check_groupoid(const TransportFamily& t, std::size_t samples,
                              std::uint64_t seed, double tolerance = 1e-9);

/// Spreads the value of s at kappa(l) along the whole map.  When s is
/// K-transported the result does not depend on the anchor l.
SectionAlongMap transport_section(const TransportFamily& t, const Section& s,
                                  const RealVector& l);

AxiomReport check_locality(const TransportRule& rule, const SmoothMap& map,
                           const ParamDomain& sub, std::size_t samples,
                           std::uint64_t seed, double tolerance = 1e-9);

/// tau must be a bijection onto the parameter domain of `map`.
AxiomReport check_reparam(const TransportRule& rule, const SmoothMap& map,
                          const SmoothMap& tau, std::size_t samples,
                          std::uint64_t seed, double tolerance = 1e-9);

AxiomReport check_binary_consistency(const TransportFamily& t,
                                     const BinaryForm& beta,
                                     std::size_t samples, std::uint64_t seed,
                                     double tolerance = 1e-9);

AxiomReport check_linearity(const TransportFamily& t, std::size_t samples,
                            std::uint64_t seed, double tolerance = 1e-9);

/// Rule whose factor at l depends only on the base point kappa(l); such
/// rules satisfy locality and reparametrization invariance.
TransportRule pointwise_rule(FibreModel fibre,
                             std::function<AffineMap(const RealVector& x)> fx);

}  // namespace tam
