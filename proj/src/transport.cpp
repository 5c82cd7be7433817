#include "tam/transport.hpp"

#include <sstream>

#include "tam/errors.hpp"
#include "tam/sampling.hpp"

namespace tam {

AffineMap AffineMap::identity(int rank) {
  return AffineMap{Matrix::Identity(rank, rank), Vector::Zero(rank)};
}

AffineMap AffineMap::pure(Matrix a) {
  const int r = static_cast<int>(a.rows());
  return AffineMap{std::move(a), Vector::Zero(r)};
}

AffineMap AffineMap::inverse() const {
  Matrix ai = linear.inverse();
  return AffineMap{ai, Vector(-(ai * offset))};
}

AffineMap AffineMap::after(const AffineMap& g) const {
  return AffineMap{linear * g.linear, Vector(linear * g.offset + offset)};
}

double AffineMap::condition() const {
  Eigen::JacobiSVD<Matrix> svd(linear);
  double smin = svd.singularValues().minCoeff();
  double smax = svd.singularValues().maxCoeff();
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

AffineMap TransportFamily::affine(const RealVector& l,
                                  const RealVector& m) const {
  const int r = fibre.rank;
  Vector b = apply(l, m, Vector::Zero(r));
  Matrix a(r, r);
  for (int j = 0; j < r; ++j) {
    Vector e = Vector::Zero(r);
    e[j] = Scalar(1.0, 0.0);
    a.col(j) = apply(l, m, e) - b;
  }
  return AffineMap{std::move(a), std::move(b)};
}

TransportFamily from_factor_maps(const FactorFamily& f,
                                 std::size_t invertibility_samples) {
  Sampler sampler(0x5eedf00d);
  for (std::size_t i = 0; i < invertibility_samples; ++i) {
    RealVector l = sampler.point(f.map.domain.box);
    double cond = f.factor(l).condition();
    if (!(cond < 1e12)) {
      std::ostringstream os;
      os << "factor map is numerically singular (condition " << cond << ")";
      throw SingularFactorError(os.str());
    }
  }
  TransportFamily t;
  t.fibre = f.fibre;
  t.map = f.map;
  auto factor = f.factor;
  t.apply = [factor](const RealVector& l, const RealVector& m,
                     const Vector& v) {
    return factor(m).inverse()(factor(l)(v));
  };
  t.source = TransportFamily::Source::factors;
  return t;
}

FactorFamily gauge_transform(const FactorFamily& f, const AffineMap& d) {
  if (!(d.condition() < 1e12)) {
    throw SingularFactorError("gauge map is numerically singular");
  }
  FactorFamily g = f;
  auto factor = f.factor;
  g.factor = [factor, d](const RealVector& l) { return d.after(factor(l)); };
  return g;
}

GroupoidReport check_groupoid(const TransportFamily& t, std::size_t samples,
                              std::uint64_t seed, double tolerance) {
  Sampler sampler(seed);
  GroupoidReport rep;
  rep.composition =
      AxiomReport{"eq2.2", tolerance, 0.0, {}, true, t.fibre.field};
  rep.identity = AxiomReport{"eq2.3", tolerance, 0.0, {}, true, t.fibre.field};
  const Box& box = t.map.domain.box;
  for (std::size_t i = 0; i < samples; ++i) {
    RealVector l = sampler.point(box);
    RealVector m = sampler.point(box);
    RealVector n = sampler.point(box);
    Vector v = sampler.fibre_vector(t.fibre.rank, t.fibre.field);
    Vector two_step = t.apply(m, n, t.apply(l, m, v));
    Vector one_step = t.apply(l, n, v);
    rep.composition.consider((two_step - one_step).norm(), l, m, n, v);
    rep.identity.consider((t.apply(l, l, v) - v).norm(), l, l, std::nullopt, v);
  }
  rep.composition.finalize();
  rep.identity.finalize();
  return rep;
}

SectionAlongMap transport_section(const TransportFamily& t, const Section& s,
                                  const RealVector& l) {
  Vector anchor_value = s.components(eval_map(t.map, l));
  SectionAlongMap out;
  out.map = t.map;
  auto apply = t.apply;
  out.values = [apply, l, anchor_value](const RealVector& m) {
    return apply(l, m, anchor_value);
  };
  return out;
}

AxiomReport check_locality(const TransportRule& rule, const SmoothMap& map,
                           const ParamDomain& sub, std::size_t samples,
                           std::uint64_t seed, double tolerance) {
  TransportFamily full = rule(map);
  TransportFamily restricted = rule(map.restrict(sub));
  Sampler sampler(seed);
  AxiomReport rep{"eq2.7", tolerance, 0.0, {}, true, full.fibre.field};
  for (std::size_t i = 0; i < samples; ++i) {
    RealVector l = sampler.point(sub.box);
    RealVector m = sampler.point(sub.box);
    Vector v = sampler.fibre_vector(full.fibre.rank, full.fibre.field);
    double r = (restricted.apply(l, m, v) - full.apply(l, m, v)).norm();
    rep.consider(r, l, m, std::nullopt, v);
  }
  rep.finalize();
  return rep;
}

AxiomReport check_reparam(const TransportRule& rule, const SmoothMap& map,
                          const SmoothMap& tau, std::size_t samples,
                          std::uint64_t seed, double tolerance) {
  SmoothMap composed;
  composed.domain = tau.domain;
  composed.codomain = map.codomain;
  auto tau_eval = tau.eval;
  auto map_eval = map.eval;
  composed.eval = [tau_eval, map_eval](const RealVector& l) {
    return map_eval(tau_eval(l));
  };
  composed.name = map.name + "." + tau.name;
  TransportFamily direct = rule(composed);
  TransportFamily base = rule(map);
  Sampler sampler(seed);
  AxiomReport rep{"eq2.8", tolerance, 0.0, {}, true, base.fibre.field};
  for (std::size_t i = 0; i < samples; ++i) {
    RealVector l = sampler.point(tau.domain.box);
    RealVector m = sampler.point(tau.domain.box);
    Vector v = sampler.fibre_vector(base.fibre.rank, base.fibre.field);
    double r =
        (direct.apply(l, m, v) - base.apply(tau.eval(l), tau.eval(m), v)).norm();
    rep.consider(r, l, m, std::nullopt, v);
  }
  rep.finalize();
  return rep;
}

AxiomReport check_binary_consistency(const TransportFamily& t,
                                     const BinaryForm& beta,
                                     std::size_t samples, std::uint64_t seed,
                                     double tolerance) {
  Sampler sampler(seed);
  AxiomReport rep{"eq2.9", tolerance, 0.0, {}, true, t.fibre.field};
  const Box& box = t.map.domain.box;
  for (std::size_t i = 0; i < samples; ++i) {
    RealVector l = sampler.point(box);
    RealVector m = sampler.point(box);
    Vector u = sampler.fibre_vector(t.fibre.rank, t.fibre.field);
    Vector v = sampler.fibre_vector(t.fibre.rank, t.fibre.field);
    RealVector xl = t.map.eval(l);
    RealVector xm = t.map.eval(m);
    Scalar moved = beta(xm, t.apply(l, m, u), t.apply(l, m, v));
    Scalar sameplace = beta(xl, u, v);
    rep.consider(std::abs(moved - sameplace), l, m, std::nullopt, u);
  }
  rep.finalize();
  return rep;
}

AxiomReport check_linearity(const TransportFamily& t, std::size_t samples,
                            std::uint64_t seed, double tolerance) {
  Sampler sampler(seed);
  AxiomReport rep{"eq2.10", tolerance, 0.0, {}, true, t.fibre.field};
  const Box& box = t.map.domain.box;
  for (std::size_t i = 0; i < samples; ++i) {
    RealVector l = sampler.point(box);
    RealVector m = sampler.point(box);
    Vector u = sampler.fibre_vector(t.fibre.rank, t.fibre.field);
    Vector v = sampler.fibre_vector(t.fibre.rank, t.fibre.field);
    Scalar lam = sampler.scalar(t.fibre.field);
    Scalar mu = sampler.scalar(t.fibre.field);
    Vector combined = t.apply(l, m, lam * u + mu * v);
    Vector spread = lam * t.apply(l, m, u) + mu * t.apply(l, m, v);
    rep.consider((combined - spread).norm(), l, m, std::nullopt, u);
  }
  rep.finalize();
  return rep;
}

TransportRule pointwise_rule(FibreModel fibre,
                             std::function<AffineMap(const RealVector& x)> fx) {
  return [fibre, fx](const SmoothMap& map) {
    FactorFamily fam;
    fam.fibre = fibre;
    fam.map = map;
    auto eval = map.eval;
    fam.factor = [fx, eval](const RealVector& l) { return fx(eval(l)); };
    return from_factor_maps(fam);
  };
}

}  // namespace tam
