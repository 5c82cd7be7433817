#include "tam/composite.hpp"

#include <cmath>
#include <sstream>

#include "tam/errors.hpp"
#include "tam/sampling.hpp"

namespace tam {

RealVector CompositeDomain::join(std::size_t a, const RealVector& x) const {
  RealVector p(1 + x.size());
  p[0] = static_cast<double>(a);
  p.tail(x.size()) = x;
  return p;
}

std::pair<std::size_t, RealVector> CompositeDomain::split(
    const RealVector& p) const {
  double idx = std::round(p[0]);
  if (idx < 0.0 || idx >= static_cast<double>(index_count)) {
    throw DomainError("composite index out of range");
  }
  return {static_cast<std::size_t>(idx), p.tail(p.size() - 1)};
}

ParamDomain CompositeDomain::joined() const {
  std::vector<Interval> bounds;
  bounds.push_back(
      Interval{-0.49, static_cast<double>(index_count) - 1.0 + 0.49});
  for (const auto& iv : slice.box.bounds()) bounds.push_back(iv);
  return ParamDomain{Box(std::move(bounds))};
}

Vector CompositeTransport::apply(std::size_t a, const RealVector& x,
                                 std::size_t b, const RealVector& y,
                                 const Vector& v) const {
  return family.apply(domain.join(a, x), domain.join(b, y), v);
}

AffineMap CompositeTransport::affine(std::size_t a, const RealVector& x,
                                     std::size_t b,
                                     const RealVector& y) const {
  return family.affine(domain.join(a, x), domain.join(b, y));
}

CompositeTransport make_composite_transport(
    const CompositeDomain& domain, FibreModel fibre,
    std::function<RealVector(std::size_t, const RealVector&)> eta,
    const ChartDomain& codomain,
    std::function<AffineMap(std::size_t, const RealVector&)> factor) {
  FactorFamily fam;
  fam.fibre = fibre;
  fam.map.domain = domain.joined();
  fam.map.codomain = codomain;
  const CompositeDomain dom = domain;
  fam.map.eval = [dom, eta](const RealVector& p) {
    auto [a, x] = dom.split(p);
    return eta(a, x);
  };
  fam.map.name = "composite";
  fam.factor = [dom, factor](const RealVector& p) {
    auto [a, x] = dom.split(p);
    return factor(a, x);
  };
  return CompositeTransport{domain, from_factor_maps(fam)};
}

CompositeFactorization factorize(const CompositeTransport& t, std::size_t a0,
                                 const RealVector& x0,
                                 std::size_t law_samples, std::uint64_t seed) {
  if (a0 >= t.domain.index_count || !t.domain.slice.box.contains(x0)) {
    throw DomainError("factorization anchor outside the composite domain");
  }
  GroupoidReport laws = check_groupoid(t.family, law_samples, seed);
  if (!laws.pass()) {
    std::ostringstream os;
    os << "transport violates its defining laws (composition residual "
       << laws.composition.max_residual << ", identity residual "
       << laws.identity.max_residual << ")";
    throw AxiomError(os.str());
  }
  CompositeFactorization f;
  f.domain = t.domain;
  f.fibre = t.family.fibre;
  f.map = t.family.map;
  f.anchor_index = a0;
  f.anchor_slice = x0;
  const CompositeTransport tr = t;
  f.F = [tr, a0, x0](std::size_t a, const RealVector& x) {
    return tr.affine(a, x, a0, x0);
  };
  f.G = [tr, x0](std::size_t a, const RealVector& x) {
    return tr.affine(a, x, a, x0);
  };
  f.H = [tr, a0](std::size_t a, const RealVector& x) {
    return tr.affine(a, x, a0, x);
  };
  f.C = [tr, a0, x0](std::size_t a) { return tr.affine(a, x0, a0, x0); };
  f.D = [tr, a0, x0](const RealVector& x) { return tr.affine(a0, x, a0, x0); };
  return f;
}

CompositeTransport reconstruct(const CompositeFactorization& f) {
  TransportFamily fam;
  fam.fibre = f.fibre;
  fam.map = f.map;
  const CompositeDomain dom = f.domain;
  auto F = f.F;
  fam.apply = [dom, F](const RealVector& l, const RealVector& m,
                       const Vector& v) {
    auto [a, x] = dom.split(l);
    auto [b, y] = dom.split(m);
    return F(b, y).inverse()(F(a, x)(v));
  };
  fam.source = TransportFamily::Source::factors;
  return CompositeTransport{f.domain, std::move(fam)};
}

RestrictedTransports restricted_transports(const CompositeFactorization& f) {
  RestrictedTransports r;
  auto H = f.H;
  auto G = f.G;
  r.index_slice = [H](std::size_t a, std::size_t b, const RealVector& x) {
    return H(b, x).inverse().after(H(a, x));
  };
  r.slice = [G](std::size_t a, const RealVector& x, const RealVector& y) {
    return G(a, y).inverse().after(G(a, x));
  };
  return r;
}

CompositeFactorization apply_gauge(const CompositeFactorization& f,
                                   const CompositeGauge& g) {
  CompositeFactorization out = f;
  auto G = f.G;
  auto H = f.H;
  auto C = f.C;
  auto D = f.D;
  auto F = f.F;
  auto PG = g.PG;
  auto PH = g.PH;
  AffineMap PC = g.PC;
  out.G = [G, PG](std::size_t a, const RealVector& x) {
    return PG(a).after(G(a, x));
  };
  out.H = [H, PH](std::size_t a, const RealVector& x) {
    return PH(x).after(H(a, x));
  };
  out.C = [C, PG, PC](std::size_t a) {
    return PC.after(C(a)).after(PG(a).inverse());
  };
  out.D = [D, PH, PC](const RealVector& x) {
    return PC.after(D(x)).after(PH(x).inverse());
  };
  out.F = [F, PC](std::size_t a, const RealVector& x) {
    return PC.after(F(a, x));
  };
  return out;
}

CompositeTransport family_to_product(
    const CompositeDomain& domain, FibreModel fibre,
    std::function<AffineMap(std::size_t a, std::size_t b, const RealVector& x,
                            const RealVector& y)>
        link,
    std::size_t law_samples, std::uint64_t seed) {
  Sampler sampler(seed);
  for (std::size_t i = 0; i < law_samples; ++i) {
    std::size_t a = sampler.index(domain.index_count);
    std::size_t b = sampler.index(domain.index_count);
    std::size_t c = sampler.index(domain.index_count);
    RealVector x = sampler.point(domain.slice.box);
    RealVector y = sampler.point(domain.slice.box);
    RealVector z = sampler.point(domain.slice.box);
    Vector v = sampler.fibre_vector(fibre.rank, fibre.field);
    Vector stepwise = link(b, c, y, z)(link(a, b, x, y)(v));
    Vector direct = link(a, c, x, z)(v);
    double comp_residual = (stepwise - direct).norm();
    double id_residual = (link(a, a, x, x)(v) - v).norm();
    if (comp_residual > 1e-9 || id_residual > 1e-9) {
      std::ostringstream os;
      os << "bundle-family maps violate the pairwise laws at a=" << a
         << " b=" << b << " (composition residual " << comp_residual
         << ", identity residual " << id_residual << ")";
      throw AxiomError(os.str());
    }
  }

  TransportFamily fam;
  fam.fibre = fibre;
  fam.map = identity_map(domain.joined().box, "product-base");
  const CompositeDomain dom = domain;
  fam.apply = [dom, link](const RealVector& l, const RealVector& m,
                          const Vector& v) {
    auto [a, x] = dom.split(l);
    auto [b, y] = dom.split(m);
    return link(a, b, x, y)(v);
  };
  fam.source = TransportFamily::Source::raw;
  return CompositeTransport{domain, std::move(fam)};
}

TransportFamily induced_product_transport(
    const TransportFamily& t0, const SmoothMap& kappa1,
    std::function<AffineMap(const RealVector& a1)> h) {
  const int first_dim = kappa1.domain.dim();
  const int second_dim = t0.map.domain.dim();

  SmoothMap joint;
  std::vector<Interval> bounds = kappa1.domain.box.bounds();
  for (const auto& iv : t0.map.domain.box.bounds()) bounds.push_back(iv);
  joint.domain = ParamDomain{Box(std::move(bounds))};
  std::vector<Interval> cod = kappa1.codomain.box.bounds();
  for (const auto& iv : t0.map.codomain.box.bounds()) cod.push_back(iv);
  joint.codomain =
      ChartDomain{Box(std::move(cod)),
                  kappa1.codomain.name + "x" + t0.map.codomain.name};
  auto eval1 = kappa1.eval;
  auto eval2 = t0.map.eval;
  joint.eval = [eval1, eval2, first_dim, second_dim](const RealVector& p) {
    RealVector a1 = eval1(p.head(first_dim));
    RealVector x1 = eval2(p.tail(second_dim));
    RealVector out(a1.size() + x1.size());
    out.head(a1.size()) = a1;
    out.tail(x1.size()) = x1;
    return out;
  };
  joint.name = kappa1.name + "x" + t0.map.name;

  TransportFamily fam;
  fam.fibre = t0.fibre;
  fam.map = std::move(joint);
  auto apply0 = t0.apply;
  fam.apply = [apply0, eval1, h, first_dim, second_dim](
                  const RealVector& l, const RealVector& m, const Vector& v) {
    Vector up = h(eval1(l.head(first_dim)))(v);
    Vector across = apply0(l.tail(second_dim), m.tail(second_dim), up);
    return h(eval1(m.head(first_dim))).inverse()(across);
  };
  fam.source = t0.source;
  return fam;
}

}  // namespace tam
