#include <cmath>

#include <doctest.h>

#include "tam/composite.hpp"
#include "tam/errors.hpp"
#include "tam/sampling.hpp"

using namespace tam;

namespace {

CompositeDomain three_by_segment() {
  return CompositeDomain{3, ParamDomain{Box({Interval{0.0, 1.0}})}};
}

ChartDomain segment_chart() {
  return ChartDomain{Box({Interval{-0.1, 1.1}}), "segment"};
}

RealVector embed(std::size_t, const RealVector& x) { return x; }

// separable factor family F(a, x) = C(a) Gt(x)
struct Separable {
  std::vector<Matrix> C;
  Matrix base;
  Matrix wave;

  Matrix Gt(const RealVector& x) const {
    return base + std::sin(x[0] + 0.2) * wave;
  }
  AffineMap operator()(std::size_t a, const RealVector& x) const {
    return AffineMap::pure(Matrix(C[a] * Gt(x)));
  }
};

Separable make_separable(std::uint64_t seed) {
  Sampler sampler(seed);
  Separable s;
  for (int a = 0; a < 3; ++a) s.C.push_back(sampler.well_conditioned(2, Field::real));
  s.base = sampler.well_conditioned(2, Field::real);
  s.wave = 0.15 * sampler.well_conditioned(2, Field::real);
  return s;
}

double affine_distance(const AffineMap& a, const AffineMap& b) {
  return (a.linear - b.linear).cwiseAbs().maxCoeff() +
         (a.offset - b.offset).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("identity composite transport factorizes into identities") {
  CompositeDomain dom = three_by_segment();
  CompositeTransport t = make_composite_transport(
      dom, FibreModel{2, Field::real}, embed, segment_chart(),
      [](std::size_t, const RealVector&) { return AffineMap::identity(2); });
  RealVector x0(1);
  x0 << 0.5;
  CompositeFactorization f = factorize(t, 1, x0);
  Sampler sampler(2);
  AffineMap id = AffineMap::identity(2);
  for (int i = 0; i < 10; ++i) {
    std::size_t a = sampler.index(3);
    RealVector x = sampler.point(dom.slice.box);
    CHECK(affine_distance(f.F(a, x), id) < 1e-14);
    CHECK(affine_distance(f.G(a, x), id) < 1e-14);
    CHECK(affine_distance(f.H(a, x), id) < 1e-14);
    CHECK(affine_distance(f.C(a), id) < 1e-14);
    CHECK(affine_distance(f.D(x), id) < 1e-14);
  }
}

TEST_CASE("separable families factorize up to a constant left gauge") {
  CompositeDomain dom = three_by_segment();
  Separable sep = make_separable(41);
  CompositeTransport t = make_composite_transport(
      dom, FibreModel{2, Field::real}, embed, segment_chart(), sep);
  RealVector x0(1);
  x0 << 0.25;
  const std::size_t a0 = 0;
  CompositeFactorization f = factorize(t, a0, x0);

  Sampler sampler(6);
  // recovered total factor differs from the input one by a constant left map
  Matrix expected_pc = (sep.C[a0] * sep.Gt(x0)).inverse();
  for (int i = 0; i < 12; ++i) {
    std::size_t a = sampler.index(3);
    RealVector x = sampler.point(dom.slice.box);
    Matrix pc = f.F(a, x).linear * (sep.C[a] * sep.Gt(x)).inverse();
    CHECK((pc - expected_pc).cwiseAbs().maxCoeff() < 1e-12);
    // the defining splits hold on samples
    CHECK(affine_distance(f.F(a, x), f.C(a).after(f.G(a, x))) < 1e-12);
    CHECK(affine_distance(f.F(a, x), f.D(x).after(f.H(a, x))) < 1e-12);
  }

  // reconstruction reproduces the transport
  CompositeTransport back = reconstruct(f);
  for (int i = 0; i < 25; ++i) {
    std::size_t a = sampler.index(3);
    std::size_t b = sampler.index(3);
    RealVector x = sampler.point(dom.slice.box);
    RealVector y = sampler.point(dom.slice.box);
    Vector v = sampler.fibre_vector(2, Field::real);
    CHECK((back.apply(a, x, b, y, v) - t.apply(a, x, b, y, v)).norm() < 1e-12);
  }
}

TEST_CASE("rank-1 exponential composite factorizes in closed form") {
  CompositeDomain dom{3, ParamDomain{Box({Interval{0.0, 1.0}})}};
  CompositeTransport t = make_composite_transport(
      dom, FibreModel{1, Field::real}, embed, segment_chart(),
      [](std::size_t a, const RealVector& x) {
        Matrix f(1, 1);
        f(0, 0) = std::exp(-(static_cast<double>(a) + x[0]));
        return AffineMap::pure(f);
      });
  // K_{(a,x)->(b,y)} = e^{(b-a)+(y-x)}
  RealVector x(1), y(1);
  x << 0.3;
  y << 0.9;
  Vector v(1);
  v << 1.0;
  CHECK(std::abs(t.apply(0, x, 2, y, v)[0] -
                 std::exp((2.0 - 0.0) + (y[0] - x[0]))) < 1e-12);

  RealVector x0(1);
  x0 << 0.5;
  const std::size_t a0 = 1;
  CompositeFactorization f = factorize(t, a0, x0);
  for (std::size_t a = 0; a < 3; ++a) {
    double expected = std::exp(static_cast<double>(a0) - static_cast<double>(a));
    CHECK(std::abs(f.C(a).linear(0, 0).real() - expected) < 1e-14);
  }
  CHECK(std::abs(f.D(x).linear(0, 0).real() - std::exp(x0[0] - x[0])) < 1e-14);
}

TEST_CASE("factorize rejects unlawful transports") {
  CompositeDomain dom = three_by_segment();
  CompositeTransport t = make_composite_transport(
      dom, FibreModel{1, Field::real}, embed, segment_chart(),
      [](std::size_t, const RealVector&) { return AffineMap::identity(1); });
  t.family.apply = [](const RealVector& l, const RealVector& m,
                      const Vector& v) {
    return Vector(v * Scalar(1.0 + std::abs((m - l).norm()), 0.0));
  };
  t.family.source = TransportFamily::Source::raw;
  RealVector x0(1);
  x0 << 0.5;
  CHECK_THROWS_AS(factorize(t, 0, x0), AxiomError);
  RealVector outside(1);
  outside << 7.0;
  CHECK_THROWS_AS(factorize(t, 0, outside), DomainError);
}

TEST_CASE("restricted transports satisfy the slice laws and commute") {
  CompositeDomain dom = three_by_segment();
  Separable sep = make_separable(43);
  CompositeTransport t = make_composite_transport(
      dom, FibreModel{2, Field::real}, embed, segment_chart(), sep);
  RealVector x0(1);
  x0 << 0.75;
  CompositeFactorization f = factorize(t, 2, x0);
  RestrictedTransports r = restricted_transports(f);

  Sampler sampler(8);
  for (int i = 0; i < 100; ++i) {
    std::size_t a = sampler.index(3);
    std::size_t b = sampler.index(3);
    std::size_t c = sampler.index(3);
    RealVector x = sampler.point(dom.slice.box);
    RealVector y = sampler.point(dom.slice.box);
    RealVector z = sampler.point(dom.slice.box);
    Vector v = sampler.fibre_vector(2, Field::real);

    // slice families obey composition and identity
    AffineMap through = r.index_slice(b, c, x).after(r.index_slice(a, b, x));
    CHECK(affine_distance(through, r.index_slice(a, c, x)) < 1e-12);
    CHECK(affine_distance(r.index_slice(a, a, x), AffineMap::identity(2)) <
          1e-13);
    AffineMap through2 = r.slice(a, y, z).after(r.slice(a, x, y));
    CHECK(affine_distance(through2, r.slice(a, x, z)) < 1e-12);

    // the two orderings recombine to the full transport
    Vector order1 = r.index_slice(a, b, y)(r.slice(a, x, y)(v));
    Vector order2 = r.slice(b, x, y)(r.index_slice(a, b, x)(v));
    Vector direct = t.apply(a, x, b, y, v);
    CHECK((order1 - direct).norm() < 1e-12);
    CHECK((order2 - direct).norm() < 1e-12);
  }
}

TEST_CASE("gauge transformations change families but not the transport") {
  CompositeDomain dom = three_by_segment();
  Separable sep = make_separable(47);
  CompositeTransport t = make_composite_transport(
      dom, FibreModel{2, Field::real}, embed, segment_chart(), sep);
  RealVector x0(1);
  x0 << 0.5;
  CompositeFactorization f = factorize(t, 0, x0);

  Sampler sampler(10);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<AffineMap> pg;
    for (int a = 0; a < 3; ++a) {
      pg.push_back(AffineMap::pure(sampler.well_conditioned(2, Field::real)));
    }
    Matrix ph_base = sampler.well_conditioned(2, Field::real);
    Matrix ph_wave = 0.1 * sampler.well_conditioned(2, Field::real);
    CompositeGauge gauge;
    gauge.PG = [pg](std::size_t a) { return pg[a]; };
    gauge.PH = [ph_base, ph_wave](const RealVector& x) {
      return AffineMap::pure(Matrix(ph_base + std::cos(x[0]) * ph_wave));
    };
    gauge.PC = AffineMap::pure(sampler.well_conditioned(2, Field::real));
    CompositeFactorization g = apply_gauge(f, gauge);

    for (int i = 0; i < 10; ++i) {
      std::size_t a = sampler.index(3);
      std::size_t b = sampler.index(3);
      RealVector x = sampler.point(dom.slice.box);
      RealVector y = sampler.point(dom.slice.box);
      Vector v = sampler.fibre_vector(2, Field::real);

      // transformed families still split the total factor
      CHECK(affine_distance(g.F(a, x), g.C(a).after(g.G(a, x))) < 1e-11);
      CHECK(affine_distance(g.F(a, x), g.D(x).after(g.H(a, x))) < 1e-11);

      // stated transformation laws hold as matrix identities
      CHECK(affine_distance(g.C(a),
                            gauge.PC.after(f.C(a)).after(pg[a].inverse())) <
            1e-12);
      CHECK(affine_distance(
                g.D(x), gauge.PC.after(f.D(x)).after(gauge.PH(x).inverse())) <
            1e-12);
      CHECK(affine_distance(g.F(a, x), gauge.PC.after(f.F(a, x))) < 1e-12);

      // reconstructed transport is untouched
      Vector lhs = reconstruct(g).apply(a, x, b, y, v);
      Vector rhs = t.apply(a, x, b, y, v);
      CHECK((lhs - rhs).norm() < 1e-11);
    }
  }
}

TEST_CASE("index-to-index maps satisfy the one-index laws") {
  CompositeDomain dom = three_by_segment();
  Separable sep = make_separable(53);
  CompositeTransport t = make_composite_transport(
      dom, FibreModel{2, Field::real}, embed, segment_chart(), sep);
  RealVector x0(1);
  x0 << 0.5;
  CompositeFactorization f = factorize(t, 0, x0);
  auto c_between = [&f](std::size_t a, std::size_t b) {
    return f.C(b).inverse().after(f.C(a));
  };
  for (std::size_t a = 0; a < 3; ++a) {
    CHECK(affine_distance(c_between(a, a), AffineMap::identity(2)) < 1e-13);
    for (std::size_t b = 0; b < 3; ++b) {
      for (std::size_t c = 0; c < 3; ++c) {
        CHECK(affine_distance(c_between(c, b).after(c_between(a, c)),
                              c_between(a, b)) < 1e-12);
      }
    }
  }
}

TEST_CASE("bundle families glue into a flat product transport") {
  CompositeDomain dom{2, ParamDomain{Box({Interval{0.0, 1.0}})}};
  Sampler sampler(59);
  // lawful pairwise maps from a total factor field
  std::vector<Matrix> anchor{sampler.well_conditioned(2, Field::real),
                             sampler.well_conditioned(2, Field::real)};
  Matrix wave = 0.2 * sampler.well_conditioned(2, Field::real);
  auto q = [anchor, wave](std::size_t a, const RealVector& x) {
    return Matrix(anchor[a] + std::sin(x[0]) * wave);
  };
  auto lawful = [q](std::size_t a, std::size_t b, const RealVector& x,
                    const RealVector& y) {
    return AffineMap::pure(Matrix(q(b, y).inverse() * q(a, x)));
  };

  SUBCASE("single-index family reduces to a flat transport") {
    CompositeDomain single{1, dom.slice};
    CompositeTransport t = family_to_product(
        single, FibreModel{2, Field::real},
        [lawful](std::size_t a, std::size_t b, const RealVector& x,
                 const RealVector& y) { return lawful(a, b, x, y); });
    GroupoidReport rep = check_groupoid(t.family, 60, 3);
    CHECK(rep.pass());
  }

  SUBCASE("two-bundle family passes the transport laws") {
    CompositeTransport t =
        family_to_product(dom, FibreModel{2, Field::real}, lawful);
    GroupoidReport rep = check_groupoid(t.family, 100, 3);
    CHECK(rep.pass());
    CHECK(rep.composition.max_residual <= 1e-12);
  }

  SUBCASE("a perturbed link is rejected with a witness") {
    auto broken = [lawful](std::size_t a, std::size_t b, const RealVector& x,
                           const RealVector& y) {
      AffineMap m = lawful(a, b, x, y);
      if (a == 0 && b == 1) m.linear(0, 0) += 1e-3;
      return m;
    };
    CHECK_THROWS_AS(
        family_to_product(dom, FibreModel{2, Field::real}, broken),
        AxiomError);
  }
}

TEST_CASE("induced product transports") {
  // reference transport along a segment
  Sampler sampler(61);
  Matrix f0 = sampler.well_conditioned(2, Field::real);
  Matrix f1 = 0.2 * sampler.well_conditioned(2, Field::real);
  FactorFamily base;
  base.fibre = FibreModel{2, Field::real};
  base.map = identity_map(Box({Interval{0.0, 1.0}}), "m");
  base.factor = [f0, f1](const RealVector& x) {
    return AffineMap::pure(Matrix(f0 + std::sin(x[0]) * f1));
  };
  TransportFamily t0 = from_factor_maps(base);
  SmoothMap kappa1 = identity_map(Box({Interval{0.0, 1.0}}), "a");

  SUBCASE("identity isomorphisms ignore the first factor") {
    TransportFamily t = induced_product_transport(
        t0, kappa1, [](const RealVector&) { return AffineMap::identity(2); });
    RealVector l(2), m(2);
    l << 0.1, 0.4;
    m << 0.9, 0.4;  // same second slot
    Vector v = sampler.fibre_vector(2, Field::real);
    CHECK((t.apply(l, m, v) - v).norm() < 1e-13);
  }

  SUBCASE("identity reference with varying isomorphisms is pure gauge") {
    FactorFamily idf;
    idf.fibre = FibreModel{2, Field::real};
    idf.map = identity_map(Box({Interval{0.0, 1.0}}), "m");
    idf.factor = [](const RealVector&) { return AffineMap::identity(2); };
    TransportFamily flat = from_factor_maps(idf);
    Matrix h0 = sampler.well_conditioned(2, Field::real);
    Matrix h1 = 0.3 * sampler.well_conditioned(2, Field::real);
    auto h = [h0, h1](const RealVector& a) {
      return AffineMap::pure(Matrix(h0 + a[0] * h1));
    };
    TransportFamily t = induced_product_transport(flat, kappa1, h);
    RealVector l(2), m(2);
    l << 0.2, 0.6;
    m << 0.8, 0.1;
    Vector v = sampler.fibre_vector(2, Field::real);
    RealVector la = l.head(1), ma = m.head(1);
    Vector expected = h(ma).inverse()(h(la)(v));
    CHECK((t.apply(l, m, v) - expected).norm() < 1e-13);
  }

  SUBCASE("full case passes the transport laws") {
    Matrix h0 = sampler.well_conditioned(2, Field::real);
    Matrix h1 = 0.3 * sampler.well_conditioned(2, Field::real);
    TransportFamily t = induced_product_transport(
        t0, kappa1, [h0, h1](const RealVector& a) {
          return AffineMap::pure(Matrix(h0 + a[0] * h1));
        });
    GroupoidReport rep = check_groupoid(t, 100, 7);
    CHECK(rep.pass());
    CHECK(rep.composition.max_residual <= 1e-12);
  }
}
