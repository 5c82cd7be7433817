#include <cmath>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "tam/errors.hpp"
#include "tam/sampling.hpp"
#include "tam/transport.hpp"

using namespace tam;

namespace {

Box seg() { return Box({Interval{0.0, 2.0}}); }

SmoothMap line_map() { return identity_map(seg(), "line"); }

FactorFamily scalar_exp_family() {
  FactorFamily f;
  f.fibre = FibreModel{1, Field::real};
  f.map = line_map();
  f.factor = [](const RealVector& l) {
    Matrix a(1, 1);
    a(0, 0) = std::exp(l[0]);
    return AffineMap::pure(a);
  };
  return f;
}

FactorFamily random_matrix_family(int rank, Field field, std::uint64_t seed) {
  Sampler sampler(seed);
  Matrix base = sampler.well_conditioned(rank, field);
  std::vector<Matrix> waves;
  for (int i = 0; i < 3; ++i) {
    waves.push_back(0.1 * sampler.well_conditioned(rank, field));
  }
  FactorFamily f;
  f.fibre = FibreModel{rank, field};
  f.map = line_map();
  f.factor = [base, waves](const RealVector& l) {
    Matrix m = base;
    for (std::size_t i = 0; i < waves.size(); ++i) {
      m += std::sin((static_cast<double>(i) + 1.0) * l[0] + 0.3) * waves[i];
    }
    return AffineMap::pure(m);
  };
  return f;
}

}  // namespace

TEST_CASE("identity factors yield the identity transport") {
  FactorFamily f;
  f.fibre = FibreModel{3, Field::real};
  f.map = line_map();
  f.factor = [](const RealVector&) { return AffineMap::identity(3); };
  TransportFamily t = from_factor_maps(f);
  Sampler sampler(7);
  for (int i = 0; i < 10; ++i) {
    RealVector l = sampler.point(seg());
    RealVector m = sampler.point(seg());
    Vector v = sampler.fibre_vector(3, Field::real);
    CHECK((t.apply(l, m, v) - v).norm() < 1e-15);
  }
}

TEST_CASE("rank-1 exponential factors compose in closed form") {
  TransportFamily t = from_factor_maps(scalar_exp_family());
  RealVector l(1), m(1);
  l << 0.3;
  m << 1.7;
  Vector v(1);
  v << Scalar(2.0, 0.0);
  Vector out = t.apply(l, m, v);
  CHECK(std::abs(out[0] - std::exp(l[0] - m[0]) * v[0]) < 1e-14);
}

TEST_CASE("left gauge composition leaves the transport unchanged") {
  FactorFamily f = random_matrix_family(2, Field::real, 21);
  TransportFamily t = from_factor_maps(f);

  SUBCASE("identity gauge") {
    TransportFamily t2 =
        from_factor_maps(gauge_transform(f, AffineMap::identity(2)));
    RealVector l(1), m(1);
    l << 0.1;
    m << 1.9;
    Vector v(2);
    v << Scalar(1.0, 0.0), Scalar(-2.0, 0.0);
    CHECK((t.apply(l, m, v) - t2.apply(l, m, v)).norm() == 0.0);
  }

  SUBCASE("scaling gauge, difference at machine rounding") {
    AffineMap two = AffineMap::pure(Matrix(2.0 * Matrix::Identity(2, 2)));
    TransportFamily t2 = from_factor_maps(gauge_transform(f, two));
    Sampler sampler(5);
    for (int i = 0; i < 10; ++i) {
      RealVector l = sampler.point(seg());
      RealVector m = sampler.point(seg());
      Vector v = sampler.fibre_vector(2, Field::real);
      CHECK((t.apply(l, m, v) - t2.apply(l, m, v)).norm() < 1e-14);
    }
  }

  SUBCASE("random well-conditioned gauges") {
    Sampler sampler(9);
    for (int g = 0; g < 20; ++g) {
      AffineMap d{sampler.well_conditioned(2, Field::complex),
                  sampler.fibre_vector(2, Field::complex)};
      TransportFamily t2 = from_factor_maps(gauge_transform(f, d));
      for (int i = 0; i < 5; ++i) {
        RealVector l = sampler.point(seg());
        RealVector m = sampler.point(seg());
        Vector v = sampler.fibre_vector(2, Field::complex);
        CHECK((t.apply(l, m, v) - t2.apply(l, m, v)).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("singular gauge and factor maps are rejected") {
  FactorFamily f = random_matrix_family(2, Field::real, 33);
  AffineMap bad{Matrix(Matrix::Zero(2, 2)), Vector(Vector::Zero(2))};
  CHECK_THROWS_AS(gauge_transform(f, bad), SingularFactorError);
  FactorFamily g = f;
  g.factor = [](const RealVector&) {
    Matrix m(2, 2);
    m << 1.0, 1.0, 1.0, 1.0;
    return AffineMap::pure(m);
  };
  CHECK_THROWS_AS(from_factor_maps(g), SingularFactorError);
}

TEST_CASE("factor transports pass the defining-law check") {
  for (int rank : {1, 2, 4}) {
    for (Field field : {Field::real, Field::complex}) {
      TransportFamily t =
          from_factor_maps(random_matrix_family(rank, field, 100 + rank));
      GroupoidReport rep = check_groupoid(t, 200, 4);
      CHECK(rep.pass());
      CHECK(rep.composition.max_residual <= 1e-12);
      CHECK(rep.identity.max_residual <= 1e-14);
    }
  }
}

TEST_CASE("additive raw flow on a line fibre satisfies both laws exactly") {
  TransportFamily t;
  t.fibre = FibreModel{1, Field::real};
  t.map = line_map();
  const double c = 0.7;
  t.apply = [c](const RealVector& l, const RealVector& m, const Vector& v) {
    Vector out = v;
    out[0] += Scalar((m[0] - l[0]) * c, 0.0);
    return out;
  };
  t.source = TransportFamily::Source::raw;
  GroupoidReport rep = check_groupoid(t, 100, 11);
  CHECK(rep.pass());
  CHECK(rep.composition.max_residual < 1e-12);
}

TEST_CASE("scaling raw flow violates the composition law with known defect") {
  TransportFamily t;
  t.fibre = FibreModel{1, Field::real};
  t.map = line_map();
  t.apply = [](const RealVector& l, const RealVector& m, const Vector& v) {
    return Vector(v * Scalar(1.0 + std::abs(m[0] - l[0]), 0.0));
  };
  t.source = TransportFamily::Source::raw;
  GroupoidReport rep = check_groupoid(t, 100, 11);
  CHECK_FALSE(rep.composition.pass);
  CHECK(rep.composition.max_residual > 1e-3);

  // composition defect at l=0, m=1, n=2 equals |v|
  RealVector l(1), m(1), n(1);
  l << 0.0;
  m << 1.0;
  n << 2.0;
  Vector v(1);
  v << Scalar(1.0, 0.0);
  Vector two_step = t.apply(m, n, t.apply(l, m, v));
  Vector one_step = t.apply(l, n, v);
  CHECK(std::abs((two_step - one_step).norm() - 1.0) < 1e-14);
}

TEST_CASE("transports are invertible with the reversed family") {
  TransportFamily t =
      from_factor_maps(random_matrix_family(3, Field::complex, 55));
  Sampler sampler(13);
  for (int i = 0; i < 25; ++i) {
    RealVector l = sampler.point(seg());
    RealVector m = sampler.point(seg());
    Vector v = sampler.fibre_vector(3, Field::complex);
    Vector back = t.apply(m, l, t.apply(l, m, v));
    CHECK((back - v).norm() < 1e-12);
  }
}

TEST_CASE("transport_section spreads a value and forgets lawful anchors") {
  TransportFamily t =
      from_factor_maps(random_matrix_family(2, Field::real, 77));

  SUBCASE("constant section under the identity transport stays constant") {
    FactorFamily f;
    f.fibre = FibreModel{2, Field::real};
    f.map = line_map();
    f.factor = [](const RealVector&) { return AffineMap::identity(2); };
    TransportFamily flat = from_factor_maps(f);
    Vector c(2);
    c << Scalar(0.4, 0.0), Scalar(-1.0, 0.0);
    Section s{FibreModel{2, Field::real}, [c](const RealVector&) { return c; },
              Smoothness::C1};
    RealVector l(1);
    l << 0.5;
    SectionAlongMap out = transport_section(flat, s, l);
    RealVector m(1);
    m << 1.5;
    CHECK((out.values(m) - c).norm() == 0.0);
  }

  SUBCASE("transported sections are anchor independent") {
    RealVector l0(1);
    l0 << 0.25;
    Vector seed_value(2);
    seed_value << Scalar(1.0, 0.0), Scalar(2.0, 0.0);
    // a section carried by t from the seed value
    Section carried{FibreModel{2, Field::real},
                    [&t, l0, seed_value](const RealVector& x) {
                      RealVector m(1);
                      m << x[0];
                      return t.apply(l0, m, seed_value);
                    },
                    Smoothness::C1};
    RealVector a1(1), a2(1);
    a1 << 0.8;
    a2 << 1.6;
    SectionAlongMap s1 = transport_section(t, carried, a1);
    SectionAlongMap s2 = transport_section(t, carried, a2);
    Sampler sampler(3);
    for (int i = 0; i < 20; ++i) {
      RealVector m = sampler.point(seg());
      CHECK((s1.values(m) - s2.values(m)).norm() < 1e-12);
    }
  }

  SUBCASE("non-transported section exposes its anchors") {
    FactorFamily f;
    f.fibre = FibreModel{1, Field::real};
    f.map = line_map();
    f.factor = [](const RealVector&) { return AffineMap::identity(1); };
    TransportFamily flat = from_factor_maps(f);
    Section wobble{FibreModel{1, Field::real},
                   [](const RealVector& x) {
                     Vector v(1);
                     v << Scalar(std::sin(3.0 * x[0]), 0.0);
                     return v;
                   },
                   Smoothness::C1};
    RealVector a1(1), a2(1);
    a1 << 0.2;
    a2 << 1.2;
    SectionAlongMap s1 = transport_section(flat, wobble, a1);
    SectionAlongMap s2 = transport_section(flat, wobble, a2);
    RealVector m(1);
    m << 0.9;
    CHECK((s1.values(m) - s2.values(m)).norm() > 1e-6);
  }
}

TEST_CASE("locality holds for pointwise rules and fails for box-reading ones") {
  SmoothMap map = line_map();
  ParamDomain sub{Box({Interval{0.5, 1.5}})};

  TransportRule good =
      pointwise_rule(FibreModel{2, Field::real}, [](const RealVector& x) {
        Matrix m(2, 2);
        m << std::cos(x[0]), -std::sin(x[0]), std::sin(x[0]), std::cos(x[0]);
        return AffineMap::pure(m);
      });
  AxiomReport ok = check_locality(good, map, sub, 40, 17);
  CHECK(ok.pass);
  CHECK(ok.max_residual <= 1e-12);

  TransportRule bad = [](const SmoothMap& m) {
    FactorFamily f;
    f.fibre = FibreModel{1, Field::real};
    f.map = m;
    const double lo = m.domain.box.bound(0).lo;
    f.factor = [lo](const RealVector& l) {
      Matrix a(1, 1);
      a(0, 0) = std::exp((l[0] - lo) * (l[0] - lo));
      return AffineMap::pure(a);
    };
    return from_factor_maps(f);
  };
  AxiomReport no = check_locality(bad, map, sub, 40, 17);
  CHECK_FALSE(no.pass);
}

TEST_CASE("reparametrization invariance") {
  SmoothMap map = line_map();
  SmoothMap tau;
  tau.domain = ParamDomain{Box({Interval{0.0, 2.0}})};
  tau.codomain = ChartDomain{Box({Interval{0.0, 2.0}}), "params"};
  tau.eval = [](const RealVector& l) {
    RealVector out(1);
    out[0] = 2.0 - l[0];
    return out;
  };
  tau.name = "flip";

  TransportRule good =
      pointwise_rule(FibreModel{1, Field::real}, [](const RealVector& x) {
        Matrix a(1, 1);
        a(0, 0) = std::exp(std::sin(x[0]));
        return AffineMap::pure(a);
      });
  SUBCASE("identity reparametrization is exact") {
    AxiomReport rep =
        check_reparam(good, map, identity_map(seg(), "id"), 30, 23);
    CHECK(rep.pass);
    CHECK(rep.max_residual == 0.0);
  }
  SUBCASE("pointwise family with an affine bijection") {
    AxiomReport rep = check_reparam(good, map, tau, 30, 23);
    CHECK(rep.pass);
    CHECK(rep.max_residual <= 1e-12);
  }
  SUBCASE("parameter-reading family fails") {
    TransportRule bad = [](const SmoothMap& m) {
      FactorFamily f;
      f.fibre = FibreModel{1, Field::real};
      f.map = m;
      f.factor = [](const RealVector& l) {
        Matrix a(1, 1);
        a(0, 0) = std::exp(l[0] * l[0]);
        return AffineMap::pure(a);
      };
      return from_factor_maps(f);
    };
    AxiomReport rep = check_reparam(bad, map, tau, 30, 23);
    CHECK_FALSE(rep.pass);
  }
}

TEST_CASE("pairing consistency under orthogonal and scaling transports") {
  BinaryForm dot = [](const RealVector&, const Vector& u, const Vector& v) {
    return Scalar((u.transpose() * v)(0, 0));
  };

  SUBCASE("identity transport with a constant pairing passes") {
    FactorFamily f;
    f.fibre = FibreModel{2, Field::real};
    f.map = line_map();
    f.factor = [](const RealVector&) { return AffineMap::identity(2); };
    AxiomReport rep = check_binary_consistency(from_factor_maps(f), dot, 50, 31);
    CHECK(rep.pass);
  }

  SUBCASE("rotation factors preserve the dot product") {
    FactorFamily f;
    f.fibre = FibreModel{2, Field::real};
    f.map = line_map();
    f.factor = [](const RealVector& l) {
      Matrix m(2, 2);
      m << std::cos(l[0]), -std::sin(l[0]), std::sin(l[0]), std::cos(l[0]);
      return AffineMap::pure(m);
    };
    AxiomReport rep = check_binary_consistency(from_factor_maps(f), dot, 50, 31);
    CHECK(rep.pass);
    CHECK(rep.max_residual <= 1e-12);
  }

  SUBCASE("scaling factors fail with the closed-form defect") {
    TransportFamily t = from_factor_maps(scalar_exp_family());
    AxiomReport rep = check_binary_consistency(t, dot, 50, 31);
    CHECK_FALSE(rep.pass);
    RealVector l(1), m(1);
    l << 0.2;
    m << 1.1;
    Vector u(1), v(1);
    u << Scalar(1.5, 0.0);
    v << Scalar(-0.8, 0.0);
    Scalar moved = (t.apply(l, m, u).transpose() * t.apply(l, m, v))(0, 0);
    Scalar stay = (u.transpose() * v)(0, 0);
    double expected =
        std::abs((std::exp(2.0 * (l[0] - m[0])) - 1.0) * (1.5 * -0.8));
    CHECK(std::abs(std::abs(moved - stay) - expected) < 1e-12);
  }
}

TEST_CASE("vector-structure consistency check") {
  SUBCASE("matrix factors are linear by construction") {
    TransportFamily t =
        from_factor_maps(random_matrix_family(3, Field::complex, 91));
    AxiomReport rep = check_linearity(t, 60, 37);
    CHECK(rep.pass);
    CHECK(rep.max_residual <= 1e-12);
  }
  SUBCASE("affine offsets break additivity") {
    FactorFamily f = random_matrix_family(2, Field::real, 92);
    auto base = f.factor;
    f.factor = [base](const RealVector& l) {
      AffineMap a = base(l);
      a.offset[0] = Scalar(0.5 * l[0] + 0.25, 0.0);
      return a;
    };
    AxiomReport rep = check_linearity(from_factor_maps(f), 60, 37);
    CHECK_FALSE(rep.pass);
  }
  SUBCASE("componentwise squaring breaks homogeneity") {
    TransportFamily t;
    t.fibre = FibreModel{2, Field::real};
    t.map = line_map();
    t.apply = [](const RealVector&, const RealVector&, const Vector& v) {
      return Vector(v.cwiseProduct(v));
    };
    t.source = TransportFamily::Source::raw;
    AxiomReport rep = check_linearity(t, 60, 37);
    CHECK_FALSE(rep.pass);
  }
}

TEST_CASE("axiom reports serialize with the shared schema") {
  TransportFamily t =
      from_factor_maps(random_matrix_family(2, Field::real, 3));
  GroupoidReport rep = check_groupoid(t, 20, 5);
  nlohmann::json j = rep.composition.to_json();
  CHECK(j.at("check") == "eq2.2");
  CHECK(j.at("pass") == true);
  CHECK(j.at("tolerance").get<double>() == 1e-9);
  CHECK(j.at("worst_witness").contains("l"));
  CHECK(j.at("worst_witness").contains("vector"));
  CHECK(j.at("worst_witness").at("n").is_array());
  nlohmann::json ji = rep.identity.to_json();
  CHECK(ji.at("worst_witness").at("n").is_null());
  std::string text = dump_json(j);
  CHECK(text.find("\"max_residual\"") != std::string::npos);
}
