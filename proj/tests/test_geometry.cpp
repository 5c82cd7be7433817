#include <cmath>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "tam/errors.hpp"
#include "tam/geometry.hpp"
#include "tam/sampling.hpp"
#include "tam/sphere.hpp"

using namespace tam;

namespace {

const double kPi = std::acos(-1.0);

Box unit_square() { return Box({Interval{0.0, 1.0}, Interval{0.0, 1.0}}); }

SmoothMap drop_jacobian(SmoothMap m) {
  m.analytic_jacobian.reset();
  return m;
}

}  // namespace

TEST_CASE("eval_map on the identity returns its argument") {
  SmoothMap id = identity_map(unit_square());
  RealVector l(2);
  l << 0.3, 0.7;
  RealVector x = eval_map(id, l);
  CHECK(x[0] == doctest::Approx(0.3));
  CHECK(x[1] == doctest::Approx(0.7));
}

TEST_CASE("eval_map on a constant map returns the pinned value") {
  ParamDomain dom{unit_square()};
  ChartDomain chart{Box({Interval{-2.0, 2.0}, Interval{-2.0, 2.0}}), "plane"};
  RealVector x0(2);
  x0 << 1.25, -0.5;
  SmoothMap c = constant_map(dom, chart, x0);
  Sampler sampler(3);
  for (int i = 0; i < 5; ++i) {
    RealVector l = sampler.point(dom.box);
    CHECK((eval_map(c, l) - x0).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("great circle passes through the equator point at t=0") {
  SmoothMap gc = great_circle();
  RealVector t(1);
  t << 0.0;
  RealVector x = eval_map(gc, t);
  CHECK(x[0] == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(x[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("eval_map rejects parameters outside the box") {
  SmoothMap id = identity_map(unit_square());
  RealVector l(2);
  l << 1.5, 0.2;
  CHECK_THROWS_AS(eval_map(id, l), DomainError);
}

TEST_CASE("partial_deriv of a linear map is the matrix column") {
  RealMatrix A(2, 2);
  A << 2.0, -1.0, 0.5, 3.0;
  ParamDomain dom{unit_square()};
  ChartDomain chart{Box({Interval{-8.0, 8.0}, Interval{-8.0, 8.0}}), "plane"};
  SmoothMap m = drop_jacobian(linear_map(dom, chart, A));
  RealVector l(2);
  l << 0.4, 0.6;
  for (int a = 0; a < 2; ++a) {
    RealVector d = partial_deriv(m, l, a);
    CHECK((d - A.col(a)).norm() < 1e-9);
  }
}

TEST_CASE("partial_deriv of a constant map vanishes") {
  ParamDomain dom{unit_square()};
  ChartDomain chart{Box({Interval{-2.0, 2.0}}), "line"};
  RealVector x0(1);
  x0 << 0.5;
  SmoothMap c = drop_jacobian(constant_map(dom, chart, x0));
  RealVector l(2);
  l << 0.2, 0.9;
  CHECK(partial_deriv(c, l, 0).norm() == doctest::Approx(0.0));
  CHECK(partial_deriv(c, l, 1).norm() == doctest::Approx(0.0));
}

TEST_CASE("partial_deriv matches the analytic derivative of (t^2, t^3)") {
  SmoothMap m;
  m.domain = ParamDomain{Box({Interval{0.0, 2.0}})};
  m.codomain = ChartDomain{Box({Interval{-9.0, 9.0}, Interval{-9.0, 9.0}})};
  m.eval = [](const RealVector& t) {
    RealVector x(2);
    x << t[0] * t[0], t[0] * t[0] * t[0];
    return x;
  };
  RealVector t(1);
  t << 1.0;
  RealVector d = partial_deriv(m, t, 0, 1e-5);
  CHECK(d[0] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(d[1] == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("partial_deriv throws when no stencil fits") {
  SmoothMap id = identity_map(unit_square());
  RealVector l(2);
  l << 0.0, 0.5;
  // one-sided stencil at the edge still works
  RealVector d = partial_deriv(id, l, 0);
  CHECK(d[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(partial_deriv(id, l, 5), DomainError);
}

TEST_CASE("analytic jacobians agree with finite differences on samples") {
  std::vector<SmoothMap> maps = {great_circle(), latitude_circle(1.0)};
  {
    ParamDomain dom{unit_square()};
    ChartDomain chart{Box({Interval{-20.0, 20.0}}), "line"};
    std::vector<MonomialTerm> terms;
    RealVector c1(1), c2(1);
    c1 << 1.0;
    c2 << -0.7;
    terms.push_back(MonomialTerm{{1, 1}, c1});
    terms.push_back(MonomialTerm{{2, 0}, c2});
    maps.push_back(polynomial_map(dom, chart, terms));
  }
  Sampler sampler(11);
  for (const auto& m : maps) {
    REQUIRE(m.analytic_jacobian.has_value());
    SmoothMap plain = drop_jacobian(m);
    for (int i = 0; i < 100; ++i) {
      RealVector l = sampler.interior_point(m.domain.box, 0.02);
      RealMatrix J = (*m.analytic_jacobian)(l);
      for (int a = 0; a < m.domain.dim(); ++a) {
        RealVector fd = partial_deriv(plain, l, a);
        double err = (fd - J.col(a)).norm();
        CHECK(err <= 1e-5 * (1.0 + J.col(a).norm()));
      }
    }
  }
}

TEST_CASE("second_partial of a bilinear map recovers the mixed coefficient") {
  SmoothMap m;
  m.domain = ParamDomain{Box({Interval{-1.0, 1.0}, Interval{-1.0, 1.0}})};
  m.codomain = ChartDomain{Box({Interval{-2.0, 2.0}})};
  m.eval = [](const RealVector& l) {
    RealVector x(1);
    x << l[0] * l[1];
    return x;
  };
  RealVector l(2);
  l << 0.3, -0.4;
  CHECK(second_partial(m, l, 0, 1)[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(second_partial(m, l, 1, 0)[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("second_partial vanishes for linear and constant maps") {
  RealMatrix A(2, 2);
  A << 1.0, 2.0, -1.0, 0.5;
  ParamDomain dom{unit_square()};
  ChartDomain chart{Box({Interval{-8.0, 8.0}, Interval{-8.0, 8.0}}), "plane"};
  SmoothMap lin = linear_map(dom, chart, A);
  RealVector x0(2);
  x0 << 0.1, 0.1;
  SmoothMap cst = constant_map(dom, chart, x0);
  RealVector l(2);
  l << 0.5, 0.5;
  CHECK(second_partial(lin, l, 0, 1).norm() < 1e-7);
  CHECK(second_partial(cst, l, 1, 1).norm() < 1e-7);
}

TEST_CASE("second_partial is symmetric on a smooth map") {
  SmoothMap m;
  m.domain = ParamDomain{Box({Interval{-1.0, 1.0}, Interval{-1.0, 1.0}})};
  m.codomain = ChartDomain{Box({Interval{-3.0, 3.0}})};
  m.eval = [](const RealVector& l) {
    RealVector x(1);
    x << std::sin(l[0] * l[1]) + 0.3 * l[0] * l[0] * l[1];
    return x;
  };
  Sampler sampler(5);
  for (int i = 0; i < 20; ++i) {
    RealVector l = sampler.interior_point(m.domain.box, 0.05);
    RealVector ab = second_partial(m, l, 0, 1);
    RealVector ba = second_partial(m, l, 1, 0);
    CHECK((ab - ba).norm() < 1e-4);
  }
}

TEST_CASE("map_from_json builds every builtin family") {
  auto id = map_from_json_text(
      R"({"family":"identity","domain":[[0,1],[0,1]]})");
  RealVector l(2);
  l << 0.25, 0.75;
  CHECK((eval_map(id, l) - l).norm() == doctest::Approx(0.0));

  auto poly = map_from_json_text(
      R"({"family":"polynomial","domain":[[0,2]],"codomain":[[-9,9],[-9,9]],
          "terms":[{"powers":[2],"coeff":[1,0]},{"powers":[3],"coeff":[0,1]}]})");
  RealVector t(1);
  t << 1.0;
  RealVector d = partial_deriv(poly, t, 0);
  CHECK(d[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(d[1] == doctest::Approx(3.0).epsilon(1e-9));

  auto gc = map_from_json_text(R"({"family":"great_circle","tilt":0.4})");
  RealVector z(1);
  z << 0.0;
  CHECK(eval_map(gc, z)[0] == doctest::Approx(kPi / 2));

  auto lat = map_from_json_text(
      R"({"family":"latitude_circle","colatitude":1.0472})");
  RealVector s(1);
  s << 2.0;
  CHECK(eval_map(lat, s)[0] == doctest::Approx(1.0472));
  CHECK(eval_map(lat, s)[1] == doctest::Approx(2.0));

  CHECK_THROWS_AS(map_from_json_text(R"({"family":"torus"})"), DomainError);
}

TEST_CASE("low-discrepancy sampling is reproducible and stays in the box") {
  Box box({Interval{-1.0, 2.0}, Interval{0.0, 1.0}, Interval{3.0, 4.0}});
  Sampler s1(42), s2(42);
  for (int i = 0; i < 50; ++i) {
    RealVector a = s1.point(box);
    RealVector b = s2.point(box);
    CHECK((a - b).norm() == 0.0);
    CHECK(box.contains(a));
  }
}
