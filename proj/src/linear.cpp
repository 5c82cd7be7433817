#include "tam/linear.hpp"

#include <cmath>
#include <sstream>

#include "tam/composite.hpp"
#include "tam/errors.hpp"
#include "tam/ode.hpp"
#include "tam/sampling.hpp"

namespace tam {

namespace {

std::pair<double, double> fitted_steps(const Box& box, const RealVector& l,
                                       int axis, double h) {
  const Interval& iv = box.bound(axis);
  double up = std::min(h, iv.hi - l[axis]);
  double down = std::min(h, l[axis] - iv.lo);
  if (up < 0.0) up = 0.0;
  if (down < 0.0) down = 0.0;
  if (up + down < 1e-6 * h) {
    throw DomainError("difference stencil cannot fit after clamping");
  }
  return {up, down};
}

}  // namespace

Frame Frame::coordinate(int rank) {
  Frame f;
  f.name = "coordinate";
  f.basis = [rank](const RealVector&) {
    return Matrix(Matrix::Identity(rank, rank));
  };
  return f;
}

TransportFamily LinearTransportRep::family() const {
  TransportFamily t;
  t.fibre = fibre;
  t.map = map;
  auto tr = transfer;
  t.apply = [tr](const RealVector& l, const RealVector& m, const Vector& v) {
    return Vector(tr(m, l) * v);
  };
  t.source = TransportFamily::Source::raw;
  return t;
}

LinearTransportRep rep_from_factor_field(
    FibreModel fibre, SmoothMap map,
    std::function<Matrix(const RealVector& l)> factors, Frame frame) {
  LinearTransportRep rep;
  rep.fibre = fibre;
  rep.map = std::move(map);
  rep.transfer = [factors](const RealVector& m, const RealVector& l) {
    return Matrix(factors(m).inverse() * factors(l));
  };
  rep.frame = std::move(frame);
  return rep;
}

double gamma_sign_defect(const LinearTransportRep& rep, const RealVector& l,
                         int a, double h) {
  auto [up, down] = fitted_steps(rep.map.domain.box, l, a, h);
  RealVector lp = l, lm = l;
  lp[a] += up;
  lm[a] -= down;
  Matrix second_arg = (rep.transfer(l, lp) - rep.transfer(l, lm)) / (up + down);
  Matrix first_arg = (rep.transfer(lp, l) - rep.transfer(lm, l)) / (up + down);
  return (second_arg + first_arg).cwiseAbs().maxCoeff();
}

GammaField gamma_from_transfer(const LinearTransportRep& rep, double h,
                               std::size_t verify_samples) {
  Sampler sampler(0x9e3779b9);
  for (std::size_t i = 0; i < verify_samples; ++i) {
    RealVector l = sampler.interior_point(rep.map.domain.box, 0.05);
    for (int a = 0; a < rep.map.domain.dim(); ++a) {
      double defect = gamma_sign_defect(rep, l, a, h);
      double scale =
          1.0 +
          (rep.transfer(l, l) - Matrix::Identity(rep.fibre.rank, rep.fibre.rank))
              .cwiseAbs()
              .maxCoeff();
      if (defect > 1e-3 * scale) {
        std::ostringstream os;
        os << "transfer matrix derivative is inconsistent between its two "
              "arguments (defect "
           << defect << ")";
        throw AxiomError(os.str());
      }
    }
  }
  GammaField g;
  g.axes = rep.map.domain.dim();
  g.rank = rep.fibre.rank;
  auto transfer = rep.transfer;
  const Box box = rep.map.domain.box;
  g.gamma = [transfer, box, h](const RealVector& l, int a) {
    auto [up, down] = fitted_steps(box, l, a, h);
    RealVector mp = l, mm = l;
    mp[a] += up;
    mm[a] -= down;
    return Matrix((transfer(l, mp) - transfer(l, mm)) / (up + down));
  };
  return g;
}

Vector derive_field(const GammaField& g,
                    const std::function<Vector(const RealVector&)>& field,
                    const RealVector& l, int a, double h) {
  RealVector lp = l, lm = l;
  lp[a] += h;
  lm[a] -= h;
  Vector d = (field(lp) - field(lm)) / (2.0 * h);
  return d + g.gamma(l, a) * field(l);
}

Vector derive_section(const GammaField& g, const SmoothMap& kappa,
                      const Section& s, const RealVector& l, int a, double h) {
  if (s.smoothness == Smoothness::C0) {
    throw SmoothnessError("derivation needs a section of class C1 or better");
  }
  auto comp = s.components;
  auto eval = kappa.eval;
  auto [up, down] = fitted_steps(kappa.domain.box, l, a, h);
  RealVector lp = l, lm = l;
  lp[a] += up;
  lm[a] -= down;
  Vector d = (comp(eval(lp)) - comp(eval(lm))) / (up + down);
  return d + g.gamma(l, a) * comp(eval(l));
}

Vector derive_section_limit(const LinearTransportRep& rep, const Section& s,
                            const RealVector& l, int a, double eps) {
  if (s.smoothness == Smoothness::C0) {
    throw SmoothnessError("derivation needs a section of class C1 or better");
  }
  auto [up, down] = fitted_steps(rep.map.domain.box, l, a, eps);
  RealVector lp = l, lm = l;
  lp[a] += up;
  lm[a] -= down;
  Vector moved_p = rep.transfer(l, lp) * s.components(rep.map.eval(lp));
  Vector moved_m = rep.transfer(l, lm) * s.components(rep.map.eval(lm));
  return (moved_p - moved_m) / (up + down);
}

AxiomReport check_derivation_linearity(const GammaField& g,
                                       const SmoothMap& kappa,
                                       const Section& s1, const Section& s2,
                                       Scalar lam, Scalar mu,
                                       std::size_t samples, std::uint64_t seed,
                                       double tolerance) {
  Sampler sampler(seed);
  AxiomReport rep{"prop4.1", tolerance, 0.0, {}, true, s1.fibre.field};
  Section combined;
  combined.fibre = s1.fibre;
  auto c1 = s1.components;
  auto c2 = s2.components;
  combined.components = [c1, c2, lam, mu](const RealVector& x) {
    return Vector(lam * c1(x) + mu * c2(x));
  };
  combined.smoothness = s1.smoothness;
  for (std::size_t i = 0; i < samples; ++i) {
    RealVector l = sampler.interior_point(kappa.domain.box, 0.01);
    for (int a = 0; a < kappa.domain.dim(); ++a) {
      Vector lhs = derive_section(g, kappa, combined, l, a);
      Vector rhs = lam * derive_section(g, kappa, s1, l, a) +
                   mu * derive_section(g, kappa, s2, l, a);
      rep.consider((lhs - rhs).norm(), l, l, std::nullopt, lhs);
    }
  }
  rep.finalize();
  return rep;
}

LinearTransportRep frame_change(
    const LinearTransportRep& rep,
    const std::function<Matrix(const RealVector& x)>& transition) {
  LinearTransportRep out;
  out.fibre = rep.fibre;
  out.map = rep.map;
  auto transfer = rep.transfer;
  auto eval = rep.map.eval;
  out.transfer = [transfer, transition, eval](const RealVector& m,
                                              const RealVector& l) {
    return Matrix(transition(eval(m)).inverse() * transfer(m, l) *
                  transition(eval(l)));
  };
  auto basis = rep.frame.basis;
  out.frame.name = rep.frame.name + "'";
  out.frame.basis = [basis, transition](const RealVector& x) {
    return Matrix(basis(x) * transition(x));
  };
  return out;
}

Matrix transport_from_gamma(const GammaField& g, double l, double m,
                            double tol) {
  if (g.axes != 1) {
    throw DomainError("transfer reconstruction is only defined along paths");
  }
  auto gamma = g.gamma;
  auto f = [gamma](double t, const Matrix& y) {
    RealVector lt(1);
    lt[0] = t;
    return Matrix(-gamma(lt, 0) * y);
  };
  return integrate_matrix_ode(f, l, m, Matrix::Identity(g.rank, g.rank), tol);
}

GammaField LinearConnection::along(const SmoothMap& kappa) const {
  GammaField g;
  g.axes = kappa.domain.dim();
  g.rank = rank;
  auto cf = coeff;
  const int dim = base_dim;
  SmoothMap map = kappa;
  g.gamma = [cf, dim, map](const RealVector& l, int a) {
    RealVector x = map.eval(l);
    RealVector tangent = partial_deriv(map, l, a);
    Matrix out = Matrix::Zero(cf(x, 0).rows(), cf(x, 0).cols());
    for (int k = 0; k < dim; ++k) out += tangent[k] * cf(x, k);
    return out;
  };
  return g;
}

LinearConnection LinearConnection::flat(int base_dim, int rank) {
  LinearConnection c;
  c.base_dim = base_dim;
  c.rank = rank;
  c.coeff = [rank](const RealVector&, int) {
    return Matrix(Matrix::Zero(rank, rank));
  };
  return c;
}

LinearConnection connection_from_factors(
    int base_dim, FibreModel fibre,
    const std::function<Matrix(const RealVector& x)>& factors, double h) {
  LinearConnection c;
  c.base_dim = base_dim;
  c.rank = fibre.rank;
  c.coeff = [factors, h](const RealVector& x, int k) {
    RealVector xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    Matrix d = (factors(xp) - factors(xm)) / (2.0 * h);
    return Matrix(factors(x).inverse() * d);
  };
  return c;
}

RealVector TwoParamMap::join(const RealVector& l, const RealVector& m) const {
  RealVector p(joint.domain.dim());
  p.head(split) = l;
  p.tail(joint.domain.dim() - split) = m;
  return p;
}

SmoothMap TwoParamMap::fix_second(const RealVector& m) const {
  SmoothMap out;
  std::vector<Interval> bounds(joint.domain.box.bounds().begin(),
                               joint.domain.box.bounds().begin() + split);
  out.domain = ParamDomain{Box(std::move(bounds))};
  out.codomain = joint.codomain;
  const TwoParamMap self = *this;
  out.eval = [self, m](const RealVector& l) {
    return self.joint.eval(self.join(l, m));
  };
  if (joint.analytic_jacobian) {
    auto jac = *joint.analytic_jacobian;
    const TwoParamMap s2 = *this;
    out.analytic_jacobian = [s2, jac, m](const RealVector& l) {
      return RealMatrix(jac(s2.join(l, m)).leftCols(s2.split));
    };
  }
  out.name = joint.name + "(.,m)";
  return out;
}

SmoothMap TwoParamMap::fix_first(const RealVector& l) const {
  SmoothMap out;
  std::vector<Interval> bounds(joint.domain.box.bounds().begin() + split,
                               joint.domain.box.bounds().end());
  out.domain = ParamDomain{Box(std::move(bounds))};
  out.codomain = joint.codomain;
  const TwoParamMap self = *this;
  out.eval = [self, l](const RealVector& m) {
    return self.joint.eval(self.join(l, m));
  };
  if (joint.analytic_jacobian) {
    auto jac = *joint.analytic_jacobian;
    const TwoParamMap s2 = *this;
    const int k2 = second_dim();
    out.analytic_jacobian = [s2, jac, l, k2](const RealVector& m) {
      return RealMatrix(jac(s2.join(l, m)).rightCols(k2));
    };
  }
  out.name = joint.name + "(l,.)";
  return out;
}

Vector torsion(const LinearConnection& conn, const TwoParamMap& eta,
               const RealVector& l, const RealVector& m, int a, int b,
               double h) {
  const TwoParamMap e = eta;
  // velocity of the second slot, as a field over the first slot
  auto second_velocity = [e, m, b](const RealVector& lp) {
    return Vector(
        partial_deriv(e.joint, e.join(lp, m), e.split + b).cast<Scalar>());
  };
  GammaField g1 = conn.along(eta.fix_second(m));
  Vector term1 = derive_field(g1, second_velocity, l, a, h);

  auto first_velocity = [e, l, a](const RealVector& mp) {
    return Vector(partial_deriv(e.joint, e.join(l, mp), a).cast<Scalar>());
  };
  GammaField g2 = conn.along(eta.fix_first(l));
  Vector term2 = derive_field(g2, first_velocity, m, b, h);
  return term1 - term2;
}

Vector curvature(const LinearConnection& conn, const TwoParamMap& eta,
                 const Section& s, const RealVector& l, const RealVector& m,
                 int a, int b, double h_outer, double h_inner) {
  if (s.smoothness != Smoothness::C2) {
    throw SmoothnessError("curvature needs a section of class C2");
  }
  const TwoParamMap e = eta;
  auto comp = s.components;

  // D_b along eta(l', .), evaluated at m, as a field over l'
  auto inner_second = [&conn, e, comp, m, b, h_inner](const RealVector& lp) {
    GammaField g = conn.along(e.fix_first(lp));
    auto field = [e, comp, lp](const RealVector& mp) {
      return comp(e.joint.eval(e.join(lp, mp)));
    };
    return derive_field(g, field, m, b, h_inner);
  };
  GammaField g_first = conn.along(eta.fix_second(m));
  Vector term1 = derive_field(g_first, inner_second, l, a, h_outer);

  // D_a along eta(., m'), evaluated at l, as a field over m'
  auto inner_first = [&conn, e, comp, l, a, h_inner](const RealVector& mp) {
    GammaField g = conn.along(e.fix_second(mp));
    auto field = [e, comp, mp](const RealVector& lp) {
      return comp(e.joint.eval(e.join(lp, mp)));
    };
    return derive_field(g, field, l, a, h_inner);
  };
  GammaField g_second = conn.along(eta.fix_first(l));
  Vector term2 = derive_field(g_second, inner_first, m, b, h_outer);

  return term1 - term2;
}

Vector typed_partial_derivative(const CompositeTransport& t, const Section& s,
                                std::size_t alpha, const RealVector& x, int a,
                                std::size_t beta, double eps) {
  if (s.smoothness == Smoothness::C0) {
    throw SmoothnessError("typed derivation needs a section of class C1");
  }
  if (alpha >= t.domain.index_count || beta >= t.domain.index_count) {
    throw DomainError("typed derivation index out of range");
  }
  if (a < 0 || a >= t.domain.slice.dim()) {
    throw DomainError("axis out of range");
  }
  auto carried = [&](double step) {
    RealVector xs = x;
    xs[a] += step;
    RealVector from = t.domain.join(alpha, xs);
    Vector value = s.components(t.family.map.eval(from));
    return t.family.apply(from, t.domain.join(beta, x), value);
  };
  return (carried(eps) - carried(-eps)) / (2.0 * eps);
}

}  // namespace tam
