#include "tam/morphisms.hpp"

#include "tam/errors.hpp"
#include "tam/sampling.hpp"

namespace tam {

Matrix BundleMorphism::fibre_at(const RealVector& l,
                                const SmoothMap& kappa) const {
  if (along) return along(l);
  return field(kappa.eval(l));
}

AxiomReport check_consistency(const BundleMorphism& m,
                              const TransportFamily& t1,
                              const TransportFamily& t2,
                              const SmoothMap& kappa, std::size_t samples,
                              std::uint64_t seed, double tolerance) {
  Sampler sampler(seed);
  AxiomReport rep{"eq5.1", tolerance, 0.0, {}, true, t1.fibre.field};
  const Box& box = kappa.domain.box;
  for (std::size_t i = 0; i < samples; ++i) {
    RealVector l = sampler.point(box);
    RealVector mm = sampler.point(box);
    Vector v = sampler.fibre_vector(t1.fibre.rank, t1.fibre.field);
    Vector moved_then_mapped = m.fibre_at(mm, kappa) * t1.apply(l, mm, v);
    Vector mapped_then_moved = t2.apply(l, mm, m.fibre_at(l, kappa) * v);
    rep.consider((moved_then_mapped - mapped_then_moved).norm(), l, mm,
                 std::nullopt, v);
  }
  rep.finalize();
  return rep;
}

BundleMorphism build_consistent_morphism(const TransportFamily& t1,
                                         const TransportFamily& t2,
                                         const SmoothMap& kappa,
                                         const SmoothMap& f,
                                         const RealVector& l0,
                                         const Matrix& C) {
  if (!kappa.domain.box.contains(l0, 1e-12)) {
    throw DomainError("morphism anchor outside the parameter domain");
  }
  BundleMorphism m;
  m.base_map = f;
  m.restriction = kappa;
  const TransportFamily first = t1;
  const TransportFamily second = t2;
  m.along = [first, second, l0, C](const RealVector& l) {
    const int r1 = first.fibre.rank;
    const int r2 = second.fibre.rank;
    Matrix back(r1, r1);
    for (int j = 0; j < r1; ++j) {
      Vector e = Vector::Zero(r1);
      e[j] = Scalar(1.0, 0.0);
      back.col(j) = first.apply(l, l0, e);
    }
    Matrix forward(r2, r2);
    for (int j = 0; j < r2; ++j) {
      Vector e = Vector::Zero(r2);
      e[j] = Scalar(1.0, 0.0);
      forward.col(j) = second.apply(l0, l, e);
    }
    return Matrix(forward * C * back);
  };
  return m;
}

Vector flatten_morphism(const Matrix& m) {
  return Vector(Eigen::Map<const Vector>(m.data(), m.size()));
}

Matrix unflatten_morphism(const Vector& v, int r2, int r1) {
  return Matrix(Eigen::Map<const Matrix>(v.data(), r2, r1));
}

TransportFamily natural_transport(const TransportFamily& t1,
                                  const TransportFamily& t2,
                                  const SmoothMap& kappa) {
  TransportFamily out;
  const int r1 = t1.fibre.rank;
  const int r2 = t2.fibre.rank;
  Field field = (t1.fibre.field == Field::complex ||
                 t2.fibre.field == Field::complex)
                    ? Field::complex
                    : Field::real;
  out.fibre = FibreModel{r1 * r2, field};
  out.map = kappa;
  const TransportFamily first = t1;
  const TransportFamily second = t2;
  out.apply = [first, second, r1, r2](const RealVector& l, const RealVector& m,
                                      const Vector& v) {
    Matrix phi = unflatten_morphism(v, r2, r1);
    // carry the columns forward in the second bundle ...
    Matrix forward(r2, phi.cols());
    for (int j = 0; j < phi.cols(); ++j) {
      forward.col(j) = second.apply(l, m, phi.col(j));
    }
    // ... and pre-compose with the backward carry in the first bundle
    Matrix back(r1, r1);
    for (int j = 0; j < r1; ++j) {
      Vector e = Vector::Zero(r1);
      e[j] = Scalar(1.0, 0.0);
      back.col(j) = first.apply(m, l, e);
    }
    return flatten_morphism(Matrix(forward * back));
  };
  out.source = t1.source == TransportFamily::Source::factors &&
                       t2.source == TransportFamily::Source::factors
                   ? TransportFamily::Source::factors
                   : TransportFamily::Source::raw;
  return out;
}

EquivalenceReport check_morphism_equivalence(const BundleMorphism& m,
                                             const TransportFamily& t1,
                                             const TransportFamily& t2,
                                             const SmoothMap& kappa,
                                             std::size_t samples,
                                             std::uint64_t seed,
                                             double tolerance) {
  TransportFamily nat = natural_transport(t1, t2, kappa);
  Sampler sampler(seed);
  EquivalenceReport out;
  out.direct = AxiomReport{"eq5.1", tolerance, 0.0, {}, true, t1.fibre.field};
  out.transported =
      AxiomReport{"eq5.11", tolerance, 0.0, {}, true, t1.fibre.field};
  const Box& box = kappa.domain.box;
  for (std::size_t i = 0; i < samples; ++i) {
    RealVector l = sampler.point(box);
    RealVector mm = sampler.point(box);
    Vector v = sampler.fibre_vector(t1.fibre.rank, t1.fibre.field);

    Matrix f_l = m.fibre_at(l, kappa);
    Matrix f_m = m.fibre_at(mm, kappa);
    double direct =
        (f_m * t1.apply(l, mm, v) - t2.apply(l, mm, f_l * v)).norm();
    Vector carried = nat.apply(l, mm, flatten_morphism(f_l));
    double transported = (flatten_morphism(f_m) - carried).norm();
    out.direct.consider(direct, l, mm, std::nullopt, v);
    out.transported.consider(transported, l, mm, std::nullopt, carried);
    bool agree = (direct <= tolerance) == (transported <= tolerance);
    if (!agree) out.biconditional = false;
  }
  out.direct.finalize();
  out.transported.finalize();
  return out;
}

AxiomReport binary_op_as_morphism(const TransportFamily& t,
                                  const BinaryForm& beta, std::size_t samples,
                                  std::uint64_t seed, double tolerance) {
  // First bundle: pairs (u, v) carried slotwise by t; second bundle: the
  // trivial scalar bundle over a point with the identity transport.  The
  // fibre map at x is the (nonlinear) pairing w -> beta_x(w_head, w_tail).
  Sampler sampler(seed);
  AxiomReport rep{"eq2.9-via-5.1", tolerance, 0.0, {}, true, t.fibre.field};
  const Box& box = t.map.domain.box;
  const int r = t.fibre.rank;
  auto pair_apply = [&t, r](const RealVector& l, const RealVector& m,
                            const Vector& w) {
    Vector out(2 * r);
    out.head(r) = t.apply(l, m, w.head(r));
    out.tail(r) = t.apply(l, m, w.tail(r));
    return out;
  };
  auto pairing_at = [&beta, r](const RealVector& x, const Vector& w) {
    return beta(x, w.head(r), w.tail(r));
  };
  for (std::size_t i = 0; i < samples; ++i) {
    RealVector l = sampler.point(box);
    RealVector m = sampler.point(box);
    Vector u = sampler.fibre_vector(r, t.fibre.field);
    Vector v = sampler.fibre_vector(r, t.fibre.field);
    Vector w(2 * r);
    w.head(r) = u;
    w.tail(r) = v;
    RealVector xl = t.map.eval(l);
    RealVector xm = t.map.eval(m);
    // F_{kappa(m)} . (K x K)  vs  id . F_{kappa(l)}
    Scalar moved = pairing_at(xm, pair_apply(l, m, w));
    Scalar sameplace = pairing_at(xl, w);
    rep.consider(std::abs(moved - sameplace), l, m, std::nullopt, u);
  }
  rep.finalize();
  return rep;
}

}  // namespace tam
