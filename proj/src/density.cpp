#include "tam/density.hpp"

#include <cmath>

#include "tam/errors.hpp"

namespace tam {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

int ipow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// transition from the reference to the given frame at x
Matrix slot_transition(const TensorDensity& d, const Frame& frame,
                       const RealVector& x) {
  return d.reference.basis(x).inverse() * frame.basis(x);
}

}  // namespace

int TensorDensity::component_count() const { return ipow(base_dim, p + q); }

Matrix tensor_transform(const Matrix& P, int dim, int p, int q) {
  Matrix out = Matrix::Identity(1, 1);
  Matrix pinv = P.inverse();
  Matrix pt = P.transpose();
  for (int s = 0; s < p; ++s) out = kron(out, pinv);
  for (int s = 0; s < q; ++s) out = kron(out, pt);
  if (p + q == 0) return Matrix::Identity(1, 1);
  (void)dim;
  return out;
}

Matrix leibniz_lift(const Matrix& tangent_gamma, int dim, int p, int q) {
  const int n = ipow(dim, p + q);
  Matrix out = Matrix::Zero(n, n);
  Matrix gt = -tangent_gamma.transpose();
  for (int s = 0; s < p + q; ++s) {
    Matrix term = Matrix::Identity(1, 1);
    for (int t = 0; t < p + q; ++t) {
      if (t == s) {
        term = kron(term, s < p ? tangent_gamma : gt);
      } else {
        term = kron(term, Matrix::Identity(dim, dim));
      }
    }
    out += term;
  }
  return out;
}

Vector density_components(const TensorDensity& d, const Frame& frame,
                          const RealVector& x) {
  Matrix P = slot_transition(d, frame, x);
  Vector ordinary =
      tensor_transform(P, d.base_dim, d.p, d.q) * d.components(x);
  double jac = std::abs(P.determinant());
  return std::pow(jac, d.weight) * ordinary;
}

namespace {

// active-frame tangent components along kappa (inhomogeneous law)
Matrix active_gamma(const TensorDensity& d, const GammaField& tangent_gamma,
                    const SmoothMap& kappa, const RealVector& l, int a,
                    double h) {
  auto P_at = [&d, &kappa](const RealVector& lp) {
    return slot_transition(d, d.active, kappa.eval(lp));
  };
  Matrix P = P_at(l);
  RealVector lp = l, lm = l;
  lp[a] += h;
  lm[a] -= h;
  Matrix dP = (P_at(lp) - P_at(lm)) / (2.0 * h);
  Matrix pinv = P.inverse();
  return pinv * tangent_gamma.gamma(l, a) * P + pinv * dP;
}

}  // namespace

std::pair<double, double> density_trace_pair(const TensorDensity& d,
                                             const GammaField& tangent_gamma,
                                             const SmoothMap& kappa,
                                             const RealVector& l, int a,
                                             double h) {
  Matrix g1 = active_gamma(d, tangent_gamma, kappa, l, a, h);
  double minus_trace = g1.trace().real();
  return {-minus_trace, minus_trace};  // (plus branch, minus branch)
}

Vector density_derivative(const TensorDensity& d,
                          const GammaField& tangent_gamma,
                          const SmoothMap& kappa, const RealVector& l, int a,
                          DensitySign sign, double h) {
  if (d.smoothness == Smoothness::C0) {
    throw SmoothnessError("density derivation needs class C1 or better");
  }
  auto T_at = [&d, &kappa](const RealVector& lp) {
    return density_components(d, d.active, kappa.eval(lp));
  };
  RealVector lp = l, lm = l;
  lp[a] += h;
  lm[a] -= h;
  Vector dT = (T_at(lp) - T_at(lm)) / (2.0 * h);
  Matrix g1 = active_gamma(d, tangent_gamma, kappa, l, a, h);
  Vector T = T_at(l);
  Vector bracket = dT + leibniz_lift(g1, d.base_dim, d.p, d.q) * T;
  auto [plus_trace, minus_trace] = density_trace_pair(d, tangent_gamma, kappa, l, a, h);
  if (sign == DensitySign::plus) {
    bracket += d.weight * plus_trace * T;
  } else {
    bracket -= d.weight * minus_trace * T;
  }
  return bracket;
}

double density_law_defect(const TensorDensity& d,
                          const GammaField& tangent_gamma,
                          const SmoothMap& kappa, const RealVector& l, int a,
                          DensitySign sign, double h) {
  // route 1: derive the underlying tensor field in the active frame and add
  // the reference-frame trace correction
  auto ordinary_at = [&d, &kappa](const RealVector& lp) {
    RealVector x = kappa.eval(lp);
    Matrix P = slot_transition(d, d.active, x);
    return Vector(tensor_transform(P, d.base_dim, d.p, d.q) * d.components(x));
  };
  GammaField lifted;
  lifted.axes = tangent_gamma.axes;
  lifted.rank = d.component_count();
  const TensorDensity dd = d;
  const GammaField tg = tangent_gamma;
  const SmoothMap kap = kappa;
  lifted.gamma = [dd, tg, kap, h](const RealVector& lp, int ax) {
    return leibniz_lift(active_gamma(dd, tg, kap, lp, ax, h), dd.base_dim,
                        dd.p, dd.q);
  };
  Vector tensor_route = derive_field(lifted, ordinary_at, l, a, h);
  double trace0 = tangent_gamma.gamma(l, a).trace().real();
  double correction =
      sign == DensitySign::plus ? d.weight * (-trace0) : -d.weight * trace0;
  tensor_route += correction * ordinary_at(l);

  // route 2: the density-component formula, scaled back to ordinary
  // components through the Jacobian power
  Vector bracket = density_derivative(d, tangent_gamma, kappa, l, a, sign, h);
  Matrix P = slot_transition(d, d.active, kappa.eval(l));
  double jac = std::abs(P.determinant());
  Vector density_route = std::pow(jac, -d.weight) * bracket;

  return (tensor_route - density_route).norm();
}

}  // namespace tam
