#include "tam/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tam/errors.hpp"

namespace tam {

Matrix signature_matrix(int p, int q) {
  Matrix s = Matrix::Zero(p + q, p + q);
  for (int i = 0; i < p; ++i) s(i, i) = 1.0;
  for (int i = p; i < p + q; ++i) s(i, i) = -1.0;
  return s;
}

std::pair<int, int> inertia(const Matrix& hermitian, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
  const auto& ev = es.eigenvalues();
  double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  int pos = 0, neg = 0;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] > tol * scale) ++pos;
    if (ev[i] < -tol * scale) ++neg;
  }
  return {pos, neg};
}

void validate_metric(const HermitianMetric& g,
                     const std::vector<RealVector>& samples) {
  for (const auto& x : samples) {
    Matrix m = g.G(x);
    double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (defect > 1e-12) {
      throw HermiticityError("metric matrix is not Hermitian", defect);
    }
    if (std::abs(m.determinant()) <= 1e-12) {
      throw SignatureError("metric matrix is numerically degenerate");
    }
    if (inertia(m) != g.signature) {
      throw SignatureError("metric inertia differs from the declared one");
    }
  }
}

Matrix congruence_factor(const Matrix& G, int p, int q) {
  const int r = p + q;
  Eigen::SelfAdjointEigenSolver<Matrix> es(G);
  if (es.info() != Eigen::Success) {
    throw SignatureError("eigendecomposition failed");
  }
  // sort eigenvalues descending so positives come first
  std::vector<int> order(r);
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = es.eigenvalues();
  std::sort(order.begin(), order.end(),
            [&ev](int i, int j) { return ev[i] > ev[j]; });
  int pos = 0, neg = 0;
  for (int i = 0; i < r; ++i) {
    if (ev[i] > 1e-12) ++pos;
    if (ev[i] < -1e-12) ++neg;
  }
  if (pos != p || neg != q) {
    std::ostringstream os;
    os << "inertia (" << pos << "," << neg << ") does not match requested ("
       << p << "," << q << ")";
    throw SignatureError(os.str());
  }
  Matrix u(r, r);
  Vector lam(r);
  for (int i = 0; i < r; ++i) {
    u.col(i) = es.eigenvectors().col(order[i]);
    lam[i] = ev[order[i]];
  }
  // fix each eigenvector phase: first sizable entry becomes real positive
  for (int j = 0; j < r; ++j) {
    double biggest = u.col(j).cwiseAbs().maxCoeff();
    for (int i = 0; i < r; ++i) {
      if (std::abs(u(i, j)) > 1e-8 * biggest) {
        Scalar ph = u(i, j) / std::abs(u(i, j));
        u.col(j) /= ph;
        break;
      }
    }
  }
  Matrix d = u.adjoint();
  for (int i = 0; i < r; ++i) d.row(i) *= std::sqrt(std::abs(lam[i]));
  return d;
}

Matrix Rank1FlatTransport::F(const RealVector& x) const { return C * Gfac(x); }

Matrix Rank1FlatTransport::Fstar(const RealVector& x) const {
  return Cstar * Gstar(x);
}

Matrix Rank1FlatTransport::L(const RealVector& x, const RealVector& y) const {
  return F(y).inverse() * F(x);
}

Matrix Rank1FlatTransport::Lstar(const RealVector& x,
                                 const RealVector& y) const {
  return Fstar(y).inverse() * Fstar(x);
}

Matrix Rank1FlatTransport::L10(const RealVector& x,
                               const RealVector& y) const {
  return Fstar(y).inverse() * F(x);
}

Matrix Rank1FlatTransport::L01(const RealVector& x,
                               const RealVector& y) const {
  return F(y).inverse() * Fstar(x);
}

CompositeTransport Rank1FlatTransport::as_composite() const {
  CompositeDomain dom{2, ParamDomain{base.box}};
  const Rank1FlatTransport self = *this;
  return make_composite_transport(
      dom, FibreModel{rank, field},
      [](std::size_t, const RealVector& x) { return x; }, base,
      [self](std::size_t slot, const RealVector& x) {
        return AffineMap::pure(slot == 0 ? self.F(x) : self.Fstar(x));
      });
}

Rank1FlatTransport transport_from_metric(const HermitianMetric& g,
                                         const Matrix& A,
                                         const Matrix& C_choice,
                                         const ChartDomain& base) {
  const int r = g.rank;
  const auto [p, q] = g.signature;
  Matrix s = signature_matrix(p, q);
  double unitary_defect =
      (A.adjoint() * A - Matrix::Identity(r, r)).cwiseAbs().maxCoeff();
  if (unitary_defect > 1e-10) {
    throw GaugeError("the constant gauge matrix A must be unitary");
  }
  Matrix twist = A.adjoint() * s * A;
  // the stated relation for C has solutions only in the definite case; the
  // general satisfiable content is unitarity of C
  Matrix relation_target = q == 0 ? twist : Matrix(Matrix::Identity(r, r));
  double gauge_defect =
      (C_choice.adjoint() * C_choice - relation_target).cwiseAbs().maxCoeff();
  if (gauge_defect > 1e-10) {
    std::ostringstream os;
    os << "C violates its gauge relation (defect " << gauge_defect << ")";
    throw GaugeError(os.str());
  }

  Rank1FlatTransport t;
  t.rank = r;
  t.field = g.field;
  t.signature = g.signature;
  t.base = base;
  t.C = C_choice;
  t.Cstar = C_choice * twist;  // (*C)^{-1} C = A^dagger S A
  auto metric = g.G;
  t.Gfac = [metric, A, p, q](const RealVector& x) {
    return Matrix(A.adjoint() * congruence_factor(metric(x), p, q));
  };
  auto gf = t.Gfac;
  t.Gstar = [gf](const RealVector& x) {
    return Matrix(gf(x).adjoint().inverse());
  };
  return t;
}

HermitianMetric metric_from_transport(const Rank1FlatTransport& t,
                                      const std::vector<RealVector>& samples,
                                      double tol) {
  if (samples.empty()) {
    throw DomainError("metric recovery needs at least one sample point");
  }
  double defect = 0.0;
  for (const auto& x : samples) {
    Matrix gx = t.L10(x, x);
    defect = std::max(defect, (gx - gx.adjoint()).cwiseAbs().maxCoeff());
  }
  if (defect > tol) {
    std::ostringstream os;
    os << "factor pair violates the conjugation gauge (defect " << defect
       << ")";
    throw HermiticityError(os.str(), defect);
  }
  std::pair<int, int> sig = inertia(t.L10(samples.front(), samples.front()));
  for (const auto& x : samples) {
    Matrix gx = t.L10(x, x);
    if (std::abs(gx.determinant()) <= 1e-12) {
      throw SignatureError("recovered metric is numerically degenerate");
    }
    if (inertia(gx) != sig) {
      throw SignatureError("recovered metric has drifting inertia");
    }
  }
  HermitianMetric g;
  g.rank = t.rank;
  g.field = t.field;
  g.signature = sig;
  const Rank1FlatTransport tr = t;
  g.G = [tr](const RealVector& x) { return tr.L10(x, x); };
  return g;
}

Vector cross_fiber_combine(
    const TransportFamily& t0,
    const std::vector<std::tuple<Scalar, Vector, RealVector>>& terms,
    const RealVector& x) {
  if (!t0.map.domain.box.contains(x, 1e-12)) {
    throw DomainError("target point outside the base chart");
  }
  Vector acc = Vector::Zero(t0.fibre.rank);
  for (const auto& [lam, u, y] : terms) {
    if (!t0.map.domain.box.contains(y, 1e-12)) {
      throw DomainError("source point outside the base chart");
    }
    acc += lam * t0.apply(y, x, u);
  }
  return acc;
}

Scalar extend_binary_op(const BinaryForm& beta, const TransportFamily& t0,
                        const RealVector& x, const Vector& u,
                        const RealVector& y, const Vector& v,
                        const RealVector& z) {
  const Box& box = t0.map.domain.box;
  if (!box.contains(x, 1e-12) || !box.contains(y, 1e-12) ||
      !box.contains(z, 1e-12)) {
    throw DomainError("pairing point outside the base chart");
  }
  return beta(x, t0.apply(y, x, u), t0.apply(z, x, v));
}

QuadratureGrid trapezoid_grid(const Box& box, int n_per_axis) {
  if (n_per_axis < 2) throw DomainError("trapezoid rule needs >= 2 points");
  const int d = box.dim();
  QuadratureGrid grid;
  std::vector<int> idx(d, 0);
  const std::size_t total = static_cast<std::size_t>(
      std::pow(static_cast<double>(n_per_axis), static_cast<double>(d)));
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    RealVector pt(d);
    double w = 1.0;
    for (int i = 0; i < d; ++i) {
      int k = static_cast<int>(rest % n_per_axis);
      rest /= n_per_axis;
      const Interval& iv = box.bound(i);
      double h = iv.length() / (n_per_axis - 1);
      pt[i] = iv.lo + k * h;
      w *= (k == 0 || k == n_per_axis - 1) ? 0.5 * h : h;
    }
    grid.points.push_back(pt);
    grid.weights.push_back(w);
  }
  return grid;
}

Vector integrate_section(const Section& s, const TransportFamily& t0,
                         const RealVector& x, const QuadratureGrid& grid) {
  if (!t0.map.domain.box.contains(x, 1e-12)) {
    throw DomainError("integration anchor outside the base chart");
  }
  Vector acc = Vector::Zero(t0.fibre.rank);
  for (std::size_t j = 0; j < grid.points.size(); ++j) {
    acc += grid.weights[j] * t0.apply(grid.points[j], x, s.components(grid.points[j]));
  }
  return acc;
}

}  // namespace tam
