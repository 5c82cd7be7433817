#include "tam/sampling.hpp"

#include <cmath>

namespace tam {

namespace {

// Root of x^(d+1) = x + 1; generates the d-dimensional additive recurrence.
double harmonious(int d) {
  double x = 1.5;
  for (int i = 0; i < 64; ++i) {
    double f = std::pow(x, d + 1) - x - 1.0;
    double df = (d + 1) * std::pow(x, d) - 1.0;
    x -= f / df;
  }
  return x;
}

}  // namespace

Sampler::Sampler(std::uint64_t seed) : rng_(seed) {}

double Sampler::gauss() { return normal_(rng_); }

RealVector Sampler::point(const Box& box) {
  const int d = box.dim();
  auto it = streams_.find(d);
  if (it == streams_.end()) {
    std::vector<double> offset(d);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& o : offset) o = u(rng_);
    it = streams_.emplace(d, std::make_pair(std::move(offset), 0)).first;
  }
  auto& [offset, count] = it->second;
  ++count;
  const double phi = harmonious(d);
  RealVector u(d);
  double alpha = 1.0;
  for (int i = 0; i < d; ++i) {
    alpha /= phi;
    double v = offset[i] + static_cast<double>(count) * alpha;
    u[i] = v - std::floor(v);
  }
  return box.from_unit(u);
}

std::vector<RealVector> Sampler::points(const Box& box, std::size_t n) {
  std::vector<RealVector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(point(box));
  return out;
}

RealVector Sampler::interior_point(const Box& box, double margin) {
  std::vector<Interval> shrunk;
  for (const auto& iv : box.bounds()) {
    double pad = margin * iv.length();
    shrunk.push_back(Interval{iv.lo + pad, iv.hi - pad});
  }
  return point(Box(std::move(shrunk)));
}

double Sampler::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return u(rng_);
}

std::size_t Sampler::index(std::size_t count) {
  std::uniform_int_distribution<std::size_t> u(0, count - 1);
  return u(rng_);
}

Scalar Sampler::scalar(Field f) {
  double re = gauss();
  double im = f == Field::complex ? gauss() : 0.0;
  return Scalar(re, im);
}

Vector Sampler::fibre_vector(int rank, Field f) {
  Vector v(rank);
  for (int i = 0; i < rank; ++i) v[i] = scalar(f);
  return v;
}

Matrix Sampler::unitary(int rank, Field f) {
  Matrix g(rank, rank);
  for (int i = 0; i < rank; ++i) {
    for (int j = 0; j < rank; ++j) g(i, j) = scalar(f);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // fix the phase of each column so the factorization is unambiguous
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < rank; ++j) {
    Scalar d = r(j, j);
    double a = std::abs(d);
    if (a > 0) q.col(j) *= d / a;
  }
  return q;
}

Matrix Sampler::well_conditioned(int rank, Field f) {
  Matrix q1 = unitary(rank, f);
  Matrix q2 = unitary(rank, f);
  Vector s(rank);
  for (int i = 0; i < rank; ++i) s[i] = Scalar(uniform(0.7, 1.6), 0.0);
  return q1 * s.asDiagonal() * q2.adjoint();
}

}  // namespace tam
