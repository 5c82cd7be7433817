#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "tam/geometry.hpp"
#include "tam/types.hpp"

namespace tam {

/// Seeded sample source.  Box points come from an additive low-discrepancy
/// recurrence (one stream per dimension count, offset drawn from the seed);
/// matrices and fibre vectors come from the seeded PRNG.  Identical seeds
/// reproduce identical streams, which is what makes reports byte-stable.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed);

  /// Next low-discrepancy point of the box.
  RealVector point(const Box& box);
  std::vector<RealVector> points(const Box& box, std::size_t n);
  /// Strictly interior point (margin as a fraction of each edge).
  RealVector interior_point(const Box& box, double margin = 1e-3);

  double uniform(double lo, double hi);
  std::size_t index(std::size_t count);  // uniform in [0, count)

  Scalar scalar(Field f);
  /// Gaussian fibre vector, entries O(1); real-valued when f is real.
  Vector fibre_vector(int rank, Field f);
  /// Random invertible matrix with condition number <= ~4.
  Matrix well_conditioned(int rank, Field f);
  /// Unitary (orthogonal in the real case) matrix.
  Matrix unitary(int rank, Field f);

 private:
  double gauss();
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  // per-dimension additive recurrence state: offset vector and counter
  std::map<int, std::pair<std::vector<double>, std::uint64_t>> streams_;
};

}  // namespace tam
