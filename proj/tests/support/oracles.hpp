#pragma once

// Test-only helpers: deterministic random generation and independent
// oracles (SVD pseudo-inverse, box clipping, mirror extensions). Nothing
// here calls the implementation paths under test.

#include "symsplit/centro.hpp"
#include "symsplit/geometry.hpp"
#include "symsplit/matrix.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace testsupport {

using symsplit::DenseStorage;
using symsplit::Index;
using symsplit::Matrix;
using symsplit::Vector;

// mt19937_64 with explicit scaling so the stream of doubles does not depend
// on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {  // inclusive
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }
  double normal() {
    const double u1 = (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::mt19937_64 engine_;
};

inline DenseStorage random_dense(Index rows, Index cols, Rng& rng,
                                 double lo = -1.0, double hi = 1.0) {
  DenseStorage m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.uniform(lo, hi);
  }
  return m;
}

inline Vector random_vector(Index n, Rng& rng, double lo = -1.0,
                            double hi = 1.0) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

// Matrix with prescribed rank and singular values in [0.5, 1.5]; rank
// decisions are unambiguous for any sane threshold.
inline DenseStorage random_with_rank(Index rows, Index cols, Index rank,
                                     Rng& rng) {
  const Index k = std::min(rows, cols);
  rank = std::min(rank, k);
  const DenseStorage gu = random_dense(rows, rows, rng);
  const DenseStorage gv = random_dense(cols, cols, rng);
  const DenseStorage qu =
      Eigen::HouseholderQR<DenseStorage>(gu).householderQ();
  const DenseStorage qv =
      Eigen::HouseholderQR<DenseStorage>(gv).householderQ();
  Vector sigma = Vector::Zero(k);
  for (Index i = 0; i < rank; ++i) sigma[i] = rng.uniform(0.5, 1.5);
  DenseStorage s = DenseStorage::Zero(rows, cols);
  s.diagonal().head(k) = sigma;
  return qu * s * qv.transpose();
}

// Exactly centrosymmetric matrix assembled from two prescribed halves.
inline Matrix make_centro_matrix(const DenseStorage& half1,
                                 const DenseStorage& half2) {
  return symsplit::reconstruct_matrix(Matrix(half1), Matrix(half2));
}

inline Matrix random_centro_matrix(Index m, Index n, Rng& rng) {
  return make_centro_matrix(random_dense(m / 2, n / 2, rng),
                            random_dense(m / 2, n / 2, rng));
}

// Minimum-norm least-squares solution through an explicit SVD
// pseudo-inverse; independent of the complete orthogonal decomposition
// used by the implementation.
inline Vector pinv_solve(const DenseStorage& a, const Vector& b) {
  Eigen::JacobiSVD<DenseStorage> svd(a,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = std::max(a.rows(), a.cols()) *
                        std::numeric_limits<double>::epsilon() *
                        (sv.size() > 0 ? sv[0] : 0.0);
  Vector y = svd.matrixU().transpose() * b;
  for (Index i = 0; i < sv.size(); ++i) {
    y[i] = sv[i] > cutoff ? y[i] / sv[i] : 0.0;
  }
  return svd.matrixV() * y;
}

// Independent Liang-Barsky segment/box clip; returns the chord length.
inline double clip_chord_length(const symsplit::Ray& ray,
                                const symsplit::GridSpec& grid) {
  const double dx = ray.detector.x - ray.source.x;
  const double dy = ray.detector.y - ray.source.y;
  double t0 = 0.0, t1 = 1.0;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {ray.source.x - grid.x_left(),
                       grid.x_right() - ray.source.x,
                       ray.source.y - grid.y_bottom,
                       grid.y_top() - ray.source.y};
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] <= 0.0) return 0.0;
      continue;
    }
    const double t = q[k] / p[k];
    if (p[k] < 0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
  }
  if (t1 <= t0) return 0.0;
  return (t1 - t0) * std::hypot(dx, dy);
}

// Antisymmetric/symmetric extensions of a half-length vector.
inline Vector extend_antisymmetric(const Vector& half) {
  const Index nh = half.size();
  Vector full(2 * nh);
  for (Index j = 0; j < nh; ++j) {
    full[j] = half[j];
    full[2 * nh - 1 - j] = -half[j];
  }
  return full;
}

inline Vector extend_symmetric(const Vector& half) {
  const Index nh = half.size();
  Vector full(2 * nh);
  for (Index j = 0; j < nh; ++j) {
    full[j] = half[j];
    full[2 * nh - 1 - j] = half[j];
  }
  return full;
}

// The 4x6 worked example: integer centrosymmetric matrix with rhs
// (5, 6, 8, 7) and published minimum-norm solutions.
inline DenseStorage example1_matrix() {
  DenseStorage a(4, 6);
  a << 1, 3, 5, 7, 9, 1,  //
      2, 4, 6, 8, 3, 7,   //
      7, 3, 8, 6, 4, 2,   //
      1, 9, 7, 5, 3, 1;
  return a;
}

inline Vector example1_rhs() {
  Vector p(4);
  p << 5, 6, 8, 7;
  return p;
}

}  // namespace testsupport
