#include "symsplit/phantom.hpp"

#include <cmath>
#include <random>

namespace symsplit {

bool Ellipse::contains(double x, double y) const {
  const double dx = x - x0;
  const double dy = y - y0;
  const double ca = std::cos(angle);
  const double sa = std::sin(angle);
  const double u = (dx * ca + dy * sa) / a;
  const double v = (-dx * sa + dy * ca) / b;
  return u * u + v * v <= 1.0;
}

std::vector<Ellipse> shepp_logan_ellipses() {
  const auto deg = [](double d) { return degrees_to_radians(d); };
  return {
      {0.0, 0.0, 0.69, 0.92, deg(0.0), 2.0},
      {0.0, -0.0184, 0.6624, 0.874, deg(0.0), -0.98},
      {0.22, 0.0, 0.11, 0.31, deg(-18.0), -0.02},
      {-0.22, 0.0, 0.16, 0.41, deg(18.0), -0.02},
      {0.0, 0.35, 0.21, 0.25, deg(0.0), 0.01},
      {0.0, 0.1, 0.046, 0.046, deg(0.0), 0.01},
      {0.0, -0.1, 0.046, 0.046, deg(0.0), 0.01},
      {-0.08, -0.605, 0.046, 0.023, deg(0.0), 0.01},
      {0.0, -0.606, 0.023, 0.023, deg(0.0), 0.01},
      {0.06, -0.605, 0.023, 0.046, deg(0.0), 0.01},
  };
}

PhantomImage rasterize(const std::vector<Ellipse>& ellipses,
                       const GridSpec& grid) {
  grid.validate();
  PhantomImage image;
  image.grid = grid;
  image.values = Vector::Zero(grid.cell_count());
  const double half_w = 0.5 * grid.width();
  const double half_h = 0.5 * grid.height();
  const double y_mid = grid.y_bottom + half_h;
  for (int c = 1; c <= grid.n_x; ++c) {
    for (int r = 1; r <= grid.n_y; ++r) {
      const auto [x, y] = grid.cell_center(c, r);
      const double u = (x - grid.center_x) / half_w;
      const double v = (y - y_mid) / half_h;
      double value = 0.0;
      for (const Ellipse& e : ellipses) {
        if (e.contains(u, v)) value += e.density;
      }
      image.values[snake_index(c, r, grid) - 1] = value;
    }
  }
  image.min_value = image.values.size() > 0 ? image.values.minCoeff() : 0.0;
  image.max_value = image.values.size() > 0 ? image.values.maxCoeff() : 0.0;
  return image;
}

namespace {

// Row sum with mirror column pairs combined before accumulation. Addition
// is commutative, so the mirrored row of a centrosymmetric matrix produces
// bit-identical sums for mirror-symmetric f.
double folded_row_sum_dense(const DenseStorage& a, const Vector& f, Index i) {
  const Index n = a.cols();
  double acc = 0.0;
  for (Index j = 0; j < n / 2; ++j) {
    acc += a(i, j) * f[j] + a(i, mirror(j, n)) * f[mirror(j, n)];
  }
  if (n % 2 != 0) acc += a(i, n / 2) * f[n / 2];
  return acc;
}

double folded_row_sum_sparse(const Eigen::SparseMatrix<double, Eigen::RowMajor>& a,
                             const Vector& f, Index i) {
  const Index n = a.cols();
  const Index begin = a.outerIndexPtr()[i];
  const Index end = a.outerIndexPtr()[i + 1];
  const auto* cols = a.innerIndexPtr();
  const auto* vals = a.valuePtr();
  double acc = 0.0;
  Index l = begin, r = end - 1;
  while (l <= r && l < end) {
    const Index cl = cols[l];
    const Index cr_m = mirror(cols[r], n);
    if (l == r) {
      acc += vals[l] * f[cl];
      break;
    }
    if (cl < cr_m) {
      acc += vals[l] * f[cl];  // mirror partner absent
      ++l;
    } else if (cl > cr_m) {
      acc += vals[r] * f[cols[r]];
      --r;
    } else {
      acc += vals[l] * f[cl] + vals[r] * f[cols[r]];
      ++l;
      --r;
    }
  }
  return acc;
}

}  // namespace

Vector forward_project(const Matrix& a, const Vector& f) {
  if (f.size() != a.cols()) {
    throw Error("forward_project: image length does not match columns");
  }
  if (!f.allFinite()) throw Error("forward_project: non-finite image");
  const Index m = a.rows();
  Vector p(m);
  if (a.is_sparse()) {
    const Eigen::SparseMatrix<double, Eigen::RowMajor> by_rows(a.sparse());
    for (Index i = 0; i < m; ++i) {
      p[i] = folded_row_sum_sparse(by_rows, f, i);
    }
  } else {
    const DenseStorage& d = a.dense();
    for (Index i = 0; i < m; ++i) {
      p[i] = folded_row_sum_dense(d, f, i);
    }
  }
  return p;
}

Vector forward_project(const Matrix& a, const Vector& f, double noise_sigma,
                       std::uint64_t seed) {
  Vector p = forward_project(a, f);
  if (noise_sigma < 0) throw Error("forward_project: negative noise sigma");
  if (noise_sigma == 0) return p;
  // Box-Muller on a fixed-width engine keeps noise reproducible across
  // standard library implementations.
  std::mt19937_64 engine(seed);
  const auto uniform = [&engine]() {
    return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
  };
  for (Index i = 0; i < p.size(); i += 2) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    p[i] += noise_sigma * radius * std::cos(angle);
    if (i + 1 < p.size()) p[i + 1] += noise_sigma * radius * std::sin(angle);
  }
  return p;
}

}  // namespace symsplit
