#include "symsplit/phantom.hpp"
#include "symsplit/solvers.hpp"

#include <doctest.h>

#include "support/oracles.hpp"

#include <cmath>

using namespace symsplit;
using testsupport::Rng;

namespace {

// Independent copy of the published head-phantom table:
// {density, a, b, x0, y0, angle_deg}.
constexpr double kReferenceTable[10][6] = {
    {2.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.98, 0.6624, 0.874, 0.0, -0.0184, 0.0},
    {-0.02, 0.11, 0.31, 0.22, 0.0, -18.0},
    {-0.02, 0.16, 0.41, -0.22, 0.0, 18.0},
    {0.01, 0.21, 0.25, 0.0, 0.35, 0.0},
    {0.01, 0.046, 0.046, 0.0, 0.1, 0.0},
    {0.01, 0.046, 0.046, 0.0, -0.1, 0.0},
    {0.01, 0.046, 0.023, -0.08, -0.605, 0.0},
    {0.01, 0.023, 0.023, 0.0, -0.606, 0.0},
    {0.01, 0.023, 0.046, 0.06, -0.605, 0.0},
};

GridSpec unit_grid(int n) {
  GridSpec grid;
  grid.n_x = n;
  grid.n_y = n;
  grid.voxel_size = 2.0 / n;
  grid.center_x = 0.0;
  grid.y_bottom = 0.0;
  return grid;
}

}  // namespace

TEST_CASE("the phantom table matches the published parameters") {
  const auto ellipses = shepp_logan_ellipses();
  REQUIRE(ellipses.size() == 10);
  for (std::size_t e = 0; e < 10; ++e) {
    CHECK(ellipses[e].density == doctest::Approx(kReferenceTable[e][0]));
    CHECK(ellipses[e].a == doctest::Approx(kReferenceTable[e][1]));
    CHECK(ellipses[e].b == doctest::Approx(kReferenceTable[e][2]));
    CHECK(ellipses[e].x0 == doctest::Approx(kReferenceTable[e][3]));
    CHECK(ellipses[e].y0 == doctest::Approx(kReferenceTable[e][4]));
    CHECK(ellipses[e].angle ==
          doctest::Approx(degrees_to_radians(kReferenceTable[e][5])));
  }
  // The skull is the largest ellipse of the set.
  for (std::size_t e = 1; e < 10; ++e) {
    CHECK(ellipses[0].a >= ellipses[e].a);
    CHECK(ellipses[0].b >= ellipses[e].b);
  }
}

TEST_CASE("densities accumulate to positive values inside the head") {
  const auto image = rasterize(shepp_logan_ellipses(), unit_grid(32));
  // Center voxel: skull plus brain tissue.
  const auto [c, r] = std::pair{16, 16};
  const int j = snake_index(c, r, image.grid);
  CHECK(image.values[j - 1] > 0.0);
  CHECK(image.max_value >= 1.0);  // skull shell reaches density 2 - 0.98 zones
}

TEST_CASE("rasterize fills a covered grid with the ellipse density") {
  const std::vector<Ellipse> circle{{0.0, 0.0, 1.0, 1.0, 0.0, 1.0}};
  const auto image = rasterize(circle, unit_grid(2));
  for (Index i = 0; i < 4; ++i) CHECK(image.values[i] == 1.0);

  const auto empty = rasterize({}, unit_grid(2));
  CHECK(empty.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rasterize output follows the snake numbering") {
  const GridSpec grid = unit_grid(32);
  const auto ellipses = shepp_logan_ellipses();
  const auto image = rasterize(ellipses, grid);
  // Row-major reference rasterization, reordered through the numbering.
  const double half = 1.0;
  for (int c = 1; c <= grid.n_x; ++c) {
    for (int r = 1; r <= grid.n_y; ++r) {
      const auto [x, y] = grid.cell_center(c, r);
      const double u = x / half;
      const double v = (y - 1.0) / half;
      double want = 0.0;
      for (const auto& e : ellipses) {
        if (e.contains(u, v)) want += e.density;
      }
      CHECK(image.values[snake_index(c, r, grid) - 1] == want);
    }
  }
}

TEST_CASE("forward projection basics") {
  const Matrix a{testsupport::example1_matrix()};
  CHECK(forward_project(a, Vector::Zero(6)).cwiseAbs().maxCoeff() == 0.0);

  Vector e1 = Vector::Zero(6);
  e1[0] = 1.0;
  const Vector p = forward_project(a, e1);
  Vector col(4);
  col << 1, 2, 7, 1;
  CHECK((p - col).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(forward_project(a, Vector::Zero(5)), Error);
}

TEST_CASE("projections of mirror-symmetric images are exactly symmetric") {
  ScanGeometry geom;
  geom.k = 8;
  ScanConfig cfg{geom, 16, 16};
  const GridSpec grid = make_grid(cfg);
  const CentroSystem sys = build_system(geom, grid);

  auto image = rasterize(shepp_logan_ellipses(), grid);
  // Symmetrize explicitly; the projection must then mirror bit for bit.
  const Index n = image.values.size();
  for (Index j = 0; j < n / 2; ++j) {
    const double avg = 0.5 * (image.values[j] + image.values[n - 1 - j]);
    image.values[j] = avg;
    image.values[n - 1 - j] = avg;
  }
  const Vector p = forward_project(sys.a, image.values);
  const Index m = p.size();
  for (Index i = 0; i < m / 2; ++i) {
    CHECK(p[i] == p[m - 1 - i]);
  }
  const auto [p1, p2] = split_rhs(p);
  CHECK(p1.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("folded accumulation matches the plain product") {
  Rng rng(4001);
  for (int trial = 0; trial < 20; ++trial) {
    const Index m = rng.integer(1, 15);
    const Index n = rng.integer(1, 15);
    const DenseStorage d = testsupport::random_dense(m, n, rng);
    const Vector f = testsupport::random_vector(n, rng);
    const Vector folded = forward_project(Matrix{d}, f);
    const Vector plain = d * f;
    CHECK((folded - plain).cwiseAbs().maxCoeff() <=
          1e-13 * std::max(1.0, plain.cwiseAbs().maxCoeff()));

    std::vector<Triplet> ts;
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < m; ++i) {
        if (rng.uniform() < 0.5) ts.emplace_back(i, j, d(i, j));
      }
    }
    const Matrix sp = Matrix::from_triplets(m, n, ts);
    const Vector sparse_folded = forward_project(sp, f);
    const Vector sparse_plain = sp.apply(f);
    CHECK((sparse_folded - sparse_plain).cwiseAbs().maxCoeff() <=
          1e-13 * std::max(1.0, sparse_plain.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("noise is seeded, deterministic and off by default") {
  Rng rng(4002);
  const Matrix a{testsupport::random_dense(8, 6, rng)};
  const Vector f = testsupport::random_vector(6, rng);
  const Vector clean = forward_project(a, f);
  const Vector same = forward_project(a, f, 0.0, 7);
  CHECK((clean - same).cwiseAbs().maxCoeff() == 0.0);

  const Vector noisy1 = forward_project(a, f, 0.01, 7);
  const Vector noisy2 = forward_project(a, f, 0.01, 7);
  const Vector other = forward_project(a, f, 0.01, 8);
  CHECK((noisy1 - noisy2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((noisy1 - clean).cwiseAbs().maxCoeff() > 0.0);
  CHECK((noisy1 - other).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("the noise-free pipeline is consistent") {
  ScanGeometry geom;
  geom.k = 8;
  ScanConfig cfg{geom, 16, 16};
  const GridSpec grid = make_grid(cfg);
  CentroSystem sys = build_system(geom, grid);
  const auto image = rasterize(shepp_logan_ellipses(), grid);
  sys.p = forward_project(sys.a, image.values);

  SolveOptions opts;
  opts.method = Method::cgls;
  opts.tol = 1e-12;
  opts.max_iters = 3000;
  const auto rep = solve_direct(sys, opts);
  CHECK(rep.residual_norm <= 1e-6 * sys.p.norm());
}
