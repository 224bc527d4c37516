#include "symsplit/geometry.hpp"

#include <doctest.h>

#include "support/oracles.hpp"

#include <cmath>
#include <numeric>

using namespace symsplit;
using testsupport::Rng;

TEST_CASE("snake numbering on a 2x2 grid") {
  GridSpec grid;
  grid.n_x = 2;
  grid.n_y = 2;
  CHECK(snake_index(1, 1, grid) == 1);
  CHECK(snake_index(1, 2, grid) == 2);
  CHECK(snake_index(2, 2, grid) == 3);
  CHECK(snake_index(2, 1, grid) == 4);
  // Mirror pair: (1,1) and (2,1) map to j and N-j+1.
  CHECK(snake_index(2, 1, grid) == grid.cell_count() - snake_index(1, 1, grid) + 1);
  CHECK_THROWS_AS(snake_index(3, 1, grid), Error);
  CHECK_THROWS_AS(snake_inverse(5, grid), Error);
}

TEST_CASE("snake mirror property holds exhaustively") {
  for (const auto [nx, ny] : {std::pair{4, 8}, {8, 4}, {2, 16}, {32, 32},
                              {6, 10}}) {
    GridSpec grid;
    grid.n_x = nx;
    grid.n_y = ny;
    const int total = grid.cell_count();
    for (int j = 1; j <= total; ++j) {
      const auto [c, r] = snake_inverse(j, grid);
      CHECK(snake_index(c, r, grid) == j);
      const auto [mc, mr] = snake_inverse(total - j + 1, grid);
      CHECK(mc == nx - c + 1);
      CHECK(mr == r);
    }
  }
}

TEST_CASE("emitter angles are evenly spaced and exactly paired") {
  ScanGeometry geom;
  geom.k = 4;
  const auto angles = emitter_angles(geom);
  const double deg = kPi / 180.0;
  CHECK(angles[0] == doctest::Approx(-30.0 * deg).epsilon(1e-15));
  CHECK(angles[1] == doctest::Approx(-10.0 * deg).epsilon(1e-13));
  CHECK(angles[2] == doctest::Approx(10.0 * deg).epsilon(1e-13));
  CHECK(angles[3] == doctest::Approx(30.0 * deg).epsilon(1e-15));

  geom.k = 24;
  const auto many = emitter_angles(geom);
  for (int i = 0; i < 24; ++i) {
    CHECK(many[i] + many[23 - i] == 0.0);  // exact by construction
    CHECK(many[i] != 0.0);
  }

  geom.k = 7;
  CHECK_THROWS_AS(emitter_angles(geom), Error);
}

TEST_CASE("emitter positions mirror exactly across the axis") {
  ScanGeometry geom;
  geom.k = 6;
  const auto sources = emitter_positions(geom, 0.0);
  for (int i = 0; i < 6; ++i) {
    CHECK(sources[i].x == -sources[5 - i].x);
    CHECK(sources[i].y == sources[5 - i].y);
  }
  // Left-to-right ordering.
  for (int i = 1; i < 6; ++i) CHECK(sources[i].x > sources[i - 1].x);
}

TEST_CASE("ray enumeration pairs mirrors bit for bit") {
  ScanGeometry geom;
  geom.k = 8;
  GridSpec grid;
  grid.n_x = 8;
  grid.n_y = 8;
  grid.voxel_size = 0.1 / 8;
  const RaySet rays = enumerate_rays(geom, grid);
  const Index m = rays.count();
  REQUIRE(m > 0);
  CHECK(m % 2 == 0);
  for (Index i = 0; i < m; ++i) {
    const Ray& a = rays.rays[i];
    const Ray& b = rays.rays[m - 1 - i];
    CHECK(a.source.x == -b.source.x);
    CHECK(a.source.y == b.source.y);
    CHECK(a.detector.x == -b.detector.x);
    CHECK(a.detector.y == b.detector.y);
  }
}

TEST_CASE("the reference scan produces an even ray count in the low thousands") {
  const ScanGeometry geom;  // 24 positions, defaults
  GridSpec grid;            // 32x32 over 0.1 m
  const RaySet rays = enumerate_rays(geom, grid);
  CHECK(rays.count() % 2 == 0);
  CHECK(rays.count() >= 1000);
  CHECK(rays.count() <= 5000);
}

TEST_CASE("ray and element counts scale with resolution") {
  ScanGeometry small;
  small.k = 12;
  ScanConfig small_cfg{small, 16, 16};
  ScanGeometry big;
  big.k = 24;
  ScanConfig big_cfg{big, 32, 32};

  const RaySet r_small = enumerate_rays(small, make_grid(small_cfg));
  const RaySet r_big = enumerate_rays(big, make_grid(big_cfg));
  const double m_ratio =
      static_cast<double>(r_big.count()) / static_cast<double>(r_small.count());
  CHECK(m_ratio >= 4.0 * 0.8);
  CHECK(m_ratio <= 4.0 * 1.2);
  const double element_ratio = m_ratio * (32.0 * 32.0) / (16.0 * 16.0);
  CHECK(element_ratio >= 16.0 * 0.8);
  CHECK(element_ratio <= 16.0 * 1.2);
}

TEST_CASE("a vertical ray through a column center weights every row equally") {
  GridSpec grid;
  grid.n_x = 4;
  grid.n_y = 5;
  grid.voxel_size = 0.1;
  grid.y_bottom = 1.0;
  const auto [xc, yc] = grid.cell_center(2, 1);
  const Ray ray{{xc, 3.0}, {xc, 0.0}};
  const auto weights = ray_weights(ray, grid);
  REQUIRE(weights.size() == 5);
  double sum = 0.0;
  for (const auto& [j, len] : weights) {
    CHECK(std::abs(len - grid.voxel_size) <= 1e-12);
    const auto [c, r] = snake_inverse(j, grid);
    CHECK(c == 2);
    sum += len;
  }
  CHECK(std::abs(sum - grid.height()) <= 1e-12);
}

TEST_CASE("a diagonal ray measures the voxel diagonal") {
  GridSpec grid;
  grid.n_x = 2;
  grid.n_y = 1;
  grid.voxel_size = 0.25;
  grid.y_bottom = 1.0;
  const double vs = grid.voxel_size;
  // 45 degrees through the left voxel, corner to corner, endpoints outside.
  const Ray ray{{grid.x_left() - vs, grid.y_bottom - vs},
                {grid.x_left() + 2 * vs, grid.y_top() + vs}};
  const auto weights = ray_weights(ray, grid);
  double total = 0.0;
  for (const auto& [j, len] : weights) {
    CHECK(j == 1);
    total += len;
  }
  CHECK(total == doctest::Approx(vs * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("traversal conserves the clipped chord length") {
  Rng rng(3001);
  GridSpec grid;  // 32x32 over 0.1 m starting at y = 0.25
  int hits = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Ray ray{{rng.uniform(-0.3, 0.3), rng.uniform(1.0, 1.3)},
                  {rng.uniform(-0.3, 0.3), 0.0}};
    const auto weights = ray_weights(ray, grid);
    const double sum = std::accumulate(
        weights.begin(), weights.end(), 0.0,
        [](double acc, const auto& w) { return acc + w.second; });
    const double chord = testsupport::clip_chord_length(ray, grid);
    CHECK(std::abs(sum - chord) <= 1e-12);
    if (chord > 0) ++hits;
  }
  CHECK(hits > 0);

  CHECK_THROWS_AS(ray_weights(Ray{{0.0, 1.0}, {0.0, 1.0}}, grid), Error);
}

TEST_CASE("built systems are centrosymmetric with zero tolerance") {
  ScanGeometry geom;
  geom.k = 12;
  ScanConfig cfg{geom, 16, 16};
  const GridSpec grid = make_grid(cfg);
  const CentroSystem sys = build_system(geom, grid);
  CHECK(sys.a.rows() % 2 == 0);
  CHECK(verify_symmetry(sys.a, 0.0).holds);
  CHECK(sys.a.nonzeros() > 0);
}

TEST_CASE("mirror-filled rows match independently traced rays") {
  ScanGeometry geom;
  geom.k = 12;
  ScanConfig cfg{geom, 16, 16};
  const GridSpec grid = make_grid(cfg);
  const CentroSystem sys = build_system(geom, grid);
  const RaySet rays = enumerate_rays(geom, grid);
  const Index m = rays.count();
  const Index n = grid.cell_count();
  REQUIRE(sys.a.rows() == m);

  double worst = 0.0;
  for (Index i = m / 2; i < m; ++i) {
    Vector row = Vector::Zero(n);
    for (const auto& [j, len] : ray_weights(rays.rays[i], grid)) {
      row[j - 1] = len;
    }
    for (Index j = 0; j < n; ++j) {
      worst = std::max(worst, std::abs(row[j] - sys.a.coeff(i, j)));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("build_system output is identical for any worker count") {
  ScanGeometry geom;
  geom.k = 6;
  ScanConfig cfg{geom, 8, 8};
  const GridSpec grid = make_grid(cfg);
  const CentroSystem serial = build_system(geom, grid, 1);
  const CentroSystem threaded = build_system(geom, grid, 4);
  CHECK((serial.a.to_dense() - threaded.a.to_dense()).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("polar renumbering puts mirror sectors at mirrored indices") {
  const auto tiny = polar_symmetric_numbering(1, 2);
  REQUIRE(tiny.size() == 2);
  CHECK(tiny[0] + tiny[1] == 3);  // j and N-j+1

  // The 72-voxel layout: 6 rings of 12 sectors.
  const int rings = 6, sectors = 12, total = rings * sectors;
  const auto perm = polar_symmetric_numbering(rings, sectors);
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < total; ++i) CHECK(sorted[i] == i + 1);  // bijection
  for (int ring = 1; ring <= rings; ++ring) {
    for (int s = 1; s <= sectors; ++s) {
      const int a = (ring - 1) * sectors + s;
      const int a_mirror = (ring - 1) * sectors + (sectors - s + 1);
      CHECK(perm[a - 1] + perm[a_mirror - 1] == total + 1);
    }
  }

  CHECK_THROWS_AS(polar_symmetric_numbering(2, 3), Error);
}

TEST_CASE("permutations move systems in and out of mirror form") {
  Rng rng(3002);
  const Matrix a = testsupport::random_centro_matrix(6, 8, rng);
  const CentroSystem sys{a, testsupport::random_vector(6, rng), 1e-12};

  std::vector<int> rid(6), cid(8);
  std::iota(rid.begin(), rid.end(), 1);
  std::iota(cid.begin(), cid.end(), 1);
  const CentroSystem same = apply_permutation(sys, rid, cid);
  CHECK((same.a.to_dense() - a.to_dense()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((same.p - sys.p).cwiseAbs().maxCoeff() == 0.0);

  // Reversing columns twice restores the original.
  std::vector<int> crev(8);
  for (int j = 0; j < 8; ++j) crev[j] = 8 - j;
  const CentroSystem once = apply_permutation(sys, rid, crev);
  const CentroSystem twice = apply_permutation(once, rid, crev);
  CHECK((twice.a.to_dense() - a.to_dense()).cwiseAbs().maxCoeff() == 0.0);

  // Random scramble breaks the symmetry; the inverse scramble restores it.
  std::vector<int> rperm = rid, cperm = cid;
  for (int i = 5; i > 0; --i) std::swap(rperm[i], rperm[rng.integer(0, i)]);
  for (int j = 7; j > 0; --j) std::swap(cperm[j], cperm[rng.integer(0, j)]);
  const CentroSystem scrambled = apply_permutation(sys, rperm, cperm);
  std::vector<int> rinv(6), cinv(8);
  for (int i = 0; i < 6; ++i) rinv[rperm[i] - 1] = i + 1;
  for (int j = 0; j < 8; ++j) cinv[cperm[j] - 1] = j + 1;
  const CentroSystem restored = apply_permutation(scrambled, rinv, cinv);
  CHECK(verify_symmetry(restored.a, 1e-12).holds);
  CHECK((restored.a.to_dense() - a.to_dense()).cwiseAbs().maxCoeff() == 0.0);

  std::vector<int> bad = rid;
  bad[0] = 2;
  CHECK_THROWS_AS(apply_permutation(sys, bad, cid), Error);
}

TEST_CASE("scan configuration parsing") {
  const std::string text =
      "# reference scan\n"
      "k 8\n"
      "gamma_deg 25\n"
      "h_e = 0.9\n"
      "grid_nx 16\n"
      "grid_ny 16\n"
      "obj_size 0.08\n";
  const ScanConfig cfg = parse_scan_config(text);
  CHECK(cfg.geom.k == 8);
  CHECK(cfg.geom.gamma == doctest::Approx(degrees_to_radians(25.0)));
  CHECK(cfg.geom.h_e == doctest::Approx(0.9));
  CHECK(cfg.geom.h_m == doctest::Approx(0.25));  // default kept
  CHECK(cfg.grid_nx == 16);
  const GridSpec grid = make_grid(cfg);
  CHECK(grid.voxel_size == doctest::Approx(0.08 / 16));
  CHECK(grid.y_bottom == doctest::Approx(0.25));

  CHECK_THROWS_AS(parse_scan_config("unknown_key 3\n"), Error);
  CHECK_THROWS_AS(parse_scan_config("k 8 9\n"), Error);
  CHECK_THROWS_AS(parse_scan_config("k\n"), Error);

  ScanGeometry odd;
  odd.k = 7;
  CHECK_THROWS_AS(odd.validate(), Error);
}
