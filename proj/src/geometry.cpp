#include "symsplit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <thread>

namespace symsplit {

namespace {

struct ClipRange {
  double t_in = 0.0;
  double t_out = 1.0;
};

// Intersection of the segment parameter range [0,1] with the grid box.
std::optional<ClipRange> clip_to_grid(const Ray& ray, const GridSpec& grid) {
  const double dx = ray.detector.x - ray.source.x;
  const double dy = ray.detector.y - ray.source.y;
  ClipRange range;
  const auto clip_axis = [&](double p0, double d, double lo, double hi) {
    if (d == 0.0) return p0 > lo && p0 < hi;
    double ta = (lo - p0) / d;
    double tb = (hi - p0) / d;
    if (ta > tb) std::swap(ta, tb);
    range.t_in = std::max(range.t_in, ta);
    range.t_out = std::min(range.t_out, tb);
    return true;
  };
  if (!clip_axis(ray.source.x, dx, grid.x_left(), grid.x_right())) return {};
  if (!clip_axis(ray.source.y, dy, grid.y_bottom, grid.y_top())) return {};
  if (!(range.t_out > range.t_in)) return {};
  return range;
}

// Grid boundaries are generated symmetrically about center_x so that the
// boundary set of a centered grid maps onto itself under exact negation.
double x_boundary(const GridSpec& grid, int k) {
  return grid.center_x + (k - grid.n_x / 2) * grid.voxel_size;
}

double y_boundary(const GridSpec& grid, int k) {
  return grid.y_bottom + k * grid.voxel_size;
}

int thread_budget(int requested, Index work_items) {
  int budget = requested;
  if (budget <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    budget = hw > 0 ? static_cast<int>(hw) : 1;
  }
  return static_cast<int>(std::min<Index>(budget, std::max<Index>(work_items, 1)));
}

}  // namespace

std::pair<double, double> GridSpec::cell_center(int c, int r) const {
  if (c < 1 || c > n_x || r < 1 || r > n_y) {
    throw Error("cell_center: cell index out of range");
  }
  const double x = center_x + (c - 0.5 - 0.5 * n_x) * voxel_size;
  const double y = y_bottom + (n_y - r + 0.5) * voxel_size;
  return {x, y};
}

void GridSpec::validate() const {
  if (n_x < 2 || n_x % 2 != 0) {
    throw Error("grid: n_x must be even and positive (mirror pairing)");
  }
  if (n_y < 1) throw Error("grid: n_y must be positive");
  if (!(voxel_size > 0)) throw Error("grid: voxel_size must be positive");
}

int snake_index(int c, int r, const GridSpec& grid) {
  if (c < 1 || c > grid.n_x || r < 1 || r > grid.n_y) {
    throw Error("snake_index: cell index out of range");
  }
  const int base = (c - 1) * grid.n_y;
  return c % 2 == 1 ? base + r : base + (grid.n_y - r + 1);
}

std::pair<int, int> snake_inverse(int j, const GridSpec& grid) {
  if (j < 1 || j > grid.cell_count()) {
    throw Error("snake_inverse: index out of range");
  }
  const int c = (j - 1) / grid.n_y + 1;
  const int offset = (j - 1) % grid.n_y + 1;
  const int r = c % 2 == 1 ? offset : grid.n_y - offset + 1;
  return {c, r};
}

void ScanGeometry::validate() const {
  if (k < 2 || k % 2 != 0) {
    throw Error("geometry: k must be even and >= 2 (mirror pairing)");
  }
  if (!(gamma > 0) || !(gamma < kPi / 2)) {
    throw Error("geometry: gamma must lie in (0, pi/2)");
  }
  if (!(h_e > 0) || !(h_m > 0) || !(l_m > 0) || !(obj_size > 0)) {
    throw Error("geometry: lengths must be positive");
  }
  if (n_p < 1) throw Error("geometry: n_p must be >= 1");
}

std::vector<double> emitter_angles(const ScanGeometry& geom) {
  geom.validate();
  const int k = geom.k;
  std::vector<double> angles(k);
  const double step = 2.0 * geom.gamma / (k - 1);
  for (int i = 0; i < k / 2; ++i) {
    angles[i] = -geom.gamma + i * step;
    angles[k - 1 - i] = -angles[i];  // sign flip keeps pairing exact
  }
  return angles;
}

std::vector<Point> emitter_positions(const ScanGeometry& geom,
                                     double center_x) {
  const auto angles = emitter_angles(geom);
  std::vector<Point> sources(angles.size());
  for (int i = 0; i < geom.k / 2; ++i) {
    sources[i] = Point{center_x + geom.h_e * std::sin(angles[i]),
                       geom.h_m + geom.h_e * std::cos(angles[i])};
    sources[geom.k - 1 - i] =
        Point{2.0 * center_x - sources[i].x, sources[i].y};
  }
  return sources;
}

RaySet enumerate_rays(const ScanGeometry& geom, const GridSpec& grid) {
  geom.validate();
  grid.validate();
  const double cx = grid.center_x;
  const auto sources = emitter_positions(geom, cx);

  // Detector sampling pitch matched to half a voxel, never finer than the
  // native pixel pitch; ray counts then scale with grid resolution.
  const double native = geom.l_m / geom.n_p;
  const double pitch = std::max(native, 0.5 * grid.voxel_size);
  const int samples = std::max(1, static_cast<int>(std::floor(geom.l_m / pitch)));

  const auto reflect = [cx](const Ray& r) {
    return Ray{Point{2.0 * cx - r.source.x, r.source.y},
               Point{2.0 * cx - r.detector.x, r.detector.y}};
  };

  std::vector<Ray> kept, mirrored;
  for (int pos = 0; pos < geom.k / 2; ++pos) {
    for (int q = 0; q < samples; ++q) {
      const Ray ray{sources[pos],
                    Point{cx + (q + 0.5 - 0.5 * samples) * pitch, 0.0}};
      if (!clip_to_grid(ray, grid)) continue;
      kept.push_back(ray);
      mirrored.push_back(reflect(ray));
    }
  }
  if (kept.empty()) {
    throw Error("enumerate_rays: no ray intersects the reconstruction region");
  }
  // Reversing puts the reflected rays in position-major, sample-minor order,
  // so ray i and ray m-i+1 are mirror images.
  std::reverse(mirrored.begin(), mirrored.end());

  RaySet out;
  out.rays = std::move(kept);
  out.rays.insert(out.rays.end(), mirrored.begin(), mirrored.end());
  out.positions = geom.k;
  out.samples_per_position = samples;
  out.sample_pitch = pitch;
  return out;
}

std::vector<std::pair<int, double>> ray_weights(const Ray& ray,
                                                const GridSpec& grid) {
  grid.validate();
  const double dx = ray.detector.x - ray.source.x;
  const double dy = ray.detector.y - ray.source.y;
  const double seg_len = std::hypot(dx, dy);
  if (seg_len == 0.0) throw Error("ray_weights: degenerate ray");

  const auto range = clip_to_grid(ray, grid);
  if (!range) return {};

  std::vector<double> ts;
  ts.reserve(static_cast<std::size_t>(grid.n_x + grid.n_y + 2));
  ts.push_back(range->t_in);
  const auto collect = [&](double p0, double d, int count,
                           auto boundary_at) {
    if (d == 0.0) return;
    for (int k = 0; k <= count; ++k) {
      const double t = (boundary_at(k) - p0) / d;
      if (t > range->t_in && t < range->t_out) ts.push_back(t);
    }
  };
  collect(ray.source.x, dx, grid.n_x, [&](int k) { return x_boundary(grid, k); });
  collect(ray.source.y, dy, grid.n_y, [&](int k) { return y_boundary(grid, k); });
  ts.push_back(range->t_out);
  std::sort(ts.begin(), ts.end());

  std::vector<std::pair<int, double>> weights;
  weights.reserve(ts.size());
  for (std::size_t s = 0; s + 1 < ts.size(); ++s) {
    const double ta = ts[s], tb = ts[s + 1];
    if (!(tb > ta)) continue;
    const double tm = 0.5 * (ta + tb);
    const double xm = ray.source.x + tm * dx;
    const double ym = ray.source.y + tm * dy;
    const int c = std::clamp(
        static_cast<int>(std::floor((xm - grid.x_left()) / grid.voxel_size)),
        0, grid.n_x - 1);
    const int from_bottom = std::clamp(
        static_cast<int>(std::floor((ym - grid.y_bottom) / grid.voxel_size)),
        0, grid.n_y - 1);
    const int j = snake_index(c + 1, grid.n_y - from_bottom, grid);
    const double len = (tb - ta) * seg_len;
    if (!weights.empty() && weights.back().first == j) {
      weights.back().second += len;
    } else {
      weights.emplace_back(j, len);
    }
  }
  return weights;
}

CentroSystem build_system(const ScanGeometry& geom, const GridSpec& grid,
                          int parallelism) {
  const RaySet rays = enumerate_rays(geom, grid);
  const Index m = rays.count();
  const Index mh = m / 2;
  const Index n = grid.cell_count();

  std::vector<std::vector<std::pair<int, double>>> traced(
      static_cast<std::size_t>(mh));
  const int workers = thread_budget(parallelism, mh);
  const auto trace_range = [&](Index begin, Index end) {
    for (Index i = begin; i < end; ++i) {
      traced[static_cast<std::size_t>(i)] = ray_weights(rays.rays[i], grid);
    }
  };
  if (workers <= 1) {
    trace_range(0, mh);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const Index chunk = (mh + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const Index begin = w * chunk;
      const Index end = std::min(mh, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(trace_range, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  std::vector<Triplet> triplets;
  std::size_t nnz = 0;
  for (const auto& row : traced) nnz += row.size();
  triplets.reserve(2 * nnz);
  for (Index i = 0; i < mh; ++i) {
    for (const auto& [j, len] : traced[static_cast<std::size_t>(i)]) {
      const Index col = j - 1;
      triplets.emplace_back(i, col, len);
      // Mirror rule: the reflected ray crosses the mirrored cells with the
      // same lengths, so the matrix is centrosymmetric by construction.
      triplets.emplace_back(mirror(i, m), mirror(col, n), len);
    }
  }
  CentroSystem sys;
  sys.a = Matrix::from_triplets(m, n, triplets);
  sys.p = Vector::Zero(m);
  sys.symmetry_tol = 0.0;
  return sys;
}

std::vector<int> polar_symmetric_numbering(int n_rings, int n_sectors) {
  if (n_rings < 1) throw Error("polar numbering: n_rings must be >= 1");
  if (n_sectors < 2 || n_sectors % 2 != 0) {
    throw Error("polar numbering: n_sectors must be even and >= 2");
  }
  const int total = n_rings * n_sectors;
  const int half = n_sectors / 2;
  std::vector<int> perm(static_cast<std::size_t>(total));
  for (int ring = 1; ring <= n_rings; ++ring) {
    for (int sector = 1; sector <= n_sectors; ++sector) {
      const int conventional = (ring - 1) * n_sectors + sector;
      // Sectors 1..half lie on one side of the symmetry axis; the mirror of
      // sector s is sector n_sectors - s + 1.
      const int renumbered =
          sector <= half
              ? (ring - 1) * half + sector
              : total - ((ring - 1) * half + (n_sectors - sector + 1)) + 1;
      perm[static_cast<std::size_t>(conventional - 1)] = renumbered;
    }
  }
  return perm;
}

namespace {

void check_permutation(const std::vector<int>& perm, Index n,
                       const char* which) {
  if (static_cast<Index>(perm.size()) != n) {
    throw Error(std::string("apply_permutation: ") + which +
                " permutation has wrong length");
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int v : perm) {
    if (v < 1 || v > n || seen[static_cast<std::size_t>(v - 1)]) {
      throw Error(std::string("apply_permutation: ") + which +
                  " permutation is not a bijection of 1..n");
    }
    seen[static_cast<std::size_t>(v - 1)] = 1;
  }
}

}  // namespace

CentroSystem apply_permutation(const CentroSystem& sys,
                               const std::vector<int>& row_perm,
                               const std::vector<int>& col_perm) {
  const Index m = sys.a.rows(), n = sys.a.cols();
  check_permutation(row_perm, m, "row");
  check_permutation(col_perm, n, "column");

  CentroSystem out;
  out.symmetry_tol = sys.symmetry_tol;
  out.p = Vector(m);
  for (Index i = 0; i < m; ++i) {
    out.p[row_perm[static_cast<std::size_t>(i)] - 1] = sys.p[i];
  }
  if (sys.a.is_sparse()) {
    std::vector<Triplet> ts;
    ts.reserve(static_cast<std::size_t>(sys.a.nonzeros()));
    sys.a.for_each([&](Index i, Index j, double v) {
      ts.emplace_back(row_perm[static_cast<std::size_t>(i)] - 1,
                      col_perm[static_cast<std::size_t>(j)] - 1, v);
    });
    out.a = Matrix::from_triplets(m, n, ts);
  } else {
    DenseStorage d(m, n);
    sys.a.for_each([&](Index i, Index j, double v) {
      d(row_perm[static_cast<std::size_t>(i)] - 1,
        col_perm[static_cast<std::size_t>(j)] - 1) = v;
    });
    out.a = Matrix(std::move(d));
  }
  return out;
}

ScanConfig parse_scan_config(const std::string& text) {
  ScanConfig config;
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    for (char& ch : line) {
      if (ch == '=' || ch == '\t' || ch == '\r') ch = ' ';
    }
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key)) continue;
    double value = 0.0;
    if (!(fields >> value)) {
      throw Error("config line " + std::to_string(line_no) +
                  ": missing numeric value for key '" + key + "'");
    }
    std::string extra;
    if (fields >> extra) {
      throw Error("config line " + std::to_string(line_no) +
                  ": trailing content '" + extra + "'");
    }
    if (key == "k") {
      config.geom.k = static_cast<int>(value);
    } else if (key == "gamma_deg") {
      config.geom.gamma = degrees_to_radians(value);
    } else if (key == "h_e") {
      config.geom.h_e = value;
    } else if (key == "h_m") {
      config.geom.h_m = value;
    } else if (key == "l_m") {
      config.geom.l_m = value;
    } else if (key == "n_p") {
      config.geom.n_p = static_cast<int>(value);
    } else if (key == "grid_nx") {
      config.grid_nx = static_cast<int>(value);
    } else if (key == "grid_ny") {
      config.grid_ny = static_cast<int>(value);
    } else if (key == "obj_size") {
      config.geom.obj_size = value;
    } else {
      throw Error("config line " + std::to_string(line_no) +
                  ": unknown key '" + key + "'");
    }
  }
  return config;
}

GridSpec make_grid(const ScanConfig& config) {
  GridSpec grid;
  grid.n_x = config.grid_nx;
  grid.n_y = config.grid_ny;
  grid.voxel_size = config.geom.obj_size / config.grid_nx;
  grid.center_x = 0.0;
  grid.y_bottom = config.geom.h_m;
  return grid;
}

}  // namespace symsplit
