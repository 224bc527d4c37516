#pragma once

#include "symsplit/centro.hpp"
#include "symsplit/matrix.hpp"

#include <string>
#include <utility>
#include <vector>

namespace symsplit {

// 2D tomosynthesis geometry. The detector lies on y = 0, centered on the
// vertical axis x = center_x; the reconstruction region sits above it and
// the emitter swings symmetrically about the same axis. Everything is built
// so that the system matrix comes out exactly centrosymmetric: voxels are
// numbered along a vertical snake whose mirror image is index-reversal, and
// rays are enumerated so that ray i and ray m-i+1 are exact reflections.

/// Voxel grid: n_x columns (even) by n_y rows of square voxels. Column 1 is
/// leftmost, row 1 is the top row. y_bottom is the height of the lower grid
/// edge above the detector.
struct GridSpec {
  int n_x = 32;
  int n_y = 32;
  double voxel_size = 0.1 / 32;
  double center_x = 0.0;
  double y_bottom = 0.25;

  int cell_count() const { return n_x * n_y; }
  double width() const { return n_x * voxel_size; }
  double height() const { return n_y * voxel_size; }
  double x_left() const { return center_x - 0.5 * width(); }
  double x_right() const { return center_x + 0.5 * width(); }
  double y_top() const { return y_bottom + height(); }
  /// Voxel center, 1-based column/row.
  std::pair<double, double> cell_center(int c, int r) const;
  void validate() const;
};

/// Vertical boustrophedon numbering: odd columns run top to bottom, even
/// columns bottom to top, so cell (c,r) and its horizontal mirror
/// (n_x-c+1, r) get indices j and N-j+1. All arguments 1-based.
int snake_index(int c, int r, const GridSpec& grid);
std::pair<int, int> snake_inverse(int j, const GridSpec& grid);

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double degrees_to_radians(double deg) {
  return deg * kPi / 180.0;
}

/// Emitter/detector layout. The emitter rotates about a horizontal axis
/// through the object's lower-boundary center at height h_m, at distance
/// h_e from it, covering inclinations -gamma..+gamma in k even steps (so
/// there is no center position and positions pair off symmetrically).
/// a_e is recorded for completeness; the pencil-ray model ignores it.
struct ScanGeometry {
  int k = 24;
  double gamma = degrees_to_radians(30.0);  // radians
  double h_e = 1.0;
  double h_m = 0.25;
  double l_m = 0.43;
  int n_p = 1024;
  double a_e = 7e-4;
  double obj_size = 0.1;  // lateral extent of the reconstruction region

  void validate() const;
};

/// Inclination angles, most negative first. Angles in the upper half are
/// exact sign flips of their partners, so theta_k + theta_{k'-k+1} == 0.
std::vector<double> emitter_angles(const ScanGeometry& geom);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Source points in position order; mirror pairs are exact reflections
/// across the central axis.
std::vector<Point> emitter_positions(const ScanGeometry& geom,
                                     double center_x = 0.0);

/// Pencil ray from an emitter position to a detector sample point.
struct Ray {
  Point source;
  Point detector;
};

struct RaySet {
  std::vector<Ray> rays;
  int positions = 0;          // emitter positions contributing
  int samples_per_position = 0;  // detector samples considered per position
  double sample_pitch = 0.0;  // detector sampling pitch used

  Index count() const { return static_cast<Index>(rays.size()); }
};

/// Enumerates rays position-major (left to right), detector-sample-minor
/// (left to right). Detector samples are placed at pitch
/// max(l_m/n_p, voxel_size/2), which keeps the ray count proportional to
/// the grid resolution. Rays that miss the grid are dropped in mirror
/// pairs, and rays in the upper half of the list are constructed by
/// reflecting their partners, so ray i and ray m-i+1 match bit for bit.
RaySet enumerate_rays(const ScanGeometry& geom, const GridSpec& grid);

/// Exact intersection lengths of the ray with every crossed voxel, as
/// (snake index, length) pairs with 1-based indices, in traversal order.
/// The lengths sum to the chord length of the segment through the grid.
std::vector<std::pair<int, double>> ray_weights(const Ray& ray,
                                                const GridSpec& grid);

/// Builds the sparse system matrix: rows 1..m/2 are traced, rows m..m/2+1
/// are filled by the mirror rule, making the matrix centrosymmetric with
/// zero tolerance. The right-hand side starts at zero (see
/// forward_project). parallelism caps the tracing workers; 0 means all
/// cores. The result is identical for any worker count.
CentroSystem build_system(const ScanGeometry& geom, const GridSpec& grid,
                          int parallelism = 0);

/// Renumbers a polar grid (n_rings rings by n_sectors sectors, n_sectors
/// even, conventional ring-major order) so that cells j and N-j+1 are
/// mirror images across the symmetry axis. Returned as a 1-based
/// permutation: entry a-1 holds the new index of conventional cell a.
std::vector<int> polar_symmetric_numbering(int n_rings, int n_sectors);

/// Applies 1-based row/column permutations (old index -> new index) to a
/// system; used to bring externally numbered systems into mirror form. The
/// symmetry claim of the result is not checked here.
CentroSystem apply_permutation(const CentroSystem& sys,
                               const std::vector<int>& row_perm,
                               const std::vector<int>& col_perm);

/// Scan configuration file: `key value` or `key = value` lines, `#`
/// comments. Keys: k, gamma_deg, h_e, h_m, l_m, n_p, grid_nx, grid_ny,
/// obj_size. Missing keys keep their defaults.
struct ScanConfig {
  ScanGeometry geom;
  int grid_nx = 32;
  int grid_ny = 32;
};

ScanConfig parse_scan_config(const std::string& text);
GridSpec make_grid(const ScanConfig& config);

}  // namespace symsplit
