#pragma once

#include "symsplit/geometry.hpp"
#include "symsplit/matrix.hpp"

#include <cstdint>
#include <vector>

namespace symsplit {

/// Ellipse in normalized [-1,1]^2 coordinates; density adds to every point
/// inside.
struct Ellipse {
  double x0 = 0.0;
  double y0 = 0.0;
  double a = 1.0;      // semi-axis along the rotated x direction
  double b = 1.0;      // semi-axis along the rotated y direction
  double angle = 0.0;  // counterclockwise rotation, radians
  double density = 0.0;

  bool contains(double x, double y) const;
};

/// The standard 10-ellipse Shepp-Logan head phantom.
std::vector<Ellipse> shepp_logan_ellipses();

/// Voxel image in snake order over its grid.
struct PhantomImage {
  GridSpec grid;
  Vector values;  // length grid.cell_count(), snake order
  double min_value = 0.0;
  double max_value = 0.0;
};

/// Samples each voxel center against the ellipse list. Normalized phantom
/// coordinates map onto the grid's physical rectangle.
PhantomImage rasterize(const std::vector<Ellipse>& ellipses,
                       const GridSpec& grid);

/// p = a * f, accumulated so that a centrosymmetric matrix applied to a
/// mirror-symmetric image yields an exactly mirror-symmetric projection
/// (mirror column pairs are added together before entering the row sum).
Vector forward_project(const Matrix& a, const Vector& f);

/// Same, plus iid Gaussian noise of the given sigma; deterministic for a
/// fixed seed.
Vector forward_project(const Matrix& a, const Vector& f, double noise_sigma,
                       std::uint64_t seed);

}  // namespace symsplit
