#pragma once

#include "subspace_lens/ingest.hpp"

#include <string>

namespace subspace_lens {

enum class SyntheticKind { kPlanarGrid, kTwoPlanes };

SyntheticKind parse_synthetic_kind(const std::string& name);
std::string to_string(SyntheticKind kind);

struct PlanarGridParams {
  int rows = 15;
  int cols = 15;
  double spacing = 0.1;
};

/// rows x cols regular grid on a plane through the origin, rotated into a
/// generic orientation in 3D. Row id r * cols + c is grid cell (r, c).
DataMatrix planar_grid(const PlanarGridParams& params = {});

/// True when grid cell (r, c) of `row_id` is not on the grid boundary.
bool planar_grid_interior(const PlanarGridParams& params, int row_id);

struct TwoPlanesParams {
  /// Plane A (label 0) spans the shared x-axis and y; plane B (label 1) spans
  /// the shared x-axis and z. Both are regular grids with the same spacing.
  int a_along_x = 10;
  int a_along_y = 20;
  int b_along_x = 20;
  int b_along_z = 10;
  double spacing = 0.1;
};

/// Two perpendicular half-planes meeting along the x-axis (an L in the y-z
/// section). Their unequal extents tilt the principal plane of the union, so
/// a PCA view is oblique to both: plane A is nearly face-on, plane B strongly
/// foreshortened.
DataMatrix two_planes(const TwoPlanesParams& params = {});

}  // namespace subspace_lens
