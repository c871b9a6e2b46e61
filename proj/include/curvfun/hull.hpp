#pragma once

#include "curvfun/common.hpp"

#include <cstddef>
#include <vector>

namespace curvfun {

struct HullVolume {
  double volume = 0.0;
  std::size_t vertices = 0;
  /// Set when the input spans less than a full-dimensional set; volume is 0.
  bool degenerate = false;
};

/// Volume of the convex hull of points in R^dim (dim 2 or 3; for dim 2 the
/// third coordinate is ignored). dim 2 uses the monotone chain plus the
/// shoelace formula, dim 3 an incremental hull summed as tetrahedra from an
/// interior point.
HullVolume hull_volume(const std::vector<Vec>& points, int dim);

}  // namespace curvfun
