#include "vsynth/grid.hpp"

#include <algorithm>

namespace vsynth {

void validate_geometry(const GridGeometry& geometry) {
  if (geometry.empty()) throw Error(Errc::EmptyGrid, "grid has a zero dimension");
  if (!(geometry.spacing.array() > 0.0).all() || !geometry.spacing.allFinite())
    throw Error(Errc::InvalidParams, "grid spacing must be positive and finite");
  if (!geometry.origin.allFinite()) throw Error(Errc::InvalidParams, "grid origin must be finite");
}

std::size_t count_set(const Mask& mask) {
  return static_cast<std::size_t>(
      std::count_if(mask.values().begin(), mask.values().end(), [](auto v) { return v != 0; }));
}

}  // namespace vsynth
