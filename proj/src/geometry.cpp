#include "calabi/geometry.hpp"

#include <string>

#include "calabi/errors.hpp"

namespace calabi {

Turns unwrap_angle(std::span<const Tangent> path) {
  double total = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i].norm() < kZeroVectorTol)
      throw ZeroVector("vector " + std::to_string(i) + " has vanishing norm");
    if (i == 0) continue;
    const double gap = turn_gap(path[i - 1], path[i]);
    if (std::abs(gap) >= 0.25)
      throw StepTooCoarse("argument gap of " + std::to_string(gap) +
                          " turns between vectors " + std::to_string(i - 1) + " and " +
                          std::to_string(i));
    total += gap;
  }
  return Turns(total);
}

}  // namespace calabi
