#pragma once

#include <vector>

namespace calabi {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `order` nodes on [a, b] (Golub-Welsch).
QuadratureRule gauss_legendre(int order, double a = 0.0, double b = 1.0);

/// `panels` equal panels on [a, b], each carrying a Gauss-Legendre rule.
QuadratureRule composite_gauss_legendre(int panels, int order, double a = 0.0, double b = 1.0);

/// Polar product grid for integrals over the disk: composite Gauss-Legendre
/// in the radius, midpoint (spectrally accurate for periodic data) in angle.
struct PolarGrid {
  int radial_panels = 16;
  int radial_order = 8;
  int angular = 256;

  int radial_nodes() const { return radial_panels * radial_order; }
  PolarGrid refined() const { return {2 * radial_panels, radial_order, 2 * angular}; }
};

}  // namespace calabi
