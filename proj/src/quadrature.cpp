#include "calabi/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>

namespace calabi {
namespace {

// Nodes and weights on [-1, 1], cached per order.
const QuadratureRule& reference_rule(int order) {
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  QuadratureRule rule;
  for (int k = 0; k < order; ++k) {
    rule.nodes.push_back(solver.eigenvalues()(k));
    const double v = solver.eigenvectors()(0, k);
    rule.weights.push_back(2.0 * v * v);
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

}  // namespace

QuadratureRule gauss_legendre(int order, double a, double b) {
  const QuadratureRule& ref = reference_rule(order);
  QuadratureRule out;
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int k = 0; k < order; ++k) {
    out.nodes.push_back(mid + half * ref.nodes[k]);
    out.weights.push_back(half * ref.weights[k]);
  }
  return out;
}

QuadratureRule composite_gauss_legendre(int panels, int order, double a, double b) {
  QuadratureRule out;
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const QuadratureRule r = gauss_legendre(order, a + p * width, a + (p + 1) * width);
    out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
    out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
  }
  return out;
}

}  // namespace calabi
