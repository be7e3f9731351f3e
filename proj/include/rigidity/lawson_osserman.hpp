#pragma once

// The Lawson-Osserman cone R^4 -> R^3, its induced graph metric and inverse,
// and the desk-scale verification that each component solves the
// non-divergence system with the inverse-metric coefficients.

#include "rigidity/coefficient_field.hpp"
#include "rigidity/homogeneous.hpp"
#include "rigidity/sphere_grid.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace rigidity {

// Order-one homogeneous map R^4 \ {0} -> R^3 with analytic derivatives.
class ConeMap {
 public:
  explicit ConeMap(std::array<HomogeneousFunction, 3> components);

  static ConeMap lawson_osserman();

  const HomogeneousFunction& component(int k) const { return components_[k]; }

  Eigen::Vector3d value(const Eigen::Vector4d& x) const;
  // Rows are the gradients of the components (3 x 4).
  Eigen::Matrix<double, 3, 4> jacobian(const Eigen::Vector4d& x) const;
  Eigen::Matrix4d component_hessian(int k, const Eigen::Vector4d& x) const;

 private:
  std::array<HomogeneousFunction, 3> components_;
};

struct InducedMetric {
  Eigen::Vector4d point;
  Eigen::Matrix4d metric;   // g = I + J^T J
  Eigen::Matrix4d inverse;  // a = g^{-1}
};

InducedMetric induced_metric(const ConeMap& f, const Eigen::Vector4d& x);

// Inverse induced metric as a certified coefficient field over S^3; the
// certificate is the grid minimum of min(min-eig a, 1/max-eig a).
CoefficientField inverse_metric_field(const ConeMap& f, int resolution);

struct MinimalResidualReport {
  double residual_max = 0.0;       // max_k max_x |sum a_ij d_ij f^k|
  double lambda_certificate = 1.0;
  std::size_t points = 0;
  int resolution = 0;
};

// Residual of the non-divergence system with inverse-metric coefficients on
// an S^3 grid (subsampled to at most max_points nodes).
MinimalResidualReport minimal_residual(const ConeMap& f, int resolution,
                                       std::size_t max_points = 10000);

// The scalar saddle profile (x1^2 + x2^2 - x3^2 - x4^2)/|x| in R^4.
HomogeneousFunction lo_scalar_profile();

}  // namespace rigidity
