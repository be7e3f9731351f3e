#pragma once

// Equiangular sample grids with half-cell offsets. S^2 uses latitude
// coordinates (theta1 in [0, 2pi), theta2 in (-pi/2, pi/2)); S^3 uses the
// three-angle hyperspherical product grid. Offsets keep nodes away from the
// coordinate poles.

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace rigidity {

struct SphereGrid {
  int n_theta1 = 0;  // columns, full circle
  int n_theta2 = 0;  // rows over (-pi/2, pi/2)

  // Resolution convention: N columns in theta1, N/2 rows in theta2.
  static SphereGrid with_resolution(int n);

  double dtheta1() const;
  double dtheta2() const;
  double theta1(int j) const;
  double theta2(int i) const;

  Eigen::Vector3d point(int i, int j) const;
  // Area weight cos(theta2) dtheta1 dtheta2 of the cell around node (i, j).
  double weight(int i) const;

  std::size_t size() const { return static_cast<std::size_t>(n_theta1) * n_theta2; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_theta1 + j; }
  std::pair<int, int> unindex(std::size_t k) const {
    return {static_cast<int>(k) / n_theta1, static_cast<int>(k) % n_theta1};
  }
};

struct Sphere3Grid {
  int n = 0;  // points per angle; phi1 in [0, 2pi), phi2 and phi3 in (0, pi)

  static Sphere3Grid with_resolution(int n);

  Eigen::Vector4d point(int i, int j, int k) const;
  Eigen::Vector3d angles(int i, int j, int k) const;
  // Volume weight sin^2(phi3) sin(phi2) dphi1 dphi2 dphi3.
  double weight(int i, int j, int k) const;

  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }

  // Deterministic strided subsample of at most max_points node indices.
  std::vector<std::array<int, 3>> subsample(std::size_t max_points) const;
};

}  // namespace rigidity
