#include "rigidity/sphere_grid.hpp"

#include "rigidity/errors.hpp"

#include <cmath>

namespace rigidity {

SphereGrid SphereGrid::with_resolution(int n) {
  if (n < 4 || n % 2 != 0) throw ConfigError("sphere grid resolution must be even and >= 4");
  SphereGrid g;
  g.n_theta1 = n;
  g.n_theta2 = n / 2;
  return g;
}

double SphereGrid::dtheta1() const { return 2.0 * M_PI / n_theta1; }
double SphereGrid::dtheta2() const { return M_PI / n_theta2; }

double SphereGrid::theta1(int j) const { return (j + 0.5) * dtheta1(); }
double SphereGrid::theta2(int i) const { return -M_PI / 2.0 + (i + 0.5) * dtheta2(); }

Eigen::Vector3d SphereGrid::point(int i, int j) const {
  const double t1 = theta1(j), t2 = theta2(i);
  return {std::cos(t2) * std::cos(t1), std::cos(t2) * std::sin(t1), std::sin(t2)};
}

double SphereGrid::weight(int i) const { return std::cos(theta2(i)) * dtheta1() * dtheta2(); }

Sphere3Grid Sphere3Grid::with_resolution(int n) {
  if (n < 4) throw ConfigError("S^3 grid resolution must be >= 4");
  Sphere3Grid g;
  g.n = n;
  return g;
}

Eigen::Vector3d Sphere3Grid::angles(int i, int j, int k) const {
  const double phi1 = (k + 0.5) * 2.0 * M_PI / n;
  const double phi2 = (j + 0.5) * M_PI / n;
  const double phi3 = (i + 0.5) * M_PI / n;
  return {phi1, phi2, phi3};
}

Eigen::Vector4d Sphere3Grid::point(int i, int j, int k) const {
  const Eigen::Vector3d a = angles(i, j, k);
  const double s3 = std::sin(a(2)), c3 = std::cos(a(2));
  const double s2 = std::sin(a(1)), c2 = std::cos(a(1));
  return {s3 * s2 * std::cos(a(0)), s3 * s2 * std::sin(a(0)), s3 * c2, c3};
}

double Sphere3Grid::weight(int i, int j, int k) const {
  const Eigen::Vector3d a = angles(i, j, k);
  const double d = (2.0 * M_PI / n) * (M_PI / n) * (M_PI / n);
  return std::sin(a(2)) * std::sin(a(2)) * std::sin(a(1)) * d;
}

std::vector<std::array<int, 3>> Sphere3Grid::subsample(std::size_t max_points) const {
  std::vector<std::array<int, 3>> nodes;
  const std::size_t total = size();
  const std::size_t stride = total <= max_points ? 1 : (total + max_points - 1) / max_points;
  nodes.reserve(total / stride + 1);
  for (std::size_t idx = 0; idx < total; idx += stride) {
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
    const std::size_t rem = idx % (static_cast<std::size_t>(n) * n);
    nodes.push_back({i, static_cast<int>(rem / n), static_cast<int>(rem % n)});
  }
  return nodes;
}

}  // namespace rigidity
