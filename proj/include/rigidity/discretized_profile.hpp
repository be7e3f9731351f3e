#pragma once

// Nodal representation of spherical profiles on the equiangular grid and the
// discrete differentiation schemes. theta1 rows are periodic circles; theta2
// columns are differentiated along full meridian circles obtained by pairing
// the column at theta1 with the column at theta1 + pi across the poles, so no
// one-sided stencils appear anywhere. Schemes: 4th-order central differences
// or Fourier spectral differentiation (exact on band-limited profiles, which
// makes discretized linear functions exact kernel elements).

#include "rigidity/homogeneous.hpp"
#include "rigidity/sphere_grid.hpp"

#include <Eigen/Dense>

#include <string>

namespace rigidity {

enum class DiffScheme { Central4, Spectral };

std::string to_string(DiffScheme s);
DiffScheme diff_scheme_from_string(const std::string& name);

struct DiscretizedProfile {
  SphereGrid grid;
  DiffScheme scheme = DiffScheme::Spectral;
  Eigen::MatrixXd values;  // n_theta2 rows x n_theta1 columns

  static DiscretizedProfile sample(const SphereGrid& grid, DiffScheme scheme,
                                   const HomogeneousFunction& u);
  static DiscretizedProfile zeros(const SphereGrid& grid, DiffScheme scheme);
};

struct ProfileDerivatives {
  Eigen::MatrixXd d1;   // d/dtheta1
  Eigen::MatrixXd d2;   // d/dtheta2
  Eigen::MatrixXd d11;  // second derivatives
  Eigen::MatrixXd d12;
  Eigen::MatrixXd d22;
};

class SphereGridDifferentiator {
 public:
  SphereGridDifferentiator(const SphereGrid& grid, DiffScheme scheme);

  const SphereGrid& grid() const { return grid_; }
  DiffScheme scheme() const { return scheme_; }

  // Derivatives along theta1 rows.
  Eigen::MatrixXd row_d1(const Eigen::MatrixXd& f) const;
  Eigen::MatrixXd row_d2(const Eigen::MatrixXd& f) const;
  // Derivatives along pole-crossing meridian circles.
  Eigen::MatrixXd meridian_d1(const Eigen::MatrixXd& f) const;
  Eigen::MatrixXd meridian_d2(const Eigen::MatrixXd& f) const;
  // Transposed applications (adjoints with respect to the flat inner product).
  Eigen::MatrixXd row_d1_t(const Eigen::MatrixXd& f) const;
  Eigen::MatrixXd row_d2_t(const Eigen::MatrixXd& f) const;
  Eigen::MatrixXd meridian_d1_t(const Eigen::MatrixXd& f) const;
  Eigen::MatrixXd meridian_d2_t(const Eigen::MatrixXd& f) const;

  ProfileDerivatives derivatives(const Eigen::MatrixXd& f) const;

 private:
  Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& f, const Eigen::MatrixXd& op) const;
  Eigen::MatrixXd apply_pairs(const Eigen::MatrixXd& f, const Eigen::MatrixXd& op) const;

  SphereGrid grid_;
  DiffScheme scheme_;
  Eigen::MatrixXd row_d1_op_, row_d2_op_;    // n1 x n1 circulant
  Eigen::MatrixXd pair_d1_op_, pair_d2_op_;  // 2 n2 x 2 n2 on stacked column pairs
};

// Periodic differentiation matrices on n uniform nodes over a 2 pi circle.
Eigen::MatrixXd circle_d1(int n, DiffScheme scheme);
Eigen::MatrixXd circle_d2(int n, DiffScheme scheme);

}  // namespace rigidity
