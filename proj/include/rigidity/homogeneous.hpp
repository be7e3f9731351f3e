#pragma once

// Calculus of homogeneous functions: evaluation of u, grad u, D^2 u in the
// projective chart and in spherical coordinates, finite-difference oracles,
// and saddle classification of Hessians restricted to the tangent space of
// the sphere.

#include "rigidity/profile.hpp"

#include <Eigen/Dense>

#include <string>

namespace rigidity {

inline constexpr double kDefaultPoleMargin = 1e-3;  // radians

// tau_zero default: 1e-8 * (1 + Frobenius scale of the Hessian family).
inline double default_tau_zero(double hessian_scale) {
  return 1e-8 * (1.0 + hessian_scale);
}

class HomogeneousFunction {
 public:
  explicit HomogeneousFunction(Profile profile, double alpha = 1.0);

  const Profile& profile() const { return profile_; }
  int dimension() const { return profile_.dimension; }
  double alpha() const { return alpha_; }

  // Full 2-jet at an ambient point, choosing a representation that covers x.
  Jet jet(const Eigen::VectorXd& x) const;

  double value(const Eigen::VectorXd& x) const { return jet(x).value; }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

 private:
  Profile profile_;
  double alpha_;
};

HomogeneousFunction bundled_function(const std::string& name);

// grad u(x1, x2, 1) = (h1, h2, h - x1 h1 - x2 h2) for the order-one
// extension u = x3 h(x1/x3, x2/x3).
Eigen::Vector3d gradient_chart(const Profile& h, const Eigen::Vector2d& p);

// D^2 u(x1, x2, 1) = B M B^T with B unit lower-triangular in the chart point
// and M the embedded 2x2 Hessian of h. Symmetric, annihilates (x1, x2, 1).
Eigen::Matrix3d hessian_chart(const Profile& h, const Eigen::Vector2d& p);

// D^2 u at the unit-sphere point with latitude coordinates theta, computed
// from the spherical restriction g via the orthonormal frame representation
// D^2 u = R H R^T. Throws PoleProximityError near |theta2| = pi/2.
Eigen::Matrix3d hessian_spherical(const Profile& g, const Eigen::Vector2d& theta,
                                  double pole_margin = kDefaultPoleMargin);

// The frame-component matrix H (rows/cols ordered radial, theta1, theta2).
Eigen::Matrix3d spherical_frame_hessian(const Profile& g, const Eigen::Vector2d& theta,
                                        double pole_margin = kDefaultPoleMargin);

// Orthonormal spherical frame (e_r, e_theta1, e_theta2) as matrix columns.
Eigen::Matrix3d spherical_frame(const Eigen::Vector2d& theta);
Eigen::Vector3d spherical_point(const Eigen::Vector2d& theta);

// Central finite differences of the value function; O(step^2).
Eigen::VectorXd fd_gradient(const HomogeneousFunction& u, const Eigen::VectorXd& x,
                            double step);
Eigen::MatrixXd fd_hessian(const HomogeneousFunction& u, const Eigen::VectorXd& x,
                           double step);

enum class HessianClass { Zero, Saddle, SemidefiniteNonzero, Definite };

std::string to_string(HessianClass c);

struct HessianSample {
  Eigen::VectorXd direction;       // unit x on S^{n-1}
  Eigen::MatrixXd hessian;         // full n x n symmetric matrix
  Eigen::VectorXd tangential;      // n-1 tangential eigenvalues, descending
  HessianClass classification = HessianClass::Zero;
  double frobenius_norm = 0.0;
};

// Projects M onto the tangent space of the unit direction x, classifies the
// tangential spectrum with zero threshold tau_zero.
HessianSample classify_hessian(const Eigen::MatrixXd& M, const Eigen::VectorXd& x,
                               double tau_zero);

// Orthonormal tangent basis at x from Gram-Schmidt on {e_i - (e_i . x) x},
// keeping the n-1 largest-norm candidates. Columns are the basis vectors.
Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& x);

}  // namespace rigidity
