#pragma once

// Rigidity experiments: the weighted least-squares residual functional of the
// spherical operator over discretized profiles, distance-to-linear seminorm,
// residual minimization searches, random uniformly elliptic fields, and
// ellipticity-obstruction refinement studies.

#include "rigidity/coefficient_field.hpp"
#include "rigidity/discretized_profile.hpp"

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

namespace rigidity {

// Operator coefficients evaluated at every grid node.
struct SphericalOperatorField {
  SphereGrid grid;
  Eigen::MatrixXd A11, A12, A22, B1, B2, C;

  static SphericalOperatorField sample(const SphericalOperator& op, const SphereGrid& grid);
  static SphericalOperatorField identity_laplacian(const SphereGrid& grid);
};

// R[g] = sum_nodes w(theta) (A : d2 g + B . d g + C g)^2 with w the cos(theta2)
// area weights. Linear in g inside the square, so R is a quadratic form.
class ResidualFunctional {
 public:
  ResidualFunctional(SphericalOperatorField coeffs, DiffScheme scheme);

  const SphereGrid& grid() const { return coeffs_.grid; }
  DiffScheme scheme() const { return diff_->scheme(); }
  const Eigen::MatrixXd& weights() const { return weights_; }

  Eigen::MatrixXd residual_field(const Eigen::MatrixXd& g) const;
  double value(const Eigen::MatrixXd& g) const;
  // Exact gradient of the discrete functional with respect to nodal values.
  Eigen::MatrixXd gradient(const Eigen::MatrixXd& g) const;

  // Dense matrix L with residual = L vec(g); rows and columns in row-major
  // node order (i * n_theta1 + j).
  Eigen::MatrixXd assemble_operator() const;
  Eigen::VectorXd weight_vector() const;

  double weighted_norm(const Eigen::MatrixXd& g) const;

 private:
  Eigen::MatrixXd apply(const Eigen::MatrixXd& g) const;

  SphericalOperatorField coeffs_;
  std::shared_ptr<SphereGridDifferentiator> diff_;
  Eigen::MatrixXd weights_;
};

struct NonlinearityReport {
  double value = 0.0;             // weighted L2 distance to the linear span
  double norm_g = 0.0;            // weighted L2 norm of g
  Eigen::Vector3d linear_coefficients = Eigen::Vector3d::Zero();
  double constant_component = 0.0;  // weighted mean (constants are not linear)
};

// L2(S^2) norm of g minus its projection onto span{x1, x2, x3} restricted to
// the sphere; constants are excluded from the span and reported separately.
NonlinearityReport nonlinearity_norm(const DiscretizedProfile& g);

enum class SearchMethod { GradientDescent, NormalEquations };

std::string to_string(SearchMethod m);
SearchMethod search_method_from_string(const std::string& name);

struct MinimizeOptions {
  SearchMethod method = SearchMethod::NormalEquations;
  int max_iterations = 10000;
  double tolerance = 1e-10;
  int record_every = 1;
};

struct MinimizeResult {
  DiscretizedProfile minimizer;
  std::vector<double> residual_history;      // R per recorded iteration
  std::vector<double> nonlinearity_history;  // relative to the profile norm
  std::string method;
  bool converged = false;
  int iterations = 0;
  double final_residual = 0.0;
  NonlinearityReport nonlinearity;
};

// Minimizes R over nodal profiles with the weighted normalization |g| = 1.
// Gradient descent uses Armijo line search on the sphere of profiles; the
// normal-equations method performs shifted inverse iterations on the
// quadratic form (each step solves the regularized normal equations).
MinimizeResult minimize_residual(const ResidualFunctional& functional,
                                 const DiscretizedProfile& init,
                                 const MinimizeOptions& options = {});

DiscretizedProfile random_profile(const SphereGrid& grid, DiffScheme scheme, unsigned seed);

// Smooth random uniformly elliptic field on R^3 \ {0}: eigenvalues
// {1, mu(x), 1/mu(x)} with mu in [lambda, 1/lambda] and a rotating tangential
// eigenframe, both driven by low-order polynomials in the direction.
CoefficientField random_elliptic_field(unsigned seed, double lambda);

struct ObstructionEntry {
  int resolution = 0;
  double lambda = 0.0;
  std::size_t infeasible_count = 0;
  std::size_t condition_exceeded_count = 0;
  std::size_t feasible_count = 0;
};

struct ObstructionCurve {
  std::vector<ObstructionEntry> entries;  // sorted by resolution
  std::string csv() const;                // N,lambda,infeasible_count
};

ObstructionCurve obstruction_study(const HomogeneousFunction& u,
                                   const std::vector<int>& resolutions,
                                   const SynthesisOptions& opts = {});

}  // namespace rigidity
