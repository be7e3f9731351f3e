#pragma once

// Coefficient laboratory: pointwise construction of uniformly elliptic
// matrices annihilating a saddle Hessian, certified coefficient fields over
// the sphere, the two-dimensional chart reduction, the spherical reduction,
// and the divergence-form coefficients with a weak-residual probe.

#include "rigidity/homogeneous.hpp"
#include "rigidity/sphere_grid.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rigidity {

// Symmetric matrix field over S^{n-1}, extended 0-homogeneously, with an
// ellipticity certificate lambda: lambda I <= A(x) <= lambda^{-1} I.
struct CoefficientField {
  int dimension = 3;
  std::string name;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> matrix;  // expects any x != 0
  double lambda = 1.0;

  Eigen::MatrixXd operator()(const Eigen::VectorXd& x) const { return matrix(x.normalized()); }

  static CoefficientField identity(int dimension);
};

enum class SynthesisStatus { Feasible, Infeasible, ConditionExceeded };

std::string to_string(SynthesisStatus s);

struct SynthesisOptions {
  double kappa_max = 1e6;
  double tau_zero = 1e-8;
};

struct PointwiseSynthesis {
  SynthesisStatus status = SynthesisStatus::Feasible;
  Eigen::MatrixXd matrix;       // valid when status == Feasible
  double lambda = 1.0;          // 1/sqrt(cond)
  double condition = 1.0;       // attained condition number (also for failures)
  double trace_product = 0.0;   // tr(A M)
};

// Builds A > 0 with tr(A M) = 0, diagonal in M's eigenbasis, normalized so
// that min-eig(A) * max-eig(A) = 1. M must annihilate the radial direction.
// Semidefinite nonzero tangential spectrum has no elliptic annihilator and
// reports Infeasible.
PointwiseSynthesis synthesize_pointwise(const Eigen::MatrixXd& M, const SynthesisOptions& opts = {});

struct SynthesisRecord {
  Eigen::VectorXd angles;  // grid angles (theta1, theta2) or (phi1, phi2, phi3)
  Eigen::VectorXd point;
  SynthesisStatus status;
  double lambda;
  double condition;
  double trace_product;
};

struct FieldSynthesis {
  CoefficientField field;
  double lambda = 1.0;          // min pointwise lambda over feasible nodes
  double max_abs_trace = 0.0;   // max |tr(A D^2 u)| over feasible nodes
  std::size_t feasible_count = 0;
  std::size_t infeasible_count = 0;
  std::size_t condition_exceeded_count = 0;
  std::vector<Eigen::VectorXd> infeasible_points;
  std::vector<SynthesisRecord> records;

  std::string feasibility_csv() const;
};

// Per-point synthesis of a coefficient field annihilating D^2 u over a grid
// on S^{n-1} (n = 3 grids are SphereGrid resolutions, n = 4 grids are
// Sphere3Grid resolutions). Never aborts on infeasible nodes.
FieldSynthesis synthesize_field(const HomogeneousFunction& u, int resolution,
                                const SynthesisOptions& opts = {});

// 2x2 chart coefficients A(x1, x2): the trace identity
// sum a_ij D_ij u = sum A_ij h_ij holds for every C^2 chart profile.
struct ReducedChartCoefficients {
  CoefficientField source;
  Eigen::Matrix2d matrix(const Eigen::Vector2d& p) const;
  double lambda(const Eigen::Vector2d& p) const;  // local ellipticity
};

ReducedChartCoefficients reduce_to_chart(const CoefficientField& a);

// Spherical operator coefficients: sum A_ij d^2 g + sum B_i d g + C g equals
// tr(a D^2 u) at the corresponding unit-sphere point for u = r g.
struct SphericalOperatorCoeffs {
  Eigen::Matrix2d A;
  Eigen::Vector2d B;
  double C = 0.0;
};

struct SphericalOperator {
  CoefficientField source;
  double pole_margin = kDefaultPoleMargin;

  SphericalOperatorCoeffs coefficients(const Eigen::Vector2d& theta) const;
  // Residual of the operator applied to a spherical profile at theta.
  double apply(const Profile& g, const Eigen::Vector2d& theta) const;
};

SphericalOperator reduce_to_sphere(const CoefficientField& a);

// Divergence-form coefficients of the first-derivative equation:
// B11 = A11/A22, B12 = 2 A12/A22, B21 = 0, B22 = 1.
using ChartMatrixField = std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>;

ChartMatrixField divergence_coefficients(const ChartMatrixField& A);

// Translated squared-cosine bump test functions on [-0.5, 0.5]^2.
struct BumpFamily {
  std::vector<Eigen::Vector2d> centers;
  double radius = 0.2;

  static BumpFamily default_family();  // 9 bumps on a 3x3 grid of centers
  double value(int k, const Eigen::Vector2d& p) const;
  Eigen::Vector2d gradient(int k, const Eigen::Vector2d& p) const;
};

// max_k | integral (B grad w) . grad phi_k | by tensor-product Gauss-Legendre
// quadrature over each bump's support square.
double weak_residual(const ChartMatrixField& B, const JetFn& w,
                     const BumpFamily& bumps = BumpFamily::default_family(),
                     int quadrature_points = 16);

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace rigidity
