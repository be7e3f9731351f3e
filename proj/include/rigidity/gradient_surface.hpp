#pragma once

// Geometry of the gradient surface Sigma = grad u(S^2): fundamental forms and
// principal curvatures at non-singular directions, saddle-sign scans,
// refinement-based singular-set classification, supporting-plane probes, and
// leading-polynomial extraction at singular points.

#include "rigidity/homogeneous.hpp"
#include "rigidity/sphere_grid.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rigidity {

struct SurfaceSample {
  Eigen::Vector3d source;     // x on S^2
  Eigen::Vector3d image;      // grad u(x)
  Eigen::Vector3d normal;     // unit, +-x up to tolerance
  Eigen::Matrix2d first_form;
  Eigen::Matrix2d second_form;
  double kappa1 = 0.0;  // principal curvatures, kappa1 >= kappa2
  double kappa2 = 0.0;
};

// Rotates x to the pole, evaluates the first and second fundamental forms of
// the local graph representation, and returns the curvatures as eigenvalues
// of I^{-1} II. Throws SingularPointError below the tau_zero threshold.
SurfaceSample surface_sample(const HomogeneousFunction& u, const Eigen::Vector3d& x,
                             double tau_zero = 1e-8);

// Minimal rotation taking x to (0, 0, 1).
Eigen::Matrix3d rotation_to_pole(const Eigen::Vector3d& x);

struct SaddleScan {
  int resolution = 0;
  double tau_zero = 0.0;
  std::map<std::string, std::size_t> counts;
  std::vector<HessianSample> definite_witnesses;       // includes semidefinite
  double hessian_scale = 0.0;
};

// Classification counts over a sphere grid (n = 3) or S^3 grid (n = 4).
SaddleScan saddle_scan(const HomogeneousFunction& u, int resolution,
                       std::optional<double> tau_zero = std::nullopt);

enum class SingularSetClass { Empty, Finite, WholeSphere, Other };

std::string to_string(SingularSetClass c);

struct SingularCluster {
  std::vector<Eigen::Vector3d> points;
  double diameter = 0.0;  // angular, floored at one grid cell
};

struct SingularLevel {
  int resolution = 0;
  double capture_threshold = 0.0;
  std::size_t below_count = 0;
  bool all_below_absolute = false;
  std::vector<SingularCluster> clusters;
  double max_diameter = 0.0;
};

struct SingularSetReport {
  SingularSetClass classification = SingularSetClass::Other;
  double tau_zero = 0.0;     // absolute zero threshold
  double hessian_scale = 0.0;
  std::vector<SingularLevel> levels;  // resolution doubles per level
};

// Clusters sub-threshold grid directions and classifies the singular set by
// its behaviour under grid refinement. The per-level capture threshold scales
// with the cell size so that isolated zeros produce shrinking clusters; the
// absolute tau_zero only decides the whole-sphere case.
SingularSetReport singular_set_scan(const HomogeneousFunction& u, int base_resolution,
                                    std::optional<double> tau_zero = std::nullopt,
                                    int refinements = 3);

struct ContactReport {
  Eigen::Vector3d probe;          // nu
  double contact_value = 0.0;     // max of nu . grad u over the grid
  std::vector<Eigen::Vector3d> contact_sources;  // maximizing directions
  std::vector<Eigen::Vector3d> contact_images;
  std::size_t cluster_count = 0;
  double gap_to_second_cluster = 0.0;
  bool aligned_with_probe_axis = false;  // maximizers within tolerance of +-nu
  double alignment_tolerance = 0.0;      // radians
};

// Brute-force argmax of nu . grad u(x) over the grid; for solutions the
// contact set concentrates at +-nu, for general profiles it is reported as
// found.
ContactReport supporting_plane_probe(const HomogeneousFunction& u, const Eigen::Vector3d& nu,
                                     int resolution);

struct LeadingPolynomial {
  int order = 0;                   // first order with a non-vanishing fit
  Eigen::VectorXd coefficients;    // basis t1^k, t1^{k-1} t2, ..., t2^k
  double laplacian_defect = 0.0;   // norm of the coefficient vector of Lap P
  std::vector<double> annulus_radii;
  std::vector<double> relative_residuals;  // per annulus, finest last
};

struct LeadingPolynomialOptions {
  int k_max = 6;
  std::vector<double> radii = {0.1, 0.05, 0.025};
  int angles = 64;
  double vanish_tolerance = 1e-7;
  double fit_threshold = 0.1;  // fraction of the ring norm a fit must explain
};

// Least-squares fit of homogeneous polynomials on shrinking annuli around p.
// Requires g, grad g and D^2 g to vanish at p (translate by the linear part
// first). Throws NoVanishingError / FitAmbiguousError.
LeadingPolynomial leading_polynomial(const Profile& g, const Eigen::Vector2d& p,
                                     const LeadingPolynomialOptions& opts = {});

// Spherical profile of u recentred at x0 with its linear part removed: the
// pullback g(theta) = (u - grad u(x0) . x)(R^T omega(theta)) where R rotates
// x0 to (1, 0, 0). Used to feed singular points to leading_polynomial.
Profile recentered_spherical_profile(const HomogeneousFunction& u, const Eigen::Vector3d& x0);

// Surface dump rows: x, grad u(x), normal, kappa1, kappa2, class.
std::string surface_csv(const HomogeneousFunction& u, int resolution,
                        std::optional<double> tau_zero = std::nullopt);

}  // namespace rigidity
