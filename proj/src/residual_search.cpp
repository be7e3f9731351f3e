#include "rigidity/residual_search.hpp"

#include "rigidity/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace rigidity {

SphericalOperatorField SphericalOperatorField::sample(const SphericalOperator& op,
                                                      const SphereGrid& grid) {
  SphericalOperatorField f;
  f.grid = grid;
  f.A11.resize(grid.n_theta2, grid.n_theta1);
  f.A12.resize(grid.n_theta2, grid.n_theta1);
  f.A22.resize(grid.n_theta2, grid.n_theta1);
  f.B1.resize(grid.n_theta2, grid.n_theta1);
  f.B2.resize(grid.n_theta2, grid.n_theta1);
  f.C.resize(grid.n_theta2, grid.n_theta1);
  for (int i = 0; i < grid.n_theta2; ++i) {
    for (int j = 0; j < grid.n_theta1; ++j) {
      SphericalOperatorCoeffs c =
          op.coefficients(Eigen::Vector2d(grid.theta1(j), grid.theta2(i)));
      f.A11(i, j) = c.A(0, 0);
      f.A12(i, j) = c.A(0, 1);
      f.A22(i, j) = c.A(1, 1);
      f.B1(i, j) = c.B(0);
      f.B2(i, j) = c.B(1);
      f.C(i, j) = c.C;
    }
  }
  return f;
}

SphericalOperatorField SphericalOperatorField::identity_laplacian(const SphereGrid& grid) {
  return sample(reduce_to_sphere(CoefficientField::identity(3)), grid);
}

ResidualFunctional::ResidualFunctional(SphericalOperatorField coeffs, DiffScheme scheme)
    : coeffs_(std::move(coeffs)),
      diff_(std::make_shared<SphereGridDifferentiator>(coeffs_.grid, scheme)) {
  weights_.resize(coeffs_.grid.n_theta2, coeffs_.grid.n_theta1);
  for (int i = 0; i < coeffs_.grid.n_theta2; ++i)
    weights_.row(i).setConstant(coeffs_.grid.weight(i));
}

Eigen::MatrixXd ResidualFunctional::apply(const Eigen::MatrixXd& g) const {
  ProfileDerivatives d = diff_->derivatives(g);
  return coeffs_.A11.cwiseProduct(d.d11) + 2.0 * coeffs_.A12.cwiseProduct(d.d12) +
         coeffs_.A22.cwiseProduct(d.d22) + coeffs_.B1.cwiseProduct(d.d1) +
         coeffs_.B2.cwiseProduct(d.d2) + coeffs_.C.cwiseProduct(g);
}

Eigen::MatrixXd ResidualFunctional::residual_field(const Eigen::MatrixXd& g) const {
  return apply(g);
}

double ResidualFunctional::value(const Eigen::MatrixXd& g) const {
  Eigen::MatrixXd r = apply(g);
  return r.cwiseProduct(r).cwiseProduct(weights_).sum();
}

Eigen::MatrixXd ResidualFunctional::gradient(const Eigen::MatrixXd& g) const {
  Eigen::MatrixXd wr = 2.0 * apply(g).cwiseProduct(weights_);
  Eigen::MatrixXd grad = coeffs_.C.cwiseProduct(wr);
  grad += diff_->row_d2_t(coeffs_.A11.cwiseProduct(wr));
  grad += diff_->row_d1_t(diff_->meridian_d1_t(2.0 * coeffs_.A12.cwiseProduct(wr)));
  grad += diff_->meridian_d2_t(coeffs_.A22.cwiseProduct(wr));
  grad += diff_->row_d1_t(coeffs_.B1.cwiseProduct(wr));
  grad += diff_->meridian_d1_t(coeffs_.B2.cwiseProduct(wr));
  return grad;
}

Eigen::MatrixXd ResidualFunctional::assemble_operator() const {
  const SphereGrid& grid = coeffs_.grid;
  const int n = static_cast<int>(grid.size());
  Eigen::MatrixXd L(n, n);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(grid.n_theta2, grid.n_theta1);
  for (int col = 0; col < n; ++col) {
    const auto [i, j] = grid.unindex(col);
    basis(i, j) = 1.0;
    Eigen::MatrixXd r = apply(basis);
    for (int row = 0; row < n; ++row) {
      const auto [ri, rj] = grid.unindex(row);
      L(row, col) = r(ri, rj);
    }
    basis(i, j) = 0.0;
  }
  return L;
}

Eigen::VectorXd ResidualFunctional::weight_vector() const {
  const SphereGrid& grid = coeffs_.grid;
  Eigen::VectorXd w(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto [i, j] = grid.unindex(k);
    w(k) = weights_(i, j);
  }
  return w;
}

double ResidualFunctional::weighted_norm(const Eigen::MatrixXd& g) const {
  return std::sqrt(g.cwiseProduct(g).cwiseProduct(weights_).sum());
}

namespace {

Eigen::MatrixXd linear_basis_values(const SphereGrid& grid, int axis) {
  Eigen::MatrixXd v(grid.n_theta2, grid.n_theta1);
  for (int i = 0; i < grid.n_theta2; ++i)
    for (int j = 0; j < grid.n_theta1; ++j) v(i, j) = grid.point(i, j)(axis);
  return v;
}

double weighted_inner(const SphereGrid& grid, const Eigen::MatrixXd& a,
                      const Eigen::MatrixXd& b) {
  double s = 0.0;
  for (int i = 0; i < grid.n_theta2; ++i) s += grid.weight(i) * a.row(i).dot(b.row(i));
  return s;
}

}  // namespace

NonlinearityReport nonlinearity_norm(const DiscretizedProfile& g) {
  const SphereGrid& grid = g.grid;
  std::array<Eigen::MatrixXd, 3> basis = {linear_basis_values(grid, 0),
                                          linear_basis_values(grid, 1),
                                          linear_basis_values(grid, 2)};
  Eigen::Matrix3d gram;
  Eigen::Vector3d rhs;
  for (int a = 0; a < 3; ++a) {
    rhs(a) = weighted_inner(grid, basis[a], g.values);
    for (int b = 0; b < 3; ++b) gram(a, b) = weighted_inner(grid, basis[a], basis[b]);
  }
  Eigen::Vector3d coef = gram.ldlt().solve(rhs);

  Eigen::MatrixXd residual = g.values;
  for (int a = 0; a < 3; ++a) residual -= coef(a) * basis[a];

  NonlinearityReport rep;
  rep.linear_coefficients = coef;
  rep.value = std::sqrt(weighted_inner(grid, residual, residual));
  rep.norm_g = std::sqrt(weighted_inner(grid, g.values, g.values));
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(grid.n_theta2, grid.n_theta1);
  rep.constant_component = weighted_inner(grid, ones, g.values) /
                           std::sqrt(weighted_inner(grid, ones, ones));
  return rep;
}

std::string to_string(SearchMethod m) {
  return m == SearchMethod::GradientDescent ? "gradient-descent" : "normal-equations";
}

SearchMethod search_method_from_string(const std::string& name) {
  if (name == "gradient-descent" || name == "gd") return SearchMethod::GradientDescent;
  if (name == "normal-equations" || name == "ne") return SearchMethod::NormalEquations;
  throw ConfigError("unknown search method '" + name + "'");
}

namespace {

MinimizeResult minimize_gradient_descent(const ResidualFunctional& functional,
                                         DiscretizedProfile g, const MinimizeOptions& options) {
  MinimizeResult result;
  result.method = to_string(SearchMethod::GradientDescent);

  const double norm0 = functional.weighted_norm(g.values);
  if (norm0 > 0) g.values /= norm0;

  double R = functional.value(g.values);
  result.residual_history.push_back(R);
  result.nonlinearity_history.push_back(nonlinearity_norm(g).value);

  double step = 1.0;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    if (R < options.tolerance) {
      result.converged = true;
      break;
    }
    Eigen::MatrixXd grad = functional.gradient(g.values);
    // Project onto the tangent space of the weighted unit sphere.
    Eigen::MatrixXd normal = functional.weights().cwiseProduct(g.values);
    const double nn = normal.cwiseProduct(normal).sum();
    Eigen::MatrixXd tangent = grad - (grad.cwiseProduct(normal).sum() / nn) * normal;
    const double slope = tangent.cwiseProduct(tangent).sum();
    if (slope < 1e-30) {
      result.converged = true;
      break;
    }

    // Armijo backtracking on the renormalized iterate.
    bool accepted = false;
    for (int back = 0; back < 60; ++back) {
      Eigen::MatrixXd trial = g.values - step * tangent;
      trial /= functional.weighted_norm(trial);
      const double Rt = functional.value(trial);
      if (Rt <= R - 1e-4 * step * slope) {
        g.values = trial;
        R = Rt;
        accepted = true;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no descent step at machine precision
    if ((iter + 1) % options.record_every == 0) {
      result.residual_history.push_back(R);
      result.nonlinearity_history.push_back(nonlinearity_norm(g).value);
    }
  }

  result.iterations = iter;
  result.final_residual = R;
  result.minimizer = std::move(g);
  result.nonlinearity = nonlinearity_norm(result.minimizer);
  if (result.final_residual < options.tolerance) result.converged = true;
  return result;
}

MinimizeResult minimize_normal_equations(const ResidualFunctional& functional,
                                         DiscretizedProfile g, const MinimizeOptions& options) {
  MinimizeResult result;
  result.method = to_string(SearchMethod::NormalEquations);

  const SphereGrid& grid = g.grid;
  const int n = static_cast<int>(grid.size());

  Eigen::VectorXd w = functional.weight_vector();
  Eigen::MatrixXd L = functional.assemble_operator();
  Eigen::MatrixXd Q = L.transpose() * w.asDiagonal() * L;

  // Small diagonal shift keeps the factorization definite on the kernel.
  const double shift = 1e-12 * Q.trace() / n;
  Eigen::MatrixXd M = Q + shift * Eigen::MatrixXd(w.asDiagonal());
  Eigen::LDLT<Eigen::MatrixXd> solver(M);

  auto flatten = [&](const Eigen::MatrixXd& f) {
    Eigen::VectorXd v(n);
    for (int k = 0; k < n; ++k) {
      const auto [i, j] = grid.unindex(k);
      v(k) = f(i, j);
    }
    return v;
  };
  auto unflatten = [&](const Eigen::VectorXd& v) {
    Eigen::MatrixXd f(grid.n_theta2, grid.n_theta1);
    for (int k = 0; k < n; ++k) {
      const auto [i, j] = grid.unindex(k);
      f(i, j) = v(k);
    }
    return f;
  };

  Eigen::VectorXd x = flatten(g.values);
  auto wnorm = [&](const Eigen::VectorXd& v) { return std::sqrt(v.dot(w.cwiseProduct(v))); };
  x /= wnorm(x);

  // Residuals are evaluated matrix-free: the squared nodal sum stays
  // nonnegative and has a far lower roundoff floor than x^T Q x.
  auto residual_at = [&](const Eigen::VectorXd& v) { return functional.value(unflatten(v)); };

  double R = residual_at(x);
  result.residual_history.push_back(R);
  g.values = unflatten(x);
  result.nonlinearity_history.push_back(nonlinearity_norm(g).value);

  const int budget = std::min(options.max_iterations, 64);
  int iter = 0;
  for (; iter < budget; ++iter) {
    if (R < options.tolerance) {
      result.converged = true;
      break;
    }
    Eigen::VectorXd next = solver.solve(w.cwiseProduct(x));
    next /= wnorm(next);
    const double Rn = residual_at(next);
    if (!(Rn < R)) break;  // stalled at the evaluation noise floor
    x = next;
    result.residual_history.push_back(Rn);
    g.values = unflatten(x);
    result.nonlinearity_history.push_back(nonlinearity_norm(g).value);
    const bool stalled = R - Rn <= 1e-6 * std::abs(R);
    R = Rn;
    if (stalled) {
      ++iter;
      break;
    }
  }

  result.iterations = iter;
  result.final_residual = R;
  g.values = unflatten(x);
  result.minimizer = std::move(g);
  result.nonlinearity = nonlinearity_norm(result.minimizer);
  if (result.final_residual < options.tolerance) result.converged = true;
  return result;
}

}  // namespace

MinimizeResult minimize_residual(const ResidualFunctional& functional,
                                 const DiscretizedProfile& init, const MinimizeOptions& options) {
  if (init.grid.n_theta1 != functional.grid().n_theta1 ||
      init.grid.n_theta2 != functional.grid().n_theta2) {
    throw ConfigError("profile and operator grids disagree");
  }
  if (!(functional.weighted_norm(init.values) > 0.0)) {
    throw ConfigError("initial profile must be nonzero for the |g| = 1 normalization");
  }
  if (options.method == SearchMethod::GradientDescent) {
    return minimize_gradient_descent(functional, init, options);
  }
  return minimize_normal_equations(functional, init, options);
}

DiscretizedProfile random_profile(const SphereGrid& grid, DiffScheme scheme, unsigned seed) {
  DiscretizedProfile g = DiscretizedProfile::zeros(grid, scheme);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < grid.n_theta2; ++i)
    for (int j = 0; j < grid.n_theta1; ++j) g.values(i, j) = dist(rng);
  return g;
}

namespace {

// Random low-order polynomial in the direction, coefficients in [-1, 1].
std::function<double(const Eigen::Vector3d&)> random_direction_poly(std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const double c0 = dist(rng);
  Eigen::Vector3d lin(dist(rng), dist(rng), dist(rng));
  Eigen::Matrix3d quad;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) quad(i, j) = quad(j, i) = dist(rng);
  return [c0, lin, quad](const Eigen::Vector3d& d) {
    return c0 + lin.dot(d) + d.dot(quad * d);
  };
}

}  // namespace

CoefficientField random_elliptic_field(unsigned seed, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in (0, 1]");
  std::mt19937 rng(seed);
  auto angle_poly = random_direction_poly(rng);
  auto mu_poly = random_direction_poly(rng);
  const double log_range = std::log(1.0 / lambda);

  CoefficientField f;
  f.dimension = 3;
  f.name = "random-elliptic";
  f.lambda = lambda;
  f.matrix = [angle_poly, mu_poly, log_range](const Eigen::VectorXd& x) {
    const Eigen::Vector3d d = Eigen::Vector3d(x).normalized();
    const double theta1 = std::atan2(d(1), d(0));
    const double theta2 = std::asin(std::clamp(d(2), -1.0, 1.0));
    Eigen::Matrix3d R = spherical_frame(Eigen::Vector2d(theta1, theta2));

    const double phi = angle_poly(d);
    const double mu = std::exp(log_range * std::tanh(mu_poly(d)));
    Eigen::Matrix2d rot;
    rot << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    Eigen::Matrix2d T = rot * Eigen::Vector2d(mu, 1.0 / mu).asDiagonal() * rot.transpose();

    Eigen::Matrix3d frame = Eigen::Matrix3d::Identity();
    frame.bottomRightCorner<2, 2>() = T;
    return Eigen::MatrixXd(R * frame * R.transpose());
  };
  return f;
}

std::string ObstructionCurve::csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "N,lambda,infeasible_count\n";
  for (const ObstructionEntry& e : entries) {
    out << e.resolution << "," << e.lambda << "," << e.infeasible_count << "\n";
  }
  return out.str();
}

ObstructionCurve obstruction_study(const HomogeneousFunction& u,
                                   const std::vector<int>& resolutions,
                                   const SynthesisOptions& opts) {
  ObstructionCurve curve;
  std::vector<int> sorted = resolutions;
  std::sort(sorted.begin(), sorted.end());
  for (int n : sorted) {
    FieldSynthesis fs = synthesize_field(u, n, opts);
    ObstructionEntry entry;
    entry.resolution = n;
    entry.lambda = fs.lambda;
    entry.infeasible_count = fs.infeasible_count;
    entry.condition_exceeded_count = fs.condition_exceeded_count;
    entry.feasible_count = fs.feasible_count;
    curve.entries.push_back(entry);
  }
  return curve;
}

}  // namespace rigidity
