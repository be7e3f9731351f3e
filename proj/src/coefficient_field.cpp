#include "rigidity/coefficient_field.hpp"

#include "rigidity/errors.hpp"
#include "rigidity/parallel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rigidity {

CoefficientField CoefficientField::identity(int dimension) {
  CoefficientField f;
  f.dimension = dimension;
  f.name = "identity";
  f.matrix = [dimension](const Eigen::VectorXd&) {
    return Eigen::MatrixXd(Eigen::MatrixXd::Identity(dimension, dimension));
  };
  f.lambda = 1.0;
  return f;
}

std::string to_string(SynthesisStatus s) {
  switch (s) {
    case SynthesisStatus::Feasible: return "feasible";
    case SynthesisStatus::Infeasible: return "infeasible";
    case SynthesisStatus::ConditionExceeded: return "condition-exceeded";
  }
  return "unknown";
}

PointwiseSynthesis synthesize_pointwise(const Eigen::MatrixXd& M, const SynthesisOptions& opts) {
  const int n = static_cast<int>(M.rows());
  PointwiseSynthesis out;

  Eigen::MatrixXd S = 0.5 * (M + M.transpose());
  if (S.norm() < opts.tau_zero) {
    out.matrix = Eigen::MatrixXd::Identity(n, n);
    out.lambda = 1.0;
    out.condition = 1.0;
    out.trace_product = 0.0;
    return out;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
  const Eigen::VectorXd mu = eig.eigenvalues();
  const Eigen::MatrixXd V = eig.eigenvectors();

  // Free directions (the radial kernel and zero tangential eigenvalues) keep
  // weight one; the signed directions are balanced so tr(A M) = 0.
  double pos_sum = 0.0, neg_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (mu(i) > opts.tau_zero) pos_sum += mu(i);
    else if (mu(i) < -opts.tau_zero) neg_sum -= mu(i);
  }
  if (pos_sum == 0.0 || neg_sum == 0.0) {
    out.status = SynthesisStatus::Infeasible;
    out.condition = std::numeric_limits<double>::infinity();
    return out;
  }

  const double w_pos = std::max(1.0, neg_sum / pos_sum);
  const double w_neg = std::max(1.0, pos_sum / neg_sum);
  Eigen::VectorXd weights(n);
  double trace = 0.0;
  for (int i = 0; i < n; ++i) {
    if (mu(i) > opts.tau_zero) weights(i) = w_pos;
    else if (mu(i) < -opts.tau_zero) weights(i) = w_neg;
    else weights(i) = 1.0;
    trace += weights(i) * mu(i);
  }

  const double w_min = weights.minCoeff();
  const double w_max = weights.maxCoeff();
  out.condition = w_max / w_min;
  if (out.condition > opts.kappa_max) {
    out.status = SynthesisStatus::ConditionExceeded;
    return out;
  }

  // Scale so min-eig * max-eig = 1; then lambda = 1/sqrt(cond).
  weights /= std::sqrt(w_min * w_max);
  out.matrix = V * weights.asDiagonal() * V.transpose();
  out.lambda = 1.0 / std::sqrt(out.condition);
  out.trace_product = trace / std::sqrt(w_min * w_max);
  return out;
}

namespace {

struct GridNode {
  Eigen::VectorXd angles;
  Eigen::VectorXd point;
};

std::vector<GridNode> synthesis_nodes(int dimension, int resolution) {
  std::vector<GridNode> nodes;
  if (dimension == 3) {
    SphereGrid grid = SphereGrid::with_resolution(resolution);
    nodes.reserve(grid.size());
    for (int i = 0; i < grid.n_theta2; ++i)
      for (int j = 0; j < grid.n_theta1; ++j)
        nodes.push_back({Eigen::Vector2d(grid.theta1(j), grid.theta2(i)), grid.point(i, j)});
  } else if (dimension == 4) {
    Sphere3Grid grid = Sphere3Grid::with_resolution(resolution);
    nodes.reserve(grid.size());
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j)
        for (int k = 0; k < grid.n; ++k)
          nodes.push_back({grid.angles(i, j, k), grid.point(i, j, k)});
  } else {
    throw ConfigError("synthesize_field supports dimensions 3 and 4");
  }
  return nodes;
}

}  // namespace

FieldSynthesis synthesize_field(const HomogeneousFunction& u, int resolution,
                                const SynthesisOptions& opts) {
  const int n = u.dimension();
  std::vector<GridNode> nodes = synthesis_nodes(n, resolution);

  // Scale-aware zero threshold from a first pass over the Hessian norms.
  std::vector<Eigen::MatrixXd> hessians(nodes.size());
  std::vector<double> norms(nodes.size());
  parallel_chunks(nodes.size(), [&](int, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      hessians[k] = u.hessian(nodes[k].point);
      norms[k] = hessians[k].norm();
    }
  });
  double scale = 0.0;
  for (double v : norms) scale = std::max(scale, v);

  SynthesisOptions local = opts;
  local.tau_zero = default_tau_zero(scale);

  FieldSynthesis out;
  out.records.resize(nodes.size());
  parallel_chunks(nodes.size(), [&](int, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      PointwiseSynthesis ps = synthesize_pointwise(hessians[k], local);
      out.records[k] = {nodes[k].angles, nodes[k].point, ps.status, ps.lambda, ps.condition,
                        ps.trace_product};
    }
  });

  out.lambda = 1.0;
  for (const SynthesisRecord& rec : out.records) {
    switch (rec.status) {
      case SynthesisStatus::Feasible:
        ++out.feasible_count;
        out.lambda = std::min(out.lambda, rec.lambda);
        out.max_abs_trace = std::max(out.max_abs_trace, std::abs(rec.trace_product));
        break;
      case SynthesisStatus::Infeasible:
        ++out.infeasible_count;
        out.infeasible_points.push_back(rec.point);
        break;
      case SynthesisStatus::ConditionExceeded:
        ++out.condition_exceeded_count;
        break;
    }
  }

  HomogeneousFunction u_copy = u;
  CoefficientField field;
  field.dimension = n;
  field.name = "synthesized(" + u.profile().name + ")";
  field.lambda = out.lambda;
  field.matrix = [u_copy, local](const Eigen::VectorXd& x) {
    PointwiseSynthesis ps = synthesize_pointwise(u_copy.hessian(x.normalized()), local);
    if (ps.status != SynthesisStatus::Feasible) {
      throw SingularPointError("no elliptic annihilator at the requested direction");
    }
    return ps.matrix;
  };
  out.field = field;
  return out;
}

std::string FieldSynthesis::feasibility_csv() const {
  std::ostringstream csv;
  csv.precision(17);
  const bool s2 = !records.empty() && records.front().angles.size() == 2;
  csv << (s2 ? "theta1,theta2,lambda_pointwise,status\n"
             : "phi1,phi2,phi3,lambda_pointwise,status\n");
  for (const SynthesisRecord& rec : records) {
    for (int i = 0; i < rec.angles.size(); ++i) csv << rec.angles(i) << ",";
    if (rec.status == SynthesisStatus::Feasible) csv << rec.lambda;
    csv << "," << to_string(rec.status) << "\n";
  }
  return csv.str();
}

Eigen::Matrix2d ReducedChartCoefficients::matrix(const Eigen::Vector2d& p) const {
  Eigen::Vector3d x(p(0), p(1), 1.0);
  Eigen::Matrix3d a = source(x);
  Eigen::Matrix3d B = Eigen::Matrix3d::Identity();
  B(2, 0) = -p(0);
  B(2, 1) = -p(1);
  // tr(a D^2 u) = tr((B^T a B) M) with M the embedded chart Hessian, so the
  // chart coefficients are the upper-left block of the congruence.
  Eigen::Matrix3d congruence = B.transpose() * a * B;
  return congruence.topLeftCorner<2, 2>();
}

double ReducedChartCoefficients::lambda(const Eigen::Vector2d& p) const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(matrix(p));
  const double lo = eig.eigenvalues()(0);
  const double hi = eig.eigenvalues()(1);
  if (lo <= 0.0) return 0.0;
  return std::min(lo, 1.0 / hi);
}

ReducedChartCoefficients reduce_to_chart(const CoefficientField& a) {
  if (a.dimension != 3) throw ConfigError("chart reduction requires a three-dimensional field");
  return ReducedChartCoefficients{a};
}

SphericalOperatorCoeffs SphericalOperator::coefficients(const Eigen::Vector2d& theta) const {
  if (std::abs(theta(1)) >= M_PI / 2.0 - pole_margin) {
    throw PoleProximityError("spherical operator coefficients blow up at the poles");
  }
  const double c = std::cos(theta(1));
  const double s = std::sin(theta(1));
  Eigen::Matrix3d R = spherical_frame(theta);
  Eigen::Matrix3d frame = R.transpose() * source(spherical_point(theta)) * R;

  // Expansion of tr(a R H R^T) over the derivatives of g; the radial row of
  // the frame Hessian vanishes, so only the tangential block of a enters.
  SphericalOperatorCoeffs op;
  op.A(0, 0) = frame(1, 1) / (c * c);
  op.A(0, 1) = frame(1, 2) / c;
  op.A(1, 0) = op.A(0, 1);
  op.A(1, 1) = frame(2, 2);
  op.B(0) = 2.0 * frame(1, 2) * s / (c * c);
  op.B(1) = -frame(1, 1) * s / c;
  op.C = frame(1, 1) + frame(2, 2);
  return op;
}

double SphericalOperator::apply(const Profile& g, const Eigen::Vector2d& theta) const {
  SphericalOperatorCoeffs op = coefficients(theta);
  Jet gj = g.spherical_jet(theta);
  double res = op.C * gj.value;
  for (int i = 0; i < 2; ++i) {
    res += op.B(i) * gj.grad(i);
    for (int j = 0; j < 2; ++j) res += op.A(i, j) * gj.hess(i, j);
  }
  return res;
}

SphericalOperator reduce_to_sphere(const CoefficientField& a) {
  if (a.dimension != 3) throw ConfigError("spherical reduction requires a three-dimensional field");
  return SphericalOperator{a, kDefaultPoleMargin};
}

ChartMatrixField divergence_coefficients(const ChartMatrixField& A) {
  return [A](const Eigen::Vector2d& p) {
    Eigen::Matrix2d a = A(p);
    if (!(a(1, 1) > 1e-14)) {
      throw DegenerateCoefficientError("divergence coefficients require A22 > 0");
    }
    Eigen::Matrix2d B;
    B << a(0, 0) / a(1, 1), 2.0 * a(0, 1) / a(1, 1), 0.0, 1.0;
    return B;
  };
}

BumpFamily BumpFamily::default_family() {
  BumpFamily fam;
  fam.radius = 0.2;
  for (double cy : {-0.25, 0.0, 0.25})
    for (double cx : {-0.25, 0.0, 0.25}) fam.centers.emplace_back(cx, cy);
  return fam;
}

double BumpFamily::value(int k, const Eigen::Vector2d& p) const {
  const double r = (p - centers[k]).norm();
  if (r >= radius) return 0.0;
  const double c = std::cos(M_PI * r / (2.0 * radius));
  return c * c;
}

Eigen::Vector2d BumpFamily::gradient(int k, const Eigen::Vector2d& p) const {
  const Eigen::Vector2d d = p - centers[k];
  const double r = d.norm();
  if (r >= radius || r == 0.0) return Eigen::Vector2d::Zero();
  const double slope = -(M_PI / (2.0 * radius)) * std::sin(M_PI * r / radius);
  return (slope / r) * d;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton iteration on P_n from the Chebyshev initial guess.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

double weak_residual(const ChartMatrixField& B, const JetFn& w, const BumpFamily& bumps,
                     int quadrature_points) {
  std::vector<double> nodes, weights;
  gauss_legendre(quadrature_points, nodes, weights);

  double worst = 0.0;
  for (std::size_t k = 0; k < bumps.centers.size(); ++k) {
    const Eigen::Vector2d c = bumps.centers[k];
    const double rho = bumps.radius;
    double integral = 0.0;
    for (int iy = 0; iy < quadrature_points; ++iy) {
      for (int ix = 0; ix < quadrature_points; ++ix) {
        Eigen::Vector2d p = c + rho * Eigen::Vector2d(nodes[ix], nodes[iy]);
        Eigen::Vector2d grad_phi = bumps.gradient(static_cast<int>(k), p);
        if (grad_phi.isZero(0.0)) continue;
        Jet wj = eval_jet(w, p);
        Eigen::Vector2d grad_w(wj.grad(0), wj.grad(1));
        integral += weights[ix] * weights[iy] * (B(p) * grad_w).dot(grad_phi);
      }
    }
    integral *= rho * rho;  // Jacobian of the [-1,1]^2 -> support map
    worst = std::max(worst, std::abs(integral));
  }
  return worst;
}

}  // namespace rigidity
