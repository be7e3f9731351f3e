#include "rigidity/lawson_osserman.hpp"

#include "rigidity/parallel.hpp"

#include <cmath>

namespace rigidity {

ConeMap::ConeMap(std::array<HomogeneousFunction, 3> components)
    : components_(std::move(components)) {}

ConeMap ConeMap::lawson_osserman() {
  return ConeMap({bundled_function("lo-f1"), bundled_function("lo-f2"),
                  bundled_function("lo-f3")});
}

Eigen::Vector3d ConeMap::value(const Eigen::Vector4d& x) const {
  return {components_[0].value(x), components_[1].value(x), components_[2].value(x)};
}

Eigen::Matrix<double, 3, 4> ConeMap::jacobian(const Eigen::Vector4d& x) const {
  Eigen::Matrix<double, 3, 4> J;
  for (int k = 0; k < 3; ++k) J.row(k) = components_[k].gradient(x).transpose();
  return J;
}

Eigen::Matrix4d ConeMap::component_hessian(int k, const Eigen::Vector4d& x) const {
  return components_[k].hessian(x);
}

InducedMetric induced_metric(const ConeMap& f, const Eigen::Vector4d& x) {
  InducedMetric m;
  m.point = x;
  Eigen::Matrix<double, 3, 4> J = f.jacobian(x);
  m.metric = Eigen::Matrix4d::Identity() + J.transpose() * J;
  m.inverse = m.metric.ldlt().solve(Eigen::Matrix4d::Identity());
  return m;
}

CoefficientField inverse_metric_field(const ConeMap& f, int resolution) {
  Sphere3Grid grid = Sphere3Grid::with_resolution(resolution);
  double lambda = 1.0;
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      for (int k = 0; k < grid.n; ++k) {
        InducedMetric m = induced_metric(f, grid.point(i, j, k));
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(m.inverse);
        lambda = std::min(lambda, std::min(eig.eigenvalues()(0), 1.0 / eig.eigenvalues()(3)));
      }
    }
  }
  CoefficientField field;
  field.dimension = 4;
  field.name = "inverse-induced-metric";
  field.lambda = lambda;
  field.matrix = [f](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd(induced_metric(f, Eigen::Vector4d(x.normalized())).inverse);
  };
  return field;
}

MinimalResidualReport minimal_residual(const ConeMap& f, int resolution,
                                       std::size_t max_points) {
  Sphere3Grid grid = Sphere3Grid::with_resolution(resolution);
  const auto nodes = grid.subsample(max_points);

  std::vector<double> chunk_residual(nodes.size(), 0.0);
  std::vector<double> chunk_lambda(nodes.size(), 1.0);
  parallel_chunks(nodes.size(), [&](int, std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      const auto [i, j, k] = nodes[m];
      const Eigen::Vector4d x = grid.point(i, j, k);
      InducedMetric metric = induced_metric(f, x);
      double worst = 0.0;
      for (int comp = 0; comp < 3; ++comp) {
        worst = std::max(worst,
                         std::abs((metric.inverse * f.component_hessian(comp, x)).trace()));
      }
      chunk_residual[m] = worst;
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(metric.inverse);
      chunk_lambda[m] = std::min(eig.eigenvalues()(0), 1.0 / eig.eigenvalues()(3));
    }
  });

  MinimalResidualReport report;
  report.resolution = resolution;
  report.points = nodes.size();
  for (std::size_t m = 0; m < nodes.size(); ++m) {
    report.residual_max = std::max(report.residual_max, chunk_residual[m]);
    report.lambda_certificate = std::min(report.lambda_certificate, chunk_lambda[m]);
  }
  return report;
}

HomogeneousFunction lo_scalar_profile() { return bundled_function("lo-scalar"); }

}  // namespace rigidity
