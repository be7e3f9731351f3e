#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rigidity/coefficient_field.hpp"
#include "rigidity/homogeneous.hpp"
#include "rigidity/lawson_osserman.hpp"

#include <random>

using namespace rigidity;

TEST_CASE("lo_map: frozen values and homogeneity") {
  ConeMap f = ConeMap::lawson_osserman();
  const double c = std::sqrt(5.0) / 2.0;

  Eigen::Vector3d v = f.value(Eigen::Vector4d(1, 0, 0, 0));
  CHECK((v - Eigen::Vector3d(c, 0, 0)).norm() < 1e-14);

  v = f.value(Eigen::Vector4d(0, 0, 1, 0));
  CHECK((v - Eigen::Vector3d(-c, 0, 0)).norm() < 1e-14);

  std::mt19937 rng(8);
  std::normal_distribution<double> gauss;
  for (int k = 0; k < 20; ++k) {
    Eigen::Vector4d x(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
    if (x.norm() < 0.3) continue;
    CHECK((f.value(2.0 * x) - 2.0 * f.value(x)).norm() < 1e-12 * (1.0 + f.value(x).norm()));
  }
}

TEST_CASE("jacobian matches finite differences of the map") {
  ConeMap f = ConeMap::lawson_osserman();
  Eigen::Vector4d x(0.8, -0.4, 0.5, 1.1);
  Eigen::Matrix<double, 3, 4> J = f.jacobian(x);
  const double h = 1e-6;
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector4d xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    Eigen::Vector3d col = (f.value(xp) - f.value(xm)) / (2 * h);
    CHECK((J.col(i) - col).norm() < 1e-8);
  }
}

TEST_CASE("induced_metric: g >= I, exact inverse, frozen value at e1") {
  ConeMap f = ConeMap::lawson_osserman();
  std::mt19937 rng(21);
  std::normal_distribution<double> gauss;
  int tested = 0;
  while (tested < 1000) {
    Eigen::Vector4d x(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
    if (x.norm() < 0.3) continue;
    ++tested;
    InducedMetric m = induced_metric(f, x);
    CHECK((m.metric - m.metric.transpose()).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(m.metric);
    CHECK(eig.eigenvalues()(0) >= 1.0 - 1e-12);
    CHECK((m.inverse * m.metric - Eigen::Matrix4d::Identity()).norm() < 1e-12);
  }

  // Regression value computed from the analytic Jacobian at e1.
  InducedMetric m = induced_metric(f, Eigen::Vector4d(1, 0, 0, 0));
  Eigen::Matrix4d expected = Eigen::Vector4d(9.0 / 4.0, 1.0, 6.0, 6.0).asDiagonal();
  CHECK((m.metric - expected).norm() < 1e-12);

  // 0-homogeneity of the metric.
  Eigen::Vector4d y(0.3, 0.7, -0.2, 0.5);
  CHECK((induced_metric(f, y).metric - induced_metric(f, Eigen::Vector4d(3.0 * y)).metric)
            .norm() < 1e-11);
}

TEST_CASE("minimal_residual: linear map is exactly flat") {
  Eigen::Matrix<double, 3, 4> M;
  M << 1, 0, 2, -1, 0, 1, 1, 0, 3, -2, 0, 1;
  auto component = [&M](int k) {
    Eigen::Vector4d row = M.row(k);
    return HomogeneousFunction(Profile::from_ambient(
        "linear-row", 4,
        [row](const std::vector<Jet>& x) {
          Jet s = Jet::constant(x[0].vars(), 0.0);
          for (int i = 0; i < 4; ++i) s = s + row(i) * x[i];
          return s;
        }));
  };
  ConeMap f({component(0), component(1), component(2)});
  MinimalResidualReport rep = minimal_residual(f, 8, 2000);
  CHECK(rep.residual_max < 1e-12);
}

TEST_CASE("minimal_residual: the Lawson-Osserman cone solves the system") {
  ConeMap f = ConeMap::lawson_osserman();
  MinimalResidualReport rep = minimal_residual(f, 16, 4000);
  CHECK(rep.residual_max < 1e-6);
  CHECK(rep.lambda_certificate > 0.0);

  // Resolution only changes the sample set, not the (analytic) residual size.
  MinimalResidualReport rep2 = minimal_residual(f, 24, 4000);
  CHECK(rep2.residual_max < 1e-6);
}

TEST_CASE("minimal_residual: perturbed map registers a residual") {
  HomogeneousFunction p1(Profile::from_ambient(
      "lo-f1-perturbed", 4,
      [](const std::vector<Jet>& x) {
        Jet r = norm(x);
        const double c = std::sqrt(5.0) / 2.0;
        Jet base = c * (x[0] * x[0] + x[1] * x[1] - x[2] * x[2] - x[3] * x[3]) / r;
        return base + 1e-2 * (x[0] * x[0] / r);
      }));
  ConeMap f({p1, bundled_function("lo-f2"), bundled_function("lo-f3")});
  MinimalResidualReport rep = minimal_residual(f, 12, 3000);
  CHECK(rep.residual_max > 1e-3);
}

TEST_CASE("lo_scalar_profile: substitution, homogeneity, coefficient existence") {
  HomogeneousFunction u = lo_scalar_profile();
  CHECK(u.value(Eigen::Vector4d(1, 0, 0, 0)) == doctest::Approx(1.0));
  Eigen::Vector4d x(0.4, -0.2, 0.8, 0.1);
  CHECK(u.value(3.0 * x) == doctest::Approx(3.0 * u.value(x)));

  FieldSynthesis fs = synthesize_field(u, 12);
  CHECK(fs.infeasible_count == 0);
}

TEST_CASE("inverse_metric_field carries a positive certificate") {
  ConeMap f = ConeMap::lawson_osserman();
  CoefficientField a = inverse_metric_field(f, 8);
  CHECK(a.lambda > 0.0);
  CHECK(a.lambda <= 1.0);
  Eigen::Vector4d x(0.3, 0.9, -0.1, 0.6);
  Eigen::MatrixXd A = a(x);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
  CHECK(eig.eigenvalues()(0) >= a.lambda - 1e-12);
  CHECK(eig.eigenvalues()(3) <= 1.0 / a.lambda + 1e-12);
}
