#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rigidity/coefficient_field.hpp"
#include "rigidity/errors.hpp"

#include <random>

using namespace rigidity;

namespace {

// Smooth uniformly elliptic test field a(x) = I + 0.2 S(x-hat) with S built
// from quadratic monomials of the unit direction.
CoefficientField random_spd_field(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::Matrix3d C0, C1, C2;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      C0(i, j) = C0(j, i) = dist(rng);
      C1(i, j) = C1(j, i) = dist(rng);
      C2(i, j) = C2(j, i) = dist(rng);
    }
  CoefficientField f;
  f.dimension = 3;
  f.name = "random-spd";
  f.matrix = [C0, C1, C2](const Eigen::VectorXd& x) {
    Eigen::Vector3d d = x.normalized();
    Eigen::Matrix3d S = C0 * (d(0) * d(0)) + C1 * (d(1) * d(2)) + C2 * (d(2) * d(2));
    return Eigen::MatrixXd(Eigen::Matrix3d::Identity() + 0.2 * S);
  };
  f.lambda = 0.3;
  return f;
}

JetFn random_chart_polynomial(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> coef;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; i + j <= 4; ++j) coef.push_back(dist(rng));
  return [coef](const std::vector<Jet>& y) {
    Jet sum = Jet::constant(y[0].vars(), 0.0);
    int k = 0;
    for (int i = 0; i <= 4; ++i)
      for (int j = 0; i + j <= 4; ++j) sum = sum + coef[k++] * pow(y[0], i) * pow(y[1], j);
    return sum;
  };
}

}  // namespace

TEST_CASE("synthesize_pointwise: balanced saddle gives the identity") {
  Eigen::Matrix3d M = Eigen::Vector3d(2, -2, 0).asDiagonal();
  PointwiseSynthesis s = synthesize_pointwise(M);
  REQUIRE(s.status == SynthesisStatus::Feasible);
  CHECK((s.matrix - Eigen::Matrix3d::Identity()).norm() < 1e-12);
  CHECK(s.lambda == doctest::Approx(1.0));
  CHECK(std::abs(s.trace_product) < 1e-12);
}

TEST_CASE("synthesize_pointwise: unbalanced saddle is reweighted, lambda = 1/sqrt(2)") {
  Eigen::Matrix3d M = Eigen::Vector3d(1, -2, 0).asDiagonal();
  PointwiseSynthesis s = synthesize_pointwise(M);
  REQUIRE(s.status == SynthesisStatus::Feasible);
  Eigen::Matrix3d expected = Eigen::Vector3d(2, 1, 1).asDiagonal();
  expected /= std::sqrt(2.0);
  CHECK((s.matrix - expected).norm() < 1e-12);
  CHECK(s.lambda == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::abs((s.matrix * M).trace()) < 1e-12);

  // min-eig * max-eig = 1 normalization.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(s.matrix);
  CHECK(eig.eigenvalues()(0) * eig.eigenvalues()(2) == doctest::Approx(1.0));
}

TEST_CASE("synthesize_pointwise: semidefinite tangential Hessian is infeasible") {
  Eigen::Matrix3d M = Eigen::Vector3d(0, -3, -1).asDiagonal();
  CHECK(synthesize_pointwise(M).status == SynthesisStatus::Infeasible);
  CHECK(synthesize_pointwise(Eigen::Matrix3d::Zero()).status == SynthesisStatus::Feasible);
}

TEST_CASE("synthesize_pointwise: condition cap reports the attained condition") {
  Eigen::Matrix3d M = Eigen::Vector3d(5, -0.5, 0).asDiagonal();
  SynthesisOptions opts;
  opts.kappa_max = 5.0;
  PointwiseSynthesis s = synthesize_pointwise(M, opts);
  CHECK(s.status == SynthesisStatus::ConditionExceeded);
  CHECK(s.condition == doctest::Approx(10.0));
  opts.kappa_max = 20.0;
  s = synthesize_pointwise(M, opts);
  CHECK(s.status == SynthesisStatus::Feasible);
  CHECK(s.lambda == doctest::Approx(1.0 / std::sqrt(10.0)));
}

TEST_CASE("synthesize_field: linear profile gives the identity field") {
  FieldSynthesis fs = synthesize_field(bundled_function("linear:mixed"), 16);
  CHECK(fs.infeasible_count == 0);
  CHECK(fs.condition_exceeded_count == 0);
  CHECK(fs.lambda == doctest::Approx(1.0));
  Eigen::Vector3d x(0.3, -0.5, 0.9);
  CHECK((fs.field(x) - Eigen::Matrix3d::Identity()).norm() < 1e-12);
}

TEST_CASE("synthesize_field: q2-over-r has infeasible directions near +-e1 and +-e2") {
  FieldSynthesis fs = synthesize_field(bundled_function("q2-over-r"), 32);
  CHECK(fs.infeasible_count > 0);
  // Every infeasible direction lies in the definite caps around +-e1, +-e2.
  for (const Eigen::VectorXd& p : fs.infeasible_points) {
    const double axis = std::max(std::abs(p(0)), std::abs(p(1)));
    CHECK(axis > 0.75);
  }
  // Directions near +-e1 must be present among them.
  bool near_e1 = false;
  for (const Eigen::VectorXd& p : fs.infeasible_points)
    if (std::abs(p(0)) > 0.95) near_e1 = true;
  CHECK(near_e1);
}

TEST_CASE("synthesize_field: certificate bounds and annihilation on the LO scalar") {
  FieldSynthesis fs = synthesize_field(bundled_function("lo-scalar"), 16);
  CHECK(fs.infeasible_count == 0);
  CHECK(fs.condition_exceeded_count == 0);
  CHECK(fs.max_abs_trace < 1e-10);
  CHECK(fs.lambda > 0.35);

  HomogeneousFunction u = bundled_function("lo-scalar");
  std::mt19937 rng(5);
  std::normal_distribution<double> gauss;
  for (int k = 0; k < 50; ++k) {
    Eigen::Vector4d x(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
    if (x.norm() < 0.3) continue;
    Eigen::MatrixXd A = fs.field(x);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
    CHECK(eig.eigenvalues()(0) >= fs.lambda - 1e-10);
    CHECK(eig.eigenvalues()(3) <= 1.0 / fs.lambda + 1e-10);
    CHECK(std::abs((A * u.hessian(x.normalized())).trace()) < 1e-10);
  }
}

TEST_CASE("reduce_to_chart: frozen blocks and the trace identity for h = x1^2") {
  ReducedChartCoefficients rc = reduce_to_chart(CoefficientField::identity(3));
  CHECK((rc.matrix(Eigen::Vector2d(0, 0)) - Eigen::Matrix2d::Identity()).norm() < 1e-14);

  Eigen::Matrix2d at11;
  at11 << 2, 1, 1, 2;
  CHECK((rc.matrix(Eigen::Vector2d(1, 1)) - at11).norm() < 1e-14);

  // h = x1^2: sum A_ij h_ij = 2 A11 = 2 (1 + x1^2) equals tr(D^2 u) on the chart.
  Profile hx1sq = Profile::from_chart(
      "h-x1sq", 3, [](const std::vector<Jet>& y) { return y[0] * y[0]; });
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  for (int k = 0; k < 20; ++k) {
    Eigen::Vector2d p(dist(rng), dist(rng));
    const double lhs = 2.0 * rc.matrix(p)(0, 0);
    CHECK(lhs == doctest::Approx(2.0 * (1.0 + p(0) * p(0))).epsilon(1e-12));
    CHECK(lhs == doctest::Approx(hessian_chart(hx1sq, p).trace()).epsilon(1e-12));
  }
}

TEST_CASE("chart-reduction trace identity on random profiles, points and fields") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> dist(-1.2, 1.2);
  for (unsigned profile_seed = 0; profile_seed < 10; ++profile_seed) {
    Profile h = Profile::from_chart("random", 3, random_chart_polynomial(1000 + profile_seed));
    CoefficientField a = profile_seed % 2 == 0 ? CoefficientField::identity(3)
                                               : random_spd_field(2000 + profile_seed);
    ReducedChartCoefficients rc = reduce_to_chart(a);
    for (int k = 0; k < 100; ++k) {
      Eigen::Vector2d p(dist(rng), dist(rng));
      Eigen::Vector3d x(p(0), p(1), 1.0);
      const double lhs = (a(x) * hessian_chart(h, p)).trace();
      Jet hj = h.chart_jet(ChartSign::Positive, p);
      const double rhs = (rc.matrix(p) * hj.hess).trace();
      CHECK(std::abs(lhs - rhs) < 1e-8);
    }
  }
}

TEST_CASE("reduce_to_chart: positive definiteness of the reduced block") {
  CoefficientField a = random_spd_field(42);
  ReducedChartCoefficients rc = reduce_to_chart(a);
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int k = 0; k < 50; ++k) {
    Eigen::Vector2d p(dist(rng), dist(rng));
    CHECK(rc.lambda(p) > 0.0);
  }
}

TEST_CASE("reduce_to_sphere: identity field gives (I, 0, 2) at the origin of coordinates") {
  SphericalOperator op = reduce_to_sphere(CoefficientField::identity(3));
  SphericalOperatorCoeffs c = op.coefficients(Eigen::Vector2d(0, 0));
  CHECK((c.A - Eigen::Matrix2d::Identity()).norm() < 1e-14);
  CHECK(c.B.norm() < 1e-14);
  CHECK(c.C == doctest::Approx(2.0));
}

TEST_CASE("reduce_to_sphere: linear profiles are annihilated by any field") {
  Profile gx3 = Profile::from_spherical(
      "g-x3", [](const std::vector<Jet>& th) { return sin(th[1]); });
  Profile gx1 = Profile::from_spherical(
      "g-x1", [](const std::vector<Jet>& th) { return cos(th[1]) * cos(th[0]); });
  for (unsigned seed : {1u, 2u, 3u}) {
    SphericalOperator op = reduce_to_sphere(random_spd_field(seed));
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> t1(-M_PI, M_PI);
    std::uniform_real_distribution<double> t2(-1.3, 1.3);
    for (int k = 0; k < 25; ++k) {
      Eigen::Vector2d theta(t1(rng), t2(rng));
      CHECK(std::abs(op.apply(gx3, theta)) < 1e-8);
      CHECK(std::abs(op.apply(gx1, theta)) < 1e-8);
    }
  }
}

TEST_CASE("reduce_to_sphere: operator residual equals tr(a D^2 u) spatially") {
  CoefficientField a = random_spd_field(9);
  SphericalOperator op = reduce_to_sphere(a);
  std::mt19937 rng(10);
  std::uniform_real_distribution<double> t1(-M_PI, M_PI);
  std::uniform_real_distribution<double> t2(-1.2, 1.2);
  for (const char* name : {"q2-over-r", "xy-over-r", "cubic-over-r2"}) {
    const Profile& p = find_profile(name);
    HomogeneousFunction u(p);
    for (int k = 0; k < 30; ++k) {
      Eigen::Vector2d theta(t1(rng), t2(rng));
      Eigen::Vector3d x = spherical_point(theta);
      const double lhs = op.apply(p, theta);
      const double rhs = (a(x) * u.hessian(x)).trace();
      CHECK(std::abs(lhs - rhs) < 1e-8);
    }
  }
}

TEST_CASE("reduce_to_sphere: positive definite A away from poles, pole error near them") {
  SphericalOperator op = reduce_to_sphere(random_spd_field(4));
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> t1(-M_PI, M_PI);
  std::uniform_real_distribution<double> t2(-1.45, 1.45);
  for (int k = 0; k < 40; ++k) {
    Eigen::Vector2d theta(t1(rng), t2(rng));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(op.coefficients(theta).A);
    CHECK(eig.eigenvalues()(0) > 0.0);
  }
  CHECK_THROWS_AS((void)op.coefficients(Eigen::Vector2d(0.0, M_PI / 2 - 1e-5)),
                  PoleProximityError);
}

TEST_CASE("divergence_coefficients: frozen values") {
  ChartMatrixField ident = [](const Eigen::Vector2d&) {
    return Eigen::Matrix2d(Eigen::Matrix2d::Identity());
  };
  Eigen::Matrix2d B = divergence_coefficients(ident)(Eigen::Vector2d(0.1, 0.2));
  CHECK((B - Eigen::Matrix2d::Identity()).norm() < 1e-14);

  ChartMatrixField anis = [](const Eigen::Vector2d&) {
    Eigen::Matrix2d a;
    a << 2, 1, 1, 4;
    return a;
  };
  B = divergence_coefficients(anis)(Eigen::Vector2d::Zero());
  Eigen::Matrix2d expected;
  expected << 0.5, 0.5, 0.0, 1.0;
  CHECK((B - expected).norm() < 1e-14);

  ChartMatrixField degenerate = [](const Eigen::Vector2d&) {
    Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
    a(0, 0) = 1.0;
    return a;
  };
  CHECK_THROWS_AS((void)divergence_coefficients(degenerate)(Eigen::Vector2d::Zero()),
                  DegenerateCoefficientError);
}

TEST_CASE("weak_residual: constant flux integrates to zero against all bumps") {
  ChartMatrixField ident = [](const Eigen::Vector2d&) {
    return Eigen::Matrix2d(Eigen::Matrix2d::Identity());
  };
  // w = h1 = 2 x1 for the harmonic chart profile h = x1^2 - x2^2.
  JetFn w = [](const std::vector<Jet>& y) { return 2.0 * y[0]; };
  CHECK(weak_residual(ident, w) < 1e-8);
}

TEST_CASE("weak_residual: harmonic gradient component against the identity field") {
  // h = x1^2 - x2^2 solves the constant-coefficient equation; w = h1.
  ChartMatrixField ident = [](const Eigen::Vector2d&) {
    return Eigen::Matrix2d(Eigen::Matrix2d::Identity());
  };
  JetFn w = [](const std::vector<Jet>& y) { return 2.0 * y[0]; };
  CHECK(weak_residual(ident, w) < 1e-8);

  // A non-solution flux must register: w = x1^2 has div grad w = 2.
  JetFn bad = [](const std::vector<Jet>& y) { return y[0] * y[0]; };
  CHECK(weak_residual(ident, bad) > 1e-3);
}

TEST_CASE("pipeline: synthesized field, chart reduction, divergence form, weak residual") {
  HomogeneousFunction u = bundled_function("q2-over-r");
  FieldSynthesis fs = synthesize_field(u, 32);
  ReducedChartCoefficients rc = reduce_to_chart(fs.field);
  ChartMatrixField chart = [rc](const Eigen::Vector2d& p) { return rc.matrix(p); };
  ChartMatrixField B = divergence_coefficients(chart);

  // w = h1 for the chart restriction h = (x1^2 - x2^2) / sqrt(1 + |y|^2).
  JetFn w = [](const std::vector<Jet>& y) {
    Jet rho = sqrt(1.0 + y[0] * y[0] + y[1] * y[1]);
    Jet q = y[0] * y[0] - y[1] * y[1];
    return 2.0 * y[0] / rho - q * y[0] / pow(rho, 3);
  };
  CHECK(weak_residual(B, w) < 1e-4);
}

TEST_CASE("gauss_legendre integrates polynomials of degree 2n-1 exactly") {
  std::vector<double> nodes, weights;
  gauss_legendre(16, nodes, weights);
  double sum = 0.0, x10 = 0.0;
  for (int i = 0; i < 16; ++i) {
    sum += weights[i];
    x10 += weights[i] * std::pow(nodes[i], 10);
  }
  CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(x10 == doctest::Approx(2.0 / 11.0).epsilon(1e-13));
}

TEST_CASE("feasibility csv has the documented header and row count") {
  FieldSynthesis fs = synthesize_field(bundled_function("q2-over-r"), 16);
  std::string csv = fs.feasibility_csv();
  CHECK(csv.rfind("theta1,theta2,lambda_pointwise,status\n", 0) == 0);
  std::size_t rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == 16 * 8 + 1);
}
