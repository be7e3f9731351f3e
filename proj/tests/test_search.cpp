#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rigidity/residual_search.hpp"

#include <random>

using namespace rigidity;

namespace {

DiscretizedProfile sample_profile(const SphereGrid& grid, const std::string& name,
                                  DiffScheme scheme = DiffScheme::Spectral) {
  return DiscretizedProfile::sample(grid, scheme, bundled_function(name));
}

DiscretizedProfile nodal(const SphereGrid& grid, DiffScheme scheme,
                         const std::function<double(const Eigen::Vector3d&)>& f) {
  DiscretizedProfile g = DiscretizedProfile::zeros(grid, scheme);
  for (int i = 0; i < grid.n_theta2; ++i)
    for (int j = 0; j < grid.n_theta1; ++j) g.values(i, j) = f(grid.point(i, j));
  return g;
}

}  // namespace

TEST_CASE("residual functional annihilates discretized linear profiles to machine precision") {
  SphereGrid grid = SphereGrid::with_resolution(32);
  ResidualFunctional functional(SphericalOperatorField::identity_laplacian(grid),
                                DiffScheme::Spectral);
  for (const char* name : {"linear:x1", "linear:x2", "linear:x3", "linear:mixed"}) {
    DiscretizedProfile g = sample_profile(grid, name);
    const double scale = g.values.cwiseAbs().maxCoeff();
    CHECK(functional.value(g.values) < 1e-16 * (1.0 + scale * scale));
  }
}

TEST_CASE("residual functional matches the closed form on a degree-two harmonic") {
  // (Lap_S2 + 2) g = -4 g for degree-two harmonics, so R = 16 sum w g^2.
  SphereGrid grid = SphereGrid::with_resolution(32);
  ResidualFunctional functional(SphericalOperatorField::identity_laplacian(grid),
                                DiffScheme::Spectral);
  DiscretizedProfile g = nodal(grid, DiffScheme::Spectral,
                               [](const Eigen::Vector3d& p) { return p(0) * p(1); });
  double wg2 = 0.0;
  for (int i = 0; i < grid.n_theta2; ++i)
    for (int j = 0; j < grid.n_theta1; ++j)
      wg2 += grid.weight(i) * g.values(i, j) * g.values(i, j);
  CHECK(functional.value(g.values) == doctest::Approx(16.0 * wg2).epsilon(1e-11));

  // Residual field equals -4 g nodewise.
  Eigen::MatrixXd r = functional.residual_field(g.values);
  CHECK((r + 4.0 * g.values).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("functional gradient matches directional finite differences") {
  SphereGrid grid = SphereGrid::with_resolution(16);
  ResidualFunctional functional(SphericalOperatorField::identity_laplacian(grid),
                                DiffScheme::Spectral);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DiscretizedProfile g = random_profile(grid, DiffScheme::Spectral, 7);
  Eigen::MatrixXd grad = functional.gradient(g.values);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd dir(grid.n_theta2, grid.n_theta1);
    for (int i = 0; i < grid.n_theta2; ++i)
      for (int j = 0; j < grid.n_theta1; ++j) dir(i, j) = dist(rng);
    const double eps = 1e-6;
    const double fd = (functional.value(g.values + eps * dir) -
                       functional.value(g.values - eps * dir)) /
                      (2.0 * eps);
    const double an = grad.cwiseProduct(dir).sum();
    CHECK(std::abs(fd - an) < 1e-6 * (1.0 + std::abs(an)));
  }
}

TEST_CASE("assembled operator agrees with the matrix-free application") {
  SphereGrid grid = SphereGrid::with_resolution(8);
  ResidualFunctional functional(SphericalOperatorField::identity_laplacian(grid),
                                DiffScheme::Spectral);
  Eigen::MatrixXd L = functional.assemble_operator();
  DiscretizedProfile g = random_profile(grid, DiffScheme::Spectral, 3);
  Eigen::VectorXd flat(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto [i, j] = grid.unindex(k);
    flat(k) = g.values(i, j);
  }
  Eigen::VectorXd via_matrix = L * flat;
  Eigen::MatrixXd direct = functional.residual_field(g.values);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto [i, j] = grid.unindex(k);
    CHECK(via_matrix(k) == doctest::Approx(direct(i, j)).epsilon(1e-12));
  }
}

TEST_CASE("adding a discrete linear component does not change the residual") {
  SphereGrid grid = SphereGrid::with_resolution(32);
  ResidualFunctional functional(SphericalOperatorField::identity_laplacian(grid),
                                DiffScheme::Spectral);
  DiscretizedProfile g = random_profile(grid, DiffScheme::Spectral, 11);
  DiscretizedProfile ell = sample_profile(grid, "linear:mixed");
  const double r0 = functional.value(g.values);
  const double r1 = functional.value(g.values + ell.values);
  CHECK(std::abs(r0 - r1) < 1e-10 * (1.0 + r0));
}

TEST_CASE("discrete kernel of the identity operator is exactly the linear span") {
  SphereGrid grid = SphereGrid::with_resolution(16);
  ResidualFunctional functional(SphericalOperatorField::identity_laplacian(grid),
                                DiffScheme::Spectral);
  Eigen::MatrixXd L = functional.assemble_operator();
  Eigen::VectorXd w = functional.weight_vector();
  Eigen::MatrixXd Q = L.transpose() * w.asDiagonal() * L;

  // Generalized spectrum of (Q, W): exactly three near-zero eigenvalues.
  Eigen::MatrixXd Wm = w.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(Q, Wm);
  Eigen::VectorXd ev = eig.eigenvalues();
  CHECK(ev(0) > -1e-10);
  CHECK(ev(2) < 1e-10);
  CHECK(ev(3) > 1.0);
}

TEST_CASE("nonlinearity_norm: linear profiles vanish, degree-two harmonic keeps its weight") {
  SphereGrid grid = SphereGrid::with_resolution(64);
  DiscretizedProfile lin = sample_profile(grid, "linear:x3");
  CHECK(nonlinearity_norm(lin).value < 1e-10);

  // g = c Y with Y a unit-norm degree-two harmonic -> |c|.
  DiscretizedProfile y = nodal(grid, DiffScheme::Spectral,
                               [](const Eigen::Vector3d& p) { return p(0) * p(1); });
  const double ny = nonlinearity_norm(y).norm_g;
  DiscretizedProfile scaled = y;
  scaled.values *= 0.7 / ny;
  CHECK(nonlinearity_norm(scaled).value == doctest::Approx(0.7).epsilon(1e-3));

  // Pythagoras for linear + c Y.
  DiscretizedProfile mixed = scaled;
  mixed.values += 2.0 * lin.values;
  CHECK(nonlinearity_norm(mixed).value == doctest::Approx(0.7).epsilon(1e-3));
}

TEST_CASE("nonlinearity_norm: constants are excluded from the linear span") {
  SphereGrid grid = SphereGrid::with_resolution(32);
  DiscretizedProfile c = nodal(grid, DiffScheme::Spectral,
                               [](const Eigen::Vector3d&) { return 1.0; });
  NonlinearityReport rep = nonlinearity_norm(c);
  CHECK(rep.value == doctest::Approx(rep.norm_g).epsilon(1e-6));
  CHECK(rep.constant_component == doctest::Approx(rep.norm_g).epsilon(1e-6));
}

TEST_CASE("nonlinearity_norm is a seminorm") {
  SphereGrid grid = SphereGrid::with_resolution(16);
  DiscretizedProfile a = random_profile(grid, DiffScheme::Spectral, 21);
  DiscretizedProfile b = random_profile(grid, DiffScheme::Spectral, 22);
  DiscretizedProfile sum = a;
  sum.values += b.values;
  const double na = nonlinearity_norm(a).value;
  const double nb = nonlinearity_norm(b).value;
  const double ns = nonlinearity_norm(sum).value;
  CHECK(ns <= na + nb + 1e-10);

  DiscretizedProfile scaled = a;
  scaled.values *= -2.5;
  CHECK(nonlinearity_norm(scaled).value == doctest::Approx(2.5 * na).epsilon(1e-10));
}

TEST_CASE("minimize_residual: an initial linear profile terminates immediately") {
  SphereGrid grid = SphereGrid::with_resolution(16);
  ResidualFunctional functional(SphericalOperatorField::identity_laplacian(grid),
                                DiffScheme::Spectral);
  DiscretizedProfile init = sample_profile(grid, "linear:mixed");
  for (SearchMethod method : {SearchMethod::GradientDescent, SearchMethod::NormalEquations}) {
    MinimizeOptions opts;
    opts.method = method;
    MinimizeResult result = minimize_residual(functional, init, opts);
    CHECK(result.converged);
    CHECK(result.iterations == 0);
    CHECK(result.final_residual < 1e-10);
  }
}

TEST_CASE("minimize_residual: normal equations find the linear kernel from random data") {
  SphereGrid grid = SphereGrid::with_resolution(32);
  ResidualFunctional functional(SphericalOperatorField::identity_laplacian(grid),
                                DiffScheme::Spectral);
  DiscretizedProfile init = random_profile(grid, DiffScheme::Spectral, 5);
  MinimizeResult result = minimize_residual(functional, init);
  CHECK(result.nonlinearity.value < 1e-3 * result.nonlinearity.norm_g);
  CHECK(result.final_residual < 1e-10);

  // Residual history is monotone non-increasing.
  for (std::size_t k = 1; k < result.residual_history.size(); ++k) {
    CHECK(result.residual_history[k] <= result.residual_history[k - 1] * (1.0 + 1e-12) + 1e-18);
  }
}

TEST_CASE("minimize_residual: random elliptic field keeps the linear kernel") {
  SphereGrid grid = SphereGrid::with_resolution(32);
  CoefficientField a = random_elliptic_field(1234, 0.5);
  ResidualFunctional functional(
      SphericalOperatorField::sample(reduce_to_sphere(a), grid), DiffScheme::Spectral);
  DiscretizedProfile init = random_profile(grid, DiffScheme::Spectral, 99);
  MinimizeResult result = minimize_residual(functional, init);
  CHECK(result.nonlinearity.value < 1e-2 * result.nonlinearity.norm_g);
}

TEST_CASE("minimize_residual: gradient descent is monotone") {
  SphereGrid grid = SphereGrid::with_resolution(8);
  ResidualFunctional functional(SphericalOperatorField::identity_laplacian(grid),
                                DiffScheme::Spectral);
  DiscretizedProfile init = random_profile(grid, DiffScheme::Spectral, 31);
  MinimizeOptions opts;
  opts.method = SearchMethod::GradientDescent;
  opts.max_iterations = 300;
  MinimizeResult result = minimize_residual(functional, init, opts);
  REQUIRE(result.residual_history.size() > 3);
  for (std::size_t k = 1; k < result.residual_history.size(); ++k) {
    CHECK(result.residual_history[k] <= result.residual_history[k - 1] + 1e-15);
  }
  CHECK(result.final_residual < result.residual_history.front());
  CHECK(result.method == "gradient-descent");
}

TEST_CASE("central4 residual on exact solutions decays at the scheme order") {
  // Exact solutions of the identity operator are the linear profiles; the
  // discrete residual is pure truncation error of the scheme.
  auto run = [](int n) {
    SphereGrid grid = SphereGrid::with_resolution(n);
    ResidualFunctional functional(SphericalOperatorField::identity_laplacian(grid),
                                  DiffScheme::Central4);
    DiscretizedProfile g = sample_profile(grid, "linear:mixed", DiffScheme::Central4);
    return functional.value(g.values);
  };
  const double r32 = run(32);
  const double r64 = run(64);
  CHECK(r32 / r64 >= 8.0);
}

TEST_CASE("random elliptic fields satisfy their certificate") {
  for (unsigned seed : {1u, 9u, 77u}) {
    CoefficientField a = random_elliptic_field(seed, 0.5);
    std::mt19937 rng(seed + 1);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < 40; ++k) {
      Eigen::Vector3d x(gauss(rng), gauss(rng), gauss(rng));
      if (x.norm() < 0.3) continue;
      Eigen::MatrixXd A = a(x);
      CHECK((A - A.transpose()).norm() < 1e-12);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
      CHECK(eig.eigenvalues()(0) >= 0.5 - 1e-10);
      CHECK(eig.eigenvalues()(2) <= 2.0 + 1e-10);
    }
  }
}

TEST_CASE("obstruction_study: infeasible for q2, certified for the LO scalar, trivial for linear") {
  ObstructionCurve q2 = obstruction_study(bundled_function("q2-over-r"), {32, 16});
  REQUIRE(q2.entries.size() == 2);
  CHECK(q2.entries[0].resolution == 16);  // sorted
  for (const ObstructionEntry& e : q2.entries) {
    CHECK(e.infeasible_count > 0);
    CHECK(e.lambda > 0.0);
    CHECK(e.lambda <= 1.0);
  }

  ObstructionCurve lin = obstruction_study(bundled_function("linear:x1"), {16, 32});
  for (const ObstructionEntry& e : lin.entries) {
    CHECK(e.lambda == doctest::Approx(1.0));
    CHECK(e.infeasible_count == 0);
  }

  ObstructionCurve lo = obstruction_study(bundled_function("lo-scalar"), {12, 16});
  for (const ObstructionEntry& e : lo.entries) CHECK(e.infeasible_count == 0);
  CHECK(std::abs(lo.entries[0].lambda - lo.entries[1].lambda) < 0.05);

  CHECK(q2.csv().rfind("N,lambda,infeasible_count\n", 0) == 0);
}
