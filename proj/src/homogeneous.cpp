#include "rigidity/homogeneous.hpp"

#include "rigidity/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rigidity {

HomogeneousFunction::HomogeneousFunction(Profile profile, double alpha)
    : profile_(std::move(profile)), alpha_(alpha) {}

HomogeneousFunction bundled_function(const std::string& name) {
  return HomogeneousFunction(find_profile(name));
}

namespace {

Jet power_alpha(const Jet& t, double alpha) {
  if (alpha == 1.0) return t;
  return pow(t, alpha);
}

}  // namespace

Jet HomogeneousFunction::jet(const Eigen::VectorXd& x) const {
  const int n = dimension();
  const double r = x.norm();
  if (!(r > 0.0)) throw ChartPoleError("evaluation at the origin");

  const double t = x(n - 1);
  // Stored ambient forms carry their own (order-one) homogeneity; any other
  // alpha reinterprets the chart or spherical restriction as an order-alpha
  // extension, so those routes are used instead.
  if (profile_.has_ambient() && alpha_ == 1.0) {
    const bool equator_ok = profile_.ambient_covers_equator || t != 0.0;
    const bool poles_ok = profile_.ambient_covers_poles ||
                          std::hypot(x(0), x(1)) > std::sin(kDefaultPoleMargin) * r;
    if (equator_ok && poles_ok) return profile_.ambient(Jet::variables(x));
    if (!equator_ok) {
      throw ChartPoleError("profile '" + profile_.name +
                           "': point lies on the chart pole x_n = 0 and no other form covers it");
    }
    throw PoleProximityError("profile '" + profile_.name +
                             "': spherical parametrization is singular at the poles");
  }
  const ChartSign sign = t >= 0.0 ? ChartSign::Positive : ChartSign::Negative;
  const bool chart_ok = t != 0.0 && profile_.has_chart(sign);
  const bool prefer_chart = chart_ok && std::abs(t) >= 0.5 * r;

  auto chart_route = [&]() {
    std::vector<Jet> vars = Jet::variables(x);
    Jet s = t > 0.0 ? vars[n - 1] : -vars[n - 1];
    std::vector<Jet> y;
    y.reserve(n - 1);
    for (int i = 0; i < n - 1; ++i) y.push_back(vars[i] / s);
    const JetFn& h = t > 0.0 ? profile_.chart_pos : profile_.chart_neg;
    return power_alpha(s, alpha_) * h(y);
  };

  if (prefer_chart) return chart_route();

  if (n == 3 && profile_.has_spherical()) {
    const double equator_dist = std::hypot(x(0), x(1)) / r;
    if (equator_dist > std::sin(kDefaultPoleMargin)) {
      std::vector<Jet> vars = Jet::variables(x);
      Jet rj = norm(vars);
      std::vector<Jet> th{atan2(vars[1], vars[0]), asin(vars[2] / rj)};
      return power_alpha(rj, alpha_) * profile_.spherical(th);
    }
  }

  if (chart_ok) return chart_route();

  if (t == 0.0) {
    throw ChartPoleError("profile '" + profile_.name +
                         "': point lies on the chart pole x_n = 0 and no other form covers it");
  }
  throw PoleProximityError("profile '" + profile_.name + "': no representation covers the point");
}

Eigen::VectorXd HomogeneousFunction::gradient(const Eigen::VectorXd& x) const {
  return jet(x).grad;
}

Eigen::MatrixXd HomogeneousFunction::hessian(const Eigen::VectorXd& x) const {
  Jet j = jet(x);
  return 0.5 * (j.hess + j.hess.transpose());
}

Eigen::Vector3d gradient_chart(const Profile& h, const Eigen::Vector2d& p) {
  Jet hj = h.chart_jet(ChartSign::Positive, p);
  return {hj.grad(0), hj.grad(1), hj.value - p(0) * hj.grad(0) - p(1) * hj.grad(1)};
}

Eigen::Matrix3d hessian_chart(const Profile& h, const Eigen::Vector2d& p) {
  Jet hj = h.chart_jet(ChartSign::Positive, p);
  Eigen::Matrix3d B = Eigen::Matrix3d::Identity();
  B(2, 0) = -p(0);
  B(2, 1) = -p(1);
  Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
  M.topLeftCorner<2, 2>() = hj.hess;
  return B * M * B.transpose();
}

Eigen::Vector3d spherical_point(const Eigen::Vector2d& theta) {
  const double c1 = std::cos(theta(0)), s1 = std::sin(theta(0));
  const double c2 = std::cos(theta(1)), s2 = std::sin(theta(1));
  return {c2 * c1, c2 * s1, s2};
}

Eigen::Matrix3d spherical_frame(const Eigen::Vector2d& theta) {
  const double c1 = std::cos(theta(0)), s1 = std::sin(theta(0));
  const double c2 = std::cos(theta(1)), s2 = std::sin(theta(1));
  Eigen::Matrix3d R;
  R.col(0) = Eigen::Vector3d(c2 * c1, c2 * s1, s2);    // e_r
  R.col(1) = Eigen::Vector3d(-s1, c1, 0.0);            // e_theta1
  R.col(2) = Eigen::Vector3d(-s2 * c1, -s2 * s1, c2);  // e_theta2
  return R;
}

Eigen::Matrix3d spherical_frame_hessian(const Profile& g, const Eigen::Vector2d& theta,
                                        double pole_margin) {
  if (std::abs(theta(1)) >= M_PI / 2.0 - pole_margin) {
    throw PoleProximityError("spherical chart invalid within " + std::to_string(pole_margin) +
                             " rad of the poles");
  }
  Jet gj = g.spherical_jet(theta);
  const double c = std::cos(theta(1));
  const double s = std::sin(theta(1));

  // Orthonormal-frame Hessian components of u = r g at r = 1. First row and
  // column vanish for order-one homogeneity.
  Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
  H(1, 1) = gj.hess(0, 0) / (c * c) - (s / c) * gj.grad(1) + gj.value;
  H(1, 2) = gj.hess(0, 1) / c + (s / (c * c)) * gj.grad(0);
  H(2, 1) = H(1, 2);
  H(2, 2) = gj.hess(1, 1) + gj.value;
  return H;
}

Eigen::Matrix3d hessian_spherical(const Profile& g, const Eigen::Vector2d& theta,
                                  double pole_margin) {
  Eigen::Matrix3d H = spherical_frame_hessian(g, theta, pole_margin);
  Eigen::Matrix3d R = spherical_frame(theta);
  return R * H * R.transpose();
}

namespace {

void check_step(const Eigen::VectorXd& x, double step) {
  if (!(step > 0.0)) throw StepSizeError("step must be positive");
  if (x.norm() <= 2.0 * step) {
    throw StepSizeError("step too large: |x| must exceed 2*step to stay away from the origin");
  }
}

}  // namespace

Eigen::VectorXd fd_gradient(const HomogeneousFunction& u, const Eigen::VectorXd& x, double step) {
  check_step(x, step);
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd g(n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += step;
    xm(i) -= step;
    g(i) = (u.value(xp) - u.value(xm)) / (2.0 * step);
  }
  return g;
}

Eigen::MatrixXd fd_hessian(const HomogeneousFunction& u, const Eigen::VectorXd& x, double step) {
  check_step(x, step);
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd H(n, n);
  const double u0 = u.value(x);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += step;
    xm(i) -= step;
    H(i, i) = (u.value(xp) - 2.0 * u0 + u.value(xm)) / (step * step);
    for (int j = i + 1; j < n; ++j) {
      Eigen::VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
      xpp(i) += step; xpp(j) += step;
      xpm(i) += step; xpm(j) -= step;
      xmp(i) -= step; xmp(j) += step;
      xmm(i) -= step; xmm(j) -= step;
      H(i, j) = (u.value(xpp) - u.value(xpm) - u.value(xmp) + u.value(xmm)) /
                (4.0 * step * step);
      H(j, i) = H(i, j);
    }
  }
  return H;
}

std::string to_string(HessianClass c) {
  switch (c) {
    case HessianClass::Zero: return "zero";
    case HessianClass::Saddle: return "saddle";
    case HessianClass::SemidefiniteNonzero: return "semidefinite-nonzero";
    case HessianClass::Definite: return "definite";
  }
  return "unknown";
}

Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd d = x.normalized();

  // Candidates e_i - (e_i . x) x, ranked by norm; Gram-Schmidt the n-1 best.
  std::vector<std::pair<double, int>> ranked;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd c = Eigen::VectorXd::Unit(n, i) - d(i) * d;
    ranked.emplace_back(c.norm(), i);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  Eigen::MatrixXd basis(n, n - 1);
  int got = 0;
  for (const auto& [nrm, i] : ranked) {
    if (got == n - 1) break;
    Eigen::VectorXd v = Eigen::VectorXd::Unit(n, i) - d(i) * d;
    for (int k = 0; k < got; ++k) v -= basis.col(k).dot(v) * basis.col(k);
    const double vn = v.norm();
    if (vn < 1e-12) continue;
    basis.col(got++) = v / vn;
  }
  return basis;
}

HessianSample classify_hessian(const Eigen::MatrixXd& M, const Eigen::VectorXd& x,
                               double tau_zero) {
  HessianSample sample;
  sample.direction = x.normalized();
  sample.hessian = 0.5 * (M + M.transpose());
  sample.frobenius_norm = sample.hessian.norm();

  Eigen::MatrixXd basis = tangent_basis(sample.direction);
  Eigen::MatrixXd T = basis.transpose() * sample.hessian * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (T + T.transpose()));
  Eigen::VectorXd ev = eig.eigenvalues();
  sample.tangential = ev.reverse();  // descending

  if (sample.frobenius_norm < tau_zero) {
    sample.classification = HessianClass::Zero;
    return sample;
  }
  int pos = 0, neg = 0, zero = 0;
  for (int i = 0; i < sample.tangential.size(); ++i) {
    const double v = sample.tangential(i);
    if (v > tau_zero) ++pos;
    else if (v < -tau_zero) ++neg;
    else ++zero;
  }
  if (pos > 0 && neg > 0) sample.classification = HessianClass::Saddle;
  else if (zero > 0) sample.classification = HessianClass::SemidefiniteNonzero;
  else sample.classification = HessianClass::Definite;
  return sample;
}

}  // namespace rigidity
