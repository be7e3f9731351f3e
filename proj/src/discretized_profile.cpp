#include "rigidity/discretized_profile.hpp"

#include "rigidity/errors.hpp"

#include <cmath>

namespace rigidity {

std::string to_string(DiffScheme s) {
  return s == DiffScheme::Central4 ? "central4" : "spectral";
}

DiffScheme diff_scheme_from_string(const std::string& name) {
  if (name == "central4") return DiffScheme::Central4;
  if (name == "spectral") return DiffScheme::Spectral;
  throw ConfigError("unknown differentiation scheme '" + name + "'");
}

DiscretizedProfile DiscretizedProfile::sample(const SphereGrid& grid, DiffScheme scheme,
                                              const HomogeneousFunction& u) {
  DiscretizedProfile d;
  d.grid = grid;
  d.scheme = scheme;
  d.values.resize(grid.n_theta2, grid.n_theta1);
  for (int i = 0; i < grid.n_theta2; ++i)
    for (int j = 0; j < grid.n_theta1; ++j) d.values(i, j) = u.value(grid.point(i, j));
  return d;
}

DiscretizedProfile DiscretizedProfile::zeros(const SphereGrid& grid, DiffScheme scheme) {
  DiscretizedProfile d;
  d.grid = grid;
  d.scheme = scheme;
  d.values = Eigen::MatrixXd::Zero(grid.n_theta2, grid.n_theta1);
  return d;
}

Eigen::MatrixXd circle_d1(int n, DiffScheme scheme) {
  const double h = 2.0 * M_PI / n;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  if (scheme == DiffScheme::Spectral) {
    if (n % 2 != 0) throw ConfigError("spectral differentiation requires an even node count");
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const int k = i - j;
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        D(i, j) = 0.5 * sign / std::tan(0.5 * k * h);
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      D(i, (i + 1) % n) += 8.0 / (12.0 * h);
      D(i, (i + 2) % n) += -1.0 / (12.0 * h);
      D(i, (i - 1 + n) % n) += -8.0 / (12.0 * h);
      D(i, (i - 2 + n) % n) += 1.0 / (12.0 * h);
    }
  }
  return D;
}

Eigen::MatrixXd circle_d2(int n, DiffScheme scheme) {
  const double h = 2.0 * M_PI / n;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  if (scheme == DiffScheme::Spectral) {
    if (n % 2 != 0) throw ConfigError("spectral differentiation requires an even node count");
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) {
          D(i, j) = -M_PI * M_PI / (3.0 * h * h) - 1.0 / 6.0;
        } else {
          const int k = i - j;
          const double sign = (k % 2 == 0) ? 1.0 : -1.0;
          const double s = std::sin(0.5 * k * h);
          D(i, j) = -sign / (2.0 * s * s);
        }
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      D(i, i) += -30.0 / (12.0 * h * h);
      D(i, (i + 1) % n) += 16.0 / (12.0 * h * h);
      D(i, (i + 2) % n) += -1.0 / (12.0 * h * h);
      D(i, (i - 1 + n) % n) += 16.0 / (12.0 * h * h);
      D(i, (i - 2 + n) % n) += -1.0 / (12.0 * h * h);
    }
  }
  return D;
}

SphereGridDifferentiator::SphereGridDifferentiator(const SphereGrid& grid, DiffScheme scheme)
    : grid_(grid), scheme_(scheme) {
  if (grid.n_theta1 % 2 != 0) {
    throw ConfigError("meridian pairing requires an even theta1 count");
  }
  row_d1_op_ = circle_d1(grid.n_theta1, scheme);
  row_d2_op_ = circle_d2(grid.n_theta1, scheme);

  const int n2 = grid.n_theta2;
  const int m = 2 * n2;
  Eigen::MatrixXd Dc1 = circle_d1(m, scheme);
  Eigen::MatrixXd Dc2 = circle_d2(m, scheme);

  // Stack a column with its antipodal partner, reverse the partner to walk
  // the meridian circle through the pole, differentiate, and map back. The
  // first derivative flips sign on the reversed branch.
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd S1 = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd S2 = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < n2; ++i) {
    P(i, i) = 1.0;
    P(n2 + i, m - 1 - i) = 1.0;
    S1(i, i) = 1.0;
    S1(n2 + i, m - 1 - i) = -1.0;
    S2(i, i) = 1.0;
    S2(n2 + i, m - 1 - i) = 1.0;
  }
  pair_d1_op_ = S1 * Dc1 * P;
  pair_d2_op_ = S2 * Dc2 * P;
}

Eigen::MatrixXd SphereGridDifferentiator::apply_rows(const Eigen::MatrixXd& f,
                                                     const Eigen::MatrixXd& op) const {
  return f * op.transpose();
}

Eigen::MatrixXd SphereGridDifferentiator::apply_pairs(const Eigen::MatrixXd& f,
                                                      const Eigen::MatrixXd& op) const {
  const int n2 = grid_.n_theta2;
  const int half = grid_.n_theta1 / 2;
  Eigen::MatrixXd out(n2, grid_.n_theta1);
  Eigen::VectorXd stacked(2 * n2);
  for (int j = 0; j < half; ++j) {
    const int jp = j + half;
    stacked.head(n2) = f.col(j);
    stacked.tail(n2) = f.col(jp);
    Eigen::VectorXd d = op * stacked;
    out.col(j) = d.head(n2);
    out.col(jp) = d.tail(n2);
  }
  return out;
}

Eigen::MatrixXd SphereGridDifferentiator::row_d1(const Eigen::MatrixXd& f) const {
  return apply_rows(f, row_d1_op_);
}
Eigen::MatrixXd SphereGridDifferentiator::row_d2(const Eigen::MatrixXd& f) const {
  return apply_rows(f, row_d2_op_);
}
Eigen::MatrixXd SphereGridDifferentiator::meridian_d1(const Eigen::MatrixXd& f) const {
  return apply_pairs(f, pair_d1_op_);
}
Eigen::MatrixXd SphereGridDifferentiator::meridian_d2(const Eigen::MatrixXd& f) const {
  return apply_pairs(f, pair_d2_op_);
}
Eigen::MatrixXd SphereGridDifferentiator::row_d1_t(const Eigen::MatrixXd& f) const {
  return apply_rows(f, row_d1_op_.transpose());
}
Eigen::MatrixXd SphereGridDifferentiator::row_d2_t(const Eigen::MatrixXd& f) const {
  return apply_rows(f, row_d2_op_.transpose());
}
Eigen::MatrixXd SphereGridDifferentiator::meridian_d1_t(const Eigen::MatrixXd& f) const {
  return apply_pairs(f, pair_d1_op_.transpose());
}
Eigen::MatrixXd SphereGridDifferentiator::meridian_d2_t(const Eigen::MatrixXd& f) const {
  return apply_pairs(f, pair_d2_op_.transpose());
}

ProfileDerivatives SphereGridDifferentiator::derivatives(const Eigen::MatrixXd& f) const {
  ProfileDerivatives d;
  d.d1 = row_d1(f);
  d.d2 = meridian_d1(f);
  d.d11 = row_d2(f);
  d.d12 = meridian_d1(d.d1);
  d.d22 = meridian_d2(f);
  return d;
}

}  // namespace rigidity
