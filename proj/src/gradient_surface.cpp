#include "rigidity/gradient_surface.hpp"

#include "rigidity/errors.hpp"
#include "rigidity/parallel.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rigidity {

namespace {

Eigen::Matrix3d minimal_rotation(const Eigen::Vector3d& from, const Eigen::Vector3d& to) {
  const Eigen::Vector3d a = from.normalized();
  const Eigen::Vector3d b = to.normalized();
  const double c = a.dot(b);
  if (c > 1.0 - 1e-14) return Eigen::Matrix3d::Identity();
  if (c < -1.0 + 1e-14) {
    // Half-turn about any axis orthogonal to a.
    Eigen::MatrixXd basis = tangent_basis(a);
    const Eigen::Vector3d axis = basis.col(0);
    return Eigen::AngleAxisd(M_PI, axis).toRotationMatrix();
  }
  const Eigen::Vector3d v = a.cross(b);
  Eigen::Matrix3d vx;
  vx << 0, -v(2), v(1), v(2), 0, -v(0), -v(1), v(0), 0;
  return Eigen::Matrix3d::Identity() + vx + vx * vx / (1.0 + c);
}

double angular_distance(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double c = std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0);
  return std::acos(c);
}

// Union-find clustering of directions by angular adjacency.
std::vector<std::vector<int>> cluster_directions(const std::vector<Eigen::Vector3d>& pts,
                                                 double link_distance) {
  const int m = static_cast<int>(pts.size());
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (angular_distance(pts[i], pts[j]) <= link_distance) parent[find(i)] = find(j);
  std::vector<std::vector<int>> clusters;
  std::vector<int> root_to_cluster(m, -1);
  for (int i = 0; i < m; ++i) {
    const int r = find(i);
    if (root_to_cluster[r] < 0) {
      root_to_cluster[r] = static_cast<int>(clusters.size());
      clusters.emplace_back();
    }
    clusters[root_to_cluster[r]].push_back(i);
  }
  return clusters;
}

double hessian_scale_s2(const HomogeneousFunction& u, const SphereGrid& grid,
                        std::vector<Eigen::Matrix3d>* hessians = nullptr) {
  std::vector<double> norms(grid.size(), 0.0);
  if (hessians != nullptr) hessians->resize(grid.size());
  parallel_chunks(grid.size(), [&](int, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const auto [i, j] = grid.unindex(k);
      Eigen::Matrix3d H = u.hessian(grid.point(i, j));
      norms[k] = H.norm();
      if (hessians != nullptr) (*hessians)[k] = H;
    }
  });
  double scale = 0.0;
  for (double v : norms) scale = std::max(scale, v);
  return scale;
}

}  // namespace

Eigen::Matrix3d rotation_to_pole(const Eigen::Vector3d& x) {
  return minimal_rotation(x, Eigen::Vector3d(0, 0, 1));
}

SurfaceSample surface_sample(const HomogeneousFunction& u, const Eigen::Vector3d& x,
                             double tau_zero) {
  const Eigen::Vector3d d = x.normalized();
  Eigen::Matrix3d H = u.hessian(d);
  if (H.norm() < tau_zero) {
    throw SingularPointError("direction lies in the singular set: |D^2 u| below threshold");
  }

  // Work in the frame where the source direction is the pole.
  Eigen::Matrix3d Q = rotation_to_pole(d);
  Eigen::Matrix3d Hrot = Q * H * Q.transpose();
  const double u11 = Hrot(0, 0), u12 = Hrot(0, 1), u22 = Hrot(1, 1);

  SurfaceSample s;
  s.source = d;
  s.image = u.gradient(d);
  s.first_form << u11 * u11 + u12 * u12, u12 * (u11 + u22), u12 * (u11 + u22),
      u12 * u12 + u22 * u22;
  s.second_form << -u11, -u12, -u12, -u22;

  const double det = u11 * u22 - u12 * u12;
  if (std::abs(det) < 1e-14 * (1.0 + H.squaredNorm())) {
    throw SingularPointError("gradient map is not an immersion at this direction");
  }

  // Principal curvatures: eigenvalues of I^{-1} II (real; I is positive
  // definite away from degenerate directions).
  Eigen::Matrix2d M = s.first_form.inverse() * s.second_form;
  const double tr = M.trace();
  const double dt = M.determinant();
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - dt));
  s.kappa1 = tr / 2.0 + disc;
  s.kappa2 = tr / 2.0 - disc;

  // Cross product of the graph tangents: (0, 0, u11 u22 - u12^2) rotated back.
  s.normal = Q.transpose() * Eigen::Vector3d(0, 0, det > 0 ? 1.0 : -1.0);
  return s;
}

SaddleScan saddle_scan(const HomogeneousFunction& u, int resolution,
                       std::optional<double> tau_zero) {
  SaddleScan scan;
  scan.resolution = resolution;

  std::vector<Eigen::VectorXd> points;
  if (u.dimension() == 3) {
    SphereGrid grid = SphereGrid::with_resolution(resolution);
    points.reserve(grid.size());
    for (int i = 0; i < grid.n_theta2; ++i)
      for (int j = 0; j < grid.n_theta1; ++j) points.push_back(grid.point(i, j));
  } else {
    Sphere3Grid grid = Sphere3Grid::with_resolution(resolution);
    points.reserve(grid.size());
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j)
        for (int k = 0; k < grid.n; ++k) points.push_back(grid.point(i, j, k));
  }

  std::vector<Eigen::MatrixXd> hessians(points.size());
  std::vector<double> norms(points.size());
  parallel_chunks(points.size(), [&](int, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      hessians[k] = u.hessian(points[k]);
      norms[k] = hessians[k].norm();
    }
  });
  scan.hessian_scale = *std::max_element(norms.begin(), norms.end());
  scan.tau_zero = tau_zero.value_or(default_tau_zero(scan.hessian_scale));

  scan.counts = {{"zero", 0}, {"saddle", 0}, {"semidefinite-nonzero", 0}, {"definite", 0}};
  for (std::size_t k = 0; k < points.size(); ++k) {
    HessianSample sample = classify_hessian(hessians[k], points[k], scan.tau_zero);
    ++scan.counts[to_string(sample.classification)];
    if ((sample.classification == HessianClass::Definite ||
         sample.classification == HessianClass::SemidefiniteNonzero) &&
        scan.definite_witnesses.size() < 1024) {
      scan.definite_witnesses.push_back(std::move(sample));
    }
  }
  return scan;
}

std::string to_string(SingularSetClass c) {
  switch (c) {
    case SingularSetClass::Empty: return "empty";
    case SingularSetClass::Finite: return "finite";
    case SingularSetClass::WholeSphere: return "whole-sphere";
    case SingularSetClass::Other: return "other";
  }
  return "unknown";
}

SingularSetReport singular_set_scan(const HomogeneousFunction& u, int base_resolution,
                                    std::optional<double> tau_zero, int refinements) {
  if (u.dimension() != 3) throw ConfigError("singular_set_scan requires n = 3");
  SingularSetReport report;

  {
    SphereGrid grid = SphereGrid::with_resolution(base_resolution);
    report.hessian_scale = hessian_scale_s2(u, grid);
  }
  report.tau_zero = tau_zero.value_or(default_tau_zero(report.hessian_scale));

  constexpr double kCaptureFactor = 2.0;
  for (int level = 0; level < refinements; ++level) {
    const int resolution = base_resolution << level;
    SphereGrid grid = SphereGrid::with_resolution(resolution);
    const double cell = grid.dtheta2();

    std::vector<Eigen::Matrix3d> hessians;
    hessian_scale_s2(u, grid, &hessians);

    SingularLevel lvl;
    lvl.resolution = resolution;
    lvl.capture_threshold = kCaptureFactor * report.hessian_scale * cell;

    std::vector<Eigen::Vector3d> below;
    bool all_below = true;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto [i, j] = grid.unindex(k);
      const double nrm = hessians[k].norm();
      if (nrm >= report.tau_zero) all_below = false;
      if (nrm < lvl.capture_threshold) below.push_back(grid.point(i, j));
    }
    lvl.below_count = below.size();
    lvl.all_below_absolute = all_below;

    if (!all_below && below.size() <= 4096) {
      auto clusters = cluster_directions(below, 2.5 * cell);
      for (const auto& members : clusters) {
        SingularCluster cluster;
        cluster.diameter = cell * std::sqrt(2.0);  // one-cell floor
        for (int idx : members) cluster.points.push_back(below[idx]);
        for (std::size_t a = 0; a < members.size(); ++a)
          for (std::size_t b = a + 1; b < members.size(); ++b)
            cluster.diameter = std::max(
                cluster.diameter, angular_distance(below[members[a]], below[members[b]]));
        lvl.max_diameter = std::max(lvl.max_diameter, cluster.diameter);
        lvl.clusters.push_back(std::move(cluster));
      }
    }
    report.levels.push_back(std::move(lvl));
  }

  const SingularLevel& finest = report.levels.back();
  if (finest.all_below_absolute) {
    report.classification = SingularSetClass::WholeSphere;
  } else if (finest.below_count == 0) {
    report.classification = SingularSetClass::Empty;
  } else {
    bool shrinking = true;
    bool always_present = true;
    for (std::size_t l = 0; l < report.levels.size(); ++l) {
      if (report.levels[l].clusters.empty()) always_present = false;
      if (l > 0 && !report.levels[l].clusters.empty() &&
          !report.levels[l - 1].clusters.empty()) {
        const double ratio = report.levels[l].max_diameter / report.levels[l - 1].max_diameter;
        if (ratio > 0.6) shrinking = false;
      }
    }
    const bool stable_count =
        report.levels.size() < 2 ||
        report.levels[report.levels.size() - 1].clusters.size() ==
            report.levels[report.levels.size() - 2].clusters.size();
    report.classification = (shrinking && always_present && stable_count)
                                ? SingularSetClass::Finite
                                : SingularSetClass::Other;
  }
  return report;
}

ContactReport supporting_plane_probe(const HomogeneousFunction& u, const Eigen::Vector3d& nu,
                                     int resolution) {
  if (u.dimension() != 3) throw ConfigError("supporting_plane_probe requires n = 3");
  SphereGrid grid = SphereGrid::with_resolution(resolution);
  const Eigen::Vector3d probe = nu.normalized();

  std::vector<double> values(grid.size());
  std::vector<Eigen::Vector3d> gradients(grid.size());
  parallel_chunks(grid.size(), [&](int, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const auto [i, j] = grid.unindex(k);
      gradients[k] = u.gradient(grid.point(i, j));
      values[k] = probe.dot(gradients[k]);
    }
  });

  const double vmax = *std::max_element(values.begin(), values.end());
  const double vmin = *std::min_element(values.begin(), values.end());
  const double tie = std::max(1e-12, 1e-9 * (vmax - vmin));

  ContactReport report;
  report.probe = probe;
  report.contact_value = vmax;
  std::vector<Eigen::Vector3d> sources;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (values[k] >= vmax - tie) {
      const auto [i, j] = grid.unindex(k);
      sources.push_back(grid.point(i, j));
      report.contact_images.push_back(gradients[k]);
    }
  }
  report.contact_sources = sources;

  const double cell = grid.dtheta2();
  if (sources.size() <= 4096) {
    report.cluster_count = cluster_directions(sources, 2.5 * cell).size();
  } else {
    report.cluster_count = 1;  // degenerate contact set covering the grid
  }

  // Gap to the best value attained well away from the contact set.
  double second = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto [i, j] = grid.unindex(k);
    const Eigen::Vector3d p = grid.point(i, j);
    double dist = std::numeric_limits<double>::infinity();
    for (const Eigen::Vector3d& s : sources) dist = std::min(dist, angular_distance(p, s));
    if (dist > 3.0 * cell) second = std::max(second, values[k]);
  }
  report.gap_to_second_cluster = std::isfinite(second) ? vmax - second : 0.0;

  report.alignment_tolerance = 3.0 * cell;
  report.aligned_with_probe_axis = true;
  for (const Eigen::Vector3d& s : sources) {
    const double dist =
        std::min(angular_distance(s, probe), angular_distance(s, Eigen::Vector3d(-probe)));
    if (dist > report.alignment_tolerance) report.aligned_with_probe_axis = false;
  }
  return report;
}

LeadingPolynomial leading_polynomial(const Profile& g, const Eigen::Vector2d& p,
                                     const LeadingPolynomialOptions& opts) {
  if (!g.has_spherical()) throw ConfigError("leading_polynomial requires a spherical form");

  // Ring samples around p; the outermost ring sets the reference scale.
  auto ring_values = [&](double rho, std::vector<Eigen::Vector2d>& offsets) {
    offsets.clear();
    std::vector<double> vals;
    for (int m = 0; m < opts.angles; ++m) {
      const double beta = 2.0 * M_PI * m / opts.angles;
      Eigen::Vector2d t(rho * std::cos(beta), rho * std::sin(beta));
      offsets.push_back(t);
      vals.push_back(g.spherical_jet(p + t).value);
    }
    return vals;
  };

  std::vector<Eigen::Vector2d> offsets;
  std::vector<double> outer_vals = ring_values(opts.radii.front(), offsets);
  double outer_scale = 0.0;
  for (double v : outer_vals) outer_scale = std::max(outer_scale, std::abs(v));

  Jet at_p = g.spherical_jet(p);
  const double vanish = opts.vanish_tolerance * (1.0 + outer_scale);
  if (std::abs(at_p.value) > vanish || at_p.grad.norm() > vanish || at_p.hess.norm() > vanish) {
    throw NoVanishingError("profile does not vanish to order >= 3 at the requested point");
  }

  auto fit_order = [&](int k, double rho, double& rel_residual, double& rel_norm) {
    std::vector<Eigen::Vector2d> offs;
    std::vector<double> vals = ring_values(rho, offs);
    Eigen::VectorXd rhs(opts.angles);
    Eigen::MatrixXd basis(opts.angles, k + 1);
    for (int m = 0; m < opts.angles; ++m) {
      rhs(m) = vals[m];
      for (int j = 0; j <= k; ++j) {
        basis(m, j) = std::pow(offs[m](0) / rho, k - j) * std::pow(offs[m](1) / rho, j);
      }
    }
    Eigen::VectorXd scaled = basis.colPivHouseholderQr().solve(rhs);
    const double rhs_norm = rhs.norm();
    rel_residual = rhs_norm > 0 ? (basis * scaled - rhs).norm() / rhs_norm : 0.0;
    rel_norm = rhs_norm > 0 ? (basis * scaled).norm() / rhs_norm : 0.0;
    Eigen::VectorXd coeff = scaled / std::pow(rho, k);
    return coeff;
  };

  for (int k = 3; k <= opts.k_max; ++k) {
    LeadingPolynomial result;
    result.order = k;
    bool nonvanishing = true;
    double prev_residual = std::numeric_limits<double>::infinity();
    bool decaying = true;
    for (double rho : opts.radii) {
      double rel_residual = 0.0, rel_norm = 0.0;
      Eigen::VectorXd coeff = fit_order(k, rho, rel_residual, rel_norm);
      if (rel_norm < opts.fit_threshold) nonvanishing = false;
      if (rel_residual > 1.2 * prev_residual && rel_residual > 1e-10) decaying = false;
      prev_residual = rel_residual;
      result.annulus_radii.push_back(rho);
      result.relative_residuals.push_back(rel_residual);
      result.coefficients = coeff;  // finest annulus wins
    }
    if (!nonvanishing) continue;
    if (!decaying) {
      throw FitAmbiguousError("fit residuals do not decay with the annulus radius");
    }

    // Laplacian of the fitted homogeneous polynomial, evaluated symbolically.
    if (k >= 2) {
      Eigen::VectorXd lap = Eigen::VectorXd::Zero(k - 1);
      for (int m = 0; m <= k - 2; ++m) {
        lap(m) = result.coefficients(m) * (k - m) * (k - m - 1) +
                 result.coefficients(m + 2) * (m + 2) * (m + 1);
      }
      result.laplacian_defect = lap.norm();
    }
    return result;
  }
  throw FitAmbiguousError("no non-vanishing homogeneous fit up to the requested order");
}

Profile recentered_spherical_profile(const HomogeneousFunction& u, const Eigen::Vector3d& x0) {
  if (!u.profile().has_ambient()) {
    throw ConfigError("recentering requires an ambient form");
  }
  const Eigen::Matrix3d R = minimal_rotation(x0, Eigen::Vector3d(1, 0, 0));
  const Eigen::Matrix3d Rt = R.transpose();
  const Eigen::Vector3d linear = u.gradient(x0.normalized());
  const JetFn ambient = u.profile().ambient;

  JetFn g = [Rt, linear, ambient](const std::vector<Jet>& th) {
    std::vector<Jet> omega{cos(th[1]) * cos(th[0]), cos(th[1]) * sin(th[0]), sin(th[1])};
    std::vector<Jet> x(3, Jet::constant(th[0].vars(), 0.0));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) x[i] = x[i] + Rt(i, j) * omega[j];
    Jet val = ambient(x);
    for (int i = 0; i < 3; ++i) val = val - linear(i) * x[i];
    return val;
  };
  return Profile::from_spherical(u.profile().name + "@recentered", g);
}

std::string surface_csv(const HomogeneousFunction& u, int resolution,
                        std::optional<double> tau_zero) {
  SphereGrid grid = SphereGrid::with_resolution(resolution);
  double scale = hessian_scale_s2(u, grid);
  const double tau = tau_zero.value_or(default_tau_zero(scale));

  std::ostringstream csv;
  csv.precision(17);
  csv << "x1,x2,x3,g1,g2,g3,n1,n2,n3,kappa1,kappa2,class\n";
  for (int i = 0; i < grid.n_theta2; ++i) {
    for (int j = 0; j < grid.n_theta1; ++j) {
      const Eigen::Vector3d x = grid.point(i, j);
      HessianSample cls = classify_hessian(u.hessian(x), x, tau);
      try {
        SurfaceSample s = surface_sample(u, x, tau);
        csv << x(0) << "," << x(1) << "," << x(2) << "," << s.image(0) << "," << s.image(1)
            << "," << s.image(2) << "," << s.normal(0) << "," << s.normal(1) << ","
            << s.normal(2) << "," << s.kappa1 << "," << s.kappa2 << ","
            << to_string(cls.classification) << "\n";
      } catch (const SingularPointError&) {
        const Eigen::Vector3d gvec = u.gradient(x);
        csv << x(0) << "," << x(1) << "," << x(2) << "," << gvec(0) << "," << gvec(1) << ","
            << gvec(2) << ",,,,,," << to_string(cls.classification) << "\n";
      }
    }
  }
  return csv.str();
}

}  // namespace rigidity
