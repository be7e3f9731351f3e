#include "rigidity/profile.hpp"

#include "rigidity/errors.hpp"

#include <sstream>

namespace rigidity {

namespace {

// Pad a chart point with a constant last coordinate and evaluate the ambient
// form; the embedding is affine, so the restriction of the jet is exact.
Jet ambient_on_plane(const JetFn& ambient, const std::vector<Jet>& chart_vars, double plane) {
  std::vector<Jet> x(chart_vars);
  const int n = chart_vars.empty() ? 1 : chart_vars[0].vars();
  x.push_back(Jet::constant(n, plane));
  return ambient(x);
}

JetFn spherical_from_ambient(const JetFn& u) {
  return [u](const std::vector<Jet>& th) {
    std::vector<Jet> x{cos(th[1]) * cos(th[0]), cos(th[1]) * sin(th[0]), sin(th[1])};
    return u(x);
  };
}

}  // namespace

Profile Profile::from_ambient(std::string name, int dimension, JetFn u, std::string formula,
                              std::string note) {
  Profile p;
  p.name = std::move(name);
  p.dimension = dimension;
  p.formula = std::move(formula);
  p.note = std::move(note);
  p.ambient = u;
  p.chart_pos = [u](const std::vector<Jet>& y) { return ambient_on_plane(u, y, 1.0); };
  p.chart_neg = [u](const std::vector<Jet>& y) { return ambient_on_plane(u, y, -1.0); };
  if (dimension == 3) p.spherical = spherical_from_ambient(u);
  return p;
}

Profile Profile::from_chart(std::string name, int dimension, JetFn h, std::string formula,
                            std::string note) {
  Profile p;
  p.name = std::move(name);
  p.dimension = dimension;
  p.formula = std::move(formula);
  p.note = std::move(note);
  p.chart_pos = h;
  // u = x_n h(x'/x_n) is order-one homogeneous on both half spaces.
  p.chart_neg = [h](const std::vector<Jet>& y) {
    std::vector<Jet> my;
    my.reserve(y.size());
    for (const Jet& yi : y) my.push_back(-yi);
    return -h(my);
  };
  p.ambient = [h, dimension](const std::vector<Jet>& x) {
    const Jet& t = x[dimension - 1];
    std::vector<Jet> y;
    y.reserve(dimension - 1);
    for (int i = 0; i < dimension - 1; ++i) y.push_back(x[i] / t);
    return t * h(y);
  };
  p.ambient_covers_equator = false;
  if (dimension == 3) p.spherical = spherical_from_ambient(p.ambient);
  return p;
}

Profile Profile::from_spherical(std::string name, JetFn g, std::string formula,
                                std::string note) {
  Profile p;
  p.name = std::move(name);
  p.dimension = 3;
  p.formula = std::move(formula);
  p.note = std::move(note);
  p.spherical = g;
  p.ambient = [g](const std::vector<Jet>& x) {
    Jet r = norm(x);
    std::vector<Jet> th{atan2(x[1], x[0]), asin(x[2] / r)};
    return r * g(th);
  };
  p.ambient_covers_poles = false;
  const JetFn ambient = p.ambient;
  p.chart_pos = [ambient](const std::vector<Jet>& y) { return ambient_on_plane(ambient, y, 1.0); };
  p.chart_neg = [ambient](const std::vector<Jet>& y) { return ambient_on_plane(ambient, y, -1.0); };
  return p;
}

Jet Profile::chart_jet(ChartSign sign, const Eigen::VectorXd& p) const {
  const JetFn& h = sign == ChartSign::Positive ? chart_pos : chart_neg;
  if (!h) {
    throw ChartPoleError("profile '" + name + "' has no chart on x_n = " +
                         (sign == ChartSign::Positive ? std::string("+1") : std::string("-1")));
  }
  return h(Jet::variables(p));
}

Jet Profile::spherical_jet(const Eigen::Vector2d& theta) const {
  if (!spherical) {
    throw PoleProximityError("profile '" + name + "' has no spherical form");
  }
  return spherical(Jet::variables(theta));
}

namespace {

std::vector<Profile> build_registry() {
  std::vector<Profile> reg;

  auto r3 = [](const std::vector<Jet>& x) { return norm(x); };

  reg.push_back(Profile::from_ambient(
      "linear:x1", 3, [](const std::vector<Jet>& x) { return x[0]; }, "x1",
      "linear solution; zero Hessian"));
  reg.push_back(Profile::from_ambient(
      "linear:x2", 3, [](const std::vector<Jet>& x) { return x[1]; }, "x2",
      "linear solution; zero Hessian"));
  reg.push_back(Profile::from_ambient(
      "linear:x3", 3, [](const std::vector<Jet>& x) { return x[2]; }, "x3",
      "linear solution; zero Hessian"));
  reg.push_back(Profile::from_ambient(
      "linear:mixed", 3,
      [](const std::vector<Jet>& x) { return x[0] + 2.0 * x[1] - x[2]; }, "x1 + 2 x2 - x3",
      "linear solution; zero Hessian"));

  reg.push_back(Profile::from_ambient(
      "radius", 3, [r3](const std::vector<Jet>& x) { return r3(x); }, "|x|",
      "radial profile; gradient surface is the unit sphere"));
  reg.push_back(Profile::from_ambient(
      "q2-over-r", 3,
      [r3](const std::vector<Jet>& x) { return (x[0] * x[0] - x[1] * x[1]) / r3(x); },
      "(x1^2 - x2^2) / |x|",
      "order-one saddle quadric; definite Hessian near +-e1, +-e2"));
  reg.push_back(Profile::from_ambient(
      "q2b-over-r", 3,
      [r3](const std::vector<Jet>& x) { return (x[1] * x[1] - x[2] * x[2]) / r3(x); },
      "(x2^2 - x3^2) / |x|", "axis-permuted saddle quadric"));
  reg.push_back(Profile::from_ambient(
      "xy-over-r", 3,
      [r3](const std::vector<Jet>& x) { return x[0] * x[1] / r3(x); }, "x1 x2 / |x|",
      "rotated saddle quadric"));
  reg.push_back(Profile::from_ambient(
      "zonal-over-r", 3,
      [r3](const std::vector<Jet>& x) {
        return (2.0 * x[2] * x[2] - x[0] * x[0] - x[1] * x[1]) / r3(x);
      },
      "(2 x3^2 - x1^2 - x2^2) / |x|", "zonal quadric"));
  reg.push_back(Profile::from_ambient(
      "cubic-over-r2", 3,
      [](const std::vector<Jet>& x) {
        return (x[0] * x[0] * x[0] - 3.0 * x[0] * x[1] * x[1]) / squared_norm(x);
      },
      "(x1^3 - 3 x1 x2^2) / |x|^2", "harmonic cubic over |x|^2"));
  reg.push_back(Profile::from_chart(
      "chart:q2", 3,
      [](const std::vector<Jet>& y) { return y[0] * y[0] - y[1] * y[1]; },
      "x3 h(x1/x3, x2/x3) with h = x1^2 - x2^2",
      "chart-only profile; undefined on the equator x3 = 0"));

  reg.push_back(Profile::from_ambient(
      "lo-scalar", 4,
      [r3](const std::vector<Jet>& x) {
        return (x[0] * x[0] + x[1] * x[1] - x[2] * x[2] - x[3] * x[3]) / r3(x);
      },
      "(x1^2 + x2^2 - x3^2 - x4^2) / |x|",
      "scalar saddle profile underlying the Lawson-Osserman cone"));

  const double lo = std::sqrt(5.0) / 2.0;
  reg.push_back(Profile::from_ambient(
      "lo-f1", 4,
      [r3, lo](const std::vector<Jet>& x) {
        return lo * (x[0] * x[0] + x[1] * x[1] - x[2] * x[2] - x[3] * x[3]) / r3(x);
      },
      "sqrt(5)/2 (x1^2 + x2^2 - x3^2 - x4^2) / |x|", "Lawson-Osserman cone, first component"));
  reg.push_back(Profile::from_ambient(
      "lo-f2", 4,
      [r3, lo](const std::vector<Jet>& x) {
        return lo * (2.0 * x[0] * x[2] + 2.0 * x[1] * x[3]) / r3(x);
      },
      "sqrt(5)/2 (2 x1 x3 + 2 x2 x4) / |x|", "Lawson-Osserman cone, second component"));
  reg.push_back(Profile::from_ambient(
      "lo-f3", 4,
      [r3, lo](const std::vector<Jet>& x) {
        return lo * (2.0 * x[1] * x[2] - 2.0 * x[0] * x[3]) / r3(x);
      },
      "sqrt(5)/2 (2 x2 x3 - 2 x1 x4) / |x|", "Lawson-Osserman cone, third component"));
  reg.push_back(Profile::from_ambient(
      "linear4:x1", 4, [](const std::vector<Jet>& x) { return x[0]; }, "x1",
      "linear solution in R^4"));

  return reg;
}

}  // namespace

const std::vector<Profile>& profile_registry() {
  static const std::vector<Profile> registry = build_registry();
  return registry;
}

bool has_profile(const std::string& name) {
  for (const Profile& p : profile_registry())
    if (p.name == name) return true;
  return false;
}

const Profile& find_profile(const std::string& name) {
  for (const Profile& p : profile_registry())
    if (p.name == name) return p;
  throw ConfigError("unknown profile '" + name + "'");
}

std::string format_profile_listing() {
  std::ostringstream out;
  for (const Profile& p : profile_registry()) {
    out << p.name << "  [n=" << p.dimension << "]  " << p.formula << "  -- " << p.note << "\n";
  }
  return out.str();
}

}  // namespace rigidity
