#pragma once

// Closed-form profiles for homogeneous functions on R^n \ {0}, n in {3,4}.
// A profile may carry up to three representations of the same function:
//   - an ambient form u(x) valid away from the origin,
//   - projective chart forms h(x') = u(x', +/-1) on the planes x_n = +/-1,
//   - a spherical form g(theta1, theta2) with u = r^alpha g (n = 3 only).
// Bundled profiles are registered by name; all derivatives are analytic jets.

#include "rigidity/jet.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rigidity {

enum class ChartSign { Positive, Negative };

struct Profile {
  std::string name;
  int dimension = 3;  // ambient n
  std::string formula;
  std::string note;  // short provenance/usage note for listings

  JetFn ambient;    // n variables, defined on R^n \ {0}
  JetFn chart_pos;  // n-1 variables, h(x') = u(x', 1)
  JetFn chart_neg;  // n-1 variables, u(x', -1)
  JetFn spherical;  // 2 variables (theta1, theta2); n == 3 only

  // Derived ambient forms inherit the coordinate singularities of their
  // source representation.
  bool ambient_covers_equator = true;  // false when derived from a chart
  bool ambient_covers_poles = true;    // false when derived from a spherical form

  bool has_ambient() const { return static_cast<bool>(ambient); }
  bool has_chart(ChartSign s) const {
    return s == ChartSign::Positive ? static_cast<bool>(chart_pos)
                                    : static_cast<bool>(chart_neg);
  }
  bool has_spherical() const { return static_cast<bool>(spherical); }

  // Constructors deriving the missing representations.
  static Profile from_ambient(std::string name, int dimension, JetFn u,
                              std::string formula = {}, std::string note = {});
  // Order-one projective chart profile u = x_n h(x'/x_n), extended to x_n < 0
  // by the same rational formula (odd across the equator).
  static Profile from_chart(std::string name, int dimension, JetFn h,
                            std::string formula = {}, std::string note = {});
  static Profile from_spherical(std::string name, JetFn g, std::string formula = {},
                                std::string note = {});

  // 2-jet of the chart restriction h at p (n-1 coordinates).
  Jet chart_jet(ChartSign sign, const Eigen::VectorXd& p) const;
  // 2-jet of the spherical restriction g at (theta1, theta2); n == 3 only.
  Jet spherical_jet(const Eigen::Vector2d& theta) const;
};

// Bundled profile registry. Lookup throws ConfigError for unknown names.
const std::vector<Profile>& profile_registry();
const Profile& find_profile(const std::string& name);
bool has_profile(const std::string& name);

// Deterministic, stable listing used by the CLI and bindings.
std::string format_profile_listing();

}  // namespace rigidity
