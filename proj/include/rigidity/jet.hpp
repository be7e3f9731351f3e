#pragma once

// Second-order jets: value, gradient and Hessian of a scalar expression in
// up to four variables, propagated through a small primitive library
// (arithmetic, powers, trig, square roots, atan2). Closed-form profiles are
// written once as jet expressions and yield exact derivatives everywhere;
// finite differences are kept for cross-validation only.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace rigidity {

inline constexpr int kMaxVars = 4;

using JetVec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxVars, 1>;
using JetMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxVars, kMaxVars>;

struct Jet {
  double value = 0.0;
  JetVec grad;
  JetMat hess;

  Jet() = default;

  int vars() const { return static_cast<int>(grad.size()); }

  static Jet constant(int nvars, double v) {
    Jet j;
    j.value = v;
    j.grad = JetVec::Zero(nvars);
    j.hess = JetMat::Zero(nvars, nvars);
    return j;
  }

  static Jet variable(int nvars, int index, double v) {
    Jet j = constant(nvars, v);
    j.grad(index) = 1.0;
    return j;
  }

  static std::vector<Jet> variables(const Eigen::VectorXd& x) {
    const int n = static_cast<int>(x.size());
    std::vector<Jet> vars;
    vars.reserve(n);
    for (int i = 0; i < n; ++i) vars.push_back(variable(n, i, x(i)));
    return vars;
  }
};

// A scalar expression evaluated on jets. Calling it with variable jets gives
// the full 2-jet at a point; calling it with composite jets performs the
// chain rule automatically.
using JetFn = std::function<Jet(const std::vector<Jet>&)>;

inline Jet operator+(const Jet& a, const Jet& b) {
  Jet r;
  r.value = a.value + b.value;
  r.grad = a.grad + b.grad;
  r.hess = a.hess + b.hess;
  return r;
}

inline Jet operator-(const Jet& a, const Jet& b) {
  Jet r;
  r.value = a.value - b.value;
  r.grad = a.grad - b.grad;
  r.hess = a.hess - b.hess;
  return r;
}

inline Jet operator-(const Jet& a) {
  Jet r;
  r.value = -a.value;
  r.grad = -a.grad;
  r.hess = -a.hess;
  return r;
}

inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  r.value = a.value * b.value;
  r.grad = a.value * b.grad + b.value * a.grad;
  r.hess = a.value * b.hess + b.value * a.hess + a.grad * b.grad.transpose() +
           b.grad * a.grad.transpose();
  return r;
}

inline Jet operator+(const Jet& a, double c) {
  Jet r = a;
  r.value += c;
  return r;
}
inline Jet operator+(double c, const Jet& a) { return a + c; }
inline Jet operator-(const Jet& a, double c) { return a + (-c); }
inline Jet operator-(double c, const Jet& a) { return (-a) + c; }

inline Jet operator*(const Jet& a, double c) {
  Jet r;
  r.value = a.value * c;
  r.grad = a.grad * c;
  r.hess = a.hess * c;
  return r;
}
inline Jet operator*(double c, const Jet& a) { return a * c; }
inline Jet operator/(const Jet& a, double c) { return a * (1.0 / c); }

// f(u) with supplied f, f', f''.
inline Jet chain(const Jet& u, double f, double df, double d2f) {
  Jet r;
  r.value = f;
  r.grad = df * u.grad;
  r.hess = df * u.hess + d2f * (u.grad * u.grad.transpose());
  return r;
}

inline Jet inverse(const Jet& u) {
  const double v = u.value;
  return chain(u, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * inverse(b); }
inline Jet operator/(double c, const Jet& b) { return inverse(b) * c; }

inline Jet sqrt(const Jet& u) {
  const double s = std::sqrt(u.value);
  return chain(u, s, 0.5 / s, -0.25 / (s * u.value));
}

inline Jet sin(const Jet& u) {
  const double s = std::sin(u.value), c = std::cos(u.value);
  return chain(u, s, c, -s);
}

inline Jet cos(const Jet& u) {
  const double s = std::sin(u.value), c = std::cos(u.value);
  return chain(u, c, -s, -c);
}

inline Jet tan(const Jet& u) {
  const double t = std::tan(u.value);
  const double sec2 = 1.0 + t * t;
  return chain(u, t, sec2, 2.0 * t * sec2);
}

inline Jet asin(const Jet& u) {
  const double v = u.value;
  const double w = 1.0 - v * v;
  const double s = std::sqrt(w);
  return chain(u, std::asin(v), 1.0 / s, v / (w * s));
}

inline Jet exp(const Jet& u) {
  const double e = std::exp(u.value);
  return chain(u, e, e, e);
}

inline Jet tanh(const Jet& u) {
  const double t = std::tanh(u.value);
  const double sech2 = 1.0 - t * t;
  return chain(u, t, sech2, -2.0 * t * sech2);
}

inline Jet pow(const Jet& u, int p) {
  if (p == 0) return Jet::constant(u.vars(), 1.0);
  if (p == 1) return u;
  const double v = u.value;
  const double f = std::pow(v, p);
  const double df = p * std::pow(v, p - 1);
  const double d2f = static_cast<double>(p) * (p - 1) * std::pow(v, p - 2);
  return chain(u, f, df, d2f);
}

// Real exponent; requires u > 0.
inline Jet pow(const Jet& u, double p) {
  const double v = u.value;
  const double f = std::pow(v, p);
  return chain(u, f, p * f / v, p * (p - 1.0) * f / (v * v));
}

inline Jet atan2(const Jet& y, const Jet& x) {
  const double xv = x.value, yv = y.value;
  const double q = xv * xv + yv * yv;
  const double fy = xv / q, fx = -yv / q;
  const double q2 = q * q;
  const double fxx = 2.0 * xv * yv / q2;
  const double fyy = -fxx;
  const double fxy = (yv * yv - xv * xv) / q2;
  Jet r;
  r.value = std::atan2(yv, xv);
  r.grad = fx * x.grad + fy * y.grad;
  r.hess = fx * x.hess + fy * y.hess + fxx * (x.grad * x.grad.transpose()) +
           fyy * (y.grad * y.grad.transpose()) +
           fxy * (x.grad * y.grad.transpose() + y.grad * x.grad.transpose());
  return r;
}

inline Jet squared_norm(const std::vector<Jet>& x) {
  Jet s = Jet::constant(x.empty() ? 0 : x[0].vars(), 0.0);
  for (const Jet& xi : x) s = s + xi * xi;
  return s;
}

inline Jet norm(const std::vector<Jet>& x) { return sqrt(squared_norm(x)); }

// Full 2-jet of a scalar expression at a point.
inline Jet eval_jet(const JetFn& f, const Eigen::VectorXd& x) {
  return f(Jet::variables(x));
}

}  // namespace rigidity
