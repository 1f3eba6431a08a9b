#pragma once
#include <array>
#include <cmath>
#include <cstdlib>

#include "hjsde/errors.hpp"

namespace hjsde {

// Truncated bivariate Taylor value in (rho, eta) at a base point, total degree
// <= 3. coeff(a,b) = (d/drho)^a (d/deta)^b f / (a! b!). Arithmetic is exact
// truncated-polynomial algebra, so propagated coefficients of closed-form
// expressions match analytic derivatives to rounding.
class Jet {
 public:
  static constexpr int kMaxOrder = 3;
  static constexpr int kCoeffs = 10;

  Jet() = default;

  static Jet constant(double v, double rho0, double eta0, int order = kMaxOrder) {
    Jet j(rho0, eta0, order);
    j.c_[0] = v;
    return j;
  }
  static Jet rho_var(double rho0, double eta0, int order = kMaxOrder) {
    Jet j = constant(rho0, rho0, eta0);
    j.order_ = order;
    if (order >= 1) j.c_[idx(1, 0)] = 1.0;
    return j;
  }
  static Jet eta_var(double rho0, double eta0, int order = kMaxOrder) {
    Jet j = constant(eta0, rho0, eta0);
    j.order_ = order;
    if (order >= 1) j.c_[idx(0, 1)] = 1.0;
    return j;
  }

  double rho0() const { return rho0_; }
  double eta0() const { return eta0_; }
  int order() const { return order_; }

  static int idx(int a, int b) {
    int d = a + b;
    return d * (d + 1) / 2 + b;
  }
  double coeff(int a, int b) const { return c_[idx(a, b)]; }
  double& coeff(int a, int b) { return c_[idx(a, b)]; }

  double value() const { return c_[0]; }
  double d_rho() const { return c_[idx(1, 0)]; }
  double d_eta() const { return c_[idx(0, 1)]; }
  double d2_rho_rho() const { return 2.0 * c_[idx(2, 0)]; }
  double d2_rho_eta() const { return c_[idx(1, 1)]; }
  double d2_eta_eta() const { return 2.0 * c_[idx(0, 2)]; }
  // derivative d^{a+b} f / drho^a deta^b
  double deriv(int a, int b) const {
    static constexpr double fact[4] = {1, 1, 2, 6};
    return c_[idx(a, b)] * fact[a] * fact[b];
  }

  // d/drho as a jet one order lower
  Jet deriv_rho() const {
    Jet out(rho0_, eta0_, order_ > 0 ? order_ - 1 : 0);
    for (int d = 0; d <= out.order_; ++d)
      for (int b = 0; b <= d; ++b) out.c_[idx(d - b, b)] = (d - b + 1) * c_[idx(d - b + 1, b)];
    return out;
  }
  Jet deriv_eta() const {
    Jet out(rho0_, eta0_, order_ > 0 ? order_ - 1 : 0);
    for (int d = 0; d <= out.order_; ++d)
      for (int b = 0; b <= d; ++b) out.c_[idx(d - b, b)] = (b + 1) * c_[idx(d - b, b + 1)];
    return out;
  }

  Jet operator-() const {
    Jet out = *this;
    for (double& x : out.c_) x = -x;
    return out;
  }

  friend Jet operator+(const Jet& x, const Jet& y) {
    Jet out = x.aligned(y);
    for (int i = 0; i < kCoeffs; ++i) out.c_[i] += y.c_[i];
    out.clip();
    return out;
  }
  friend Jet operator-(const Jet& x, const Jet& y) { return x + (-y); }
  friend Jet operator*(const Jet& x, const Jet& y) {
    Jet out(x.rho0_, x.eta0_, x.aligned(y).order_);
    for (int d1 = 0; d1 <= x.order_; ++d1)
      for (int b1 = 0; b1 <= d1; ++b1) {
        double xc = x.c_[idx(d1 - b1, b1)];
        if (xc == 0.0) continue;
        for (int d2 = 0; d1 + d2 <= out.order_ && d2 <= y.order_; ++d2)
          for (int b2 = 0; b2 <= d2; ++b2)
            out.c_[idx(d1 - b1 + d2 - b2, b1 + b2)] += xc * y.c_[idx(d2 - b2, b2)];
      }
    return out;
  }
  friend Jet operator/(const Jet& x, const Jet& y) { return x * y.recip(); }

  friend Jet operator+(const Jet& x, double s) {
    Jet out = x;
    out.c_[0] += s;
    return out;
  }
  friend Jet operator+(double s, const Jet& x) { return x + s; }
  friend Jet operator-(const Jet& x, double s) { return x + (-s); }
  friend Jet operator-(double s, const Jet& x) { return (-x) + s; }
  friend Jet operator*(const Jet& x, double s) {
    Jet out = x;
    for (double& v : out.c_) v *= s;
    return out;
  }
  friend Jet operator*(double s, const Jet& x) { return x * s; }
  friend Jet operator/(const Jet& x, double s) { return x * (1.0 / s); }
  friend Jet operator/(double s, const Jet& x) { return x.recip() * s; }

  Jet recip() const {
    if (c_[0] == 0.0) throw ZeroDenominator("jet reciprocal at zero value");
    double v = c_[0];
    return compose(1.0 / v, -1.0 / (v * v), 1.0 / (v * v * v), -1.0 / (v * v * v * v));
  }

  friend Jet sqrt(const Jet& x) {
    double v = x.value();
    if (v <= 0.0) throw Error("jet sqrt at non-positive value");
    double s = std::sqrt(v);
    return x.compose(s, 0.5 / s, -1.0 / (8.0 * v * s), 1.0 / (16.0 * v * v * s));
  }
  friend Jet pow(const Jet& x, double r) {
    double v = x.value();
    if (v <= 0.0) throw Error("jet pow at non-positive value");
    double p0 = std::pow(v, r);
    return x.compose(p0, r * p0 / v, r * (r - 1) / 2.0 * p0 / (v * v),
                     r * (r - 1) * (r - 2) / 6.0 * p0 / (v * v * v));
  }
  friend Jet exp(const Jet& x) {
    double e = std::exp(x.value());
    return x.compose(e, e, e / 2.0, e / 6.0);
  }
  friend Jet log(const Jet& x) {
    double v = x.value();
    if (v <= 0.0) throw Error("jet log at non-positive value");
    return x.compose(std::log(v), 1.0 / v, -0.5 / (v * v), 1.0 / (3.0 * v * v * v));
  }
  friend Jet sin(const Jet& x) {
    double s = std::sin(x.value()), c = std::cos(x.value());
    return x.compose(s, c, -s / 2.0, -c / 6.0);
  }
  friend Jet cos(const Jet& x) {
    double s = std::sin(x.value()), c = std::cos(x.value());
    return x.compose(c, -s, -c / 2.0, s / 6.0);
  }
  friend Jet sinh(const Jet& x) {
    double s = std::sinh(x.value()), c = std::cosh(x.value());
    return x.compose(s, c, s / 2.0, c / 6.0);
  }
  friend Jet cosh(const Jet& x) {
    double s = std::sinh(x.value()), c = std::cosh(x.value());
    return x.compose(c, s, c / 2.0, s / 6.0);
  }
  // sign(value) * jet; only meaningful away from the zero level set
  friend Jet abs(const Jet& x) {
    if (x.value() == 0.0) throw Error("jet abs at zero value");
    return x.value() > 0.0 ? x : -x;
  }

 private:
  Jet(double rho0, double eta0, int order) : rho0_(rho0), eta0_(eta0), order_(order) { c_.fill(0.0); }

  // checks base points agree, returns copy of *this with combined (min) order
  Jet aligned(const Jet& other) const {
    if (rho0_ != other.rho0_ || eta0_ != other.eta0_)
      throw Error("jet base points differ");
    Jet out = *this;
    out.order_ = order_ < other.order_ ? order_ : other.order_;
    return out;
  }
  void clip() {
    for (int d = order_ + 1; d <= kMaxOrder; ++d)
      for (int b = 0; b <= d; ++b) c_[idx(d - b, b)] = 0.0;
  }
  // series s0 + s1 u + s2 u^2 + s3 u^3 in u = (*this - value)
  Jet compose(double s0, double s1, double s2, double s3) const {
    Jet u = *this;
    u.c_[0] = 0.0;
    Jet u2 = u * u;
    Jet out = u * s1 + u2 * s2 + (u2 * u) * s3;
    out.c_[0] = s0;
    return out;
  }

  std::array<double, kCoeffs> c_{};
  double rho0_ = 0.0, eta0_ = 0.0;
  int order_ = kMaxOrder;
};

} // namespace hjsde
