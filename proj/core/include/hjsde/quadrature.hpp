#pragma once
#include <cmath>
#include <functional>

#include "hjsde/errors.hpp"
#include "hjsde/jet.hpp"

namespace hjsde::quadrature {

// Gauss-Kronrod 7/15 nodes and weights on [-1,1].
inline constexpr double kKronrodX[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
inline constexpr double kKronrodW[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
inline constexpr double kGaussW[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
    0.381830050505119, 0.279705391489277, 0.129484966168870};

namespace detail {

template <class T>
double norm_of(const T& v);
template <>
inline double norm_of<double>(const double& v) { return std::abs(v); }
template <>
inline double norm_of<Jet>(const Jet& v) {
  double m = 0;
  for (int a = 0; a <= Jet::kMaxOrder; ++a)
    for (int b = 0; a + b <= Jet::kMaxOrder; ++b) m = std::max(m, std::abs(v.coeff(a, b)));
  return m;
}

template <class T, class F>
void panel(const F& f, double a, double b, T& kronrod, T& gauss) {
  double h = 0.5 * (b - a), mid = 0.5 * (a + b);
  int gi = 0;
  for (int i = 0; i < 15; ++i) {
    T fx = f(mid + h * kKronrodX[i]);
    T kterm = fx * (kKronrodW[i] * h);
    kronrod = (i == 0) ? kterm : kronrod + kterm;
    if (i % 2 == 1) {
      T gterm = fx * (kGaussW[gi++] * h);
      gauss = (gi == 1) ? gterm : gauss + gterm;
    }
  }
}

template <class T, class F>
T adaptive(const F& f, double a, double b, double tol, int depth) {
  T k, g;
  panel<T>(f, a, b, k, g);
  if (norm_of<T>(k - g) <= tol || depth >= 48) {
    if (depth >= 48) throw QuadratureTolExceeded("adaptive quadrature exceeded max depth");
    return k;
  }
  double mid = 0.5 * (a + b);
  return adaptive<T>(f, a, mid, tol * 0.5, depth + 1) +
         adaptive<T>(f, mid, b, tol * 0.5, depth + 1);
}

} // namespace detail

// Adaptive bisection with an embedded G7/K15 error estimate; absolute tolerance.
template <class F>
auto integrate(const F& f, double a, double b, double tol) -> decltype(f(a)) {
  using T = decltype(f(a));
  if (a == b) return f(a) * 0.0;
  return detail::adaptive<T>(f, a, b, tol, 0);
}

} // namespace hjsde::quadrature
