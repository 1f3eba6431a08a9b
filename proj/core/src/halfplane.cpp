#include "hjsde/halfplane.hpp"

#include <cmath>

namespace hjsde {

Jet basic_F_jet(const HalfPlanePoint& pt, const BoundarySupportPoint& y, int order) {
  Jet rho = Jet::rho_var(pt.rho, pt.eta, order);
  if (y.at_infinity) return pow(rho, -0.5);
  Jet de = Jet::eta_var(pt.rho, pt.eta, order) - y.y;
  return sqrt(rho * rho + de * de) * pow(rho, -0.5);
}

std::array<double, 2> basic_phi(const HalfPlanePoint& pt, double y) {
  double de = pt.eta - y;
  double r = std::sqrt(pt.rho * pt.rho + de * de);
  return {pt.rho / r, de / r};
}

std::array<Jet, 2> basic_phi_jet(const HalfPlanePoint& pt, double y, int order) {
  Jet rho = Jet::rho_var(pt.rho, pt.eta, order);
  Jet de = Jet::eta_var(pt.rho, pt.eta, order) - y;
  Jet inv_r = pow(rho * rho + de * de, -0.5);
  return {rho * inv_r, de * inv_r};
}

double laplacian_residual(const Jet& F) {
  double rho = F.rho0();
  return rho * rho * (F.d2_rho_rho() + F.d2_eta_eta()) - 0.75 * F.value();
}

MoebiusMap::MoebiusMap(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
  double det = a * d - b * c;
  if (!(det > 0)) throw BadInput("MoebiusMap needs ad - bc > 0");
  double s = std::sqrt(det);
  a /= s; b /= s; c /= s; d /= s;
}

MoebiusMap MoebiusMap::dilation(double s) {
  if (!(s > 0)) throw BadInput("dilation factor must be positive");
  return {std::sqrt(s), 0, 0, 1 / std::sqrt(s)};
}

HalfPlanePoint moebius_apply(const MoebiusMap& map, const HalfPlanePoint& pt) {
  // z = eta + i rho; |cz+d|^2 > 0 in the open half-plane
  double dr = map.c * pt.eta + map.d;
  double di = map.c * pt.rho;
  double den = dr * dr + di * di;
  double nr = map.a * pt.eta + map.b;
  double eta = (nr * dr + map.a * pt.rho * di) / den;
  double rho = pt.rho / den; // ad - bc = 1
  return {rho, eta};
}

TransformedBoundary moebius_apply(const MoebiusMap& map, const BoundarySupportPoint& y) {
  if (y.at_infinity) {
    if (map.c == 0.0) return {BoundarySupportPoint::infinity(), std::abs(map.a)};
    return {BoundarySupportPoint::finite(map.a / map.c), std::abs(map.c)};
  }
  double den = map.c * y.y + map.d;
  if (den == 0.0) return {BoundarySupportPoint::infinity(), 1.0 / std::abs(map.c)};
  return {BoundarySupportPoint::finite((map.a * y.y + map.b) / den), std::abs(den)};
}

double moebius_apply_finite(const MoebiusMap& map, double y) {
  auto out = moebius_apply(map, BoundarySupportPoint::finite(y));
  if (out.y.at_infinity) throw PoleAtPoint("boundary point maps to infinity");
  return out.y.y;
}

HalfPlanePoint invert_point(const HalfPlanePoint& pt) {
  double s = pt.rho * pt.rho + pt.eta * pt.eta;
  if (s == 0.0) throw OriginSingular("inversion undefined at the origin");
  return {pt.rho / s, -pt.eta / s};
}

} // namespace hjsde
