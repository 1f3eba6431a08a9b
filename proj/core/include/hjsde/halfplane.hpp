#pragma once
#include <array>

#include "hjsde/jet.hpp"

namespace hjsde {

// Evaluation floor: fields are singular as rho -> 0; boundary-limit claims are
// handled by asymptotic fits, never by evaluating below this.
inline constexpr double kRhoMin = 1e-8;

struct HalfPlanePoint {
  double rho;
  double eta;
  HalfPlanePoint(double rho_, double eta_) : rho(rho_), eta(eta_) {
    if (!(rho >= kRhoMin)) throw BadInput("half-plane point needs rho >= 1e-8");
  }
};

// Boundary point of H^2: a real y or the point at infinity.
struct BoundarySupportPoint {
  static BoundarySupportPoint finite(double y) { return {false, y}; }
  static BoundarySupportPoint infinity() { return {true, 0.0}; }
  bool at_infinity;
  double y;
};

// Order-3 jet of the basic eigenfunction F(rho,eta;y) = sqrt(rho^2+(eta-y)^2)/sqrt(rho),
// or of F(rho,eta;inf) = 1/sqrt(rho).
Jet basic_F_jet(const HalfPlanePoint& pt, const BoundarySupportPoint& y, int order = Jet::kMaxOrder);

// Basic solution of the Joyce equation: (rho, eta-y)/sqrt(rho^2+(eta-y)^2),
// components along (lambda_1, lambda_2). Unit euclidean norm.
std::array<double, 2> basic_phi(const HalfPlanePoint& pt, double y);
std::array<Jet, 2> basic_phi_jet(const HalfPlanePoint& pt, double y, int order = 2);

// rho^2 (F_rhorho + F_etaeta) - (3/4) F at the jet's base point. Vanishes for
// any combination of basic solutions.
double laplacian_residual(const Jet& F);

// Fractional-linear map z -> (az+b)/(cz+d) on eta + i rho, normalized to
// ad - bc = 1 at construction.
struct MoebiusMap {
  double a, b, c, d;
  MoebiusMap(double a_, double b_, double c_, double d_);
  static MoebiusMap identity() { return {1, 0, 0, 1}; }
  static MoebiusMap inversion() { return {0, -1, 1, 0}; }
  static MoebiusMap translation(double t) { return {1, t, 0, 1}; }
  static MoebiusMap dilation(double s); // z -> s z, s > 0
};

HalfPlanePoint moebius_apply(const MoebiusMap& map, const HalfPlanePoint& pt);

// Boundary action with the line-bundle weight in the odd-at-infinity
// trivialization: basic_F_jet(map(pt), out.y) * out.weight equals
// basic_F_jet(pt, y) identically.
struct TransformedBoundary {
  BoundarySupportPoint y;
  double weight;
};
TransformedBoundary moebius_apply(const MoebiusMap& map, const BoundarySupportPoint& y);

// As above but requires a finite image; throws PoleAtPoint otherwise.
double moebius_apply_finite(const MoebiusMap& map, double y);

// (rho, eta) -> (rho, -eta)/(rho^2 + eta^2); involutive.
HalfPlanePoint invert_point(const HalfPlanePoint& pt);

} // namespace hjsde
