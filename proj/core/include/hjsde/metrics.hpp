#pragma once
#include <array>
#include <string>
#include <vector>

#include "hjsde/joyce.hpp"

namespace hjsde {

// Symmetric 4x4 metric sample at a point, with components carried as jets in
// the two non-torus coordinates, so first and second coordinate derivatives
// are exact. Derivatives along the torus directions vanish by invariance.
struct MetricSample {
  std::array<std::string, 4> coords{"rho", "eta", "psi1", "psi2"};
  double x0 = 0.0, x1 = 0.0; // base point in coords[0], coords[1]
  int orientation = +1;      // +1: the declared coordinate order is positive

  static int tri_index(int i, int j); // upper-triangle storage
  std::array<Jet, 10> comp;

  double g(int i, int j) const { return comp[tri_index(i, j)].value(); }
  // derivative directions 0,1 are the active coordinates; 2,3 give zero
  double dg(int k, int i, int j) const;
  double ddg(int k, int l, int i, int j) const;

  // Cholesky pivots positive
  bool positive_definite() const;
  double max_abs_g() const;
};

// g = Omega^2 [ (drho^2 + deta^2)/rho^2 + (<v1,.>^2 + <v2,.>^2)/<v1,v2>^2 ],
// with <v,.> acting on (dpsi1, dpsi2). Throws DegeneratePhi when <v1,v2> = 0.
MetricSample metric_g_phi(const PhiValue& phi, const Jet& omega2);
MetricSample metric_g_phi(const PhiValue& phi, double omega2);

// Omega^2 = rho |det Phi| / (rho^2 + (eta - y_inf)^2)
double sfk_conformal_factor(const PhiValue& phi, double y_inf);
Jet sfk_conformal_factor_jet(const PhiValue& phi, double y_inf);

// SFK metric of a resolution: Phi from weights (m_j - m_{j+1}, n_j - n_{j+1})
// at marked points ys (strictly decreasing, length k+2), SFK factor with
// y_inf = ys.back().
MetricSample metric_sfk(const AdmissibleSequence& seq, const std::vector<double>& ys,
                        const HalfPlanePoint& pt);
PhiValue sfk_phi(const AdmissibleSequence& seq, const std::vector<double>& ys,
                 const HalfPlanePoint& pt, int order = 2);

// Self-dual Einstein representative g_F. Assembled through the conformal
// factor |F^2 - 4|dF|^2| / 4F^2 and cross-checked against the warm-up form
// with P = [[rho f_eta - eta f_rho, f_rho], [f - rho f_rho - eta f_eta, f_eta]];
// the two routes must agree to 1e-11.
struct SdeSample {
  MetricSample sample;
  int scalar_sign; // sign of F^2 - 4|dF|^2
  double route_disagreement;
};
SdeSample metric_sde(const BoundaryProfile& profile, const HalfPlanePoint& pt);

// shared internals: potential, Joyce matrix and SDE conformal factor at a point
struct SdeParts {
  FJet fjet;
  PhiValue phi;
  Jet omega2;
  int scalar_sign;
};
SdeParts sde_parts(const BoundaryProfile& profile, const HalfPlanePoint& pt);

enum class OracleKind { HyperbolicBall, Bergman };

// Closed-form reference metrics in their own charts:
//  HyperbolicBall, chart (r1, r2), r1^2 + r2^2 < 1:
//    (1 - r^2)^{-2} (dr1^2 + dr2^2 + r1^2 dth1^2 + r2^2 dth2^2)
//  Bergman, chart (t, theta), t > 0, 0 < theta < pi, parameter p:
//    2dt^2 + 1/2 sinh^2 t (dtheta^2 + (2/p) sin^2 theta dphi^2)
//      + 1/(4p) sinh^2 2t (dpsi + cos theta dphi)^2
MetricSample closed_form_oracle(OracleKind kind, double param_p, double x0, double x1);

// chart map of the two-pole example: (r1 + i r2)^2 = (eta - 1 + i rho)/(eta + 1 + i rho)
std::array<double, 2> halfplane_to_ball(double rho, double eta);
std::array<double, 2> ball_to_halfplane(double r1, double r2);
// |d(r1 + i r2)/d(eta + i rho)|, the conformal scale of the chart map
double ball_chart_scale(double rho, double eta);

// two-pole potential profile generating the hyperbolic metric
BoundaryProfile hyperbolic_example_profile();

// paper-form fiber matrix of the hyperbolic example (including the conformal
// factor), diagonal in the ball angles
std::array<double, 2> hyperbolic_fiber_closed_form(double rho, double eta);
double hyperbolic_det_closed_form(double rho, double eta);

// Boundary structures at infinity.
struct BoundaryStructure {
  enum class Kind { ConformalInfinityH, CRContactMetric };
  Kind kind;

  // ConformalInfinityH (odd example), components at the requested rho:
  //   h = A(rho)^2 drho^2/rho^2 + rho dphi^2 - (1/rho)(dpsi - (q/p) dphi)^2
  double A = 0.0;
  double dphi2_coeff = 0.0;
  double contact2_coeff = 0.0;
  double eta0 = 0.0; // q/p
  std::array<std::array<Rat, 2>, 2> lattice_change{};
  std::array<std::array<Rat, 2>, 2> lattice_factor_left{};
  std::array<std::array<Rat, 2>, 2> lattice_factor_right{};

  // CRContactMetric: contact form 2(dpsi + eta dphi), metric
  // 2 f1 deta^2 + dphi^2/(2 f1) on the contact plane
  double contact_dpsi = 0.0;
  double contact_dphi = 0.0;
  double h_eta_eta = 0.0;
  double h_contact_plane = 0.0;
  double f1 = 0.0;
};

// A(rho) = sum_j 2 |w_j| (y_j - q/p) sqrt(rho)/sqrt(rho^2 + (y_j - q/p)^2) over
// the canonical breakpoints right of q/p. The printed form omits the |w_j|;
// the weighted sum is what the F^2 g_F limit actually produces. The indefinite
// sign on the (dpsi - (q/p) dphi)^2 term is emitted verbatim.
BoundaryStructure conformal_infinity_odd(const AdmissibleSequence& seq, double rho);

// CR infinity of the complex-hyperbolic profile at eta < q/p.
BoundaryStructure cr_infinity(const BoundaryProfile& profile, double eta);

// Numerical verification that the rescaled boundary tensors of g_F converge to
// the CR components at order rho^2.
struct CRLimitReport {
  std::vector<double> rho;
  std::vector<double> contact_defect; // max over the two contact components
  std::vector<double> metric_defect;  // max over h_eta_eta, h_rho_rho, h(V,V)
  double contact_order = 0.0;
  double metric_order = 0.0;
};
CRLimitReport cr_limit_check(const BoundaryProfile& profile, double eta,
                             const std::vector<double>& rho_samples);

// F^2 g_F of the odd extension evaluated on eta = q/p, decomposed in the
// printed basis {drho^2/rho^2, dphi^2, (dpsi - (q/p) dphi)^2}, converted to
// the same normalization as conformal_infinity_odd.
struct OddInfinityDecomposition {
  double drho2_coeff;
  double dphi2_coeff;
  double contact2_coeff;
  double cross_consistency; // residual of the off-diagonal against the decomposition
};
OddInfinityDecomposition odd_infinity_from_metric(const BoundaryProfile& odd_profile, double rho);

// rho-ladder residuals for the smooth-extension conditions.
struct LimitFit {
  std::vector<double> ladder;
  std::vector<double> values;
  double limit = 0.0;        // value at the smallest rho
  bool positive = false;
  bool converged = false;    // defects against the limit shrink along the ladder
};
struct EdgeReport {
  AsymptoticsReport asymptotics; // v1 = O(rho), v2 -> (m,n) + O(rho^2)
  LimitFit omega;                // rho^{-2} Omega^2
};
EdgeReport extension_edge(const AdmissibleSequence& seq, const std::vector<double>& ys,
                          double eta, const std::vector<double>& ladder);
// corner factor sqrt(rho^2 + (eta - y_j)^2) Omega^2 / rho^2 along a radial
// approach to the corner at ys[corner_index]
LimitFit extension_corner(const AdmissibleSequence& seq, const std::vector<double>& ys,
                          int corner_index, const std::vector<double>& radius_ladder);
// SDE/SFK factor ratio rho F^2 / (rho^2 + (eta - (q-1)/p)^2)
LimitFit extension_sde_ratio(const BoundaryProfile& profile, double eta,
                             const std::vector<double>& ladder);

} // namespace hjsde
