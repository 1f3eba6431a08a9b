#pragma once
#include <array>
#include <vector>

#include "hjsde/halfplane.hpp"
#include "hjsde/profiles.hpp"

namespace hjsde {

// Potential F (eigenfunction, Delta F = 3/4 F) and f = sqrt(rho) F as jets at
// one point.
struct FJet {
  Jet F;
  Jet f;
  double rho() const { return F.rho0(); }
  double eta() const { return F.eta0(); }
};

// Joyce matrix value Phi = 1/2 (lambda_1 (x) v_1 + lambda_2 (x) v_2), stored
// through the V-components of v_1, v_2 as jets. det Phi := -<v_1, v_2> with
// <(a,b),(c,d)> = ad - bc.
struct PhiValue {
  Jet v1a, v1b, v2a, v2b;
  double rho() const { return v1a.rho0(); }
  double eta() const { return v1a.eta0(); }
  std::array<double, 2> v1() const { return {v1a.value(), v1b.value()}; }
  std::array<double, 2> v2() const { return {v2a.value(), v2b.value()}; }
};

// F = 1/2 [ sum_j w_j F(.;y_j) + w_inf F(.;inf) + integral over patches of
// f0''(y) F(.;y) dy ]. Normalized so that sqrt(rho) F -> f0 on the boundary.
// Throws QuadratureTolExceeded if a patch integral cannot reach tolerance.
FJet eval_F_jet(const BoundaryProfile& profile, const HalfPlanePoint& pt,
                int order = Jet::kMaxOrder);

// v_1 = (f_rho, eta f_rho - rho f_eta), v_2 = (f_eta, rho f_rho + eta f_eta - f).
PhiValue phi_from_potential(const FJet& fjet);

// Phi = 1/2 sum_j phi(.;y_j) (x) u_j for finite support points y_j.
// With u_j = (w_j, y_j w_j) this coincides with the potential route.
struct WeightedAtom {
  double y;
  std::array<double, 2> u;
};
PhiValue phi_from_weights(const std::vector<WeightedAtom>& atoms, const HalfPlanePoint& pt,
                          int order = 2);

double det_phi(const PhiValue& phi);
Jet det_phi_jet(const PhiValue& phi);
// |det Phi - (1/4 F^2 - |dF|^2)| for a Phi paired with its potential
double det_phi_identity_residual(const PhiValue& phi, const FJet& fjet);

// max-abs residuals of the two Joyce equations
//   rho d_rho v1 + rho d_eta v2 = v1,   rho d_eta v1 - rho d_rho v2 = 0
// evaluated from the stored jets.
struct JoyceResidual {
  double eq1;
  double eq2;
  double scale; // max |v| component, for relative bounds
};
JoyceResidual joyce_residual(const PhiValue& phi);

// Exact pairwise check of mu(y) nu(z) - mu(z) nu(y) <= 0 for y <= z (strict
// somewhere) on the step data of the profile; patch pieces are sampled.
bool monotonicity_check(const SpectralWeights& weights);
bool monotonicity_check(const BoundaryProfile& profile);

// Least-squares order fits of v1, v2 - (m,n) and sqrt(rho) F - f0 against a
// rho-ladder at fixed eta inside a locally affine interval of f0.
struct AsymptoticsReport {
  double v1_order = 0.0;
  double v2_order = 0.0;
  double f_order = 0.0;
  std::array<double, 2> v2_limit{};   // v2 at the smallest rho in the ladder
  std::array<double, 2> mn_expected{};
  bool v1_vanishes = false; // |v1| at rounding level on the whole ladder
  bool v2_exact = false;    // v2 defect at rounding level on the whole ladder
};
AsymptoticsReport boundary_asymptotics(const BoundaryProfile& profile, double eta,
                                       const std::vector<double>& rho_samples);

} // namespace hjsde
