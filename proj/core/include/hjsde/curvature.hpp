#pragma once
#include <vector>

#include "hjsde/metrics.hpp"

namespace hjsde {

struct CurvatureTensors {
  double riemann[4][4][4][4]; // fully lowered R_{ijkl}
  double ricci[4][4];
  double scalar = 0.0;
  double bianchi_residual = 0.0; // max |R_{i[jkl]}| over index triples
  double ricci_asymmetry = 0.0;
};

// Standard coordinate formulas from the sample's jet-exact g, dg, ddg.
// Throws SingularMetric when g is not invertible.
CurvatureTensors curvature_tensors(const MetricSample& sample);

struct WeylSplit {
  double plus_norm = 0.0;  // |W+| w.r.t. g, orientation of the declared frame
  double minus_norm = 0.0;
  double total_norm = 0.0; // |W|, satisfies |W|^2 = |W+|^2 + |W-|^2
};

// Weyl tensor by Kulkarni-Nomizu subtraction, split by the +-1 eigenspaces of
// the Hodge star on 2-forms in the declared orientation.
WeylSplit weyl_split(const MetricSample& sample, const CurvatureTensors& curv);

struct CurvatureReport {
  double scalar = 0.0;
  double einstein_residual = 0.0; // max |Ric - (s/4) g| / max |g|
  double weyl_plus_norm = 0.0;
  double weyl_minus_norm = 0.0;
  int orientation = +1;
};

CurvatureReport curvature_report(const MetricSample& sample);

struct VerifyOutcome {
  std::vector<CurvatureReport> reports;
  bool pass = false;
  std::string detail;
};

// Guard band for curvature runs near the zero set and the boundary.
bool sde_guard_ok(const BoundaryProfile& profile, const HalfPlanePoint& pt);

// Per point: einstein_residual <= tol, exactly one Weyl half <= tol, scalar
// sign equal to sign(F^2 - 4|dF|^2) and strictly negative when that sign is.
// All points must lie on one side of Z and respect the guard bands.
VerifyOutcome verify_sde(const BoundaryProfile& profile, const std::vector<HalfPlanePoint>& pts,
                         double tol = 1e-6);

// Per point: |scalar| <= tol and one Weyl half <= tol. Einstein residuals are
// reported for the hyperkaehler / expected-negative checks on the caller side.
VerifyOutcome verify_sfk(const AdmissibleSequence& seq, const std::vector<double>& ys,
                         const std::vector<HalfPlanePoint>& pts, double tol = 1e-6);

} // namespace hjsde
