#include "hjsde/joyce.hpp"

#include <algorithm>
#include <cmath>

#include "hjsde/errors.hpp"
#include "hjsde/fitting.hpp"
#include "hjsde/quadrature.hpp"

namespace hjsde {

namespace {
constexpr double kPatchQuadTol = 1e-10;
} // namespace

FJet eval_F_jet(const BoundaryProfile& profile, const HalfPlanePoint& pt, int order) {
  SpectralWeights sw = spectral_weights(profile);
  Jet F = Jet::constant(0.0, pt.rho, pt.eta, order);
  for (const auto& atom : sw.atoms)
    F = F + atom.w.dbl() * basic_F_jet(pt, BoundarySupportPoint::finite(atom.y.dbl()), order);
  double w_inf = sw.infinity_weight.dbl();
  if (w_inf != 0.0) F = F + w_inf * basic_F_jet(pt, BoundarySupportPoint::infinity(), order);
  for (const auto& p : profile.patches()) {
    F = F + quadrature::integrate(
                [&](double y) {
                  return p.second(y) * basic_F_jet(pt, BoundarySupportPoint::finite(y), order);
                },
                p.a, p.b, kPatchQuadTol);
  }
  F = F * 0.5;
  Jet f = sqrt(Jet::rho_var(pt.rho, pt.eta, order)) * F;
  return {F, f};
}

PhiValue phi_from_potential(const FJet& fjet) {
  const Jet& f = fjet.f;
  double r0 = f.rho0(), e0 = f.eta0();
  Jet rho = Jet::rho_var(r0, e0, f.order() - 1);
  Jet eta = Jet::eta_var(r0, e0, f.order() - 1);
  Jet f_rho = f.deriv_rho();
  Jet f_eta = f.deriv_eta();
  Jet f_low = f * Jet::constant(1.0, r0, e0, f.order() - 1); // f truncated to match
  PhiValue out;
  out.v1a = f_rho;
  out.v1b = eta * f_rho - rho * f_eta;
  out.v2a = f_eta;
  out.v2b = rho * f_rho + eta * f_eta - f_low;
  return out;
}

PhiValue phi_from_weights(const std::vector<WeightedAtom>& atoms, const HalfPlanePoint& pt,
                          int order) {
  Jet zero = Jet::constant(0.0, pt.rho, pt.eta, order);
  PhiValue out{zero, zero, zero, zero};
  for (const auto& atom : atoms) {
    auto phi = basic_phi_jet(pt, atom.y, order);
    out.v1a = out.v1a + 0.5 * atom.u[0] * phi[0];
    out.v1b = out.v1b + 0.5 * atom.u[1] * phi[0];
    out.v2a = out.v2a + 0.5 * atom.u[0] * phi[1];
    out.v2b = out.v2b + 0.5 * atom.u[1] * phi[1];
  }
  return out;
}

double det_phi(const PhiValue& phi) {
  // det Phi = -<v1, v2> = -(v1a v2b - v1b v2a)
  return -(phi.v1a.value() * phi.v2b.value() - phi.v1b.value() * phi.v2a.value());
}

Jet det_phi_jet(const PhiValue& phi) { return -(phi.v1a * phi.v2b - phi.v1b * phi.v2a); }

double det_phi_identity_residual(const PhiValue& phi, const FJet& fjet) {
  double F = fjet.F.value();
  double rho = fjet.F.rho0();
  double grad2 = rho * rho * (fjet.F.d_rho() * fjet.F.d_rho() + fjet.F.d_eta() * fjet.F.d_eta());
  return std::abs(det_phi(phi) - (0.25 * F * F - grad2));
}

JoyceResidual joyce_residual(const PhiValue& phi) {
  double rho = phi.rho();
  double r1a = rho * phi.v1a.d_rho() + rho * phi.v2a.d_eta() - phi.v1a.value();
  double r1b = rho * phi.v1b.d_rho() + rho * phi.v2b.d_eta() - phi.v1b.value();
  double r2a = rho * phi.v1a.d_eta() - rho * phi.v2a.d_rho();
  double r2b = rho * phi.v1b.d_eta() - rho * phi.v2b.d_rho();
  double scale = std::max({std::abs(phi.v1a.value()), std::abs(phi.v1b.value()),
                           std::abs(phi.v2a.value()), std::abs(phi.v2b.value()), 1e-300});
  return {std::max(std::abs(r1a), std::abs(r1b)), std::max(std::abs(r2a), std::abs(r2b)), scale};
}

namespace {

struct MuNu {
  QReal mu, nu;
};

// step data (mu, nu) per interval, ordered left to right; patch pieces are
// sampled at Chebyshev points
std::vector<MuNu> step_data(const BoundaryProfile& profile) {
  std::vector<MuNu> out;
  const auto& knots = profile.knots();
  const int n = static_cast<int>(knots.size());
  for (int i = -1; i <= n - 1; ++i) {
    if (i >= 0 && i + 1 < n) {
      if (const CubicPatch* p = profile.patch_for_piece(i)) {
        for (int k = 16; k >= 0; --k) {
          double x = 0.5 * (p->a + p->b) + 0.5 * (p->b - p->a) * std::cos(M_PI * k / 16.0);
          double mu = p->deriv(x);
          out.push_back({QReal::approx(mu), QReal::approx(mu * x - p->eval(x))});
        }
        continue;
      }
    }
    QReal mu = profile.piece_slope(i);
    const auto& kn = knots[std::max(i, 0)];
    QReal nu = mu * kn.y - kn.value;
    out.push_back({mu, nu});
  }
  return out;
}

bool monotone_pairs(const std::vector<MuNu>& data) {
  bool strict = false;
  for (size_t i = 0; i < data.size(); ++i)
    for (size_t j = i + 1; j < data.size(); ++j) {
      QReal v = data[i].mu * data[j].nu - data[j].mu * data[i].nu;
      if (v.is_exact()) {
        if (v.rat() > 0) return false;
        if (v.rat() < 0) strict = true;
      } else {
        if (v.dbl() > 1e-14) return false;
        if (v.dbl() < -1e-14) strict = true;
      }
    }
  return strict;
}

} // namespace

bool monotonicity_check(const BoundaryProfile& profile) {
  return monotone_pairs(step_data(profile));
}

bool monotonicity_check(const SpectralWeights& weights) {
  // rebuild the piecewise data generated by the atoms and reuse the pair test
  return monotonicity_check(profile_from_atoms(weights.atoms, weights.infinity_weight));
}

AsymptoticsReport boundary_asymptotics(const BoundaryProfile& profile, double eta,
                                       const std::vector<double>& rho_samples) {
  // eta must sit strictly inside a straight piece
  for (const auto& kn : profile.knots())
    if (std::abs(kn.y.dbl() - eta) < 1e-12)
      throw NotLocallyAffine("eta sits on a breakpoint");
  for (const auto& p : profile.patches())
    if (eta > p.a - 1e-12 && eta < p.b + 1e-12)
      throw NotLocallyAffine("eta sits inside a smooth patch");
  if (rho_samples.size() < 3) throw BadInput("need at least three rho samples");

  // expected edge label: f0 = m eta - n on this piece
  double f0 = boundary_value(profile, eta);
  int pi = profile.piece_containing(eta);
  double m = profile.piece_slope(pi).dbl();
  const auto& anchor = profile.knots()[std::max(pi, 0)];
  double nn = m * anchor.y.dbl() - anchor.value.dbl();

  AsymptoticsReport out;
  out.mn_expected = {m, nn};
  std::vector<double> v1_mag, v2_def, f_def;
  for (double rho : rho_samples) {
    FJet fj = eval_F_jet(profile, HalfPlanePoint(rho, eta));
    PhiValue phi = phi_from_potential(fj);
    v1_mag.push_back(std::hypot(phi.v1a.value(), phi.v1b.value()));
    v2_def.push_back(std::hypot(phi.v2a.value() - m, phi.v2b.value() - nn));
    f_def.push_back(std::abs(fj.f.value() - f0));
  }
  size_t imin = 0;
  for (size_t i = 1; i < rho_samples.size(); ++i)
    if (rho_samples[i] < rho_samples[imin]) imin = i;
  {
    FJet fj = eval_F_jet(profile, HalfPlanePoint(rho_samples[imin], eta));
    PhiValue phi = phi_from_potential(fj);
    out.v2_limit = {phi.v2a.value(), phi.v2b.value()};
  }
  PowerFit f1 = fit_power_law(rho_samples, v1_mag);
  PowerFit f2 = fit_power_law(rho_samples, v2_def);
  PowerFit f3 = fit_power_law(rho_samples, f_def);
  if (f1.degenerate && f2.degenerate && f3.degenerate)
    throw FitFailure("all defects at rounding level; ladder uninformative");
  out.v1_vanishes = f1.degenerate;
  out.v2_exact = f2.degenerate;
  out.v1_order = f1.exponent;
  out.v2_order = f2.exponent;
  out.f_order = f3.degenerate ? 2.0 : f3.exponent;
  return out;
}

} // namespace hjsde
