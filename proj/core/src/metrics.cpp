#include "hjsde/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "hjsde/errors.hpp"
#include "hjsde/fitting.hpp"

namespace hjsde {

int MetricSample::tri_index(int i, int j) {
  if (i > j) std::swap(i, j);
  return i * (7 - i) / 2 + j;
}

double MetricSample::dg(int k, int i, int j) const {
  if (k >= 2) return 0.0;
  const Jet& c = comp[tri_index(i, j)];
  return k == 0 ? c.d_rho() : c.d_eta();
}

double MetricSample::ddg(int k, int l, int i, int j) const {
  if (k >= 2 || l >= 2) return 0.0;
  const Jet& c = comp[tri_index(i, j)];
  if (k == 0 && l == 0) return c.d2_rho_rho();
  if (k == 1 && l == 1) return c.d2_eta_eta();
  return c.d2_rho_eta();
}

bool MetricSample::positive_definite() const {
  double a[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a[i][j] = g(i, j);
  for (int c = 0; c < 4; ++c) { // Cholesky pivots
    if (!(a[c][c] > 0)) return false;
    double piv = std::sqrt(a[c][c]);
    for (int i = c; i < 4; ++i) a[i][c] /= piv;
    for (int j = c + 1; j < 4; ++j)
      for (int i = j; i < 4; ++i) a[i][j] -= a[i][c] * a[j][c];
  }
  return true;
}

double MetricSample::max_abs_g() const {
  double m = 0;
  for (const auto& c : comp) m = std::max(m, std::abs(c.value()));
  return m;
}

MetricSample metric_g_phi(const PhiValue& phi, const Jet& omega2) {
  Jet det = phi.v1a * phi.v2b - phi.v1b * phi.v2a; // <v1,v2>
  if (det.value() == 0.0) throw DegeneratePhi("<v1,v2> vanishes at the sample point");
  if (!(omega2.value() > 0.0)) throw BadInput("conformal factor must be positive");

  MetricSample s;
  s.x0 = phi.rho();
  s.x1 = phi.eta();
  Jet rho = Jet::rho_var(s.x0, s.x1, omega2.order());
  Jet zero = Jet::constant(0.0, s.x0, s.x1, omega2.order());
  Jet den = det * det;

  s.comp[MetricSample::tri_index(0, 0)] = omega2 / (rho * rho);
  s.comp[MetricSample::tri_index(1, 1)] = s.comp[MetricSample::tri_index(0, 0)];
  s.comp[MetricSample::tri_index(0, 1)] = zero;
  s.comp[MetricSample::tri_index(0, 2)] = zero;
  s.comp[MetricSample::tri_index(0, 3)] = zero;
  s.comp[MetricSample::tri_index(1, 2)] = zero;
  s.comp[MetricSample::tri_index(1, 3)] = zero;
  // <v,.> = v_a dpsi2 - v_b dpsi1
  s.comp[MetricSample::tri_index(2, 2)] =
      omega2 * (phi.v1b * phi.v1b + phi.v2b * phi.v2b) / den;
  s.comp[MetricSample::tri_index(3, 3)] =
      omega2 * (phi.v1a * phi.v1a + phi.v2a * phi.v2a) / den;
  s.comp[MetricSample::tri_index(2, 3)] =
      -(omega2 * (phi.v1a * phi.v1b + phi.v2a * phi.v2b)) / den;
  return s;
}

MetricSample metric_g_phi(const PhiValue& phi, double omega2) {
  return metric_g_phi(phi, Jet::constant(omega2, phi.rho(), phi.eta(), 2));
}

Jet sfk_conformal_factor_jet(const PhiValue& phi, double y_inf) {
  Jet det = det_phi_jet(phi);
  if (det.value() == 0.0) throw DegeneratePhi("det Phi vanishes");
  Jet rho = Jet::rho_var(phi.rho(), phi.eta(), det.order());
  Jet de = Jet::eta_var(phi.rho(), phi.eta(), det.order()) - y_inf;
  return rho * abs(det) / (rho * rho + de * de);
}

double sfk_conformal_factor(const PhiValue& phi, double y_inf) {
  return sfk_conformal_factor_jet(phi, y_inf).value();
}

PhiValue sfk_phi(const AdmissibleSequence& seq, const std::vector<double>& ys,
                 const HalfPlanePoint& pt, int order) {
  const int k = seq.k();
  if (static_cast<int>(ys.size()) != k + 2)
    throw BadInput("need k+2 marked points y_0..y_{k+1}");
  for (size_t i = 0; i + 1 < ys.size(); ++i)
    if (!(ys[i] > ys[i + 1])) throw NonDecreasingYs("marked points must be strictly decreasing");
  std::vector<WeightedAtom> atoms;
  for (int j = 0; j <= k + 1; ++j) {
    auto [m1, n1] = seq.pair(j + 1);
    atoms.push_back({ys[j], {to_double(Int(seq.m(j) - m1)), to_double(Int(seq.n(j) - n1))}});
  }
  return phi_from_weights(atoms, pt, order);
}

MetricSample metric_sfk(const AdmissibleSequence& seq, const std::vector<double>& ys,
                        const HalfPlanePoint& pt) {
  PhiValue phi = sfk_phi(seq, ys, pt);
  return metric_g_phi(phi, sfk_conformal_factor_jet(phi, ys.back()));
}

SdeParts sde_parts(const BoundaryProfile& profile, const HalfPlanePoint& pt) {
  FJet fjet = eval_F_jet(profile, pt);
  Jet F2 = fjet.F * fjet.F;
  Jet F_rho = fjet.F.deriv_rho();
  Jet F_eta = fjet.F.deriv_eta();
  Jet rho = Jet::rho_var(pt.rho, pt.eta, F_rho.order());
  Jet grad2 = rho * rho * (F_rho * F_rho + F_eta * F_eta);
  Jet expr = F2 - 4.0 * grad2;

  double scale = std::abs(F2.value()) + 4.0 * std::abs(grad2.value());
  if (std::abs(F2.value()) <= 1e-26 * scale || F2.value() == 0.0)
    throw OnZeroSet("point lies on the zero set of F");
  if (std::abs(expr.value()) <= 1e-14 * scale)
    throw ConformalDegeneracy("F^2 = 4|dF|^2 at the sample point");

  SdeParts out{fjet, phi_from_potential(fjet), abs(expr) / (4.0 * F2),
               expr.value() > 0 ? +1 : -1};
  return out;
}

SdeSample metric_sde(const BoundaryProfile& profile, const HalfPlanePoint& pt) {
  SdeParts parts = sde_parts(profile, pt);
  MetricSample a = metric_g_phi(parts.phi, parts.omega2);

  // warm-up route: g = det P/(rho f^2) (drho^2+deta^2) + rho/(f^2 det P) P^T P
  const Jet& f = parts.fjet.f;
  Jet f_rho = f.deriv_rho();
  Jet f_eta = f.deriv_eta();
  Jet rho = Jet::rho_var(pt.rho, pt.eta, f_rho.order());
  Jet eta = Jet::eta_var(pt.rho, pt.eta, f_rho.order());
  Jet f2 = f * f;
  Jet p11 = rho * f_eta - eta * f_rho;
  Jet p12 = f_rho;
  Jet p21 = f - rho * f_rho - eta * f_eta;
  Jet p22 = f_eta;
  Jet detP = rho * (f_rho * f_rho + f_eta * f_eta) - f * f_rho;
  Jet base = detP / (rho * f2);
  Jet fib = rho / (f2 * detP);

  double disagreement = 0.0;
  auto cmp = [&](int i, int j, const Jet& b) {
    double av = a.comp[MetricSample::tri_index(i, j)].value();
    disagreement = std::max(disagreement, std::abs(av - b.value()) / std::max(1.0, std::abs(av)));
  };
  cmp(0, 0, base);
  cmp(1, 1, base);
  cmp(2, 2, fib * (p11 * p11 + p21 * p21));
  cmp(2, 3, fib * (p11 * p12 + p21 * p22));
  cmp(3, 3, fib * (p12 * p12 + p22 * p22));

  return {a, parts.scalar_sign, disagreement};
}

MetricSample closed_form_oracle(OracleKind kind, double param_p, double x0, double x1) {
  MetricSample s;
  s.x0 = x0;
  s.x1 = x1;
  Jet zero = Jet::constant(0.0, x0, x1, 2);
  for (auto& c : s.comp) c = zero;
  if (kind == OracleKind::HyperbolicBall) {
    if (x0 * x0 + x1 * x1 >= 1.0 || x0 < 0 || x1 < 0)
      throw OutOfChart("ball chart needs r1, r2 >= 0 and r^2 < 1");
    s.coords = {"r1", "r2", "theta1", "theta2"};
    Jet r1 = Jet::rho_var(x0, x1, 2);
    Jet r2 = Jet::eta_var(x0, x1, 2);
    Jet conf = 1.0 - r1 * r1 - r2 * r2;
    Jet G = (1.0 / conf) * (1.0 / conf);
    s.comp[MetricSample::tri_index(0, 0)] = G;
    s.comp[MetricSample::tri_index(1, 1)] = G;
    s.comp[MetricSample::tri_index(2, 2)] = G * r1 * r1;
    s.comp[MetricSample::tri_index(3, 3)] = G * r2 * r2;
    return s;
  }
  // Bergman
  if (!(x0 > 0) || !(x1 > 0) || !(x1 < M_PI)) throw OutOfChart("Bergman chart needs t > 0, 0 < theta < pi");
  if (!(param_p >= 1)) throw BadInput("Bergman parameter p must be >= 1");
  s.coords = {"t", "theta", "phi", "psi"};
  Jet t = Jet::rho_var(x0, x1, 2);
  Jet th = Jet::eta_var(x0, x1, 2);
  Jet sh = sinh(t);
  Jet sh2t = sinh(2.0 * t);
  Jet st = sin(th);
  Jet ct = cos(th);
  double ip = 1.0 / param_p;
  Jet a = 0.25 * ip * sh2t * sh2t; // coefficient of (dpsi + cos th dphi)^2
  s.comp[MetricSample::tri_index(0, 0)] = Jet::constant(2.0, x0, x1, 2);
  s.comp[MetricSample::tri_index(1, 1)] = 0.5 * sh * sh;
  s.comp[MetricSample::tri_index(2, 2)] = ip * sh * sh * st * st + a * ct * ct;
  s.comp[MetricSample::tri_index(2, 3)] = a * ct;
  s.comp[MetricSample::tri_index(3, 3)] = a;
  return s;
}

std::array<double, 2> halfplane_to_ball(double rho, double eta) {
  std::complex<double> z(eta, rho);
  std::complex<double> w = (z - 1.0) / (z + 1.0);
  if (std::abs(w) >= 1.0) throw OutOfChart("point maps outside the unit ball (needs eta > 0)");
  std::complex<double> zeta = std::sqrt(w);
  return {zeta.real(), zeta.imag()};
}

std::array<double, 2> ball_to_halfplane(double r1, double r2) {
  std::complex<double> zeta(r1, r2);
  std::complex<double> w = zeta * zeta;
  std::complex<double> z = (1.0 + w) / (1.0 - w);
  return {z.imag(), z.real()}; // (rho, eta)
}

double ball_chart_scale(double rho, double eta) {
  std::complex<double> z(eta, rho);
  auto [r1, r2] = halfplane_to_ball(rho, eta);
  std::complex<double> zeta(r1, r2);
  return 1.0 / (std::norm(z + 1.0) * std::abs(zeta));
}

BoundaryProfile hyperbolic_example_profile() {
  std::vector<SpectralWeights::Atom> atoms{{QReal(Rat(-1)), QReal(Rat(1))},
                                           {QReal(Rat(1)), QReal(Rat(-1))}};
  return profile_from_atoms(atoms, QReal(Rat(0)));
}

std::array<double, 2> hyperbolic_fiber_closed_form(double rho, double eta) {
  double sm = std::sqrt(rho * rho + (eta - 1) * (eta - 1));
  double sp = std::sqrt(rho * rho + (eta + 1) * (eta + 1));
  double u = (rho * rho + eta * eta - 1) / (sm * sp);
  double pref = sm * sp / ((sm - sp) * (sm - sp));
  return {pref * 0.5 * (1 - u), pref * 0.5 * (1 + u)};
}

double hyperbolic_det_closed_form(double rho, double eta) {
  double sm = std::sqrt(rho * rho + (eta - 1) * (eta - 1));
  double sp = std::sqrt(rho * rho + (eta + 1) * (eta + 1));
  return -rho / (sm * sp);
}

BoundaryStructure conformal_infinity_odd(const AdmissibleSequence& seq, double rho) {
  if (!(rho > 0)) throw BadInput("conformal_infinity_odd needs rho > 0");
  BoundaryProfile can = canonical_profile(seq);
  double c = boundary_zero(can).dbl();
  BoundaryStructure out;
  out.kind = BoundaryStructure::Kind::ConformalInfinityH;
  out.eta0 = c;
  double A = 0.0;
  const int k = seq.k();
  for (int j = 0; j <= k; ++j) { // breakpoints right of q/p carry w_j = m_j - m_{j+1} < 0
    double yj = to_double(Rat(seq.n(j + 1) - seq.n(j))) / to_double(Rat(seq.m(j + 1) - seq.m(j)));
    double wj = to_double(Int(seq.m(j + 1) - seq.m(j))); // |w_j|
    A += 2.0 * wj * (yj - c) * std::sqrt(rho) / std::sqrt(rho * rho + (yj - c) * (yj - c));
  }
  out.A = A;
  out.dphi2_coeff = rho;
  out.contact2_coeff = -1.0 / rho;

  Rat p(seq.p()), q(seq.q_mod_p());
  out.lattice_change = {{{Rat(1), Rat(0)}, {2 * q / p, Rat(-1)}}};
  out.lattice_factor_left = {{{p, Rat(0)}, {q, Rat(-1)}}};
  // inverse of [[p,0],[q,1]]
  out.lattice_factor_right = {{{1 / p, Rat(0)}, {-q / p, Rat(1)}}};
  return out;
}

OddInfinityDecomposition odd_infinity_from_metric(const BoundaryProfile& odd_profile,
                                                  double rho) {
  if (odd_profile.kind() != ProfileKind::Odd)
    throw UnsupportedProfile("needs the odd extension profile");
  double c = boundary_zero(odd_profile).dbl();
  HalfPlanePoint pt(rho, c);
  FJet fj = eval_F_jet(odd_profile, pt);
  // F^2 g_F = |F^2 - 4|dF|^2|/4 * [ (drho^2+deta^2)/rho^2 + P^T P / det P^2 ]
  double F = fj.F.value();
  double Fr = fj.F.d_rho(), Fe = fj.F.d_eta();
  double grad2 = rho * rho * (Fr * Fr + Fe * Fe);
  double numer = std::abs(F * F - 4.0 * grad2) / 4.0;
  double f = fj.f.value(), fr = fj.f.d_rho(), fe = fj.f.d_eta();
  double p11 = rho * fe - c * fr, p12 = fr;
  double p21 = f - rho * fr - c * fe, p22 = fe;
  double detP = rho * (fr * fr + fe * fe) - f * fr;
  double m11 = numer * (p11 * p11 + p21 * p21) / (detP * detP);
  double m12 = numer * (p11 * p12 + p21 * p22) / (detP * detP);
  double m22 = numer * (p12 * p12 + p22 * p22) / (detP * detP);

  OddInfinityDecomposition out{};
  // emitted h is in the unhalved-F normalization: base picks up a factor 4
  out.drho2_coeff = 4.0 * rho * rho * (numer / (rho * rho));
  out.contact2_coeff = m22;
  out.dphi2_coeff = m11 - c * c * m22;
  out.cross_consistency = std::abs(m12 + c * m22);
  return out;
}

BoundaryStructure cr_infinity(const BoundaryProfile& profile, double eta) {
  if (profile.kind() != ProfileKind::ComplexHyperbolic)
    throw UnsupportedProfile("cr_infinity needs the complex-hyperbolic profile");
  double c = to_double(Rat(profile.origin()->q, profile.origin()->p));
  if (!(eta < c - 1e-15)) throw WrongSide("eta must lie strictly left of q/p");
  BoundaryStructure out;
  out.kind = BoundaryStructure::Kind::CRContactMetric;
  out.eta0 = c;
  out.f1 = f1_coefficient(profile, eta);
  out.contact_dpsi = 2.0;
  out.contact_dphi = 2.0 * eta;
  out.h_eta_eta = 2.0 * out.f1;
  out.h_contact_plane = 1.0 / (2.0 * out.f1);
  return out;
}

CRLimitReport cr_limit_check(const BoundaryProfile& profile, double eta,
                             const std::vector<double>& rho_samples) {
  BoundaryStructure target = cr_infinity(profile, eta);
  double f1 = target.f1;
  CRLimitReport rep;
  rep.rho = rho_samples;
  for (double rho : rho_samples) {
    SdeParts parts = sde_parts(profile, HalfPlanePoint(rho, eta));
    double om2 = parts.omega2.value();
    double om = std::sqrt(om2);
    double v1a = parts.phi.v1a.value(), v1b = parts.phi.v1b.value();
    double v2a = parts.phi.v2a.value(), v2b = parts.phi.v2b.value();
    double detP = v1a * v2b - v1b * v2a;
    // theta = rho^2 Omega <v1,.>/|<v1,v2>| in (dpsi1, dpsi2)
    double t1 = rho * rho * om * (-v1b) / std::abs(detP);
    double t2 = rho * rho * om * (v1a) / std::abs(detP);
    // paper torus basis: dpsi1 = -dphi/4, dpsi2 = dpsi/4
    double theta_phi = -t1 / 4.0, theta_psi = t2 / 4.0;
    double rs = std::sqrt(2.0) * f1;
    double contact_defect = std::max(std::abs(rs * theta_psi - target.contact_dpsi),
                                     std::abs(rs * theta_phi - target.contact_dphi));
    // h = rho^2 g - theta^2/rho^2; fiber reduces to the v2 part
    double w2_1 = -v2b, w2_2 = v2a;
    double H11 = rho * rho * om2 * w2_1 * w2_1 / (detP * detP);
    double H12 = rho * rho * om2 * w2_1 * w2_2 / (detP * detP);
    double H22 = rho * rho * om2 * w2_2 * w2_2 / (detP * detP);
    double Hpp = H11 / 16.0, Hps = -H12 / 16.0, Hss = H22 / 16.0;
    double hVV = f1 * (Hpp - 2.0 * eta * Hps + eta * eta * Hss);
    double metric_defect = std::max({std::abs(f1 * om2 - target.h_eta_eta),
                                     std::abs(hVV - target.h_contact_plane)});
    rep.contact_defect.push_back(contact_defect);
    rep.metric_defect.push_back(metric_defect);
  }
  rep.contact_order = fit_power_law(rep.rho, rep.contact_defect).exponent;
  rep.metric_order = fit_power_law(rep.rho, rep.metric_defect).exponent;
  return rep;
}

namespace {

LimitFit make_limit_fit(std::vector<double> ladder, std::vector<double> values) {
  LimitFit out;
  out.ladder = std::move(ladder);
  out.values = std::move(values);
  size_t imin = 0;
  for (size_t i = 1; i < out.ladder.size(); ++i)
    if (out.ladder[i] < out.ladder[imin]) imin = i;
  out.limit = out.values[imin];
  out.positive = out.limit > 0;
  // defects against the limit must shrink as the ladder descends
  std::vector<std::pair<double, double>> sorted;
  for (size_t i = 0; i < out.ladder.size(); ++i) sorted.emplace_back(out.ladder[i], out.values[i]);
  std::sort(sorted.begin(), sorted.end());
  double d_small = std::abs(sorted[1].second - out.limit);
  double d_large = std::abs(sorted.back().second - out.limit);
  out.converged = d_small <= 0.5 * d_large + 1e-12;
  return out;
}

} // namespace

EdgeReport extension_edge(const AdmissibleSequence& seq, const std::vector<double>& ys,
                          double eta, const std::vector<double>& ladder) {
  if (ladder.size() < 3) throw BadInput("need at least three rho samples");
  // locate the edge interval (ys decreasing) and its label (m_j, n_j)
  const int k = seq.k();
  int j = 0;
  while (j <= k + 1 && eta < ys[j]) ++j; // j = first index with ys[j] < eta ... careful below
  // after loop: ys[j-1] > eta >= ... choose label:
  //   eta > ys[0] -> j=0 -> (0,-1); ys[j] < eta < ys[j-1] -> pair(j); eta < ys[k+1] -> (0,1)
  auto mn = seq.pair(j);
  double m = to_double(mn.first), n = to_double(mn.second);

  EdgeReport out;
  out.asymptotics.mn_expected = {m, n};
  std::vector<double> v1_mag, v2_def, omega_vals;
  double y_inf = ys.back();
  for (double rho : ladder) {
    PhiValue phi = sfk_phi(seq, ys, HalfPlanePoint(rho, eta));
    v1_mag.push_back(std::hypot(phi.v1a.value(), phi.v1b.value()));
    v2_def.push_back(std::hypot(phi.v2a.value() - m, phi.v2b.value() - n));
    double det = std::abs(det_phi(phi));
    omega_vals.push_back(det / (rho * (rho * rho + (eta - y_inf) * (eta - y_inf))));
  }
  {
    size_t imin = 0;
    for (size_t i = 1; i < ladder.size(); ++i)
      if (ladder[i] < ladder[imin]) imin = i;
    PhiValue phi = sfk_phi(seq, ys, HalfPlanePoint(ladder[imin], eta));
    out.asymptotics.v2_limit = {phi.v2a.value(), phi.v2b.value()};
  }
  PowerFit f1 = fit_power_law(ladder, v1_mag);
  PowerFit f2 = fit_power_law(ladder, v2_def);
  out.asymptotics.v1_vanishes = f1.degenerate;
  out.asymptotics.v2_exact = f2.degenerate;
  out.asymptotics.v1_order = f1.exponent;
  out.asymptotics.v2_order = f2.exponent;
  out.omega = make_limit_fit(ladder, omega_vals);
  return out;
}

LimitFit extension_corner(const AdmissibleSequence& seq, const std::vector<double>& ys,
                          int corner_index, const std::vector<double>& radius_ladder) {
  if (corner_index < 0 || corner_index >= static_cast<int>(ys.size()))
    throw IndexOutOfRange("corner index out of range");
  double y0 = ys[corner_index];
  double y_inf = ys.back();
  const double theta = M_PI / 4;
  std::vector<double> vals;
  for (double R : radius_ladder) {
    double rho = R * std::sin(theta), eta = y0 + R * std::cos(theta);
    PhiValue phi = sfk_phi(seq, ys, HalfPlanePoint(rho, eta));
    double om2 = std::abs(det_phi(phi)) * rho / (rho * rho + (eta - y_inf) * (eta - y_inf));
    vals.push_back(std::sqrt(rho * rho + (eta - y0) * (eta - y0)) * om2 / (rho * rho));
  }
  return make_limit_fit(radius_ladder, vals);
}

LimitFit extension_sde_ratio(const BoundaryProfile& profile, double eta,
                             const std::vector<double>& ladder) {
  double y_inf = profile.knots().front().y.dbl(); // (q-1)/p for canonical data
  std::vector<double> vals;
  for (double rho : ladder) {
    double F = eval_F_jet(profile, HalfPlanePoint(rho, eta), 0).F.value();
    vals.push_back(rho * F * F / (rho * rho + (eta - y_inf) * (eta - y_inf)));
  }
  return make_limit_fit(ladder, vals);
}

} // namespace hjsde
