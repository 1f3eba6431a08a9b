#include "hjsde/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "hjsde/errors.hpp"
#include "hjsde/joyce.hpp"
#include "hjsde/parallel.hpp"
#include "hjsde/quadrature.hpp"

namespace hjsde {

namespace {
constexpr double kTinyWeight = 1e-15;
constexpr double kKnotTol = 1e-12;

double chebyshev_node(double a, double b, int k, int n) {
  return 0.5 * (a + b) + 0.5 * (b - a) * std::cos(M_PI * k / n);
}
} // namespace

const Rat& QReal::rat() const {
  if (!exact_) throw Error("QReal does not carry an exact value");
  return rat_;
}

QReal QReal::combine(const QReal& x, const QReal& y, int sign) {
  if (x.exact_ && y.exact_) return QReal(Rat(x.rat_ + sign * y.rat_));
  return QReal::approx(x.dbl() + sign * y.dbl());
}

QReal operator*(const QReal& x, const QReal& y) {
  if (x.exact_ && y.exact_) return QReal(Rat(x.rat_ * y.rat_));
  return QReal::approx(x.dbl() * y.dbl());
}

QReal operator/(const QReal& x, const QReal& y) {
  if (x.exact_ && y.exact_) {
    if (y.rat_ == 0) throw ZeroDenominator("QReal division by exact zero");
    return QReal(Rat(x.rat_ / y.rat_));
  }
  return QReal::approx(x.dbl() / y.dbl());
}

QReal QReal::operator-() const {
  if (exact_) return QReal(Rat(-rat_));
  return QReal::approx(-dbl_);
}

int QReal::cmp(const QReal& x, const QReal& y) {
  if (x.exact_ && y.exact_) return x.rat_ < y.rat_ ? -1 : (x.rat_ == y.rat_ ? 0 : 1);
  double a = x.dbl(), b = y.dbl();
  return a < b ? -1 : (a == b ? 0 : 1);
}

BoundaryProfile::BoundaryProfile(std::vector<Knot> knots, QReal left_slope, QReal right_slope,
                                 QReal infinity_weight, std::vector<CubicPatch> patches,
                                 ProfileKind kind)
    : knots_(std::move(knots)),
      left_slope_(left_slope),
      right_slope_(right_slope),
      infinity_weight_(infinity_weight),
      patches_(std::move(patches)),
      kind_(kind) {
  if (knots_.empty()) throw BadInput("profile needs at least one breakpoint");
  for (size_t i = 0; i + 1 < knots_.size(); ++i)
    if (!(knots_[i].y < knots_[i + 1].y))
      throw BadInput("profile breakpoints must be strictly increasing");
  // each patch must cover exactly one bounded piece and agree with the knot
  // values at its ends
  for (const auto& p : patches_) {
    if (!(p.a < p.b)) throw BadInput("patch interval is empty");
    int piece = -2;
    for (size_t i = 0; i + 1 < knots_.size(); ++i) {
      if (std::abs(knots_[i].y.dbl() - p.a) <= kKnotTol &&
          std::abs(knots_[i + 1].y.dbl() - p.b) <= kKnotTol) {
        piece = static_cast<int>(i);
        break;
      }
    }
    if (piece < 0) throw BadInput("patch interval must join two adjacent breakpoints");
    double va = knots_[piece].value.dbl(), vb = knots_[piece + 1].value.dbl();
    if (std::abs(p.eval(p.a) - va) > 1e-9 * std::max(1.0, std::abs(va)) ||
        std::abs(p.eval(p.b) - vb) > 1e-9 * std::max(1.0, std::abs(vb)))
      throw BadInput("patch does not match breakpoint values (profile must be continuous)");
    for (const auto& other : patches_)
      if (&other != &p && other.a < p.b && p.a < other.b)
        throw BadInput("patches overlap");
  }
}

const CubicPatch* BoundaryProfile::patch_for_piece(int i) const {
  if (i < 0 || i + 1 >= static_cast<int>(knots_.size())) return nullptr;
  double a = knots_[i].y.dbl(), b = knots_[i + 1].y.dbl();
  for (const auto& p : patches_)
    if (std::abs(p.a - a) <= kKnotTol && std::abs(p.b - b) <= kKnotTol) return &p;
  return nullptr;
}

QReal BoundaryProfile::piece_slope(int i) const {
  const int last = static_cast<int>(knots_.size()) - 1;
  if (i < 0) return left_slope_;
  if (i >= last) return right_slope_;
  return (knots_[i + 1].value - knots_[i].value) / (knots_[i + 1].y - knots_[i].y);
}

bool BoundaryProfile::odd_at_infinity() const {
  double mu_r = right_slope_.dbl(), mu_l = left_slope_.dbl();
  // nu = mu eta - f0, constant on the unbounded pieces
  double nu_r = mu_r * knots_.back().y.dbl() - knots_.back().value.dbl();
  double nu_l = mu_l * knots_.front().y.dbl() - knots_.front().value.dbl();
  double tol = 1e-12;
  return std::abs(mu_r + mu_l) <= tol && std::abs(nu_r + nu_l) <= tol;
}

BoundaryProfile canonical_profile(const AdmissibleSequence& seq) {
  const int k = seq.k();
  // y_j = (n_{j+1} - n_j)/(m_{j+1} - m_j), decreasing in j when all e_j >= 3
  std::vector<Rat> ys;
  for (int j = 0; j <= k + 1; ++j) {
    auto [m1, n1] = seq.pair(j + 1);
    Int dm = m1 - seq.m(j), dn = n1 - seq.n(j);
    if (dm == 0) throw DegenerateSpacing("canonical breakpoints degenerate (m_{j+1} = m_j)");
    ys.push_back(make_rat(dn, dm));
  }
  for (int j = 0; j + 1 <= k + 1; ++j)
    if (!(ys[j + 1] < ys[j]))
      throw DegenerateSpacing(
          "canonical breakpoints must be strictly decreasing: every exceptional sphere needs "
          "self-intersection magnitude >= 3");

  std::vector<BoundaryProfile::Knot> knots;
  for (int j = k + 1; j >= 0; --j) // stored increasing
    knots.push_back({QReal(ys[j]), QReal(Rat(seq.m(j) * ys[j] - seq.n(j)))});
  BoundaryProfile out(std::move(knots), QReal(Rat(0)), QReal(Rat(0)), QReal(Rat(0)), {},
                      ProfileKind::Canonical);
  out.origin_ = QuotientData(seq.p().convert_to<long long>(),
                             seq.q_mod_p().convert_to<long long>());
  return out;
}

BoundaryProfile canonical_profile_merged(const AdmissibleSequence& seq) {
  const int k = seq.k();
  std::map<Rat, Rat> atom_map; // y -> merged weight
  for (int j = 0; j <= k + 1; ++j) {
    auto [m1, n1] = seq.pair(j + 1);
    Int dm = m1 - seq.m(j), dn = n1 - seq.n(j);
    if (dm == 0) throw DegenerateSpacing("canonical breakpoints degenerate (m_{j+1} = m_j)");
    atom_map[make_rat(dn, dm)] += Rat(seq.m(j) - m1);
  }
  std::vector<SpectralWeights::Atom> atoms;
  for (const auto& [y, w] : atom_map)
    if (w != 0) atoms.push_back({QReal(y), QReal(w)});
  BoundaryProfile out = profile_from_atoms(atoms, QReal(Rat(0)));
  BoundaryProfile tagged(out.knots(), out.left_slope(), out.right_slope(), out.infinity_weight(),
                         {}, ProfileKind::CanonicalMerged);
  tagged.origin_ = QuotientData(seq.p().convert_to<long long>(),
                                seq.q_mod_p().convert_to<long long>());
  return tagged;
}

QReal boundary_zero(const BoundaryProfile& profile) {
  const auto& knots = profile.knots();
  const int n = static_cast<int>(knots.size());
  // zero in the left unbounded piece
  if (knots.front().value > QReal(Rat(0))) {
    if (profile.left_slope().dbl() > 0) {
      QReal z = knots.front().y - knots.front().value / profile.left_slope();
      return z;
    }
    throw NoSignChange("profile has no sign change");
  }
  for (int i = 0; i < n; ++i) {
    if (knots[i].value == QReal(Rat(0))) return knots[i].y;
    if (i + 1 < n && knots[i].value < QReal(Rat(0)) && knots[i + 1].value > QReal(Rat(0))) {
      if (const CubicPatch* p = profile.patch_for_piece(i)) {
        double lo = p->a, hi = p->b;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
          double mid = 0.5 * (lo + hi);
          (p->eval(mid) < 0 ? lo : hi) = mid;
        }
        return QReal::approx(0.5 * (lo + hi));
      }
      QReal slope = profile.piece_slope(i);
      return knots[i].y - knots[i].value / slope;
    }
  }
  if (knots.back().value < QReal(Rat(0)) && profile.right_slope().dbl() > 0)
    return knots.back().y - knots.back().value / profile.right_slope();
  throw NoSignChange("profile has no sign change");
}

BoundaryProfile odd_extension(const BoundaryProfile& profile, const Rat& center) {
  if (profile.kind() != ProfileKind::Canonical)
    throw NotCanonical("odd extension is defined for canonical profiles");
  QReal z = boundary_zero(profile);
  if (!z.is_exact() || z.rat() != center)
    throw NotCanonical("center must be the canonical boundary zero");

  const auto& knots = profile.knots();
  std::vector<BoundaryProfile::Knot> out;
  // reflected copies of the knots right of the center, in increasing order
  for (auto it = knots.rbegin(); it != knots.rend(); ++it) {
    if (!(QReal(center) < it->y)) continue;
    out.push_back({QReal(Rat(2 * center)) - it->y, -it->value});
  }
  for (const auto& kn : knots)
    if (QReal(center) < kn.y) out.push_back(kn);
  BoundaryProfile res(std::move(out), QReal(Rat(0)), QReal(Rat(0)), QReal(Rat(0)), {},
                      ProfileKind::Odd);
  res.origin_ = profile.origin();
  return res;
}

BoundaryProfile ch_profile(const QuotientData& data) {
  if (data.is_trivial()) throw BadInput("ch_profile needs a nontrivial quotient");
  Rat p(data.p), q(data.q);
  std::vector<BoundaryProfile::Knot> knots{
      {QReal(Rat(q / p)), QReal(Rat(0))},
      {QReal(Rat((q + 1) / p)), QReal(Rat(1))},
  };
  BoundaryProfile out(std::move(knots), QReal(Rat(0)), QReal(Rat(0)), QReal(Rat(1)), {},
                      ProfileKind::ComplexHyperbolic);
  out.origin_ = data;
  return out;
}

int BoundaryProfile::piece_containing(double eta) const {
  int n = static_cast<int>(knots_.size());
  if (eta < knots_.front().y.dbl()) return -1;
  for (int i = 0; i + 1 < n; ++i)
    if (eta <= knots_[i + 1].y.dbl()) return i;
  return n - 1;
}

namespace {
int piece_index(const BoundaryProfile& profile, double eta) {
  return profile.piece_containing(eta);
}
} // namespace

double boundary_value(const BoundaryProfile& profile, double eta) {
  const auto& knots = profile.knots();
  int i = piece_index(profile, eta);
  if (i < 0)
    return knots.front().value.dbl() + profile.left_slope().dbl() * (eta - knots.front().y.dbl());
  if (i == static_cast<int>(knots.size()) - 1)
    return knots.back().value.dbl() + profile.right_slope().dbl() * (eta - knots.back().y.dbl());
  if (const CubicPatch* p = profile.patch_for_piece(i)) return p->eval(eta);
  return knots[i].value.dbl() + profile.piece_slope(i).dbl() * (eta - knots[i].y.dbl());
}

QReal boundary_value_q(const BoundaryProfile& profile, const QReal& eta) {
  const auto& knots = profile.knots();
  int i = piece_index(profile, eta.dbl());
  if (i >= 0 && i + 1 < static_cast<int>(knots.size()) && profile.patch_for_piece(i))
    return QReal::approx(boundary_value(profile, eta.dbl()));
  if (i < 0) return knots.front().value + profile.left_slope() * (eta - knots.front().y);
  if (i == static_cast<int>(knots.size()) - 1)
    return knots.back().value + profile.right_slope() * (eta - knots.back().y);
  return knots[i].value + profile.piece_slope(i) * (eta - knots[i].y);
}

SpectralWeights spectral_weights(const BoundaryProfile& profile) {
  SpectralWeights out;
  const auto& knots = profile.knots();
  const int n = static_cast<int>(knots.size());
  for (int i = 0; i < n; ++i) {
    double y = knots[i].y.dbl();
    const CubicPatch* pl = profile.patch_for_piece(i - 1);
    const CubicPatch* pr = profile.patch_for_piece(i);
    QReal left = pl ? QReal::approx(pl->deriv(y)) : profile.piece_slope(i - 1);
    QReal right = pr ? QReal::approx(pr->deriv(y)) : profile.piece_slope(i);
    QReal w = right - left;
    if (w.is_exact() ? w.rat() != 0 : std::abs(w.dbl()) > kTinyWeight)
      out.atoms.push_back({knots[i].y, w});
  }
  out.infinity_weight = profile.infinity_weight();
  return out;
}

double f1_coefficient(const BoundaryProfile& profile, double eta) {
  SpectralWeights sw = spectral_weights(profile);
  double sum = 0.0;
  for (const auto& atom : sw.atoms) {
    double d = eta - atom.y.dbl();
    if (std::abs(d) < 1e-12) throw OnSupport("f1 diverges at an atom of f0''");
    sum += atom.w.dbl() / std::abs(d);
  }
  // smooth patches contribute their continuous density f0''(y)
  for (const auto& p : profile.patches()) {
    if (eta >= p.a - 1e-12 && eta <= p.b + 1e-12)
      throw OnSupport("f1 requested inside a smooth patch");
    sum += quadrature::integrate(
        [&](double y) { return p.second(y) / std::abs(eta - y); }, p.a, p.b, 1e-12);
  }
  return sum;
}

Inf1Validation validate_inf1(const BoundaryProfile& profile) {
  Inf1Validation out;
  auto fail = [&out](const std::string& s) { out.violations.push_back(s); };

  QReal z;
  try {
    z = boundary_zero(profile);
  } catch (const NoSignChange&) {
    fail("profile has no sign change");
    return out;
  }
  double eta0 = z.dbl();

  if (!profile.odd_at_infinity()) fail("profile is not odd at infinity");

  // left of some finite a the profile must be identically -1
  if (std::abs(profile.left_slope().dbl()) > 0 ||
      std::abs(profile.knots().front().value.dbl() + 1.0) > 1e-12)
    fail("profile must equal -1 on a left half-line");

  // the crossing piece must be the canonical p eta - q segment
  int ci = piece_index(profile, eta0);
  bool canonical_right = true;
  if (ci < 0 || profile.patch_for_piece(ci)) {
    fail("zero crossing must lie in a straight canonical piece");
    canonical_right = false;
  } else {
    double slope = profile.piece_slope(ci).dbl();
    double pd = std::round(slope);
    double qd = std::round(slope * eta0);
    if (!(pd >= 3) || std::abs(slope - pd) > 1e-9 || std::abs(slope * eta0 - qd) > 1e-9) {
      fail("crossing piece does not define integer (p,q) with p >= 3");
      canonical_right = false;
    } else {
      long long p = static_cast<long long>(pd), q = static_cast<long long>(qd);
      try {
        BoundaryProfile can = canonical_profile(minimal_sequence(QuotientData(p, q)));
        // all knots at or right of the zero must match the canonical ones
        std::vector<BoundaryProfile::Knot> a, b;
        for (const auto& kn : profile.knots())
          if (kn.y.dbl() > eta0 - 1e-12) a.push_back(kn);
        for (const auto& kn : can.knots())
          if (kn.y.dbl() > eta0 - 1e-12) b.push_back(kn);
        if (a.size() != b.size())
          canonical_right = false;
        else
          for (size_t i = 0; i < a.size(); ++i)
            if (std::abs(a[i].y.dbl() - b[i].y.dbl()) > 1e-12 ||
                std::abs(a[i].value.dbl() - b[i].value.dbl()) > 1e-12)
              canonical_right = false;
        if (std::abs(profile.right_slope().dbl()) > 0) canonical_right = false;
        for (const auto& p2 : profile.patches())
          if (p2.b > eta0 - 1e-12) canonical_right = false;
        if (!canonical_right) fail("profile must agree with the canonical one right of its zero");
      } catch (const Error& e) {
        fail(std::string("right side does not extend to a canonical profile: ") + e.what());
      }
    }
  }

  // strictly increasing and convex between the -1 plateau and the zero
  double a = profile.knots().front().y.dbl();
  const auto& knots = profile.knots();
  double prev_slope = 0.0; // slope of the -1 plateau
  for (int i = 0; i + 1 < static_cast<int>(knots.size()); ++i) {
    double lo = knots[i].y.dbl(), hi = knots[i + 1].y.dbl();
    if (hi <= a || lo >= eta0) continue;
    if (const CubicPatch* p = profile.patch_for_piece(i)) {
      double in0 = p->deriv(p->a);
      if (in0 < prev_slope - 1e-12) fail("slope drops at a breakpoint (not convex)");
      for (int k2 = 0; k2 <= 16; ++k2) {
        double x = chebyshev_node(p->a, p->b, k2, 16);
        if (p->deriv(x) <= 0) fail("patch is not strictly increasing");
        if (p->second(x) < 0) fail("patch is not convex");
      }
      prev_slope = p->deriv(p->b);
    } else {
      double s = profile.piece_slope(i).dbl();
      if (s <= 0) fail("profile is not strictly increasing below its zero");
      if (s < prev_slope - 1e-12) fail("slope drops at a breakpoint (not convex)");
      prev_slope = s;
    }
  }
  // dedupe repeated messages
  std::sort(out.violations.begin(), out.violations.end());
  out.violations.erase(std::unique(out.violations.begin(), out.violations.end()),
                       out.violations.end());
  return out;
}

BoundaryProfile perturb_profile(const BoundaryProfile& profile, const Perturbation& u, double t) {
  double eta0 = boundary_zero(profile).dbl();
  double sum_c = 0, sum_cz = 0, support_max = -1e300;
  for (auto [z, c] : u.atoms) {
    sum_c += c;
    sum_cz += c * z;
    support_max = std::max(support_max, z);
  }
  for (const auto& p : u.patches) {
    support_max = std::max(support_max, p.b);
    if (std::abs(p.eval(p.a)) > 1e-12 || std::abs(p.eval(p.b)) > 1e-12)
      throw BadInput("perturbation patch must vanish at its endpoints");
  }
  if (std::abs(sum_c) > 1e-12 || std::abs(sum_cz) > 1e-12)
    throw BadInput("perturbation atoms must satisfy sum c = 0 and sum c z = 0");
  if (support_max >= eta0)
    throw SupportTouchesCanonicalRegion("perturbation support must stay left of the zero");
  if (t == 0.0) return profile;

  auto pl_u = [&u](double eta) {
    double s = 0;
    for (auto [z, c] : u.atoms) s += 0.5 * c * std::abs(eta - z);
    return s;
  };

  // merge knot locations
  std::vector<double> nodes;
  for (const auto& kn : profile.knots()) nodes.push_back(kn.y.dbl());
  for (auto [z, c] : u.atoms) nodes.push_back(z);
  for (const auto& p : u.patches) {
    nodes.push_back(p.a);
    nodes.push_back(p.b);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end(),
                          [](double x, double y) { return std::abs(x - y) <= kKnotTol; }),
              nodes.end());

  std::vector<BoundaryProfile::Knot> knots;
  for (double y : nodes)
    knots.push_back({QReal::approx(y), QReal::approx(boundary_value(profile, y) + t * pl_u(y))});

  // base patches survive; perturbation patches add t * cubic to the base piece
  std::vector<CubicPatch> patches = profile.patches();
  for (const auto& p : u.patches) {
    int i = piece_index(profile, 0.5 * (p.a + p.b));
    if (profile.patch_for_piece(i))
      throw BadInput("perturbation patch overlaps an existing patch");
    // base affine piece a0 + a1 eta
    double a1, a0;
    if (i < 0) {
      a1 = profile.left_slope().dbl();
      a0 = profile.knots().front().value.dbl() - a1 * profile.knots().front().y.dbl();
    } else if (i == static_cast<int>(profile.knots().size()) - 1) {
      a1 = profile.right_slope().dbl();
      a0 = profile.knots().back().value.dbl() - a1 * profile.knots().back().y.dbl();
    } else {
      a1 = profile.piece_slope(i).dbl();
      a0 = profile.knots()[i].value.dbl() - a1 * profile.knots()[i].y.dbl();
    }
    CubicPatch combined = p;
    for (auto& cc : combined.c) cc *= t;
    combined.c[0] += a0;
    combined.c[1] += a1;
    patches.push_back(combined);
  }

  return BoundaryProfile(std::move(knots), profile.left_slope(), profile.right_slope(),
                         profile.infinity_weight(), std::move(patches), ProfileKind::Custom);
}

BoundaryProfile profile_from_atoms(const std::vector<SpectralWeights::Atom>& atoms_in,
                                   const QReal& infinity_weight) {
  std::vector<SpectralWeights::Atom> atoms = atoms_in;
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.y < b.y; });
  // merge coincident support points
  std::vector<SpectralWeights::Atom> merged;
  for (const auto& a : atoms) {
    if (!merged.empty() && merged.back().y == a.y)
      merged.back().w = merged.back().w + a.w;
    else
      merged.push_back(a);
  }
  std::erase_if(merged, [](const auto& a) {
    return a.w.is_exact() ? a.w.rat() == 0 : std::abs(a.w.dbl()) <= kTinyWeight;
  });

  QReal half(Rat(1, 2));
  QReal c = infinity_weight * half;
  if (merged.empty()) {
    std::vector<BoundaryProfile::Knot> kn{{QReal(Rat(0)), c}};
    return BoundaryProfile(std::move(kn), QReal(Rat(0)), QReal(Rat(0)), infinity_weight);
  }
  QReal total(Rat(0));
  for (const auto& a : merged) total = total + a.w;
  std::vector<BoundaryProfile::Knot> knots;
  for (const auto& a : merged) {
    QReal v = c;
    for (const auto& b : merged) {
      QReal d = a.y - b.y;
      if (d < QReal(Rat(0))) d = -d;
      v = v + half * b.w * d;
    }
    knots.push_back({a.y, v});
  }
  return BoundaryProfile(std::move(knots), -(half * total), half * total, infinity_weight);
}

ZeroSetTrace trace_zero(const BoundaryProfile& profile, const std::vector<double>& b_grid) {
  for (double b : b_grid)
    if (!(b > 0)) throw BadInput("trace_zero radii must be positive");
  Inf1Validation val = validate_inf1(profile);
  if (!val.ok()) throw BadInput("trace_zero requires a profile passing validate_inf1: " +
                                val.violations.front());

  ZeroSetTrace out;
  out.boundary_zero = boundary_zero(profile).dbl();
  out.radii = b_grid;
  std::sort(out.radii.begin(), out.radii.end());
  const double c = out.boundary_zero;
  out.polyline.resize(out.radii.size());
  out.defects.resize(out.radii.size());

  parallel_for(static_cast<int>(out.radii.size()), [&](int i) {
    double b = out.radii[i];
    auto F_at = [&](double t) {
      double rho = std::max(b * std::sin(t), kRhoMin);
      return eval_F_jet(profile, HalfPlanePoint(rho, c + b * std::cos(t)), 0).F.value();
    };
    double lo = std::max(1e-6, std::asin(std::min(1.0, kRhoMin / b)));
    double hi = M_PI - lo;
    double flo = F_at(lo), fhi = F_at(hi);
    if (!(flo > 0) || !(fhi < 0))
      throw NoZeroOnArc("F does not change sign along the arc");
    for (int it = 0; it < 120; ++it) {
      double mid = 0.5 * (lo + hi);
      double fm = F_at(mid);
      if (std::isnan(fm)) throw BisectionStall("F evaluation failed on the arc");
      (fm > 0 ? lo : hi) = mid;
    }
    double t = 0.5 * (lo + hi);
    double rho = b * std::sin(t), eta = c + b * std::cos(t);
    out.polyline[i] = {rho, eta};
    out.defects[i] = std::abs(std::atan2(eta - c, rho));
  });
  out.orthogonality_defect = out.defects.empty() ? 0.0 : out.defects.front();
  return out;
}

} // namespace hjsde
