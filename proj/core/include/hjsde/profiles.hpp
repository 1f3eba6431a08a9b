#pragma once
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hjsde/rational.hpp"
#include "hjsde/resolution.hpp"

namespace hjsde {

// Scalar that is an exact rational when it came from sequence combinatorics and
// a double otherwise. Mixing degrades to double.
class QReal {
 public:
  QReal() : exact_(true), rat_(0) {}
  QReal(const Rat& r) : exact_(true), rat_(r) {} // NOLINT: implicit by design
  QReal(const Int& n) : exact_(true), rat_(n) {}
  static QReal approx(double v) {
    QReal q;
    q.exact_ = false;
    q.dbl_ = v;
    return q;
  }
  bool is_exact() const { return exact_; }
  const Rat& rat() const;
  double dbl() const { return exact_ ? to_double(rat_) : dbl_; }

  friend QReal operator+(const QReal& x, const QReal& y) { return combine(x, y, +1); }
  friend QReal operator-(const QReal& x, const QReal& y) { return combine(x, y, -1); }
  friend QReal operator*(const QReal& x, const QReal& y);
  friend QReal operator/(const QReal& x, const QReal& y);
  QReal operator-() const;
  friend bool operator==(const QReal& x, const QReal& y) { return cmp(x, y) == 0; }
  friend bool operator!=(const QReal& x, const QReal& y) { return cmp(x, y) != 0; }
  friend bool operator<(const QReal& x, const QReal& y) { return cmp(x, y) < 0; }
  friend bool operator<=(const QReal& x, const QReal& y) { return cmp(x, y) <= 0; }
  friend bool operator>(const QReal& x, const QReal& y) { return cmp(x, y) > 0; }
  friend bool operator>=(const QReal& x, const QReal& y) { return cmp(x, y) >= 0; }

 private:
  static QReal combine(const QReal& x, const QReal& y, int sign);
  static int cmp(const QReal& x, const QReal& y);
  bool exact_;
  Rat rat_;
  double dbl_ = 0.0;
};

// Cubic patch on [a,b]: f0(eta) = c0 + c1 eta + c2 eta^2 + c3 eta^3 in the
// absolute coordinate. Double precision by design.
struct CubicPatch {
  double a = 0.0, b = 0.0;
  std::array<double, 4> c{};
  double eval(double eta) const { return ((c[3] * eta + c[2]) * eta + c[1]) * eta + c[0]; }
  double deriv(double eta) const { return (3 * c[3] * eta + 2 * c[2]) * eta + c[1]; }
  double second(double eta) const { return 6 * c[3] * eta + 2 * c[2]; }
};

enum class ProfileKind { Canonical, CanonicalMerged, Odd, ComplexHyperbolic, Custom };

// Continuous boundary function f0 on the real line: piecewise linear through
// knots, exactly affine outside them, optional cubic patches replacing linear
// pieces between adjacent knots. infinity_weight is the coefficient of the
// y = infinity basic solution (twice the constant term of the half-sum
// representation f0 = 1/2 sum w_j |eta - y_j| + c).
class BoundaryProfile {
 public:
  struct Knot {
    QReal y;
    QReal value;
  };

  BoundaryProfile(std::vector<Knot> knots, QReal left_slope, QReal right_slope,
                  QReal infinity_weight, std::vector<CubicPatch> patches = {},
                  ProfileKind kind = ProfileKind::Custom);

  const std::vector<Knot>& knots() const { return knots_; }
  const QReal& left_slope() const { return left_slope_; }
  const QReal& right_slope() const { return right_slope_; }
  const QReal& infinity_weight() const { return infinity_weight_; }
  const std::vector<CubicPatch>& patches() const { return patches_; }
  ProfileKind kind() const { return kind_; }

  // patch covering the open piece (knot i, knot i+1), if any
  const CubicPatch* patch_for_piece(int i) const;
  // PL slope of piece i in [-1, #knots-1], -1 = left unbounded piece
  QReal piece_slope(int i) const;
  // index of the piece containing eta (knots resolve to the right piece)
  int piece_containing(double eta) const;

  // mu(eta) and nu(eta) odd at infinity (computed, not assumed)
  bool odd_at_infinity() const;

  // quotient data when this profile came from a resolution
  const std::optional<QuotientData>& origin() const { return origin_; }

 private:
  friend BoundaryProfile canonical_profile(const AdmissibleSequence&);
  friend BoundaryProfile canonical_profile_merged(const AdmissibleSequence&);
  friend BoundaryProfile odd_extension(const BoundaryProfile&, const Rat&);
  friend BoundaryProfile ch_profile(const QuotientData&);
  std::vector<Knot> knots_;
  QReal left_slope_, right_slope_, infinity_weight_;
  std::vector<CubicPatch> patches_;
  ProfileKind kind_ = ProfileKind::Custom;
  std::optional<QuotientData> origin_;
};

// Delta-atom decomposition of f0'': slope jumps at the breakpoints plus the
// weight of the infinity solution. Patch junctions contribute their slope
// jumps; the smooth density inside patches is not an atom.
struct SpectralWeights {
  struct Atom {
    QReal y;
    QReal w;
  };
  std::vector<Atom> atoms;
  QReal infinity_weight;
};

struct ZeroSetTrace {
  std::vector<std::pair<double, double>> polyline; // (rho, eta), ordered by b
  std::vector<double> radii;
  std::vector<double> defects; // angle to the vertical per arc
  double boundary_zero = 0.0;
  double orthogonality_defect = 0.0; // defect at the smallest radius
};

struct Inf1Validation {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Compactly supported perturbation u: kink atoms (z_i, c_i) meaning
// 1/2 sum c_i |eta - z_i| (requires sum c_i = 0 and sum c_i z_i = 0) plus
// cubic patches vanishing at their interval endpoints.
struct Perturbation {
  std::vector<std::pair<double, double>> atoms;
  std::vector<CubicPatch> patches;
};

// Boundary data of the canonical eigenfunction: breakpoints
// y_j = (n_{j+1}-n_j)/(m_{j+1}-m_j) with f0 = m_j eta - n_j in between.
// Requires strictly decreasing y_j (all e_j >= 3); throws DegenerateSpacing
// otherwise.
BoundaryProfile canonical_profile(const AdmissibleSequence& seq);

// Same construction but merges coinciding breakpoints (e_j = 2 collisions),
// summing their weights. The eigenfunction is still valid; the smooth
// compactification over the collapsed edges is not.
BoundaryProfile canonical_profile_merged(const AdmissibleSequence& seq);

// Unique zero of a non-decreasing profile; exact rational q/p for canonical
// data. Throws NoSignChange.
QReal boundary_zero(const BoundaryProfile& profile);

// Odd reflection about the canonical zero: f0(c - s) = -f0(c + s).
BoundaryProfile odd_extension(const BoundaryProfile& profile, const Rat& center);

// Three-pole profile 1/2 (|p eta - q| - |p eta - q - 1| + 1): atoms
// (q/p, +p), ((q+1)/p, -p), (inf, +1). Not odd at infinity.
BoundaryProfile ch_profile(const QuotientData& data);

double boundary_value(const BoundaryProfile& profile, double eta);
QReal boundary_value_q(const BoundaryProfile& profile, const QReal& eta);

SpectralWeights spectral_weights(const BoundaryProfile& profile);

// f1(eta) = sum_j w_j / |eta - y_j| over finite atoms. Throws OnSupport when
// eta hits an atom.
double f1_coefficient(const BoundaryProfile& profile, double eta);

// Zero of F on each semicircular arc of radius b centered at (0, eta0), found
// by bisection (F is strictly decreasing along the arcs). Parallel over arcs.
ZeroSetTrace trace_zero(const BoundaryProfile& profile, const std::vector<double>& b_grid);

// Hypotheses for the asymptotically hyperbolic family: canonical to the right
// of its zero, constant -1 left of a finite a, continuous, piecewise
// differentiable, strictly increasing and convex in between, odd at infinity.
Inf1Validation validate_inf1(const BoundaryProfile& profile);

// f0 + t u; support of u must stay strictly left of the profile zero.
BoundaryProfile perturb_profile(const BoundaryProfile& profile, const Perturbation& u, double t);

// Reconstructs the piecewise-linear profile generated by the given atoms:
// f0 = 1/2 sum w_j |eta - y_j| + infinity_weight/2.
BoundaryProfile profile_from_atoms(const std::vector<SpectralWeights::Atom>& atoms,
                                   const QReal& infinity_weight);

} // namespace hjsde
