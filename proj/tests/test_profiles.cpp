#include <doctest.h>

#include <cmath>

#include "hjsde/errors.hpp"
#include "hjsde/fitting.hpp"
#include "hjsde/joyce.hpp"
#include "hjsde/profiles.hpp"

using namespace hjsde;

namespace {
AdmissibleSequence seq83() { return minimal_sequence(QuotientData(8, 3)); }

bool atom_is(const SpectralWeights::Atom& a, const Rat& y, const Rat& w) {
  return a.y.is_exact() && a.w.is_exact() && a.y.rat() == y && a.w.rat() == w;
}
} // namespace

TEST_CASE("canonical profile of (8,3)") {
  BoundaryProfile p = canonical_profile(seq83());
  REQUIRE(p.knots().size() == 4);
  CHECK(p.knots()[0].y.rat() == Rat(1, 4));
  CHECK(p.knots()[1].y.rat() == Rat(2, 5));
  CHECK(p.knots()[2].y.rat() == Rat(1, 2));
  CHECK(p.knots()[3].y.rat() == Rat(1));
  CHECK(p.knots()[0].value.rat() == Rat(-1));
  CHECK(p.knots()[1].value.rat() == Rat(1, 5));
  CHECK(p.knots()[2].value.rat() == Rat(1, 2));
  CHECK(p.knots()[3].value.rat() == Rat(1));
  CHECK(p.odd_at_infinity());

  auto sw = spectral_weights(p);
  REQUIRE(sw.atoms.size() == 4);
  CHECK(atom_is(sw.atoms[0], Rat(1, 4), Rat(8)));
  CHECK(atom_is(sw.atoms[1], Rat(2, 5), Rat(-5)));
  CHECK(atom_is(sw.atoms[2], Rat(1, 2), Rat(-2)));
  CHECK(atom_is(sw.atoms[3], Rat(1), Rat(-1)));
  CHECK(sw.infinity_weight.rat() == 0);

  // telescoping: sum w = 0 and sum w y = -2, exactly
  Rat sum = 0, sumy = 0;
  for (const auto& a : sw.atoms) {
    sum += a.w.rat();
    sumy += a.w.rat() * a.y.rat();
  }
  CHECK(sum == 0);
  CHECK(sumy == -2);
}

TEST_CASE("canonical profile of (p,1)") {
  for (long long p : {3, 5, 7}) {
    BoundaryProfile prof = canonical_profile(minimal_sequence(QuotientData(p, 1)));
    REQUIRE(prof.knots().size() == 3);
    CHECK(prof.knots()[0].y.rat() == Rat(0));
    CHECK(prof.knots()[1].y.rat() == Rat(1, p - 1));
    CHECK(prof.knots()[2].y.rat() == Rat(1));
    auto sw = spectral_weights(prof);
    CHECK(atom_is(sw.atoms[0], Rat(0), Rat(p)));
    CHECK(atom_is(sw.atoms[1], Rat(1, p - 1), Rat(-(p - 1))));
    CHECK(atom_is(sw.atoms[2], Rat(1), Rat(-1)));
  }
}

TEST_CASE("degenerate spacing is rejected") {
  CHECK_THROWS_AS(canonical_profile(minimal_sequence(QuotientData(2, 1))), DegenerateSpacing);
  CHECK_THROWS_AS(canonical_profile(minimal_sequence(QuotientData(3, 2))), DegenerateSpacing);
  CHECK_THROWS_AS(canonical_profile(minimal_sequence(QuotientData(7, 3))), DegenerateSpacing);
}

TEST_CASE("merged canonical profile for colliding breakpoints") {
  // (7,3): e = [3,2,2], breakpoints collide at 1/2 with merged weight -6
  BoundaryProfile p = canonical_profile_merged(minimal_sequence(QuotientData(7, 3)));
  auto sw = spectral_weights(p);
  REQUIRE(sw.atoms.size() == 3);
  CHECK(atom_is(sw.atoms[0], Rat(2, 7), Rat(7)));
  CHECK(atom_is(sw.atoms[1], Rat(1, 2), Rat(-6)));
  CHECK(atom_is(sw.atoms[2], Rat(1), Rat(-1)));
  CHECK(boundary_zero(p).rat() == Rat(3, 7));
  CHECK(boundary_value(p, 0.4) == doctest::Approx(7 * 0.4 - 3).epsilon(1e-15));
}

TEST_CASE("boundary zero") {
  CHECK(boundary_zero(canonical_profile(seq83())).rat() == Rat(3, 8));
  CHECK(boundary_zero(canonical_profile(minimal_sequence(QuotientData(5, 1)))).rat() ==
        Rat(1, 5));
  // profile with no zero
  std::vector<BoundaryProfile::Knot> knots{{QReal(Rat(0)), QReal(Rat(1))},
                                           {QReal(Rat(1)), QReal(Rat(2))}};
  BoundaryProfile shifted(knots, QReal(Rat(0)), QReal(Rat(0)), QReal(Rat(0)));
  CHECK_THROWS_AS(boundary_zero(shifted), NoSignChange);
}

TEST_CASE("odd extension of (8,3)") {
  BoundaryProfile can = canonical_profile(seq83());
  BoundaryProfile odd = odd_extension(can, Rat(3, 8));
  REQUIRE(odd.knots().size() == 6);
  CHECK(odd.knots()[0].y.rat() == Rat(-1, 4));
  CHECK(odd.knots()[1].y.rat() == Rat(1, 4));
  CHECK(odd.knots()[2].y.rat() == Rat(7, 20));
  CHECK(odd.knots()[3].y.rat() == Rat(2, 5));
  CHECK(odd.knots()[0].value.rat() == Rat(-1));
  CHECK(odd.knots()[2].value.rat() == Rat(-1, 5));
  CHECK(boundary_value(odd, 0.375) == doctest::Approx(0.0));
  CHECK(odd.odd_at_infinity());

  // w(2c - y) = -w(y): mu is even about the center, so its jumps flip sign
  auto sw = spectral_weights(odd);
  REQUIRE(sw.atoms.size() == 6);
  for (size_t i = 0; i < 3; ++i) {
    const auto& left = sw.atoms[i];
    const auto& right = sw.atoms[5 - i];
    CHECK(left.y.rat() + right.y.rat() == Rat(3, 4));
    CHECK(left.w.rat() == -right.w.rat());
  }

  // oddness of values: f0(c+s) = -f0(c-s)
  for (double s : {0.05, 0.2, 0.5, 1.0, 3.0})
    CHECK(boundary_value(odd, 0.375 + s) ==
          doctest::Approx(-boundary_value(odd, 0.375 - s)).epsilon(1e-14));

  CHECK_THROWS_AS(odd_extension(odd, Rat(3, 8)), NotCanonical);
  CHECK_THROWS_AS(odd_extension(can, Rat(1, 2)), NotCanonical);
}

TEST_CASE("complex-hyperbolic profile") {
  BoundaryProfile ch = ch_profile(QuotientData(8, 3));
  CHECK(boundary_value(ch, 0.0) == doctest::Approx(0.0));
  CHECK(boundary_value(ch, 1.0) == doctest::Approx(1.0));
  CHECK(boundary_value(ch, 7.0 / 16) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(!ch.odd_at_infinity());
  auto sw = spectral_weights(ch);
  REQUIRE(sw.atoms.size() == 2);
  CHECK(atom_is(sw.atoms[0], Rat(3, 8), Rat(8)));
  CHECK(atom_is(sw.atoms[1], Rat(1, 2), Rat(-8)));
  CHECK(sw.infinity_weight.rat() == 1);
  // half-sum representation reproduces the case formula 1/2(|p eta - q| - |p eta - q - 1| + 1)
  for (double eta : {-2.0, 0.1, 0.4, 0.45, 0.8, 3.0}) {
    double expect = 0.5 * (std::abs(8 * eta - 3) - std::abs(8 * eta - 4) + 1);
    double atoms = 0.5 * (8 * std::abs(eta - 0.375) - 8 * std::abs(eta - 0.5) + 1);
    CHECK(boundary_value(ch, eta) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(atoms == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("boundary_value on canonical pieces") {
  BoundaryProfile p = canonical_profile(seq83());
  CHECK(boundary_value(p, 0.5) == doctest::Approx(0.5)); // 3 eta - 1 on (2/5, 1/2)
  CHECK(boundary_value(p, 0.45) == doctest::Approx(3 * 0.45 - 1).epsilon(1e-15));
  CHECK(boundary_value(p, 2.0) == doctest::Approx(1.0));
  CHECK(boundary_value(p, -5.0) == doctest::Approx(-1.0));
  // continuity at each breakpoint
  for (const auto& kn : p.knots()) {
    double y = kn.y.dbl();
    CHECK(boundary_value(p, std::nextafter(y, -1e9)) ==
          doctest::Approx(kn.value.dbl()).epsilon(1e-12));
    CHECK(boundary_value(p, std::nextafter(y, 1e9)) ==
          doctest::Approx(kn.value.dbl()).epsilon(1e-12));
  }
}

TEST_CASE("nu/mu monotone over canonical intervals") {
  // nu(y)/mu(y) = n_j/m_j is non-increasing left to right where mu > 0
  auto seq = seq83();
  BoundaryProfile p = canonical_profile(seq);
  std::vector<double> ratios;
  const auto& kn = p.knots();
  for (int i = -1; i < static_cast<int>(kn.size()); ++i) {
    QReal mu = p.piece_slope(i);
    if (!(mu.dbl() > 0)) continue;
    const auto& anchor = kn[std::max(i, 0)];
    QReal nu = mu * anchor.y - anchor.value;
    ratios.push_back(nu.dbl() / mu.dbl());
  }
  for (size_t i = 0; i + 1 < ratios.size(); ++i) CHECK(ratios[i] >= ratios[i + 1] - 1e-15);
}

TEST_CASE("f1 coefficient") {
  for (long long pq : {5, 8}) {
    BoundaryProfile ch = ch_profile(QuotientData(pq, pq == 5 ? 2 : 3));
    double q_over_p = pq == 5 ? 2.0 / 5 : 3.0 / 8;
    double f1 = f1_coefficient(ch, q_over_p - 1.0);
    CHECK(f1 == doctest::Approx(double(pq) / (pq + 1)).epsilon(1e-14));
  }
  std::vector<SpectralWeights::Atom> sym{{QReal(Rat(-1)), QReal(Rat(-1))},
                                         {QReal(Rat(1)), QReal(Rat(1))}};
  BoundaryProfile symp = profile_from_atoms(sym, QReal(Rat(0)));
  CHECK(f1_coefficient(symp, 0.0) == doctest::Approx(0.0));

  std::vector<SpectralWeights::Atom> single{{QReal(Rat(0)), QReal(Rat(3))}};
  BoundaryProfile sp = profile_from_atoms(single, QReal(Rat(0)));
  CHECK(f1_coefficient(sp, 2.0) == doctest::Approx(1.5));
  CHECK_THROWS_AS(f1_coefficient(sp, 0.0), OnSupport);
}

TEST_CASE("validate_inf1") {
  CHECK(validate_inf1(canonical_profile(seq83())).ok());
  CHECK(validate_inf1(odd_extension(canonical_profile(seq83()), Rat(3, 8))).ok());

  auto chv = validate_inf1(ch_profile(QuotientData(8, 3)));
  CHECK(!chv.ok());
  bool left_violation = false, odd_violation = false;
  for (const auto& v : chv.violations) {
    if (v.find("-1") != std::string::npos) left_violation = true;
    if (v.find("odd at infinity") != std::string::npos) odd_violation = true;
  }
  CHECK(left_violation);
  CHECK(odd_violation);

  // concave dip below zero breaks convexity
  BoundaryProfile can = canonical_profile(seq83());
  std::vector<BoundaryProfile::Knot> knots;
  for (const auto& kn : can.knots()) knots.push_back(kn);
  knots.insert(knots.begin(), {QReal(Rat(1, 8)), QReal(Rat(-9, 10))});
  knots.insert(knots.begin(), {QReal(Rat(0)), QReal(Rat(-1))});
  // slopes: 0.8 then (# -0.9 -> -1) -0.8: decreasing -> concave
  BoundaryProfile dip(knots, QReal(Rat(0)), QReal(Rat(0)), QReal(Rat(0)));
  auto v = validate_inf1(dip);
  CHECK(!v.ok());
}

TEST_CASE("perturb_profile") {
  BoundaryProfile can = canonical_profile(seq83());
  Perturbation u;
  u.atoms = {{-0.75, 1.0}, {-0.5, -2.0}, {-0.25, 1.0}}; // tent, sums to zero
  BoundaryProfile same = perturb_profile(can, u, 0.0);
  CHECK(same.knots().size() == can.knots().size());

  BoundaryProfile moved = perturb_profile(can, u, 0.01);
  // tent peak at -0.5 has height 1/2 sum c_i |z - z_i| = 1/2 * 0.5 = 0.25
  CHECK(boundary_value(moved, -0.5) ==
        doctest::Approx(-1.0 + 0.01 * 0.25).epsilon(1e-12));
  CHECK(boundary_value(moved, -2.0) == doctest::Approx(-1.0)); // outside support
  CHECK(boundary_value(moved, 0.5) == doctest::Approx(0.5));   // canonical side untouched

  Perturbation bad;
  bad.atoms = {{0.2, 1.0}, {0.5, -2.0}, {0.8, 1.0}}; // support crosses q/p = 3/8
  CHECK_THROWS_AS(perturb_profile(can, bad, 0.01), SupportTouchesCanonicalRegion);

  Perturbation unbalanced;
  unbalanced.atoms = {{-1.0, 1.0}};
  CHECK_THROWS_AS(perturb_profile(can, unbalanced, 0.01), BadInput);
}

TEST_CASE("smooth patch profiles pass construction and inf1") {
  // convex C^1 bridge replacing the straight climb between eta = 0.175 and 0.3
  // base: canonical (8,3) has f0 = 8 eta - 3 on (1/4, 2/5), f0 = -1 left of 1/4
  double a = 0.175, b = 0.3;
  // cubic through (a,-1) with slope 0.5, meeting (b, 8b-3) with slope 8
  double va = -1.0, vb = 8 * b - 3, da = 0.5, db = 8.0, h = b - a;
  // Hermite coefficients in the absolute coordinate
  double t0 = (vb - va) / h;
  double c2 = (3 * t0 - 2 * da - db) / h;
  double c3 = (da + db - 2 * t0) / (h * h);
  // convert from (x-a) powers to absolute eta powers
  CubicPatch patch;
  patch.a = a;
  patch.b = b;
  patch.c[0] = va - da * a + c2 * a * a - c3 * a * a * a;
  patch.c[1] = da - 2 * c2 * a + 3 * c3 * a * a;
  patch.c[2] = c2 - 3 * c3 * a;
  patch.c[3] = c3;

  std::vector<BoundaryProfile::Knot> knots{
      {QReal::approx(a), QReal::approx(va)},
      {QReal::approx(b), QReal::approx(vb)},
      {QReal(Rat(2, 5)), QReal(Rat(1, 5))},
      {QReal(Rat(1, 2)), QReal(Rat(1, 2))},
      {QReal(Rat(1)), QReal(Rat(1))},
  };
  BoundaryProfile prof(knots, QReal(Rat(0)), QReal(Rat(0)), QReal(Rat(0)), {patch});
  CHECK(boundary_value(prof, 0.25) == doctest::Approx(patch.eval(0.25)).epsilon(1e-15));
  auto v = validate_inf1(prof);
  CHECK(v.ok());
}

TEST_CASE("trace_zero on the odd extension is the vertical line") {
  BoundaryProfile odd = odd_extension(canonical_profile(seq83()), Rat(3, 8));
  std::vector<double> bs{0.1, 0.3, 0.7, 1.2, 2.0};
  ZeroSetTrace tr = trace_zero(odd, bs);
  REQUIRE(tr.polyline.size() == bs.size());
  for (size_t i = 0; i < bs.size(); ++i) {
    CHECK(tr.polyline[i].second == doctest::Approx(0.375).epsilon(1e-10));
    CHECK(tr.polyline[i].first == doctest::Approx(bs[i]).epsilon(1e-9));
    CHECK(tr.defects[i] <= 1e-9);
  }
}

TEST_CASE("trace_zero on canonical (8,3)") {
  BoundaryProfile can = canonical_profile(seq83());
  std::vector<double> bs;
  for (int i = 0; i < 10; ++i) bs.push_back(0.1 + i * 0.2);
  ZeroSetTrace tr = trace_zero(can, bs);
  for (size_t i = 0; i < bs.size(); ++i) {
    auto [rho, eta] = tr.polyline[i];
    double f = eval_F_jet(can, HalfPlanePoint(std::max(rho, kRhoMin), eta), 0).f.value();
    CHECK(std::abs(f) <= 1e-10);
    // uniqueness along the arc: exactly one sign change over 100 samples
    int changes = 0;
    double prev = 0;
    for (int s = 1; s <= 100; ++s) {
      double t = s * M_PI / 101.0;
      double r = std::max(bs[i] * std::sin(t), kRhoMin);
      double e = 0.375 + bs[i] * std::cos(t);
      double val = eval_F_jet(can, HalfPlanePoint(r, e), 0).F.value();
      if (s > 1 && ((val > 0) != (prev > 0))) ++changes;
      prev = val;
    }
    CHECK(changes == 1);
  }
  // b -> 0: the defect angle vanishes at first order in b (asymptotic regime
  // needs b below the distance to the nearest atom, 1/40 here)
  std::vector<double> small{0.00125, 0.0025, 0.005, 0.01};
  ZeroSetTrace tr2 = trace_zero(can, small);
  PowerFit fit = fit_power_law(small, tr2.defects);
  CHECK(std::abs(fit.exponent - 1.0) <= 0.2);
  CHECK(std::abs(tr2.polyline[0].second - 0.375) <= 2 * small[0] * tr2.defects[0]);
}

TEST_CASE("profile_from_atoms round trip") {
  std::vector<SpectralWeights::Atom> atoms{{QReal(Rat(-2)), QReal(Rat(3))},
                                           {QReal(Rat(1, 3)), QReal(Rat(-4))},
                                           {QReal(Rat(2)), QReal(Rat(1))}};
  BoundaryProfile p = profile_from_atoms(atoms, QReal(Rat(2)));
  auto sw = spectral_weights(p);
  REQUIRE(sw.atoms.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(sw.atoms[i].y.rat() == atoms[i].y.rat());
    CHECK(sw.atoms[i].w.rat() == atoms[i].w.rat());
  }
  CHECK(sw.infinity_weight.rat() == 2);
}
