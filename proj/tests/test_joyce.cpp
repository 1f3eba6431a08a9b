#include <doctest.h>

#include <cmath>

#include "hjsde/errors.hpp"
#include "hjsde/joyce.hpp"
#include "hjsde/metrics.hpp"

using namespace hjsde;

namespace {

std::vector<BoundaryProfile> residual_suite() {
  std::vector<BoundaryProfile> out;
  out.push_back(canonical_profile(minimal_sequence(QuotientData(8, 3))));
  out.push_back(canonical_profile_merged(minimal_sequence(QuotientData(7, 3))));
  out.push_back(canonical_profile(minimal_sequence(QuotientData(3, 1))));
  out.push_back(canonical_profile(minimal_sequence(QuotientData(5, 1))));
  out.push_back(odd_extension(canonical_profile(minimal_sequence(QuotientData(8, 3))), Rat(3, 8)));
  out.push_back(ch_profile(QuotientData(8, 3)));
  return out;
}

} // namespace

TEST_CASE("normalization: our F is half the unhalved weight sum") {
  // (p,1), p = 5: unhalved form -F(.;1) - 4F(.;1/4) + 5F(.;0)
  BoundaryProfile prof = canonical_profile(minimal_sequence(QuotientData(5, 1)));
  for (double rho : {0.3, 1.0, 2.2}) {
    for (double eta : {-1.0, 0.2, 0.7}) {
      HalfPlanePoint pt(rho, eta);
      double ours = eval_F_jet(prof, pt).F.value();
      double paper = -basic_F_jet(pt, BoundarySupportPoint::finite(1.0)).value() -
                     4.0 * basic_F_jet(pt, BoundarySupportPoint::finite(0.25)).value() +
                     5.0 * basic_F_jet(pt, BoundarySupportPoint::finite(0.0)).value();
      CHECK(ours == doctest::Approx(0.5 * paper).epsilon(1e-13));
    }
  }
}

TEST_CASE("pure infinity profile gives 1/sqrt(rho)") {
  BoundaryProfile p = profile_from_atoms({}, QReal(Rat(2)));
  for (double rho : {0.2, 1.0, 3.0}) {
    FJet fj = eval_F_jet(p, HalfPlanePoint(rho, 0.7));
    CHECK(fj.F.value() == doctest::Approx(1.0 / std::sqrt(rho)).epsilon(1e-15));
    CHECK(fj.f.value() == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("odd extension vanishes on the symmetry line") {
  BoundaryProfile odd =
      odd_extension(canonical_profile(minimal_sequence(QuotientData(8, 3))), Rat(3, 8));
  for (double rho : {0.05, 0.3, 1.0, 5.0}) {
    FJet fj = eval_F_jet(odd, HalfPlanePoint(rho, 0.375));
    CHECK(std::abs(fj.F.value()) <= 1e-12);
  }
  // antisymmetry off the line
  for (double s : {0.1, 0.6}) {
    double a = eval_F_jet(odd, HalfPlanePoint(0.8, 0.375 + s)).F.value();
    double b = eval_F_jet(odd, HalfPlanePoint(0.8, 0.375 - s)).F.value();
    CHECK(std::abs(a + b) <= 1e-12 * std::abs(a));
  }
}

TEST_CASE("eigenfunction and Joyce residuals on 15x15 grids") {
  for (const auto& prof : residual_suite()) {
    for (int i = 0; i < 15; ++i) {
      for (int j = 0; j < 15; ++j) {
        double rho = 0.1 + (3.0 - 0.1) * i / 14.0;
        double eta = -2.0 + 4.0 * j / 14.0;
        FJet fj = eval_F_jet(prof, HalfPlanePoint(rho, eta));
        double lap = laplacian_residual(fj.F);
        CHECK(std::abs(lap) <= 1e-11 * std::max(1e-12, std::abs(fj.F.value())));
        PhiValue phi = phi_from_potential(fj);
        JoyceResidual jr = joyce_residual(phi);
        CHECK(jr.eq1 <= 1e-10 * jr.scale);
        CHECK(jr.eq2 <= 1e-10 * jr.scale);
      }
    }
  }
}

TEST_CASE("det identity |det Phi - (1/4 F^2 - |dF|^2)| on grids") {
  for (const auto& prof : residual_suite()) {
    for (int i = 0; i < 15; ++i) {
      for (int j = 0; j < 15; ++j) {
        double rho = 0.1 + (3.0 - 0.1) * i / 14.0;
        double eta = -2.0 + 4.0 * j / 14.0;
        FJet fj = eval_F_jet(prof, HalfPlanePoint(rho, eta));
        PhiValue phi = phi_from_potential(fj);
        CHECK(det_phi_identity_residual(phi, fj) <= 1e-12);
      }
    }
  }
}

TEST_CASE("phi from weights equals phi from potential") {
  BoundaryProfile prof = canonical_profile(minimal_sequence(QuotientData(8, 3)));
  SpectralWeights sw = spectral_weights(prof);
  std::vector<WeightedAtom> atoms;
  for (const auto& a : sw.atoms)
    atoms.push_back({a.y.dbl(), {a.w.dbl(), a.y.dbl() * a.w.dbl()}});
  for (double rho : {0.2, 0.9, 2.5}) {
    for (double eta : {-1.3, 0.1, 0.8}) {
      HalfPlanePoint pt(rho, eta);
      PhiValue a = phi_from_weights(atoms, pt);
      PhiValue b = phi_from_potential(eval_F_jet(prof, pt));
      CHECK(a.v1a.value() == doctest::Approx(b.v1a.value()).epsilon(1e-12));
      CHECK(a.v1b.value() == doctest::Approx(b.v1b.value()).epsilon(1e-12));
      CHECK(a.v2a.value() == doctest::Approx(b.v2a.value()).epsilon(1e-12));
      CHECK(a.v2b.value() == doctest::Approx(b.v2b.value()).epsilon(1e-12));
    }
  }
  // single atom: Phi = 1/2 phi(.;y) (x) u
  HalfPlanePoint pt(1.1, -0.4);
  PhiValue single = phi_from_weights({{0.5, {1.0, 0.5}}}, pt);
  auto kernel = basic_phi(pt, 0.5);
  CHECK(single.v1a.value() == doctest::Approx(0.5 * kernel[0] * 1.0));
  CHECK(single.v2b.value() == doctest::Approx(0.5 * kernel[1] * 0.5));
  // empty atom list: zero matrix
  PhiValue zero = phi_from_weights({}, pt);
  CHECK(zero.v1a.value() == 0.0);
  CHECK(det_phi(zero) == 0.0);
}

TEST_CASE("potential of constant f and of the boundary model") {
  // F = 1/sqrt(rho), f = 1: v1 = (0,0), v2 = (0,-1)
  HalfPlanePoint pt(0.9, 0.4);
  BoundaryProfile p = profile_from_atoms({}, QReal(Rat(2)));
  PhiValue phi = phi_from_potential(eval_F_jet(p, pt));
  CHECK(phi.v1a.value() == doctest::Approx(0.0));
  CHECK(phi.v1b.value() == doctest::Approx(0.0));
  CHECK(phi.v2a.value() == doctest::Approx(0.0));
  CHECK(phi.v2b.value() == doctest::Approx(-1.0));

  // f = m eta - n exactly: v1 = (0, -rho m), v2 = (m, n)
  double m = 3, n = 1;
  Jet rho = Jet::rho_var(pt.rho, pt.eta);
  Jet eta = Jet::eta_var(pt.rho, pt.eta);
  Jet f = m * eta - n;
  FJet fj{f * pow(rho, -0.5), f};
  PhiValue bm = phi_from_potential(fj);
  CHECK(bm.v1a.value() == doctest::Approx(0.0));
  CHECK(bm.v1b.value() == doctest::Approx(-pt.rho * m));
  CHECK(bm.v2a.value() == doctest::Approx(m));
  CHECK(bm.v2b.value() == doctest::Approx(n));
}

TEST_CASE("hyperbolic example det") {
  BoundaryProfile hyp = hyperbolic_example_profile();
  PhiValue phi = phi_from_potential(eval_F_jet(hyp, HalfPlanePoint(1.0, 1.0)));
  CHECK(det_phi(phi) == doctest::Approx(-1.0 / std::sqrt(5.0)).epsilon(1e-14));
  // closed form on a grid
  for (double rho : {0.3, 1.2}) {
    for (double eta : {-0.7, 0.0, 1.6}) {
      PhiValue p2 = phi_from_potential(eval_F_jet(hyp, HalfPlanePoint(rho, eta)));
      CHECK(det_phi(p2) ==
            doctest::Approx(hyperbolic_det_closed_form(rho, eta)).epsilon(1e-12));
    }
  }
}

TEST_CASE("single basic atom is the degenerate rank-one case") {
  // Phi = 1/2 phi (x) u has det identically zero; the pairwise monotonicity
  // condition holds only non-strictly, so it does not certify det < 0 here.
  std::vector<SpectralWeights::Atom> one{{QReal(Rat(0)), QReal(Rat(2))}};
  BoundaryProfile p = profile_from_atoms(one, QReal(Rat(0)));
  for (double rho : {0.1, 0.7, 2.0})
    for (double eta : {-1.5, 0.0, 2.5}) {
      PhiValue phi = phi_from_potential(eval_F_jet(p, HalfPlanePoint(rho, eta)));
      CHECK(std::abs(det_phi(phi)) <= 1e-14);
    }
  CHECK(!monotonicity_check(p));
  // two distinct atoms restore strictness and a negative det
  std::vector<SpectralWeights::Atom> two{{QReal(Rat(0)), QReal(Rat(2))},
                                         {QReal(Rat(1)), QReal(Rat(-2))}};
  BoundaryProfile p2 = profile_from_atoms(two, QReal(Rat(0)));
  CHECK(monotonicity_check(p2));
  for (double rho : {0.1, 0.7, 2.0})
    for (double eta : {-1.5, 0.3, 2.5})
      CHECK(det_phi(phi_from_potential(eval_F_jet(p2, HalfPlanePoint(rho, eta)))) < 0.0);
}

TEST_CASE("monotonicity check") {
  CHECK(monotonicity_check(canonical_profile(minimal_sequence(QuotientData(8, 3)))));
  CHECK(monotonicity_check(ch_profile(QuotientData(8, 3))));
  CHECK(monotonicity_check(
      odd_extension(canonical_profile(minimal_sequence(QuotientData(8, 3))), Rat(3, 8))));

  // non-monotone boundary data violates the pairwise condition
  std::vector<BoundaryProfile::Knot> knots{{QReal(Rat(-2)), QReal(Rat(-2))},
                                           {QReal(Rat(0)), QReal(Rat(0))},
                                           {QReal(Rat(1, 2)), QReal(Rat(-1))}};
  BoundaryProfile bad(knots, QReal(Rat(0)), QReal(Rat(0)), QReal(Rat(0)));
  CHECK(!monotonicity_check(bad));
}

TEST_CASE("monotone data keeps det Phi negative at 400 grid points") {
  BoundaryProfile prof = canonical_profile(minimal_sequence(QuotientData(8, 3)));
  REQUIRE(monotonicity_check(prof));
  double worst = 0.0;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      double rho = 0.05 + (3.0 - 0.05) * i / 19.0;
      double eta = -2.0 + 4.5 * j / 19.0;
      double d = det_phi(phi_from_potential(eval_F_jet(prof, HalfPlanePoint(rho, eta))));
      CHECK(d < 0.0);
      worst = std::max(worst, d);
    }
  CHECK(worst < -1e-8); // strict, with margin
}

TEST_CASE("boundary asymptotics on canonical edges") {
  BoundaryProfile prof = canonical_profile(minimal_sequence(QuotientData(8, 3)));
  std::vector<double> ladder{1e-2, 4.64e-3, 2.15e-3, 1e-3, 4.64e-4, 2.15e-4, 1e-4};
  AsymptoticsReport rep = boundary_asymptotics(prof, 0.45, ladder);
  CHECK(rep.mn_expected[0] == doctest::Approx(3.0));
  CHECK(rep.mn_expected[1] == doctest::Approx(1.0));
  CHECK(std::abs(rep.v1_order - 1.0) <= 0.2);
  CHECK(std::abs(rep.v2_order - 2.0) <= 0.2);
  CHECK(std::abs(rep.f_order - 2.0) <= 0.2);
  CHECK(rep.v2_limit[0] == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(rep.v2_limit[1] == doctest::Approx(1.0).epsilon(1e-6));

  // right of y_0 the label is (0,-1)
  AsymptoticsReport right = boundary_asymptotics(prof, 2.0, ladder);
  CHECK(right.mn_expected[0] == doctest::Approx(0.0));
  CHECK(right.mn_expected[1] == doctest::Approx(-1.0));
  CHECK(right.v2_limit[0] == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(right.v2_limit[1] == doctest::Approx(-1.0).epsilon(1e-8));

  CHECK_THROWS_AS(boundary_asymptotics(prof, 0.4, ladder), NotLocallyAffine);
}

TEST_CASE("quadrature-backed smooth pieces") {
  // same convex bridge profile as in the profile tests
  double a = 0.175, b = 0.3;
  double va = -1.0, vb = 8 * b - 3, da = 0.5, db = 8.0, h = b - a;
  double t0 = (vb - va) / h;
  double c2 = (3 * t0 - 2 * da - db) / h;
  double c3 = (da + db - 2 * t0) / (h * h);
  CubicPatch patch;
  patch.a = a;
  patch.b = b;
  patch.c[0] = va - da * a + c2 * a * a - c3 * a * a * a;
  patch.c[1] = da - 2 * c2 * a + 3 * c3 * a * a;
  patch.c[2] = c2 - 3 * c3 * a;
  patch.c[3] = c3;
  std::vector<BoundaryProfile::Knot> knots{
      {QReal::approx(a), QReal::approx(va)},  {QReal::approx(b), QReal::approx(vb)},
      {QReal(Rat(2, 5)), QReal(Rat(1, 5))},   {QReal(Rat(1, 2)), QReal(Rat(1, 2))},
      {QReal(Rat(1)), QReal(Rat(1))},
  };
  BoundaryProfile prof(knots, QReal(Rat(0)), QReal(Rat(0)), QReal(Rat(0)), {patch});

  for (double rho : {0.15, 0.6, 1.8}) {
    for (double eta : {-0.5, 0.24, 0.9}) {
      FJet fj = eval_F_jet(prof, HalfPlanePoint(rho, eta));
      CHECK(std::abs(laplacian_residual(fj.F)) <= 1e-8 * std::max(1.0, std::abs(fj.F.value())));
      JoyceResidual jr = joyce_residual(phi_from_potential(fj));
      CHECK(jr.eq1 <= 1e-8 * jr.scale);
      CHECK(jr.eq2 <= 1e-8 * jr.scale);
    }
  }
  // boundary value recovered through the patch quadrature
  AsymptoticsReport rep =
      boundary_asymptotics(prof, 0.5, {1e-2, 4.64e-3, 2.15e-3, 1e-3, 4.64e-4});
  CHECK(std::abs(rep.f_order - 2.0) <= 0.25);
  CHECK(monotonicity_check(prof));
}

TEST_CASE("scaling equivariance of det") {
  BoundaryProfile prof = canonical_profile(minimal_sequence(QuotientData(8, 3)));
  HalfPlanePoint pt(0.7, 0.9);
  FJet fj = eval_F_jet(prof, pt);
  PhiValue phi = phi_from_potential(fj);
  FJet scaled{fj.F * 2.0, fj.f * 2.0};
  PhiValue phi2 = phi_from_potential(scaled);
  CHECK(det_phi(phi2) == doctest::Approx(4.0 * det_phi(phi)).epsilon(1e-13));
}
