#include <doctest.h>

#include <cmath>
#include <random>

#include "hjsde/halfplane.hpp"

using namespace hjsde;

TEST_CASE("basic F values") {
  CHECK(basic_F_jet({1.0, 0.0}, BoundarySupportPoint::finite(0.0)).value() ==
        doctest::Approx(1.0).epsilon(1e-15));
  // eta = y collapses the numerator to rho
  CHECK(basic_F_jet({0.49, 2.0}, BoundarySupportPoint::finite(2.0)).value() ==
        doctest::Approx(0.7).epsilon(1e-14));
  Jet inf = basic_F_jet({1.0, 1.0}, BoundarySupportPoint::infinity());
  CHECK(inf.value() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(inf.d_rho() == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("basic F is a 3/4 eigenfunction of the hyperbolic laplacian") {
  Jet F = basic_F_jet({1.3, 0.7}, BoundarySupportPoint::finite(-2.0));
  CHECK(std::abs(laplacian_residual(F)) <= 1e-12 * std::abs(F.value()));
  Jet Finf = basic_F_jet({0.37, 1.9}, BoundarySupportPoint::infinity());
  CHECK(std::abs(laplacian_residual(Finf)) <= 1e-12 * std::abs(Finf.value()));
  // constants are not eigenfunctions: residual is exactly -3/4
  Jet one = Jet::constant(1.0, 1.0, 0.0);
  CHECK(laplacian_residual(one) == doctest::Approx(-0.75));
}

TEST_CASE("laplacian residual over weighted sums on a grid") {
  std::vector<std::pair<double, double>> atoms{{-1.5, 2.0}, {0.25, -3.0}, {2.0, 1.0}};
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      double rho = 0.1 + (3.0 - 0.1) * i / 19.0;
      double eta = -2.0 + 4.0 * j / 19.0;
      Jet F = Jet::constant(0.0, rho, eta);
      for (auto [y, w] : atoms)
        F = F + w * basic_F_jet({rho, eta}, BoundarySupportPoint::finite(y));
      F = F + 0.7 * basic_F_jet({rho, eta}, BoundarySupportPoint::infinity());
      CHECK(std::abs(laplacian_residual(F)) <= 1e-11 * std::max(1.0, std::abs(F.value())));
    }
  }
}

TEST_CASE("basic phi is unit and solves the Joyce system") {
  auto v = basic_phi({1.0, 0.0}, 1.0);
  CHECK(v[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(v[1] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(std::hypot(v[0], v[1]) == doctest::Approx(1.0).epsilon(1e-15));

  auto on_axis = basic_phi({0.9, 0.3}, 0.3);
  CHECK(on_axis[0] == doctest::Approx(1.0));
  CHECK(on_axis[1] == doctest::Approx(0.0));

  // small-rho boundary behaviour: (O(rho), sign(eta-y) + O(rho^2))
  auto near0 = basic_phi({1e-3, 0.5}, -0.5);
  CHECK(std::abs(near0[0]) < 2e-3);
  CHECK(near0[1] == doctest::Approx(1.0).epsilon(1e-5));

  // componentwise Joyce residuals with a constant tensor factor
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> rd(0.2, 2.5), ed(-2.0, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    double rho = rd(rng), eta = ed(rng), y = ed(rng);
    auto phi = basic_phi_jet({rho, eta}, y);
    double r1 = rho * phi[0].d_rho() + rho * phi[1].d_eta() - phi[0].value();
    double r2 = rho * phi[0].d_eta() - rho * phi[1].d_rho();
    CHECK(std::abs(r1) <= 1e-10);
    CHECK(std::abs(r2) <= 1e-10);
  }
}

TEST_CASE("moebius action on boundary points") {
  MoebiusMap inv = MoebiusMap::inversion();
  auto out = moebius_apply(inv, BoundarySupportPoint::finite(2.0));
  CHECK(!out.y.at_infinity);
  CHECK(out.y.y == doctest::Approx(-0.5).epsilon(1e-15));

  auto id = MoebiusMap::identity();
  auto fixed = moebius_apply(id, BoundarySupportPoint::finite(0.3));
  CHECK(fixed.y.y == doctest::Approx(0.3));
  CHECK(fixed.weight == doctest::Approx(1.0));

  // pole: y = 0 maps to infinity under the inversion
  auto pole = moebius_apply(inv, BoundarySupportPoint::finite(0.0));
  CHECK(pole.y.at_infinity);
  CHECK_THROWS_AS(moebius_apply_finite(inv, 0.0), PoleAtPoint);
}

TEST_CASE("moebius action on points matches the printed inversion") {
  MoebiusMap inv = MoebiusMap::inversion();
  HalfPlanePoint p = moebius_apply(inv, HalfPlanePoint(0.5, 1.5));
  double s = 0.5 * 0.5 + 1.5 * 1.5;
  CHECK(p.rho == doctest::Approx(0.5 / s).epsilon(1e-15));
  CHECK(p.eta == doctest::Approx(-1.5 / s).epsilon(1e-15));
}

TEST_CASE("moebius covariance of the basic solutions") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> rd(0.3, 2.0), ed(-1.5, 1.5);
  std::vector<MoebiusMap> maps{MoebiusMap::translation(0.8), MoebiusMap::dilation(1.7),
                               MoebiusMap::inversion(), MoebiusMap(2.0, 1.0, 1.0, 1.0)};
  for (const auto& map : maps) {
    for (int trial = 0; trial < 10; ++trial) {
      double rho = rd(rng), eta = ed(rng), y = ed(rng);
      if (std::abs(map.c * y + map.d) < 0.2) continue; // keep clear of the pole
      HalfPlanePoint image = moebius_apply(map, HalfPlanePoint(rho, eta));
      auto ty = moebius_apply(map, BoundarySupportPoint::finite(y));
      double lhs = basic_F_jet(image, ty.y).value() * ty.weight;
      double rhs = basic_F_jet({rho, eta}, BoundarySupportPoint::finite(y)).value();
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
    // infinity transforms consistently as well
    double rho = rd(rng), eta = ed(rng);
    HalfPlanePoint image = moebius_apply(map, HalfPlanePoint(rho, eta));
    auto tinf = moebius_apply(map, BoundarySupportPoint::infinity());
    double lhs = basic_F_jet(image, tinf.y).value() * tinf.weight;
    double rhs = basic_F_jet({rho, eta}, BoundarySupportPoint::infinity()).value();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("invert_point") {
  HalfPlanePoint fixed = invert_point({1.0, 0.0});
  CHECK(fixed.rho == doctest::Approx(1.0));
  CHECK(fixed.eta == doctest::Approx(0.0));
  HalfPlanePoint half = invert_point({2.0, 0.0});
  CHECK(half.rho == doctest::Approx(0.5));

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> rd(0.2, 3.0), ed(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    HalfPlanePoint p{rd(rng), ed(rng)};
    HalfPlanePoint q = invert_point(invert_point(p));
    CHECK(q.rho == doctest::Approx(p.rho).epsilon(1e-15));
    CHECK(q.eta == doctest::Approx(p.eta).epsilon(1e-15));
  }
}

TEST_CASE("rho floor is enforced") {
  CHECK_THROWS(HalfPlanePoint(1e-9, 0.0));
}
