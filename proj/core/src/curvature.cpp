#include "hjsde/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "hjsde/errors.hpp"
#include "hjsde/parallel.hpp"

namespace hjsde {

namespace {

// 4x4 inverse by Gauss-Jordan with partial pivoting
void invert4(const double a_in[4][4], double inv[4][4]) {
  double a[4][8];
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      a[i][j] = a_in[i][j];
      a[i][j + 4] = i == j ? 1.0 : 0.0;
    }
  }
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-300) throw SingularMetric("metric not invertible");
    if (piv != c)
      for (int j = 0; j < 8; ++j) std::swap(a[piv][j], a[c][j]);
    double d = a[c][c];
    for (int j = 0; j < 8; ++j) a[c][j] /= d;
    for (int r = 0; r < 4; ++r) {
      if (r == c) continue;
      double f = a[r][c];
      if (f == 0.0) continue;
      for (int j = 0; j < 8; ++j) a[r][j] -= f * a[c][j];
    }
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) inv[i][j] = a[i][j + 4];
}

double det4(const double g[4][4]) {
  double a[4][4];
  std::memcpy(a, g, sizeof(a));
  double det = 1.0;
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < 4; ++j) std::swap(a[piv][j], a[c][j]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < 4; ++r) {
      double f = a[r][c] / a[c][c];
      for (int j = c; j < 4; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return det;
}

} // namespace

CurvatureTensors curvature_tensors(const MetricSample& s) {
  double g[4][4], ginv[4][4];
  double dg[4][4][4];     // dg[k][i][j]
  double ddg[4][4][4][4]; // ddg[k][l][i][j]
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      g[i][j] = s.g(i, j);
      for (int k = 0; k < 4; ++k) {
        dg[k][i][j] = s.dg(k, i, j);
        for (int l = 0; l < 4; ++l) ddg[k][l][i][j] = s.ddg(k, l, i, j);
      }
    }
  invert4(g, ginv);

  // Gamma^i_{jk} and their coordinate derivatives
  double gamma[4][4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double sum = 0;
        for (int l = 0; l < 4; ++l)
          sum += ginv[i][l] * (dg[j][l][k] + dg[k][j][l] - dg[l][j][k]);
        gamma[i][j][k] = 0.5 * sum;
      }

  double dginv[4][4][4]; // d_m g^{il} = -g^{ia} dg[m][a][b] g^{bl}
  for (int m = 0; m < 4; ++m)
    for (int i = 0; i < 4; ++i)
      for (int l = 0; l < 4; ++l) {
        double sum = 0;
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) sum += ginv[i][a] * dg[m][a][b] * ginv[b][l];
        dginv[m][i][l] = -sum;
      }

  double dgamma[4][4][4][4]; // d_m Gamma^i_{jk}
  for (int m = 0; m < 4; ++m)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
          double sum = 0;
          for (int l = 0; l < 4; ++l) {
            sum += dginv[m][i][l] * (dg[j][l][k] + dg[k][j][l] - dg[l][j][k]);
            sum += ginv[i][l] * (ddg[m][j][l][k] + ddg[m][k][j][l] - ddg[m][l][j][k]);
          }
          dgamma[m][i][j][k] = 0.5 * sum;
        }

  // R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj} + Gamma^i_{km} Gamma^m_{lj}
  //             - Gamma^i_{lm} Gamma^m_{kj}
  CurvatureTensors out{};
  double rup[4][4][4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double sum = dgamma[k][i][l][j] - dgamma[l][i][k][j];
          for (int m = 0; m < 4; ++m)
            sum += gamma[i][k][m] * gamma[m][l][j] - gamma[i][l][m] * gamma[m][k][j];
          rup[i][j][k][l] = sum;
        }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double sum = 0;
          for (int a = 0; a < 4; ++a) sum += g[i][a] * rup[a][j][k][l];
          out.riemann[i][j][k][l] = sum;
        }

  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l) {
      double sum = 0;
      for (int i = 0; i < 4; ++i) sum += rup[i][j][i][l];
      out.ricci[j][l] = sum;
    }
  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l) out.scalar += ginv[j][l] * out.ricci[j][l];

  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      out.ricci_asymmetry =
          std::max(out.ricci_asymmetry, std::abs(out.ricci[i][j] - out.ricci[j][i]));
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double b = out.riemann[i][j][k][l] + out.riemann[i][k][l][j] + out.riemann[i][l][j][k];
          out.bianchi_residual = std::max(out.bianchi_residual, std::abs(b));
        }
    }
  return out;
}

WeylSplit weyl_split(const MetricSample& s, const CurvatureTensors& curv) {
  double g[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g[i][j] = s.g(i, j);

  // Weyl = Riem - 1/2 (E @ g) - s/24 (g @ g), E = Ric - (s/4) g,
  // (h @ k)_{ijkl} = h_{ik} k_{jl} - h_{il} k_{jk} + k_{ik} h_{jl} - k_{jk} h_{il}
  double E[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) E[i][j] = curv.ricci[i][j] - 0.25 * curv.scalar * g[i][j];
  double W[4][4][4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double eg = E[i][k] * g[j][l] - E[i][l] * g[j][k] + g[i][k] * E[j][l] -
                      g[i][l] * E[j][k];
          double gg = g[i][k] * g[j][l] - g[i][l] * g[j][k];
          // s/24 (g @ g) with (g @ g) = 2 gg
          W[i][j][k][l] = curv.riemann[i][j][k][l] - 0.5 * eg - curv.scalar / 12.0 * gg;
        }

  // orthonormal, orientation-compatible frame from the Cholesky factor
  double L[4][4] = {};
  {
    double a[4][4];
    std::memcpy(a, g, sizeof(a));
    for (int c = 0; c < 4; ++c) {
      double d = a[c][c];
      for (int k2 = 0; k2 < c; ++k2) d -= L[c][k2] * L[c][k2];
      if (!(d > 0)) throw SingularMetric("metric is not positive definite");
      L[c][c] = std::sqrt(d);
      for (int r = c + 1; r < 4; ++r) {
        double v = a[r][c];
        for (int k2 = 0; k2 < c; ++k2) v -= L[r][k2] * L[c][k2];
        L[r][c] = v / L[c][c];
      }
    }
  }
  // columns of B = L^{-T} are the frame vectors; det B = det(g)^{-1/2} > 0
  double B[4][4] = {};
  for (int c = 3; c >= 0; --c) {
    for (int r = 0; r < 4; ++r) {
      double v = (r == c) ? 1.0 : 0.0;
      for (int k2 = c + 1; k2 < 4; ++k2) v -= L[k2][c] * B[r][k2];
      B[r][c] = v / L[c][c];
    }
  }
  if (s.orientation < 0)
    for (int r = 0; r < 4; ++r) std::swap(B[r][2], B[r][3]);

  // transform to the frame
  double t1[4][4][4][4], t2[4][4][4][4];
  for (int p = 0; p < 4; ++p)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double sum = 0;
          for (int i = 0; i < 4; ++i) sum += B[i][p] * W[i][j][k][l];
          t1[p][j][k][l] = sum;
        }
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double sum = 0;
          for (int j = 0; j < 4; ++j) sum += B[j][q] * t1[p][j][k][l];
          t2[p][q][k][l] = sum;
        }
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      for (int r = 0; r < 4; ++r)
        for (int l = 0; l < 4; ++l) {
          double sum = 0;
          for (int k = 0; k < 4; ++k) sum += B[k][r] * t2[p][q][k][l];
          t1[p][q][r][l] = sum;
        }
  double C[4][4][4][4];
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      for (int r = 0; r < 4; ++r)
        for (int w = 0; w < 4; ++w) {
          double sum = 0;
          for (int l = 0; l < 4; ++l) sum += B[l][w] * t1[p][q][r][l];
          C[p][q][r][w] = sum;
        }

  // bivector pairs: P_a and their duals, orientation e0123
  static constexpr int P[6][2] = {{0, 1}, {0, 2}, {0, 3}, {2, 3}, {3, 1}, {1, 2}};
  double M[6][6];
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) M[a][b] = C[P[a][0]][P[a][1]][P[b][0]][P[b][1]];

  double wp = 0, wm = 0, wt = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double plus = 0.5 * (M[a][b] + M[a][b + 3] + M[a + 3][b] + M[a + 3][b + 3]);
      double minus = 0.5 * (M[a][b] - M[a][b + 3] - M[a + 3][b] + M[a + 3][b + 3]);
      wp += plus * plus;
      wm += minus * minus;
    }
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) wt += M[a][b] * M[a][b];

  WeylSplit out;
  out.plus_norm = std::sqrt(4.0 * wp);
  out.minus_norm = std::sqrt(4.0 * wm);
  out.total_norm = std::sqrt(4.0 * wt);
  return out;
}

CurvatureReport curvature_report(const MetricSample& s) {
  CurvatureTensors curv = curvature_tensors(s);
  WeylSplit w = weyl_split(s, curv);
  CurvatureReport rep;
  rep.scalar = curv.scalar;
  double gmax = s.max_abs_g(), emax = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      emax = std::max(emax, std::abs(curv.ricci[i][j] - 0.25 * curv.scalar * s.g(i, j)));
  rep.einstein_residual = emax / gmax;
  rep.weyl_plus_norm = w.plus_norm;
  rep.weyl_minus_norm = w.minus_norm;
  rep.orientation = s.orientation;
  return rep;
}

bool sde_guard_ok(const BoundaryProfile& profile, const HalfPlanePoint& pt) {
  if (pt.rho < 1e-2) return false;
  FJet fj = eval_F_jet(profile, pt);
  double grad = pt.rho * std::hypot(fj.F.d_rho(), fj.F.d_eta());
  return std::abs(fj.F.value()) / std::max(grad, 1e-300) > 1e-3;
}

VerifyOutcome verify_sde(const BoundaryProfile& profile, const std::vector<HalfPlanePoint>& pts,
                         double tol) {
  if (pts.empty()) throw BadInput("no sample points");
  int side = 0;
  for (const auto& pt : pts) {
    if (!sde_guard_ok(profile, pt))
      throw BadInput("sample point violates the curvature guard band");
    double F = eval_F_jet(profile, pt, 0).F.value();
    int s = F > 0 ? 1 : -1;
    if (side == 0) side = s;
    if (s != side) throw BadInput("sample points straddle the zero set");
  }
  VerifyOutcome out;
  out.reports.resize(pts.size());
  std::vector<int> signs(pts.size());
  parallel_for(static_cast<int>(pts.size()), [&](int i) {
    SdeSample sde = metric_sde(profile, pts[i]);
    out.reports[i] = curvature_report(sde.sample);
    signs[i] = sde.scalar_sign;
  });
  out.pass = true;
  for (size_t i = 0; i < pts.size(); ++i) {
    const auto& r = out.reports[i];
    bool one_half = (r.weyl_plus_norm <= tol) != (r.weyl_minus_norm <= tol);
    bool sign_ok = (signs[i] > 0) == (r.scalar > 0) && r.scalar != 0;
    if (r.einstein_residual > tol || !one_half || !sign_ok) {
      out.pass = false;
      out.detail = "failure at point " + std::to_string(i);
    }
  }
  return out;
}

VerifyOutcome verify_sfk(const AdmissibleSequence& seq, const std::vector<double>& ys,
                         const std::vector<HalfPlanePoint>& pts, double tol) {
  if (pts.empty()) throw BadInput("no sample points");
  VerifyOutcome out;
  out.reports.resize(pts.size());
  parallel_for(static_cast<int>(pts.size()), [&](int i) {
    out.reports[i] = curvature_report(metric_sfk(seq, ys, pts[i]));
  });
  out.pass = true;
  for (size_t i = 0; i < pts.size(); ++i) {
    const auto& r = out.reports[i];
    bool one_half = (r.weyl_plus_norm <= tol) || (r.weyl_minus_norm <= tol);
    if (std::abs(r.scalar) > tol || !one_half) {
      out.pass = false;
      out.detail = "failure at point " + std::to_string(i);
    }
  }
  return out;
}

} // namespace hjsde
