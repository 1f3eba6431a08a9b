#pragma once
#include <cmath>
#include <vector>

namespace hjsde {

// Least-squares exponent of defect ~ C rho^k on a ladder of samples.
// Samples below the floor are dropped; if everything is at rounding level the
// fit is flagged degenerate (the defect is exactly zero to machine precision).
struct PowerFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;
  bool degenerate = false;
  int used = 0;
};

inline PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y,
                              double floor = 1e-14) {
  PowerFit out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > floor)) continue;
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++n;
  }
  out.used = n;
  if (n < 2) {
    out.degenerate = true;
    return out;
  }
  double den = n * sxx - sx * sx;
  out.exponent = (n * sxy - sx * sy) / den;
  out.log_prefactor = (sy - out.exponent * sx) / n;
  return out;
}

} // namespace hjsde
