#include <cmath>

#include "squeezeamp/protocols.hpp"

namespace squeezeamp {

double bessel_i(int n, double x) {
  if (n < 0) throw Error("bessel_i: order must be >= 0");
  if (!std::isfinite(x)) throw Error("bessel_i: argument must be finite");
  const double half = 0.5 * x;
  // Leading term (x/2)^n / n!
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= half / k;
  double sum = term;
  const double q = half * half;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (n + k));
    sum += term;
    if (std::abs(term) <= 1e-16 * std::abs(sum)) break;
  }
  return sum;
}

double continuous_factor_bs(double k) {
  if (!(k >= 0.0)) throw Error("continuous_factor_bs: K must be >= 0");
  return bessel_i(0, k);
}

CrossKerrDriveFactors continuous_factor_ck(double k) {
  if (!(k >= 0.0)) throw Error("continuous_factor_ck: K must be >= 0");
  const double i0 = bessel_i(0, k);
  double series = 0.0;
  for (int n = 1; n < 64; ++n) {
    const double term = bessel_i(4 * n, k) * bessel_i(2 * n, k);
    if (std::abs(term) < 1e-14) break;
    series += (n % 2 == 0 ? 2.0 : -2.0) * term;
  }
  const double lambda2 = i0 * i0 + series;
  return {lambda2, lambda2 - i0};
}

ContinuousDriveSpec::ContinuousDriveSpec(double k_amplitude, double period_tc) : k(k_amplitude), period(period_tc) {
  if (!(k_amplitude >= 0.0) || !std::isfinite(k_amplitude)) throw Error("ContinuousDriveSpec: K must be >= 0");
  if (!(period_tc > 0.0) || !std::isfinite(period_tc)) throw Error("ContinuousDriveSpec: T_c must be > 0");
}

}  // namespace squeezeamp
