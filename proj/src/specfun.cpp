#include "peakwave/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace peakwave {

double complete_elliptic_E(double kappa) {
  if (!std::isfinite(kappa) || kappa < 0.0 || kappa > 1.0)
    throw DomainError("complete_elliptic_E: kappa must lie in [0,1]");
  if (kappa == 1.0) return 1.0;

  // AGM: E = K (1 - sum 2^{n-1} c_n^2), K = pi / (2 a_inf), c_0 = kappa.
  double a = 1.0;
  double g = std::sqrt((1.0 - kappa) * (1.0 + kappa));
  double c = kappa;
  double sum = 0.5 * c * c;
  double pow2 = 0.5;
  for (int it = 0; it < 64; ++it) {
    if (std::abs(a - g) <= 4.0 * std::numeric_limits<double>::epsilon() * a) break;
    const double an = 0.5 * (a + g);
    c = 0.5 * (a - g);
    g = std::sqrt(a * g);
    a = an;
    pow2 *= 2.0;
    sum += pow2 * c * c;
  }
  return std::numbers::pi / (2.0 * a) * (1.0 - sum);
}

}  // namespace peakwave
