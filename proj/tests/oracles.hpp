#pragma once

// Reference computations for the tests. Nothing here calls into the library.

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) {
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        break;
      }
    }
  }
  return {x, w};
}

/// Composite Gauss-Legendre with `panels` equal panels of `order` points.
template <typename F>
double integrate(F&& f, double a, double b, int panels = 64, int order = 20) {
  static const auto rule = gauss_legendre(20);
  const auto& [x, w] = order == 20 ? rule : gauss_legendre(order);
  const double width = (b - a) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width, mid = lo + 0.5 * width;
    double part = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) part += w[i] * f(mid + 0.5 * width * x[i]);
    acc += 0.5 * width * part;
  }
  return acc;
}

/// E(kappa) from its defining integral.
inline double elliptic_E(double kappa) {
  return integrate([&](double t) { return std::sqrt(1.0 - kappa * kappa * std::sin(t) * std::sin(t)); }, 0.0,
                   pi / 2);
}

/// Period as 2 * int_0^pi sqrt(c^2 - 2 s cos theta) dtheta, s = sqrt(2E).
inline double period(double energy, double c) {
  const double s = std::sqrt(2.0 * energy);
  return 2.0 * integrate([&](double t) { return std::sqrt(c * c - 2.0 * s * std::cos(t)); }, 0.0, pi);
}

/// Inverse profile map in the angle form: int_0^{arccos(eta/s)} sqrt(c^2 - 2 s cos theta) dtheta.
inline double inverse_map(double eta, double energy, double c) {
  const double s = std::sqrt(2.0 * energy);
  const double top = std::acos(std::max(-1.0, std::min(1.0, eta / s)));
  if (top == 0.0) return 0.0;
  return integrate([&](double t) { return std::sqrt(c * c - 2.0 * s * std::cos(t)); }, 0.0, top);
}

/// Root of period(E, c) = 2 pi by a dense scan of E in (0, c^4/8) then bisection.
inline double energy_for_period(double c, int scan = 4000) {
  const double crit = c * c * c * c / 8.0;
  double lo = 0.0, hi = 0.0, prev = 0.0;
  for (int i = 1; i <= scan; ++i) {
    const double e = crit * i / scan;
    const double g = period(e, c) - 2.0 * pi;
    if (i > 1 && prev * g <= 0.0) {
      lo = crit * (i - 1) / scan;
      hi = e;
      break;
    }
    prev = g;
  }
  double glo = period(lo, c) - 2.0 * pi;
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g = period(mid, c) - 2.0 * pi;
    if ((g < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = g;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Peaked wave on [-pi, pi].
inline double peaked(double x) { return (pi * pi - 4.0 * pi * std::abs(x) + 2.0 * x * x) / 16.0; }

}  // namespace oracle
