#pragma once

// Special functions and quadrature kernels shared by the profile solver and
// the peaked-wave operators.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

#include "peakwave/errors.hpp"

namespace peakwave {

template <typename T>
struct BasicQuadratureResult {
  T value{};
  double error_estimate = 0.0;  // absolute
  int evaluations = 0;
};

using QuadratureResult = BasicQuadratureResult<double>;
using ComplexQuadratureResult = BasicQuadratureResult<std::complex<double>>;

/// Abscissa handed to integrands that need the distances to both endpoints
/// without cancellation (e.g. 1/sqrt(1 - x) near x = 1).
struct QuadPoint {
  double x;
  double from_lower;  // x - a
  double to_upper;    // b - x
};

struct QuadOptions {
  /// Substitute x = a + (b - a) sin^2(theta); removes (x-a)^{-1/2} and
  /// (b-x)^{-1/2} endpoint singularities.
  bool sqrt_endpoint_substitution = true;
  int max_evaluations = 400000;
};

/// Complete elliptic integral of the second kind E(kappa), kappa the modulus.
double complete_elliptic_E(double kappa);

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
struct Panel {
  double lo, hi;
  T value;
  double error;
  double abs_value;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename T, typename G>
Panel<T> gauss_kronrod_15(const G& g, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const T fc = g(center);
  T kronrod = fc * kWgk[7];
  T gauss = fc * kWg[3];
  double resabs = std::abs(fc) * kWgk[7];
  std::array<T, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = g(center - dx);
    f2[j] = g(center + dx);
    kronrod += kWgk[j] * (f1[j] + f2[j]);
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1[j] + f2[j]);
  }
  const T mean = kronrod * 0.5;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  resasc *= std::abs(half);
  resabs *= std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  err = std::max(err, 50.0 * eps * resabs);
  return {lo, hi, kronrod * half, err, resabs};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod quadrature of f over [a, b] to absolute
/// tolerance tol. f may be called with a double or with a QuadPoint.
/// Throws ConvergenceError when the evaluation budget runs out first.
template <typename Fn>
auto adaptive_quad(const Fn& f, double a, double b, double tol, const QuadOptions& opt = {}) {
  using Value = std::conditional_t<std::is_invocable_v<const Fn&, QuadPoint>,
                                   std::invoke_result<const Fn&, QuadPoint>,
                                   std::invoke_result<const Fn&, double>>;
  using T = std::decay_t<typename Value::type>;
  if (!(a < b) || !(tol > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw DomainError("adaptive_quad: need finite a < b and tol > 0");

  const double width = b - a;
  auto call = [&](double x, double from_lower, double to_upper) -> T {
    if constexpr (std::is_invocable_v<const Fn&, QuadPoint>)
      return f(QuadPoint{x, from_lower, to_upper});
    else
      return f(x);
  };
  auto integrand = [&](double t) -> T {
    if (opt.sqrt_endpoint_substitution) {
      const double s = std::sin(t), c = std::cos(t);
      const double from_lower = width * s * s;
      const double to_upper = width * c * c;
      const double x = from_lower <= to_upper ? a + from_lower : b - to_upper;
      return call(x, from_lower, to_upper) * (width * 2.0 * s * c);
    }
    return call(t, t - a, b - t);
  };
  const double lo = opt.sqrt_endpoint_substitution ? 0.0 : a;
  const double hi = opt.sqrt_endpoint_substitution ? std::numbers::pi / 2 : b;

  std::priority_queue<detail::Panel<T>> panels;
  auto first = detail::gauss_kronrod_15<T>(integrand, lo, hi);
  T total = first.value;
  double total_err = first.error;
  int evaluations = 15;
  panels.push(first);

  constexpr double eps = std::numeric_limits<double>::epsilon();
  while (total_err > tol) {
    const auto worst = panels.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi) || (worst.hi - worst.lo) < 1e-14 * (hi - lo)) break;
    // Roundoff floor: the largest error is already its own 50*eps*|f| estimate,
    // so no split can lower it.
    if (worst.error <= 1.0001 * 50.0 * eps * worst.abs_value) break;
    if (evaluations + 30 > opt.max_evaluations)
      throw ConvergenceError("adaptive_quad: error estimate " + std::to_string(total_err) +
                             " above tol " + std::to_string(tol) + " after " +
                             std::to_string(evaluations) + " evaluations");
    panels.pop();
    auto left = detail::gauss_kronrod_15<T>(integrand, worst.lo, mid);
    auto right = detail::gauss_kronrod_15<T>(integrand, mid, worst.hi);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  // Re-sum to shed the accumulated update drift.
  T sum{};
  double err = 0.0;
  while (!panels.empty()) {
    sum += panels.top().value;
    err += panels.top().error;
    panels.pop();
  }
  return BasicQuadratureResult<T>{sum, err, evaluations};
}

}  // namespace peakwave
