#pragma once

// Adaptive Dormand-Prince 5(4) for complex state vectors.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "peakwave/errors.hpp"

namespace peakwave {

struct DopriOptions {
  double rtol = 1e-10;
  double atol = 1e-14;
  double initial_step = 1e-8;
  double min_step = 1e-15;  // relative to |x|
  long max_steps = 2000000;
};

struct DopriStats {
  long accepted = 0;
  long rejected = 0;
};

/// Integrates y' = rhs(x, y) from x0 through the increasing `stops`, calling
/// on_stop(index, x, y) as each stop is reached exactly.
template <typename Rhs, typename OnStop>
DopriStats dopri_integrate(Rhs&& rhs, double x0, Eigen::VectorXcd y, const std::vector<double>& stops,
                           OnStop&& on_stop, const DopriOptions& opt = {}) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  DopriStats stats;
  double x = x0;
  double h = opt.initial_step;
  Eigen::VectorXcd k1 = rhs(x, y);
  for (std::size_t s = 0; s < stops.size(); ++s) {
    const double target = stops[s];
    while (x < target) {
      if (stats.accepted + stats.rejected > opt.max_steps) {
        std::ostringstream msg;
        msg << "dopri_integrate: step budget exhausted at x = " << x;
        throw ConvergenceError(msg.str());
      }
      const bool last = x + h >= target;
      const double h_natural = h;
      if (last) h = target - x;
      const Eigen::VectorXcd k2 = rhs(x + c2 * h, y + h * (a21 * k1));
      const Eigen::VectorXcd k3 = rhs(x + c3 * h, y + h * (a31 * k1 + a32 * k2));
      const Eigen::VectorXcd k4 = rhs(x + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      const Eigen::VectorXcd k5 = rhs(x + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const Eigen::VectorXcd k6 =
          rhs(x + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const Eigen::VectorXcd y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const Eigen::VectorXcd k7 = rhs(x + h, y_new);
      const Eigen::VectorXcd err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double norm = 0.0;
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        norm += std::norm(err[i]) / (sc * sc);
      }
      norm = std::sqrt(norm / static_cast<double>(y.size()));
      if (!std::isfinite(norm)) norm = 1e10;

      if (norm <= 1.0) {
        x = last ? target : x + h;
        y = y_new;
        k1 = k7;
        ++stats.accepted;
      } else {
        ++stats.rejected;
      }
      const double fac = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
      const double h_next = h * (norm <= 1.0 ? fac : std::min(fac, 1.0));
      if (!last && h_next < opt.min_step * std::max(1.0, std::abs(x))) {
        std::ostringstream msg;
        msg << "dopri_integrate: step size underflow at x = " << x;
        throw ConvergenceError(msg.str());
      }
      // A truncated step that succeeded says nothing about the natural size.
      h = (last && norm <= 1.0) ? std::max(h_natural, h_next) : h_next;
    }
    on_stop(s, x, y);
  }
  return stats;
}

}  // namespace peakwave
