#include "peakwave/waveprofile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "peakwave/detail/parallel.hpp"
#include "peakwave/errors.hpp"
#include "peakwave/specfun.hpp"

namespace peakwave {

double ModelParams::amplitude() const { return std::sqrt(2.0 * energy); }

Grid::Grid(int n) : n_half(n) {
  if (n < 8) throw DomainError("Grid: N must be at least 8");
}

std::vector<double> Grid::nodes() const {
  std::vector<double> x(size());
  for (int j = -n_half; j <= n_half; ++j) x[j + n_half] = node(j);
  return x;
}

double period(double energy, double c) {
  if (!std::isfinite(energy) || !std::isfinite(c) || energy <= 0.0)
    throw DomainError("period: energy must be positive");
  const double crit = c * c * c * c / 8.0;
  if (energy > crit) throw DomainError("period: energy above c^4/8");
  const double s = std::sqrt(2.0 * energy);
  const double denom = c * c + 2.0 * s;
  const double kappa = std::min(1.0, std::sqrt(4.0 * s / denom));
  return 4.0 * complete_elliptic_E(kappa) * std::sqrt(denom);
}

double solve_energy_for_period(double c, double target_period) {
  if (!std::isfinite(c) || c <= 0.0 || !(target_period > 0.0))
    throw DomainError("solve_energy_for_period: need c > 0 and a positive period");
  const double crit = c * c * c * c / 8.0;
  auto g = [&](double e) { return period(e, c) - target_period; };

  // The critical level itself is the peaked orbit.
  const double g_crit = g(crit);
  if (std::abs(g_crit) <= 1e-13) return crit;

  // 64 logarithmic samples in (0, crit].
  constexpr int kScan = 64;
  double lo = 0.0, hi = 0.0, g_lo = 0.0, g_hi = 0.0;
  bool found = false;
  double prev_e = crit * 1e-40, prev_g = g(prev_e);
  const double first_g = prev_g;
  for (int k = 1; k < kScan; ++k) {
    const double e = (k == kScan - 1) ? crit : crit * std::pow(10.0, -40.0 * (1.0 - k / double(kScan - 1)));
    const double ge = (k == kScan - 1) ? g_crit : g(e);
    if (ge == 0.0) return e;
    if ((prev_g > 0.0) != (ge > 0.0)) {
      lo = prev_e, hi = e, g_lo = prev_g, g_hi = ge;
      found = true;
      break;
    }
    prev_e = e, prev_g = ge;
  }
  if (!found) {
    std::ostringstream msg;
    msg << "solve_energy_for_period: T - target has no sign change on (0, c^4/8] for c = " << c
        << " (T - target = " << first_g << " at the low end, " << g_crit << " at c^4/8)";
    throw NoRootError(msg.str(), crit * 1e-40, crit, first_g, g_crit);
  }

  // Bisection to a coarse bracket.
  while (hi - lo > 1e-3 * hi) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (g_lo > 0.0)) lo = mid, g_lo = gm;
    else hi = mid, g_hi = gm;
  }
  // Secant refinement kept inside the bracket (Illinois weighting).
  int side = 0;
  double best = std::abs(g_lo) < std::abs(g_hi) ? lo : hi;
  double best_g = std::min(std::abs(g_lo), std::abs(g_hi));
  for (int it = 0; it < 200 && best_g > 1e-15; ++it) {
    double e = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
    if (!(e > lo && e < hi)) e = 0.5 * (lo + hi);
    if (e <= lo || e >= hi) break;
    const double ge = g(e);
    if (std::abs(ge) < best_g) best = e, best_g = std::abs(ge);
    if (ge == 0.0) break;
    if ((ge > 0.0) == (g_lo > 0.0)) {
      lo = e, g_lo = ge;
      if (side == -1) g_hi *= 0.5;
      side = -1;
    } else {
      hi = e, g_hi = ge;
      if (side == 1) g_lo *= 0.5;
      side = 1;
    }
  }
  return best;
}

namespace {

void check_profile_params(const ModelParams& p) {
  if (!(p.c > 0.0) || !(p.energy > 0.0) || p.energy > p.energy_crit())
    throw DomainError("profile: need c > 0 and 0 < E <= c^4/8");
}

}  // namespace

double profile_inverse_map(double eta, const ModelParams& params) {
  check_profile_params(params);
  const double s = params.amplitude();
  if (!std::isfinite(eta) || std::abs(eta) > s)
    throw DomainError("profile_inverse_map: |eta| exceeds sqrt(2E)");
  if (eta == s) return 0.0;
  const double lower = eta / s;
  const double c2 = params.c * params.c;
  // 1 - x^2 = (1 - x)(1 + x), both factors taken from the endpoint distances.
  auto integrand = [&](const QuadPoint& q) {
    const double one_minus = q.to_upper;
    const double one_plus = (1.0 + lower) + q.from_lower;
    return std::sqrt(c2 - 2.0 * s * q.x) / std::sqrt(one_minus * one_plus);
  };
  return adaptive_quad(integrand, lower, 1.0, 1e-15).value;
}

double profile_inverse_map_derivative(double eta, const ModelParams& params) {
  const double s = params.amplitude();
  const double c2 = params.c * params.c;
  return -std::sqrt(c2 - 2.0 * eta) / std::sqrt((s - eta) * (s + eta));
}

WaveProfile newton_profile(const ModelParams& params, const Grid& grid, double tol,
                           int max_iterations) {
  check_profile_params(params);
  if (!(tol > 0.0)) throw DomainError("newton_profile: tol must be positive");
  const int n = grid.n_half;
  const double s = params.amplitude();
  const double c2 = params.c * params.c;

  std::vector<double> half(n + 1);
  half[0] = s;
  half[n] = -s;
  double worst = 0.0;
  for (int j = 1; j < n; ++j) {
    const double target = grid.node(j);
    double lo = -s, hi = half[j - 1];
    double eta = half[j - 1];
    bool done = false;
    for (int it = 0; it < max_iterations; ++it) {
      const double r = profile_inverse_map(eta, params) - target;
      if (std::abs(r) < tol) {
        worst = std::max(worst, std::abs(r));
        done = true;
        break;
      }
      // f decreases in eta.
      if (r < 0.0) hi = eta;
      else lo = eta;
      const double d = profile_inverse_map_derivative(eta, params);
      if (std::isfinite(d) && std::abs(d) < 1e-300) {
        std::ostringstream msg;
        msg << "newton_profile: derivative underflow at node " << j << " (eta = " << eta << ")";
        throw ConvergenceError(msg.str());
      }
      double next = std::isfinite(d) ? eta - r / d : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      // Stagnation at the resolution of double precision.
      const double ulp = std::numeric_limits<double>::epsilon() * std::max(std::abs(eta), s);
      if (std::abs(next - eta) <= 2.0 * ulp || hi - lo <= 4.0 * ulp) {
        worst = std::max(worst, std::abs(r));
        done = true;
        break;
      }
      eta = next;
    }
    if (!done) {
      std::ostringstream msg;
      msg << "newton_profile: no convergence at node " << j << " (x = " << target << ") after "
          << max_iterations << " iterations";
      throw ConvergenceError(msg.str());
    }
    half[j] = eta;
  }

  WaveProfile out{params, grid, {}, {}, 0.0, 0.0, ProfileKind::smooth, worst};
  out.values.resize(grid.size());
  out.slope.resize(grid.size());
  for (int j = 0; j <= n; ++j) {
    const double eta = half[j];
    const double mag = (j == 0 || j == n)
                           ? 0.0
                           : std::sqrt(std::max(0.0, (s - eta) * (s + eta)) / (c2 - 2.0 * eta));
    out.values[n + j] = out.values[n - j] = eta;
    out.slope[n + j] = -mag;
    out.slope[n - j] = mag;
  }
  return out;
}

WaveProfile smooth_profile(double c, const Grid& grid, double tol) {
  ModelParams p;
  p.c = c;
  p.energy = solve_energy_for_period(c);
  return newton_profile(p, grid, tol);
}

WaveProfile peaked_profile(const Grid& grid) {
  WaveProfile out{ModelParams{kCStar, kPeakedEnergy}, grid, {}, {}, 0.0, 0.0, ProfileKind::peaked, 0.0};
  out.kind = ProfileKind::peaked;
  const int n = grid.n_half;
  out.values.resize(grid.size());
  out.slope.resize(grid.size());
  for (int j = -n; j <= n; ++j) {
    const double x = grid.node(j);
    const double ax = std::abs(x);
    out.values[j + n] = (kPi * kPi - 4.0 * kPi * ax + 2.0 * x * x) / 16.0;
    out.slope[j + n] = j == 0 ? 0.0 : -(kPi - ax) * (j > 0 ? 1.0 : -1.0) / 4.0;
  }
  out.crest_slope_left = kPi / 4.0;
  out.crest_slope_right = -kPi / 4.0;
  return out;
}

namespace {

// e^{-i pi k / N} for k = 0..2N-1.
std::vector<std::complex<double>> twiddles(int n) {
  std::vector<std::complex<double>> t(2 * n);
  for (int k = 0; k < 2 * n; ++k) t[k] = std::polar(1.0, -kPi * k / n);
  return t;
}

int wrap(long long k, int m) {
  const long long r = k % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

}  // namespace

FourierCoeffs dft(const std::vector<double>& values) {
  const int samples = static_cast<int>(values.size());
  const int m = samples % 2 == 0 ? samples : samples - 1;
  if (m < 2) throw DomainError("dft: need at least two samples");
  const int n = m / 2;
  const auto tw = twiddles(n);
  FourierCoeffs out{n, std::vector<std::complex<double>>(2 * n + 1)};
  for (int k = -n; k <= n; ++k) {
    std::complex<double> acc = 0.0;
    for (int j = -n; j < n; ++j) acc += values[j + n] * tw[wrap(static_cast<long long>(k) * j, m)];
    out.coeffs[k + n] = acc / static_cast<double>(m);
  }
  return out;
}

std::vector<std::complex<double>> inverse_dft(const FourierCoeffs& coeffs) {
  const int n = coeffs.n_half;
  const int m = 2 * n;
  const auto tw = twiddles(n);
  std::vector<std::complex<double>> out(m);
  for (int j = -n; j < n; ++j) {
    std::complex<double> acc = 0.0;
    for (int k = -n; k <= n; ++k) {
      const double weight = (k == -n || k == n) ? 0.5 : 1.0;
      acc += weight * coeffs.at(k) * std::conj(tw[wrap(static_cast<long long>(k) * j, m)]);
    }
    out[j + n] = acc;
  }
  return out;
}

ProfileResiduals check_residuals(const WaveProfile& profile) {
  const int n = profile.grid.n_half;
  const double c2 = profile.params.c * profile.params.c;
  const double e = profile.params.energy;
  const bool peaked = profile.kind == ProfileKind::peaked;
  ProfileResiduals r;
  for (int j = -n; j <= n; ++j) {
    if (peaked && j == 0) continue;
    const double eta = profile.values[j + n];
    const double d = profile.slope[j + n];
    r.first_integral = std::max(r.first_integral, std::abs(0.5 * (c2 - 2.0 * eta) * d * d + 0.5 * eta * eta - e));
  }
  double sum = 0.0;
  for (int j = -n; j < n; ++j) {
    double d2 = profile.slope[j + n] * profile.slope[j + n];
    if (peaked && j == 0)
      d2 = 0.5 * (profile.crest_slope_left * profile.crest_slope_left +
                  profile.crest_slope_right * profile.crest_slope_right);
    sum += profile.values[j + n] + d2;
  }
  r.zero_mean = std::abs(sum * profile.grid.step());
  return r;
}

std::vector<AmplitudeRow> amplitude_sweep(const std::vector<double>& c_values, const Grid& grid,
                                          int jobs) {
  std::vector<AmplitudeRow> rows(c_values.size());
  detail::parallel_for(c_values.size(), jobs, [&](std::size_t i) {
    AmplitudeRow& row = rows[i];
    row.c = c_values[i];
    try {
      const auto prof = smooth_profile(row.c, grid);
      row.energy = prof.params.energy;
      row.amplitude = *std::max_element(prof.values.begin(), prof.values.end());
    } catch (const std::exception& ex) {
      row.ok = false;
      row.error = ex.what();
    }
  });
  rows.push_back({kCStar, kPeakedEnergy, kPi * kPi / 16.0, true, {}});
  return rows;
}

}  // namespace peakwave
