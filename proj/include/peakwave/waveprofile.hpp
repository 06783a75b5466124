#pragma once

// Smooth 2pi-periodic traveling waves for 1 < c < c* and the peaked wave at c*.

#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace peakwave {

inline constexpr double kPi = std::numbers::pi;
inline const double kCStar = kPi / (2.0 * std::numbers::sqrt2);
inline constexpr double kPeakedEnergy = kPi * kPi * kPi * kPi / 512.0;

struct ModelParams {
  double c = 0.0;
  double energy = 0.0;
  double c_star = kCStar;

  double energy_crit() const { return c * c * c * c / 8.0; }
  double amplitude() const;  // sqrt(2E), the crest height of the profile
};

/// Uniform periodic grid x_j = j*pi/N, j = -N..N. Vectors over the grid are
/// stored with index j + N.
struct Grid {
  int n_half = 0;

  explicit Grid(int n);
  double step() const { return kPi / n_half; }
  double node(int j) const { return j * step(); }
  int size() const { return 2 * n_half + 1; }
  std::vector<double> nodes() const;
};

enum class ProfileKind { smooth, peaked };

struct WaveProfile {
  ModelParams params;
  Grid grid;
  std::vector<double> values;  // eta_j, j = -N..N
  // Slope per node. At the crest of the peaked wave this holds the mean of
  // the one-sided limits (zero); the limits themselves are kept below.
  std::vector<double> slope;
  double crest_slope_left = 0.0;   // eta'(0-)
  double crest_slope_right = 0.0;  // eta'(0+)
  ProfileKind kind = ProfileKind::smooth;
  double max_inverse_map_residual = 0.0;  // max |f(eta_j) - x_j|, smooth only
};

/// Exponential coefficients for n = -N..N, stored with index n + N.
struct FourierCoeffs {
  int n_half = 0;
  std::vector<std::complex<double>> coeffs;

  std::complex<double> at(int n) const { return coeffs[n + n_half]; }
};

double period(double energy, double c);

/// Energy level whose orbit has the requested period (2pi by default).
double solve_energy_for_period(double c, double target_period = 2.0 * kPi);

double profile_inverse_map(double eta, const ModelParams& params);
/// d f / d eta = -sqrt(c^2 - 2 eta) / sqrt(2E - eta^2).
double profile_inverse_map_derivative(double eta, const ModelParams& params);

WaveProfile newton_profile(const ModelParams& params, const Grid& grid, double tol = 1e-14,
                           int max_iterations = 100);

/// Convenience: energy solve followed by newton_profile.
WaveProfile smooth_profile(double c, const Grid& grid, double tol = 1e-14);

WaveProfile peaked_profile(const Grid& grid);

/// Accepts 2N samples (j = -N..N-1) or 2N+1 samples (the last is dropped).
FourierCoeffs dft(const std::vector<double>& values);
/// Returns the 2N samples j = -N..N-1; the +-N modes get half weight each.
std::vector<std::complex<double>> inverse_dft(const FourierCoeffs& coeffs);

struct ProfileResiduals {
  double first_integral = 0.0;
  double zero_mean = 0.0;
};
ProfileResiduals check_residuals(const WaveProfile& profile);

struct AmplitudeRow {
  double c = 0.0;
  double energy = 0.0;
  double amplitude = 0.0;
  bool ok = true;
  std::string error;
};

/// One row per c (failures recorded per row) plus the peaked endpoint.
std::vector<AmplitudeRow> amplitude_sweep(const std::vector<double>& c_values, const Grid& grid,
                                          int jobs = 1);

}  // namespace peakwave
