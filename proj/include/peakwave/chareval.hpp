#pragma once

// Nonlinear perturbations of the peaked wave along characteristics.
//
// Labels s_k = k h, h = 2pi/M, k = 0..M. Labels 0 and M are the two sides of
// the crest characteristic X = 0 = 2pi; Z there equals the crest value Z0,
// while V keeps the one-sided slopes. Each characteristic also carries
// J = dX/ds so that x-integrals become label integrals of g J.

#include <optional>
#include <string>
#include <vector>

#include "peakwave/waveprofile.hpp"

namespace peakwave {

struct PerturbationState {
  double time = 0.0;
  std::vector<double> labels;
  std::vector<double> positions;  // X, with X_0 = 0 and X_M = 2pi
  std::vector<double> values;     // Z, with Z_0 = Z_M = peak_value
  std::vector<double> slopes;     // V, one-sided at both crest labels
  std::vector<double> stretch;    // J = dX/ds
  double peak_value = 0.0;        // Z0

  int intervals() const { return static_cast<int>(labels.size()) - 1; }
};

struct ConservedSet {
  double mass_zeta = 0.0;
  double blowup_invariant = 0.0;
  double full_mass = 0.0;
  double momentum = 0.0;
  double energy = 0.0;
};

/// Pi0 d^{-1} Pi0 u by trapezoid over the (nonuniform) positions.
/// Throws CrossingError when positions are not strictly increasing.
std::vector<double> nonlocal_antiderivative(const std::vector<double>& positions,
                                            const std::vector<double>& u);

/// Fourth-order integral over [0, 2pi] in label space of samples g (M+1 values).
double label_integral(const std::vector<double>& g, double h);

/// Initial state from zeta and its slope on the labels; slope(0) and
/// slope(2pi) must return the one-sided limits from inside (0, 2pi).
template <typename Zeta, typename Slope>
PerturbationState make_state(int intervals, Zeta&& zeta, Slope&& slope);

/// a x(2pi - x) + b with a = -delta/(2pi) and b fixing the nonlinear constraint.
PerturbationState default_initial_state(double delta, int intervals = 1024);

PerturbationState rhs(const PerturbationState& s);
ConservedSet conserved(const PerturbationState& s);
/// 1/2 of the integral of zeta + 2 zeta_x^2, plus pi Z0; zero on the constraint.
double constraint_residual(const PerturbationState& s);

struct StepRecord {
  double t = 0.0;
  double v0 = 0.0;
  double mass_zeta = 0.0;
  double blowup_invariant = 0.0;
  double max_abs_V = 0.0;
  double min_spacing = 0.0;
  double w1inf = 0.0;   // max(|Z|, |V|)
  double h1_norm = 0.0;
  ConservedSet full;
};

struct EvolveOptions {
  double slope_cap = 1e3;
  double spacing_floor = 1e-6;  // times the label step
  int keep_every = 0;           // store a state every k steps (0: first and last only)
};

struct EvolveResult {
  std::vector<StepRecord> records;
  std::vector<PerturbationState> states;
  bool broke = false;
  double breaking_time = 0.0;
  std::string breaking_reason;
};

EvolveResult evolve(const PerturbationState& initial, double t_end, double dt,
                    const EvolveOptions& opt = {});

struct InstabilityResult {
  std::vector<double> t, v0;
  std::vector<StepRecord> records;
  double fitted_rate = 0.0;
  double theory_rate = 0.0;
  double relative_error = 0.0;
  std::optional<double> blowup_time;  // W^{1,inf} norm reaches 1
  bool reached_ten_delta = false;
  bool broke = false;
  double breaking_time = 0.0;
  std::string breaking_reason;
};

InstabilityResult instability_experiment(double delta, double t_end, double dt, int intervals = 1024);

struct FullConserved {
  double mass = 0.0;
  double momentum = 0.0;
  double energy = 0.0;
};
/// Periodic trapezoid over j = -N..N-1 of a grid function and its slope.
FullConserved full_conserved(const std::vector<double>& eta, const std::vector<double>& slope);
/// Same, using the mean of the squared one-sided slopes at a peaked crest.
FullConserved full_conserved(const WaveProfile& profile);

/// Linear growth exponent pi/(4 c*).
double theory_rate();

// ------------------------------------------------------------------ inline

template <typename Zeta, typename Slope>
PerturbationState make_state(int intervals, Zeta&& zeta, Slope&& slope) {
  PerturbationState s;
  const int m = intervals;
  const double h = 2.0 * kPi / m;
  s.labels.resize(m + 1);
  s.values.resize(m + 1);
  s.slopes.resize(m + 1);
  s.stretch.assign(m + 1, 1.0);
  for (int k = 0; k <= m; ++k) {
    const double x = k == m ? 2.0 * kPi : k * h;
    s.labels[k] = x;
    s.values[k] = zeta(x);
    s.slopes[k] = slope(x);
  }
  s.positions = s.labels;
  s.peak_value = s.values[0];
  s.values[m] = s.peak_value;
  return s;
}

}  // namespace peakwave
