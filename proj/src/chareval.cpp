#include "peakwave/chareval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "peakwave/errors.hpp"

namespace peakwave {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

double eta_star(double x) {
  const double d = std::min(x, kTwoPi - x);
  return (kPi * kPi - 4.0 * kPi * d + 2.0 * d * d) / 16.0;
}

// eta*' at the positions, one-sided at the crest labels.
std::vector<double> eta_star_slope(const std::vector<double>& x) {
  std::vector<double> ep(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) ep[k] = (x[k] - kPi) / 4.0;
  ep.front() = -kPi / 4.0;
  ep.back() = kPi / 4.0;
  return ep;
}

// Fourth-order integrals over each label interval (cubic through 4 samples).
std::vector<double> interval_integrals(const std::vector<double>& g, double h) {
  const std::size_t n = g.size() - 1;
  if (n < 3) throw DomainError("label quadrature: need at least 3 intervals");
  std::vector<double> out(n);
  const double c = h / 24.0;
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = c * (-g[i - 1] + 13.0 * g[i] + 13.0 * g[i + 1] - g[i + 2]);
  out[0] = c * (9.0 * g[0] + 19.0 * g[1] - 5.0 * g[2] + g[3]);
  out[n - 1] = c * (9.0 * g[n] + 19.0 * g[n - 1] - 5.0 * g[n - 2] + g[n - 3]);
  return out;
}

double label_step(const PerturbationState& s) { return kTwoPi / s.intervals(); }

std::vector<double> times(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
  return out;
}

// Pi0 d^{-1} Pi0 u in label space, x-integrals weighted by J.
std::vector<double> label_antiderivative(const std::vector<double>& u, const std::vector<double>& j, double h) {
  const double mean = label_integral(times(u, j), h) / kTwoPi;
  std::vector<double> v(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) v[k] = (u[k] - mean) * j[k];
  const auto parts = interval_integrals(v, h);
  std::vector<double> f(u.size(), 0.0);
  for (std::size_t k = 0; k < parts.size(); ++k) f[k + 1] = f[k] + parts[k];
  const double fbar = label_integral(times(f, j), h) / kTwoPi;
  for (auto& x : f) x -= fbar;
  return f;
}

void axpy(PerturbationState& out, const PerturbationState& base, const PerturbationState& d, double dt) {
  out = base;
  for (std::size_t k = 0; k < base.positions.size(); ++k) {
    out.positions[k] += dt * d.positions[k];
    out.values[k] += dt * d.values[k];
    out.slopes[k] += dt * d.slopes[k];
    out.stretch[k] += dt * d.stretch[k];
  }
  out.peak_value += dt * d.peak_value;
}

double min_spacing(const PerturbationState& s) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < s.positions.size(); ++k) m = std::min(m, s.positions[k + 1] - s.positions[k]);
  return m;
}

StepRecord record(const PerturbationState& s) {
  StepRecord r;
  r.t = s.time;
  r.v0 = s.slopes.front();
  const auto c = conserved(s);
  r.mass_zeta = c.mass_zeta;
  r.blowup_invariant = c.blowup_invariant;
  r.full = c;
  r.min_spacing = min_spacing(s);
  double zmax = 0.0;
  for (double v : s.slopes) r.max_abs_V = std::max(r.max_abs_V, std::abs(v));
  for (double z : s.values) zmax = std::max(zmax, std::abs(z));
  r.w1inf = std::max(zmax, r.max_abs_V);
  std::vector<double> q(s.values.size());
  for (std::size_t k = 0; k < q.size(); ++k)
    q[k] = (s.values[k] * s.values[k] + s.slopes[k] * s.slopes[k]) * s.stretch[k];
  r.h1_norm = std::sqrt(std::max(0.0, label_integral(q, label_step(s))));
  return r;
}

}  // namespace

double theory_rate() { return kPi / (4.0 * kCStar); }

double label_integral(const std::vector<double>& g, double h) {
  double acc = 0.0;
  for (double v : interval_integrals(g, h)) acc += v;
  return acc;
}

std::vector<double> nonlocal_antiderivative(const std::vector<double>& positions, const std::vector<double>& u) {
  const std::size_t n = positions.size();
  if (n < 2 || u.size() != n) throw DomainError("nonlocal_antiderivative: size mismatch");
  for (std::size_t k = 0; k + 1 < n; ++k)
    if (!(positions[k + 1] > positions[k])) {
      std::ostringstream msg;
      msg << "nonlocal_antiderivative: positions not increasing at index " << k;
      throw CrossingError(msg.str());
    }
  const double span = positions.back() - positions.front();
  auto trap = [&](const std::vector<double>& v) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) acc += 0.5 * (v[k] + v[k + 1]) * (positions[k + 1] - positions[k]);
    return acc;
  };
  const double mean = trap(u) / span;
  std::vector<double> f(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k)
    f[k + 1] = f[k] + 0.5 * ((u[k] - mean) + (u[k + 1] - mean)) * (positions[k + 1] - positions[k]);
  const double fbar = trap(f) / span;
  for (auto& x : f) x -= fbar;
  return f;
}

PerturbationState default_initial_state(double delta, int intervals) {
  if (!(delta > 0.0)) throw DomainError("default_initial_state: delta must be positive");
  if (intervals < 8) throw DomainError("default_initial_state: need at least 8 intervals");
  const double a = -delta / kTwoPi;
  // Chosen so that 1/2 int (zeta + 2 zeta_x^2) + pi zeta(0) = 0.
  const double b = -kPi * kPi * a / 3.0 - 4.0 * kPi * kPi * a * a / 3.0;
  return make_state(
      intervals, [&](double x) { return a * x * (kTwoPi - x) + b; },
      [&](double x) { return a * (kTwoPi - 2.0 * x); });
}

PerturbationState rhs(const PerturbationState& s) {
  const int m = s.intervals();
  const double h = label_step(s);
  const double cs = kCStar;
  const auto& x = s.positions;
  const auto& z = s.values;
  const auto& v = s.slopes;
  const auto& j = s.stretch;
  const double z0 = s.peak_value;
  const auto ep = eta_star_slope(x);

  std::vector<double> u(m + 1), ez(m + 1), ev2(m + 1);
  for (int k = 0; k <= m; ++k) {
    u[k] = z[k] + 2.0 * v[k] * v[k];
    ez[k] = ep[k] * z[k] * j[k];
    ev2[k] = ep[k] * v[k] * v[k] * j[k];
  }
  const auto nl = label_antiderivative(u, j, h);
  const double mean_term = label_integral(ez, h) / kPi;
  const double dz0 = (2.0 / kPi) * label_integral(ev2, h) / (2.0 * cs);

  PerturbationState d = s;
  for (int k = 0; k <= m; ++k) {
    const bool crest = k == 0 || k == m;
    d.positions[k] = crest ? 0.0 : (-(cs * cs - 2.0 * eta_star(x[k])) + 2.0 * (z[k] - z0)) / (2.0 * cs);
    d.values[k] = crest ? dz0 : (-mean_term + 0.5 * nl[k]) / (2.0 * cs);
    d.slopes[k] = (-2.0 * ep[k] * v[k] - v[k] * v[k] + 0.5 * (z[k] + z0)) / (2.0 * cs);
    d.stretch[k] = (ep[k] + v[k]) * j[k] / cs;
  }
  d.peak_value = dz0;
  return d;
}

ConservedSet conserved(const PerturbationState& s) {
  const int m = s.intervals();
  const double h = label_step(s);
  const auto ep = eta_star_slope(s.positions);
  std::vector<double> zj(m + 1), v2j(m + 1), ej(m + 1), qj(m + 1), hj(m + 1);
  for (int k = 0; k <= m; ++k) {
    const double jk = s.stretch[k];
    const double eta = eta_star(s.positions[k]) + s.values[k];
    const double deta = ep[k] + s.slopes[k];
    zj[k] = s.values[k] * jk;
    v2j[k] = s.slopes[k] * s.slopes[k] * jk;
    ej[k] = eta * jk;
    qj[k] = 0.5 * deta * deta * jk;
    hj[k] = 0.5 * (eta * eta + 2.0 * eta * deta * deta) * jk;
  }
  ConservedSet c;
  c.mass_zeta = label_integral(zj, h);
  c.blowup_invariant = s.peak_value + label_integral(v2j, h) / kPi;
  c.full_mass = label_integral(ej, h);
  c.momentum = label_integral(qj, h);
  c.energy = label_integral(hj, h);
  return c;
}

double constraint_residual(const PerturbationState& s) {
  std::vector<double> g(s.values.size());
  for (std::size_t k = 0; k < g.size(); ++k)
    g[k] = (s.values[k] + 2.0 * s.slopes[k] * s.slopes[k]) * s.stretch[k];
  return 0.5 * label_integral(g, label_step(s)) + kPi * s.peak_value;
}

EvolveResult evolve(const PerturbationState& initial, double t_end, double dt, const EvolveOptions& opt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("evolve: dt must be positive");
  if (!(t_end >= 0.0)) throw DomainError("evolve: t_end must be non-negative");
  const long steps = std::lround(t_end / dt);
  if (steps > 0 && dt < 1e-14 * t_end) throw ConvergenceError("evolve: step size underflow");
  const double h = label_step(initial);

  EvolveResult res;
  PerturbationState s = initial;
  res.records.push_back(record(s));
  res.states.push_back(s);
  PerturbationState tmp;
  for (long n = 1; n <= steps; ++n) {
    const auto k1 = rhs(s);
    axpy(tmp, s, k1, 0.5 * dt);
    const auto k2 = rhs(tmp);
    axpy(tmp, s, k2, 0.5 * dt);
    const auto k3 = rhs(tmp);
    axpy(tmp, s, k3, dt);
    const auto k4 = rhs(tmp);
    for (std::size_t k = 0; k < s.positions.size(); ++k) {
      s.positions[k] += dt / 6.0 * (k1.positions[k] + 2.0 * k2.positions[k] + 2.0 * k3.positions[k] + k4.positions[k]);
      s.values[k] += dt / 6.0 * (k1.values[k] + 2.0 * k2.values[k] + 2.0 * k3.values[k] + k4.values[k]);
      s.slopes[k] += dt / 6.0 * (k1.slopes[k] + 2.0 * k2.slopes[k] + 2.0 * k3.slopes[k] + k4.slopes[k]);
      s.stretch[k] += dt / 6.0 * (k1.stretch[k] + 2.0 * k2.stretch[k] + 2.0 * k3.stretch[k] + k4.stretch[k]);
    }
    s.peak_value += dt / 6.0 * (k1.peak_value + 2.0 * k2.peak_value + 2.0 * k3.peak_value + k4.peak_value);
    s.time = n * dt;

    const auto rec = record(s);
    res.records.push_back(rec);
    if (opt.keep_every > 0 && n % opt.keep_every == 0) res.states.push_back(s);

    std::string reason;
    if (!std::isfinite(rec.max_abs_V) || !std::isfinite(rec.min_spacing)) reason = "non-finite state";
    else if (rec.min_spacing < opt.spacing_floor * h) reason = "characteristics collapsing";
    else if (rec.max_abs_V > opt.slope_cap) reason = "slope above cap";
    if (!reason.empty()) {
      res.broke = true;
      res.breaking_time = s.time;
      res.breaking_reason = reason;
      break;
    }
  }
  if (res.states.back().time != s.time) res.states.push_back(s);
  return res;
}

InstabilityResult instability_experiment(double delta, double t_end, double dt, int intervals) {
  const auto run = evolve(default_initial_state(delta, intervals), t_end, dt);
  InstabilityResult out;
  out.theory_rate = theory_rate();
  out.broke = run.broke;
  out.breaking_time = run.breaking_time;
  out.breaking_reason = run.breaking_reason;
  out.records = run.records;
  const double v00 = std::abs(run.records.front().v0);
  // Least squares of log|V0| on the early window |V0| <= 10 |V0(0)|.
  double st = 0, sy = 0, stt = 0, sty = 0;
  int count = 0;
  bool in_window = true;
  for (const auto& r : run.records) {
    out.t.push_back(r.t);
    out.v0.push_back(r.v0);
    if (in_window && std::abs(r.v0) <= 10.0 * v00 && r.v0 != 0.0) {
      const double y = std::log(std::abs(r.v0));
      st += r.t, sy += y, stt += r.t * r.t, sty += r.t * y;
      ++count;
    } else {
      in_window = false;
    }
    if (!out.blowup_time && r.w1inf >= 1.0) out.blowup_time = r.t;
    if (r.w1inf >= 10.0 * delta) out.reached_ten_delta = true;
  }
  if (count >= 2) {
    const double den = count * stt - st * st;
    out.fitted_rate = den != 0.0 ? (count * sty - st * sy) / den : 0.0;
  }
  out.relative_error = std::abs(out.fitted_rate - out.theory_rate) / out.theory_rate;
  return out;
}

FullConserved full_conserved(const std::vector<double>& eta, const std::vector<double>& slope) {
  if (eta.size() != slope.size() || eta.size() < 3 || eta.size() % 2 == 0)
    throw DomainError("full_conserved: need 2N+1 matching samples");
  const int n = static_cast<int>(eta.size() - 1) / 2;
  const double h = kPi / n;
  FullConserved c;
  for (int k = 0; k < 2 * n; ++k) {
    const double e = eta[k], d = slope[k];
    c.mass += e;
    c.momentum += 0.5 * d * d;
    c.energy += 0.5 * (e * e + 2.0 * e * d * d);
  }
  c.mass *= h;
  c.momentum *= h;
  c.energy *= h;
  return c;
}

FullConserved full_conserved(const WaveProfile& profile) {
  auto c = full_conserved(profile.values, profile.slope);
  if (profile.kind == ProfileKind::peaked) {
    const int n = profile.grid.n_half;
    const double h = profile.grid.step();
    const double e = profile.values[n];
    const double d2 = 0.5 * (profile.crest_slope_left * profile.crest_slope_left +
                             profile.crest_slope_right * profile.crest_slope_right);
    c.momentum += h * 0.5 * d2;
    c.energy += h * e * d2;
  }
  return c;
}

}  // namespace peakwave
