#include "peakwave/peakedops.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "peakwave/detail/parallel.hpp"
#include "peakwave/errors.hpp"
#include "peakwave/ode.hpp"
#include "peakwave/specfun.hpp"

namespace peakwave {

namespace {
constexpr double kQuarterPi = kPi / 4.0;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

const char* to_string(StripClass c) {
  switch (c) {
    case StripClass::interior: return "interior";
    case StripClass::boundary: return "boundary";
    default: return "resolvent";
  }
}

StripClass classify_strip(cplx lambda) {
  const double gap = std::abs(lambda.real()) - kQuarterPi;
  if (std::abs(gap) <= 1e-12) return StripClass::boundary;
  return gap < 0.0 ? StripClass::interior : StripClass::resolvent;
}

double resolvent_constant() { return 1.0 + 2.0 / std::sqrt(3.0); }

// ---------------------------------------------------------------- crest grid

CrestGrid::CrestGrid(const Grid& grid) : n_(grid.n_half), h_(grid.step()) {
  const int m = 2 * n_;
  y_.resize(m + 1);
  a_.resize(m + 1);
  slope_.resize(m + 1);
  sigma_.resize(m + 1);
  primitive_.resize(m + 1);
  for (int k = 0; k <= m; ++k) {
    const double y = k == m ? kTwoPi : k * h_;
    y_[k] = y;
    a_[k] = 0.25 * y * (kTwoPi - y);
    slope_[k] = (y - kPi) / 4.0;
    sigma_[k] = (y - kPi) / kTwoPi;
    primitive_[k] = (y - kPi) * (y - kPi) / (4.0 * kPi) - kPi / 12.0;
  }
  diff_.assign(m, 0.0);
  inv_.assign(m, 0.0);
  for (int q = 1; q < m; ++q) {
    diff_[q] = 0.5 * (q % 2 ? -1.0 : 1.0) / std::tan(0.5 * q * h_);
    double acc = 0.0;
    for (int k = n_ - 1; k >= 1; --k) acc += std::sin(k * q * h_) / k;
    inv_[q] = 2.0 * acc / m;
  }
}

Eigen::VectorXcd CrestGrid::sample(const std::vector<double>& values) const {
  if (static_cast<int>(values.size()) != samples()) throw DomainError("CrestGrid: sample count mismatch");
  Eigen::VectorXcd out(samples());
  for (int k = 0; k < samples(); ++k) out[k] = values[k];
  return out;
}

Eigen::VectorXcd CrestGrid::from_grid(const std::vector<double>& grid_values) const {
  if (static_cast<int>(grid_values.size()) != samples()) throw DomainError("CrestGrid: grid size mismatch");
  const int m = 2 * n_;
  Eigen::VectorXcd out(samples());
  for (int j = -n_; j <= n_; ++j) out[j >= 0 ? j : j + m] = grid_values[j + n_];
  out[m] = grid_values[n_];
  return out;
}

cplx CrestGrid::integrate(const Eigen::VectorXcd& f) const {
  const int m = 2 * n_;
  cplx acc = 0.5 * (f[0] + f[m]);
  for (int k = 1; k < m; ++k) acc += f[k];
  return acc * h_;
}

double CrestGrid::norm(const Eigen::VectorXcd& f) const {
  return std::sqrt(integrate(f.cwiseAbs2().cast<cplx>()).real());
}

Eigen::VectorXcd CrestGrid::periodic_part(const Eigen::VectorXcd& f, cplx& jump) const {
  const int m = 2 * n_;
  if (f.size() != samples()) throw DomainError("CrestGrid: vector size mismatch");
  jump = f[m] - f[0];
  Eigen::VectorXcd g(m);
  for (int k = 0; k < m; ++k) g[k] = f[k] - sigma_[k] * jump;
  return g;
}

Eigen::VectorXcd CrestGrid::circulant(const std::vector<double>& row, const Eigen::VectorXcd& g) const {
  const int m = 2 * n_;
  Eigen::VectorXcd out(m);
  for (int j = 0; j < m; ++j) {
    cplx acc = 0.0;
    for (int k = 0; k < m; ++k) {
      const int q = j - k;
      acc += row[q < 0 ? q + m : q] * g[k];
    }
    out[j] = acc;
  }
  return out;
}

Eigen::VectorXcd CrestGrid::derivative(const Eigen::VectorXcd& f) const {
  const int m = 2 * n_;
  cplx jump;
  const auto g = periodic_part(f, jump);
  const auto dg = circulant(diff_, g);
  Eigen::VectorXcd out(samples());
  for (int k = 0; k < m; ++k) out[k] = dg[k] + jump / kTwoPi;
  out[m] = out[0];
  return out;
}

Eigen::VectorXcd CrestGrid::apply_K(const Eigen::VectorXcd& f) const {
  const int m = 2 * n_;
  cplx jump;
  const auto g = periodic_part(f, jump);
  const auto sg = circulant(inv_, g);
  Eigen::VectorXcd out(samples());
  for (int k = 0; k <= m; ++k) out[k] = 0.5 * (sg[k % m] + jump * primitive_[k]);
  return out;
}

namespace {

// Dense form of f -> circ(row) (f - sigma J) + J * tail, J = f_M - f_0.
Eigen::MatrixXd jump_corrected(const std::vector<double>& row, const std::vector<double>& sigma,
                               const std::vector<double>& tail, int m) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m + 1, m + 1);
  for (int j = 0; j <= m; ++j) {
    const int jj = j % m;
    double rs = 0.0;
    for (int k = 0; k < m; ++k) {
      const int q = jj - k;
      const double r = row[q < 0 ? q + m : q];
      out(j, k) += r;
      rs += r * sigma[k];
    }
    out(j, m) += -rs + tail[j];
    out(j, 0) += rs - tail[j];
  }
  return out;
}

}  // namespace

Eigen::MatrixXd CrestGrid::derivative_matrix() const {
  const int m = 2 * n_;
  return jump_corrected(diff_, sigma_, std::vector<double>(m + 1, 1.0 / kTwoPi), m);
}

Eigen::MatrixXd CrestGrid::K_matrix() const {
  return 0.5 * jump_corrected(inv_, sigma_, primitive_, 2 * n_);
}

Eigen::VectorXcd apply_A0(const CrestGrid& cg, const Eigen::VectorXcd& f) {
  const auto df = cg.derivative(f);
  Eigen::VectorXcd weighted(f.size());
  for (Eigen::Index k = 0; k < f.size(); ++k) weighted[k] = cg.slope()[k] * f[k];
  const cplx mean_term = cg.integrate(weighted) / kPi;
  Eigen::VectorXcd out(f.size());
  for (Eigen::Index k = 0; k < f.size(); ++k) out[k] = cg.coefficient()[k] * df[k] - mean_term;
  return out;
}

Eigen::VectorXcd apply_A(const CrestGrid& cg, const Eigen::VectorXcd& f) {
  return apply_A0(cg, f) + cg.apply_K(f);
}

Eigen::MatrixXcd A_matrix(const CrestGrid& cg) {
  const int s = cg.samples();
  Eigen::MatrixXd a = cg.derivative_matrix();
  for (int j = 0; j < s; ++j) a.row(j) *= cg.coefficient()[j];
  a += cg.K_matrix();
  for (int k = 0; k < s; ++k) {
    const double w = (k == 0 || k == s - 1) ? 0.5 : 1.0;
    a.col(k).array() -= w * cg.step() * cg.slope()[k] / kPi;
  }
  return a.cast<cplx>();
}

// ------------------------------------------------------------ line operator

double coord_map(double z) { return kPi + kPi * std::tanh(kQuarterPi * z); }

double coord_map_inverse(double x) {
  if (!(x > 0.0 && x < kTwoPi)) throw DomainError("coord_map_inverse: x must lie in (0, 2pi)");
  return std::atanh((x - kPi) / kPi) / kQuarterPi;
}

LineGrid::LineGrid() : LineGrid(40.0, 4096) {}

LineGrid::LineGrid(double z_max, int n) : half_width(z_max), nodes(n) {
  if (!(z_max > 0.0) || n < 16) throw DomainError("LineGrid: need Z > 0 and at least 16 nodes");
  z.resize(n);
  w.resize(n);
  const double dz = spacing();
  for (int k = 0; k < n; ++k) {
    z[k] = -z_max + k * dz;
    w[k] = 1.0 / std::cosh(kQuarterPi * z[k]);
  }
}

cplx LineGrid::integrate(const Eigen::VectorXcd& f) const {
  cplx acc = 0.5 * (f[0] + f[nodes - 1]);
  for (int k = 1; k < nodes - 1; ++k) acc += f[k];
  return acc * spacing();
}

double LineGrid::norm(const Eigen::VectorXcd& f) const {
  return std::sqrt(integrate(f.cwiseAbs2().cast<cplx>()).real());
}

D0Result apply_D0(const LineGrid& grid, const Eigen::VectorXcd& h) {
  const int n = grid.nodes;
  if (h.size() != n) throw DomainError("apply_D0: vector size mismatch");
  // Eighth-order centered first derivative, zero beyond the ends.
  static constexpr double coef[4] = {4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
  const double inv_dz = 1.0 / grid.spacing();
  Eigen::VectorXcd wp_h(n);
  for (int k = 0; k < n; ++k) {
    const double th = std::tanh(kQuarterPi * grid.z[k]);
    wp_h[k] = -kQuarterPi * th * grid.w[k] * h[k];
  }
  const cplx rank_one = kQuarterPi * grid.integrate(wp_h);
  D0Result out;
  out.values.resize(n);
  for (int k = 0; k < n; ++k) {
    cplx d = 0.0;
    for (int s = 1; s <= 4; ++s) {
      const cplx right = k + s < n ? h[k + s] : cplx(0.0);
      const cplx left = k - s >= 0 ? h[k - s] : cplx(0.0);
      d += coef[s - 1] * (right - left);
    }
    const double th = std::tanh(kQuarterPi * grid.z[k]);
    out.values[k] = d * inv_dz + kQuarterPi * th * h[k] + rank_one * grid.w[k];
  }
  out.tail_warning = std::abs(h[0]) > 1e-8 || std::abs(h[n - 1]) > 1e-8;
  return out;
}

SpectralProbe d0_eigenfunction(cplx lambda, const LineGrid& grid) {
  if (std::abs(lambda.real()) >= kQuarterPi)
    throw DomainError("d0_eigenfunction: need |Re lambda| < pi/4");
  const int n = grid.nodes;
  SpectralProbe p;
  p.lambda = lambda;
  p.values.resize(n);
  if (lambda == cplx(0.0)) {
    // The closed form collapses to zero here; return the kernel element w.
    for (int k = 0; k < n; ++k) p.values[k] = grid.w[k];
  } else {
    QuadOptions qo;
    qo.sqrt_endpoint_substitution = false;
    const auto inner = adaptive_quad(
        [&](double z) {
          const double s = 1.0 / std::cosh(kQuarterPi * z);
          return s * s * std::exp(lambda * z);
        },
        -grid.half_width, grid.half_width, 1e-14, qo);
    const cplx beta = -kPi / 8.0 * inner.value;
    for (int k = 0; k < n; ++k) p.values[k] = (std::exp(lambda * grid.z[k]) + beta) * grid.w[k];
  }
  p.values /= grid.norm(p.values);
  const auto d0 = apply_D0(grid, p.values);
  p.residual_norm = grid.norm(d0.values - lambda * p.values);
  Eigen::VectorXcd wh(n);
  for (int k = 0; k < n; ++k) wh[k] = grid.w[k] * p.values[k];
  p.constraint_residual = lambda == cplx(0.0) ? 0.0 : std::abs(grid.integrate(wh));
  return p;
}

// ------------------------------------------------------ strip eigenfunctions

namespace {

// Frobenius solution sum_k a_k t^{k+r} of
//   1/4 t (2pi - t) f'' + (1/2 (pi - t) - mu) f' + 1/2 f = 0
// about t = 0, with a_0 = 1.
struct Frobenius {
  cplx r;
  std::vector<cplx> a;

  Frobenius(cplx exponent, cplx mu, int terms = 40) : r(exponent), a(terms) {
    a[0] = 1.0;
    for (int k = 0; k + 1 < terms; ++k) {
      const cplx kr = double(k) + r;
      a[k + 1] = 0.25 * (kr + 2.0) * (kr - 1.0) * a[k] / ((kr + 1.0) * (kPi / 2.0 * (kr + 1.0) - mu));
    }
  }
  // value, derivative, int_0^t, int_0^t s f(s) ds
  std::array<cplx, 4> eval(double t) const {
    std::array<cplx, 4> out{};
    const double lt = std::log(t);
    for (std::size_t k = 0; k < a.size(); ++k) {
      const cplx e = double(k) + r;
      const cplx tp = a[k] * std::exp(e * lt);
      out[0] += tp;
      out[1] += e * tp / t;
      out[2] += tp * t / (e + 1.0);
      out[3] += tp * t * t / (e + 2.0);
      if (k > 2 && std::abs(tp) < 1e-18 * std::abs(out[0])) break;
    }
    return out;
  }
};

struct F2Trace {
  std::vector<double> x;
  std::vector<cplx> f, fp, i0, i1;  // at the stops, i0/i1 integrated from 0
  double i2_core = 0.0;             // integral of |f|^2 over (x_min, 2pi - x_min)
  cplx i0_total, i1_total;
  cplx w_pi;
};

// Integrates f2 ~ x^{2 lambda/pi} from x_min through `stops` (must contain pi)
// to 2pi - x_min, then normalizes so that W(pi) = 1.
F2Trace trace_f2(cplx lambda, std::vector<double> stops, double x_min, double rtol) {
  const cplx rho = 2.0 * lambda / kPi;
  const double x_max = kTwoPi - x_min;
  stops.push_back(x_max);

  const Frobenius at_zero(rho, lambda);
  const auto s0 = at_zero.eval(x_min);
  Eigen::VectorXcd y(5);
  y << s0[0], s0[1], s0[2], s0[3], 0.0;

  auto rhs = [&](double x, const Eigen::VectorXcd& v) {
    Eigen::VectorXcd d(5);
    const double q = 0.25 * x * (kTwoPi - x);
    d[0] = v[1];
    d[1] = -((0.5 * (kPi - x) - lambda) * v[1] + 0.5 * v[0]) / q;
    d[2] = v[0];
    d[3] = x * v[0];
    d[4] = std::norm(v[0]);
    return d;
  };

  F2Trace tr;
  Eigen::VectorXcd last;
  DopriOptions opt;
  opt.rtol = rtol;
  opt.atol = 1e-14;
  opt.initial_step = 1e-3 * x_min;
  dopri_integrate(
      rhs, x_min, y, stops,
      [&](std::size_t s, double x, const Eigen::VectorXcd& v) {
        if (s + 1 == stops.size()) {
          last = v;
          return;
        }
        tr.x.push_back(x);
        tr.f.push_back(v[0]);
        tr.fp.push_back(v[1]);
        tr.i0.push_back(v[2]);
        tr.i1.push_back(v[3]);
      },
      opt);

  // Tail near 2pi: f2 = alpha phi_a(u) + beta phi_b(u), u = 2pi - x.
  const Frobenius regular(0.0, -lambda), singular(-rho, -lambda);
  const auto pa = regular.eval(x_min), pb = singular.eval(x_min);
  Eigen::Matrix2cd m;
  m << pa[0], pb[0], -pa[1], -pb[1];
  const Eigen::Vector2cd ab = m.partialPivLu().solve(Eigen::Vector2cd(last[0], last[1]));
  const cplx tail0 = ab[0] * pa[2] + ab[1] * pb[2];
  const cplx tail1 = kTwoPi * tail0 - (ab[0] * pa[3] + ab[1] * pb[3]);
  tr.i0_total = last[2] + tail0;
  tr.i1_total = last[3] + tail1;
  tr.i2_core = last[4].real();

  std::size_t ip = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < tr.x.size(); ++k)
    if (std::abs(tr.x[k] - kPi) < best) best = std::abs(tr.x[k] - kPi), ip = k;
  if (best > 1e-12) throw DomainError("trace_f2: pi must be one of the stops");
  const cplx f1 = 2.0 * lambda - kPi + tr.x[ip];
  tr.w_pi = f1 * tr.fp[ip] - tr.f[ip];
  const cplx scale = 1.0 / tr.w_pi;
  for (std::size_t k = 0; k < tr.x.size(); ++k) {
    tr.f[k] *= scale;
    tr.fp[k] *= scale;
    tr.i0[k] *= scale;
    tr.i1[k] *= scale;
  }
  tr.i0_total *= scale;
  tr.i1_total *= scale;
  tr.i2_core *= std::norm(scale);
  return tr;
}

}  // namespace

SpectralProbe a_eigenfunction(cplx lambda, const Grid& grid, const AEigenOptions& opt) {
  if (lambda == cplx(0.0))
    throw DomainError("a_eigenfunction: lambda = 0 is the kernel {1, x - pi}; use apply_A");
  if (std::abs(lambda.real()) >= kQuarterPi)
    throw DomainError("a_eigenfunction: need |Re lambda| < pi/4");
  const int n = grid.n_half;
  const int m = 2 * n;
  const double h = grid.step();
  const double x_min = opt.x_min_fraction * kTwoPi;
  if (!(x_min > 0.0 && x_min < h)) throw DomainError("a_eigenfunction: x_min must lie in (0, h)");

  std::vector<double> stops(m - 1);
  for (int k = 1; k < m; ++k) stops[k - 1] = k * h;
  const auto tr = trace_f2(lambda, stops, x_min, opt.rtol);
  const cplx rho = 2.0 * lambda / kPi;

  // f = c1 f1 + f2 with int f = 0; int f1 = 4 pi lambda.
  const cplx c1 = -tr.i0_total / (4.0 * kPi * lambda);
  const double pi3 = kPi * kPi * kPi;
  const cplx moment_mid = c1 * (-2.0 * pi3 / 3.0) + kPi * tr.i0_total - tr.i1_total;  // int (pi - x) f
  const cplx f_bar =
      (c1 * (4.0 * lambda * kPi * kPi - 2.0 * pi3 / 3.0) + kTwoPi * tr.i0_total - tr.i1_total) / kTwoPi;

  SpectralProbe p;
  p.lambda = lambda;
  p.values.resize(m - 1);
  Eigen::VectorXcd res(m - 1);
  for (int k = 0; k < m - 1; ++k) {
    const double x = tr.x[k];
    const cplx f = c1 * (2.0 * lambda - kPi + x) + tr.f[k];
    const cplx fp = c1 + tr.fp[k];
    const cplx big_f = c1 * ((2.0 * lambda - kPi) * x + 0.5 * x * x) + tr.i0[k];
    p.values[k] = f;
    res[k] = 0.25 * x * (kTwoPi - x) * fp + moment_mid / (4.0 * kPi) + 0.5 * (big_f - f_bar) - lambda * f;

    const cplx w_num = (2.0 * lambda - kPi + x) * tr.fp[k] - tr.f[k];
    const cplx w_exact = kPi * kPi / (x * (kTwoPi - x)) * std::exp(rho * std::log(x / (kTwoPi - x)));
    const double dev = std::abs(w_num - w_exact);
    p.wronskian_deviation = std::max(p.wronskian_deviation, dev);
    p.wronskian_relative = std::max(p.wronskian_relative, dev / std::abs(w_exact));
  }
  const double f_norm = std::sqrt(h * p.values.squaredNorm());
  p.values /= f_norm;
  p.residual_norm = std::sqrt(h * res.squaredNorm()) / f_norm;
  p.constraint_residual = std::abs(c1 * 4.0 * kPi * lambda + tr.i0_total) / f_norm;
  return p;
}

double f2_truncated_norm(cplx lambda, double x_min, double rtol) {
  if (lambda == cplx(0.0)) throw DomainError("f2_truncated_norm: lambda must be nonzero");
  if (!(x_min > 0.0 && x_min < kPi / 2)) throw DomainError("f2_truncated_norm: bad x_min");
  return std::sqrt(trace_f2(lambda, {kPi}, x_min, rtol).i2_core);
}

// ------------------------------------------------------------------ resolvent

ResolventSolver::ResolventSolver(cplx lambda, const CrestGrid& cg) : lambda_(lambda), cg_(cg) {
  if (classify_strip(lambda) != StripClass::resolvent)
    throw DomainError("resolvent_probe: need |Re lambda| > pi/4");
  Eigen::MatrixXcd a = A_matrix(cg);
  a.diagonal().array() -= lambda;
  lu_.compute(a);
  const double rc = lu_.rcond();
  condition_ = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

ResolventResult ResolventSolver::solve(const Eigen::VectorXcd& g) const {
  ResolventResult r;
  r.f = lu_.solve(g);
  r.condition = condition_;
  r.near_singular = condition_ > 1e12;
  const double gn = cg_.norm(g);
  r.bound_ratio = gn > 0.0 ? cg_.norm(r.f) * (std::abs(lambda_.real()) - kQuarterPi) / (resolvent_constant() * gn) : 0.0;
  return r;
}

ResolventResult resolvent_probe(cplx lambda, const CrestGrid& cg, const Eigen::VectorXcd& g) {
  return ResolventSolver(lambda, cg).solve(g);
}

// --------------------------------------------------------------- strip report

std::vector<StripRow> strip_report(const Grid& grid, const std::vector<cplx>& samples,
                                   const StripOptions& opt) {
  const CrestGrid cg(grid);
  std::vector<StripRow> rows(samples.size());
  detail::parallel_for(samples.size(), opt.jobs, [&](std::size_t i) {
    StripRow& row = rows[i];
    row.lambda = samples[i];
    row.cls = classify_strip(row.lambda);
    try {
      if (row.cls == StripClass::boundary) {
        row.value = std::numeric_limits<double>::quiet_NaN();
        row.status = "untested: boundary of strip";
      } else if (row.cls == StripClass::resolvent) {
        Eigen::VectorXcd g(cg.samples());
        for (int k = 0; k < cg.samples(); ++k) g[k] = std::cos(cg.y()[k]);
        const auto r = resolvent_probe(row.lambda, cg, g);
        row.value = r.bound_ratio;
        row.ok = r.bound_ratio <= 1.0 + 1e-9 && !r.near_singular;
        row.status = r.near_singular ? "near-singular solve" : (row.ok ? "bound holds" : "bound violated");
      } else if (row.lambda == cplx(0.0)) {
        const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(cg.samples());
        Eigen::VectorXcd saw(cg.samples());
        for (int k = 0; k < cg.samples(); ++k) saw[k] = cg.y()[k] - kPi;
        row.value = std::max(cg.norm(apply_A(cg, one)) / cg.norm(one),
                             cg.norm(apply_A(cg, saw)) / cg.norm(saw));
        row.ok = row.value <= opt.kernel_tol;
        row.status = row.ok ? "kernel: 1 and x - pi" : "kernel residual above tolerance";
      } else {
        const auto p = a_eigenfunction(row.lambda, grid);
        row.value = p.residual_norm;
        row.ok = p.residual_norm <= opt.residual_tol;
        row.status = row.ok ? "eigenfunction" : "eigen-residual above tolerance";
      }
    } catch (const std::exception& ex) {
      row.ok = false;
      row.value = std::numeric_limits<double>::quiet_NaN();
      row.status = std::string("error: ") + ex.what();
    }
  });
  return rows;
}

bool strip_verdict(const std::vector<StripRow>& rows) {
  for (const auto& r : rows)
    if (!r.ok) return false;
  return true;
}

}  // namespace peakwave
