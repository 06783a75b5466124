#include "peakwave/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "peakwave/chareval.hpp"
#include "peakwave/cli.hpp"
#include "peakwave/hessian.hpp"
#include "peakwave/peakedops.hpp"
#include "peakwave/waveprofile.hpp"

namespace peakwave {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
  bool passed = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    passed = passed && ok;
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!ok) detail += " [FAIL]";
  }
};

Outcome period_anchor() {
  Outcome out;
  double worst = 0.0;
  for (double c : {1.02, 1.05, kCStar})
    worst = std::max(worst, std::abs(period(c * c * c * c / 8.0, c) - 4.0 * c * std::sqrt(2.0)));
  out.require(worst <= 1e-12, fmt("max |T(c^4/8) - 4c sqrt2| = %.3e", worst));
  const double at_peak = std::abs(period(kPeakedEnergy, kCStar) - 2.0 * kPi);
  out.require(at_peak <= 1e-12, fmt("|T(c*) - 2pi| = %.3e", at_peak));
  return out;
}

Outcome profile_solver(double& slowest) {
  Outcome out;
  for (double c : {1.03, 1.07}) {
    double z[2] = {0.0, 0.0};
    for (int pass = 0; pass < 2; ++pass) {
      const int n = pass == 0 ? 300 : 600;
      const auto t0 = std::chrono::steady_clock::now();
      const auto prof = smooth_profile(c, Grid(n), 1e-14);
      slowest = std::max(slowest, elapsed(t0));
      const auto res = check_residuals(prof);
      z[pass] = res.zero_mean;
      if (pass == 1) break;
      double inv = 0.0;
      for (int j = -n + 1; j < n; ++j)
        inv = std::max(inv, std::abs(profile_inverse_map(prof.values[j + n], prof.params) - std::abs(prof.grid.node(j))));
      out.require(inv < 1e-13, fmt("c=%.2f max|f(eta)-x| = %.3e", c, inv));
      out.require(res.first_integral < 1e-10, fmt("first integral %.3e", res.first_integral));
    }
    const bool rate = z[1] <= z[0] / 3.0 || (z[0] <= 1e-12 && z[1] <= 1e-12);
    out.require(z[0] < 1e-3 && rate, fmt("zero mean %.3e (N=300) %.3e (N=600)", z[0], z[1]));
  }
  out.require(slowest < 10.0, "profile runtime < 10 s");
  return out;
}

Outcome peaked_decay() {
  Outcome out;
  const int n = 300;
  const auto co = dft(peaked_profile(Grid(n)).values);
  double worst = 0.0;
  int first_bad = 0;
  for (int m = 1; m <= 50; ++m) {
    const double dev = std::abs(4.0 * m * m * co.at(m).real() - 1.0);
    if (dev > 0.02 && first_bad == 0) first_bad = m;
    worst = std::max(worst, dev);
  }
  out.require(worst <= 0.02, fmt("max_{m<=50} |4m^2 eta_m - 1| = %.5f%s", worst,
                                  first_bad ? fmt(" (first above 0.02 at m=%d)", first_bad).c_str() : ""));
  const double exact = -kPi * kPi / 48.0;
  const double aliased = exact + kPi * kPi / (48.0 * n * n);
  const double dev0 = std::abs(co.at(0).real() - aliased);
  out.require(dev0 <= 1e-10, fmt("|eta_0 - aliased closed form| = %.3e (raw offset from -pi^2/48: %.3e)", dev0,
                                 std::abs(co.at(0).real() - exact)));
  return out;
}

Outcome small_amplitude() {
  Outcome out;
  const double c = 1.001;
  const auto ev = eigenvalues(assemble_L_fd(smooth_profile(c, Grid(300))));
  const double target[4] = {-1.0, c * c - 1.0, c * c - 1.0, 4.0 * c * c - 1.0};
  double worst = 0.0;
  for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(ev[k] - target[k]));
  out.require(worst <= 5e-3, fmt("lambda = (%.6f, %.6f, %.6f, %.6f), max deviation %.3e", ev[0].real(), ev[1].real(),
                                  ev[2].real(), ev[3].real(), worst));
  return out;
}

Outcome translation_mode() {
  Outcome out;
  const double c = 1.03;
  for (Method m : {Method::fd, Method::fourier}) {
    double lam[2] = {0.0, 0.0}, scale[2] = {0.0, 0.0};
    for (int pass = 0; pass < 2; ++pass) {
      const auto prof = smooth_profile(c, Grid(pass == 0 ? 300 : 600));
      const auto ev = eigenvalues(m == Method::fd ? assemble_L_fd(prof) : assemble_L_fourier(dft(prof.values), c));
      lam[pass] = std::abs(ev[2]);
      for (const auto& v : ev) scale[pass] = std::max(scale[pass], std::abs(v));
    }
    const bool floor = lam[1] <= 64.0 * kEps * scale[1];
    out.require(lam[0] < 1e-3 && (lam[1] < lam[0] || floor),
                fmt("%s |lambda_3| = %.3e (N=300) %.3e (N=600)%s", to_string(m), lam[0], lam[1],
                    floor ? " at eigensolver floor" : ""));
  }
  return out;
}

Outcome sweep_pattern(int jobs) {
  Outcome out;
  const std::vector<double> cs{1.01, 1.03, 1.05, 1.07, 1.09};
  SweepOptions so;
  so.methods = {Method::fd, Method::fourier};
  so.jobs = jobs;
  const auto rows = eigen_sweep(cs, Grid(300), so);
  for (Method m : so.methods) {
    bool decreasing = true, parity = true, ok = true;
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
      if (r.method != m) continue;
      ok = ok && r.ok;
      decreasing = decreasing && r.lambda[0] < prev;
      prev = r.lambda[0];
      parity = parity && r.parity[1] == Parity::even && r.parity[2] == Parity::odd && r.parity[3] == Parity::even;
    }
    out.require(ok && decreasing, fmt("%s lambda_1 strictly decreasing in c", to_string(m)));
    out.require(ok && parity, fmt("%s parity (even, odd, even) for lambda_2..4", to_string(m)));
  }
  double lam[3];
  int i = 0;
  for (int n : {100, 200, 300}) lam[i++] = eigenvalues(assemble_L_peaked(Grid(n), Method::fd))[0].real();
  out.require(lam[1] < lam[0] && lam[2] < lam[1],
              fmt("peaked FD lambda_1 = %.4f, %.4f, %.4f for N = 100, 200, 300", lam[0], lam[1], lam[2]));
  return out;
}

Outcome kernel_identities() {
  Outcome out;
  double norms[2][3];
  int i = 0;
  for (int n : {256, 512}) {
    CrestGrid cg{Grid(n)};
    const int s = cg.samples();
    Eigen::VectorXcd one = Eigen::VectorXcd::Ones(s), lin(s), slope(s);
    for (int k = 0; k < s; ++k) {
      lin[k] = cg.y()[k] - kPi;
      slope[k] = cg.slope()[k];
    }
    norms[i][0] = cg.norm(apply_A(cg, one));
    norms[i][1] = cg.norm(apply_A(cg, lin));
    norms[i][2] = cg.norm(apply_A(cg, slope));
    ++i;
  }
  const char* names[3] = {"A 1", "A (x - pi)", "A eta*'"};
  for (int k = 0; k < 3; ++k) {
    const bool floor = norms[1][k] <= 1e-10;
    out.require(norms[1][k] <= 1e-3 && (norms[1][k] < norms[0][k] || floor),
                fmt("||%s|| = %.3e (N=256) %.3e (N=512)", names[k], norms[0][k], norms[1][k]));
  }
  return out;
}

Outcome strip_witness(double& seconds) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  double res = 0.0, wr = 0.0, wr_abs = 0.0;
  for (cplx l : {cplx(0.1), cplx(0.3), cplx(0.5), cplx(0.2, 2.0), cplx(0.7, 3.0)}) {
    const auto p = a_eigenfunction(l, Grid(1024));
    res = std::max(res, p.residual_norm);
    wr = std::max(wr, p.wronskian_relative);
    wr_abs = std::max(wr_abs, p.wronskian_deviation);
  }
  out.require(res <= 1e-4, fmt("A residual max %.3e", res));
  out.require(wr <= 1e-8, fmt("Wronskian relative deviation max %.3e (absolute %.3e)", wr, wr_abs));
  double d0 = 0.0;
  const LineGrid line;
  for (cplx l : {cplx(0.3, 0.5), cplx(0.2), cplx(0.0, 0.6)}) d0 = std::max(d0, d0_eigenfunction(l, line).residual_norm);
  out.require(d0 <= 1e-6, fmt("D0 residual max %.3e", d0));
  seconds = elapsed(t0);
  out.require(seconds < 30.0, "runtime < 30 s");
  return out;
}

Outcome resolvent_bound() {
  Outcome out;
  const CrestGrid cg{Grid(256)};
  std::mt19937_64 rng(20240607);
  std::normal_distribution<double> normal;
  for (cplx l : {cplx(1.0), cplx(1.5), cplx(0.9, 5.0)}) {
    const ResolventSolver solver(l, cg);
    double worst = 0.0;
    for (int r = 0; r < 20; ++r) {
      Eigen::VectorXcd g(cg.samples());
      for (Eigen::Index k = 0; k < g.size(); ++k) g[k] = cplx(normal(rng), normal(rng));
      g[g.size() - 1] = g[0];
      worst = std::max(worst, solver.solve(g).bound_ratio);
    }
    out.require(worst <= 1.0, fmt("lambda=%g%+gi max ratio %.4f", l.real(), l.imag(), worst));
  }
  return out;
}

Outcome conservation() {
  Outcome out;
  const auto init = default_initial_state(1e-2);
  double drift[2][2];
  for (int pass = 0; pass < 2; ++pass) {
    const auto run = evolve(init, 5.0, pass == 0 ? 1e-3 : 5e-4);
    const auto& first = run.records.front();
    double dm = 0.0, db = 0.0;
    for (const auto& r : run.records) {
      dm = std::max(dm, std::abs(r.mass_zeta - first.mass_zeta));
      db = std::max(db, std::abs(r.blowup_invariant - first.blowup_invariant));
    }
    drift[pass][0] = dm;
    drift[pass][1] = db;
  }
  out.require(drift[0][0] <= 1e-8 && drift[0][1] <= 1e-8,
              fmt("drift at dt=1e-3: mass %.3e, blow-up invariant %.3e", drift[0][0], drift[0][1]));
  for (int q = 0; q < 2; ++q) {
    const double ratio = drift[1][q] > 0.0 ? drift[0][q] / drift[1][q] : std::numeric_limits<double>::infinity();
    out.require(ratio >= 8.0 && ratio <= 32.0,
                fmt("%s drift ratio under dt-halving %.3f", q == 0 ? "mass" : "blow-up invariant", ratio));
  }
  return out;
}

Outcome instability(double& seconds) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  for (double delta : {1e-2, 1e-3}) {
    const auto r = instability_experiment(delta, 15.0, 2e-3);
    out.require(r.relative_error <= 0.15,
                fmt("delta=%g rate %.4f vs %.4f (rel %.3f)", delta, r.fitted_rate, r.theory_rate, r.relative_error));
    out.require(r.reached_ten_delta, fmt("delta=%g W1inf reaches 10 delta", delta));
  }
  seconds = elapsed(t0);
  out.require(seconds < 60.0, "runtime < 60 s");
  return out;
}

cli::RunConfig small(cli::Command cmd) {
  cli::RunConfig cfg;
  cfg.command = cmd;
  cfg.jobs = 1;
  return cfg;
}

Outcome determinism(const AcceptanceOptions& opt) {
  Outcome out;
  namespace fs = std::filesystem;
  const fs::path root = opt.scratch_dir / "peakwave-determinism";
  std::vector<cli::RunConfig> configs;
  {
    auto c = small(cli::Command::profile);
    c.c = 1.03;
    c.n_half = 64;
    c.svg = true;
    configs.push_back(c);
    c = small(cli::Command::spectrum);
    c.c_list = {1.03, 1.05};
    c.n_half = 32;
    c.jobs = opt.jobs;
    configs.push_back(c);
    c = small(cli::Command::peaked_spectrum);
    c.n_half = 32;
    configs.push_back(c);
    c = small(cli::Command::strip);
    c.n_half = 64;
    c.jobs = opt.jobs;
    configs.push_back(c);
    c = small(cli::Command::evolve);
    c.t_end = 1.0;
    c.dt = 1e-2;
    c.intervals = 128;
    configs.push_back(c);
  }
  fs::remove_all(root);
  for (const char* side : {"a", "b"}) {
    for (auto cfg : configs) {
      cfg.out_dir = root / side;
      std::ostringstream sink;
      cli::run(cfg, sink);
    }
  }
  const auto diff = compare_trees(root / "a", root / "b");
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "a"))
    if (e.is_regular_file()) ++files;
  out.require(diff.empty() && files > 0,
              diff.empty() ? fmt("%zu files byte-identical across two runs", files) : diff);
  fs::remove_all(root);
  return out;
}

}  // namespace

const char* criterion_name(int id) {
  static const char* names[kCriterionCount] = {
      "period closed-form anchor",  "profile solver",          "peaked Fourier decay",
      "small-amplitude spectrum",   "translation mode",        "sweep monotonicity and parity",
      "peaked kernel identities",   "strip interior witness",  "resolvent bound",
      "nonlinear conservation",     "instability rate",        "determinism"};
  if (id < 1 || id > kCriterionCount) throw std::out_of_range("criterion_name: no criterion " + std::to_string(id));
  return names[id - 1];
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
  CriterionResult r;
  r.id = id;
  r.name = criterion_name(id);
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    double aux = 0.0;
    switch (id) {
      case 1:
        o = period_anchor();
        break;
      case 2:
        o = profile_solver(aux);
        break;
      case 3:
        o = peaked_decay();
        break;
      case 4:
        o = small_amplitude();
        break;
      case 5:
        o = translation_mode();
        break;
      case 6:
        o = sweep_pattern(opt.jobs);
        break;
      case 7:
        o = kernel_identities();
        break;
      case 8:
        o = strip_witness(aux);
        break;
      case 9:
        o = resolvent_bound();
        break;
      case 10:
        o = conservation();
        break;
      case 11:
        o = instability(aux);
        break;
      case 12:
        o = determinism(opt);
        break;
    }
  } catch (const std::exception& ex) {
    o.passed = false;
    o.detail = std::string("error: ") + ex.what();
  }
  r.seconds = elapsed(t0);
  if (id == 1 && r.seconds >= 1.0) o.require(false, "runtime < 1 s");
  r.passed = o.passed;
  r.detail = o.detail;
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, opt));
  return out;
}

std::string compare_trees(const std::filesystem::path& a, const std::filesystem::path& b) {
  namespace fs = std::filesystem;
  auto listing = [](const fs::path& root) {
    std::map<std::string, std::string> files;
    if (!fs::exists(root)) return files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
      if (!e.is_regular_file()) continue;
      std::ifstream f(e.path(), std::ios::binary);
      files[fs::relative(e.path(), root).generic_string()] =
          std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
    }
    return files;
  };
  const auto la = listing(a), lb = listing(b);
  for (const auto& [name, bytes] : la) {
    const auto it = lb.find(name);
    if (it == lb.end()) return name + " missing from second run";
    if (it->second != bytes) return name + " differs between runs";
  }
  for (const auto& [name, bytes] : lb)
    if (!la.count(name)) return name + " missing from first run";
  return {};
}

}  // namespace peakwave
