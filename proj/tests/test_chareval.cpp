#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "peakwave/chareval.hpp"
#include "peakwave/errors.hpp"
#include "peakwave/peakedops.hpp"

using namespace peakwave;

TEST_CASE("nonlocal antiderivative") {
  const int m = 1024;
  std::vector<double> x(m + 1), u(m + 1), one(m + 1, 1.0);
  for (int k = 0; k <= m; ++k) {
    x[k] = 2.0 * kPi * k / m;
    u[k] = std::cos(3.0 * x[k]);
  }
  const auto f = nonlocal_antiderivative(x, u);
  for (int k = 0; k <= m; k += 37) CHECK(std::abs(f[k] - std::sin(3.0 * x[k]) / 3.0) < 1e-4);
  for (double v : nonlocal_antiderivative(x, one)) CHECK(std::abs(v) < 1e-14);

  // nonuniform positions with the same function
  std::vector<double> y(m + 1), uy(m + 1);
  for (int k = 0; k <= m; ++k) {
    y[k] = x[k] + 0.3 * std::sin(x[k]);
    uy[k] = std::cos(3.0 * y[k]);
  }
  const auto g = nonlocal_antiderivative(y, uy);
  for (int k = 0; k <= m; k += 37) CHECK(std::abs(g[k] - std::sin(3.0 * y[k]) / 3.0) < 1e-4);

  x[10] = x[9];
  CHECK_THROWS_AS(nonlocal_antiderivative(x, u), CrossingError);
  CHECK_THROWS_AS(nonlocal_antiderivative(x, {1.0}), DomainError);
}

TEST_CASE("label quadrature is exact for cubics") {
  const int m = 12;
  const double h = 2.0 * kPi / m;
  std::vector<double> g(m + 1);
  for (int k = 0; k <= m; ++k) {
    const double s = k * h;
    g[k] = 1.0 - 2.0 * s + 0.5 * s * s * s;
  }
  const double L = 2.0 * kPi;
  CHECK(label_integral(g, h) == doctest::Approx(L - L * L + L * L * L * L / 8.0).epsilon(1e-14));
  CHECK_THROWS_AS(label_integral({1.0, 2.0, 3.0}, h), DomainError);
}

TEST_CASE("unperturbed state moves along the characteristic speed") {
  auto zero = [](double) { return 0.0; };
  const auto s = make_state(64, zero, zero);
  const auto d = rhs(s);
  CHECK(d.peak_value == 0.0);
  for (int k = 0; k <= 64; ++k) {
    CHECK(std::abs(d.values[k]) < 1e-15);
    CHECK(std::abs(d.slopes[k]) < 1e-15);
    const double x = s.positions[k];
    const double expect = (k == 0 || k == 64) ? 0.0 : -(x * (2.0 * kPi - x) / 4.0) / (2.0 * kCStar);
    CHECK(d.positions[k] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("linearization reproduces A") {
  const int n = 128;
  const double eps = 1e-6;
  const auto s = make_state(
      2 * n, [&](double x) { return eps * std::sin(x); }, [&](double x) { return eps * std::cos(x); });
  const auto d = rhs(s);
  const CrestGrid cg{Grid(n)};
  Eigen::VectorXcd z(cg.samples());
  for (int k = 0; k < cg.samples(); ++k) z[k] = eps * std::sin(cg.y()[k]);
  const auto az = apply_A(cg, z);
  double worst = 0.0;
  for (int k = 1; k < 2 * n; ++k) {
    const double lhs = 2.0 * kCStar * (d.values[k] - d.positions[k] * s.slopes[k]);
    worst = std::max(worst, std::abs(lhs - az[k].real()));
  }
  CHECK(worst / eps < 1e-4);
}

TEST_CASE("default initial data") {
  const double delta = 1e-2;
  const auto s = default_initial_state(delta, 256);
  CHECK(s.slopes.front() == doctest::Approx(-delta));
  CHECK(s.slopes.back() == doctest::Approx(delta));
  CHECK(s.values.front() == s.values.back());
  CHECK(std::abs(constraint_residual(s)) < 1e-15);
  CHECK_THROWS_AS(default_initial_state(-1.0), DomainError);
  CHECK_THROWS_AS(default_initial_state(1e-2, 4), DomainError);
  CHECK(theory_rate() == doctest::Approx(std::sqrt(2.0) / 2.0));
}

TEST_CASE("RK4 is fourth order in time") {
  const auto s0 = default_initial_state(1e-2, 64);
  const double t = 0.8;
  const double ref = evolve(s0, t, 0.8 / 64).records.back().v0;
  std::vector<double> err;
  for (double dt : {0.4, 0.2, 0.1}) err.push_back(std::abs(evolve(s0, t, dt).records.back().v0 - ref));
  CHECK(err[0] / err[1] == doctest::Approx(16.0).epsilon(0.3));
  CHECK(err[1] / err[2] == doctest::Approx(16.0).epsilon(0.3));
}

TEST_CASE("crest value drifts at second order") {
  auto drift = [](double delta) {
    const auto run = evolve(default_initial_state(delta, 128), 0.5, 1e-2, {});
    return run.states.back().peak_value - run.states.front().peak_value;
  };
  const double a = drift(1e-3), b = drift(5e-4);
  CHECK(a != 0.0);
  CHECK(a / b == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("conserved quantities along a short run") {
  const auto run = evolve(default_initial_state(1e-2, 256), 1.0, 1e-2);
  REQUIRE(run.records.size() == 101);
  const auto& first = run.records.front();
  for (const auto& r : run.records) {
    CHECK(std::abs(r.mass_zeta - first.mass_zeta) < 1e-8);
    CHECK(std::abs(r.blowup_invariant - first.blowup_invariant) < 1e-8);
  }
  CHECK_FALSE(run.broke);
  CHECK(run.states.size() == 2);
}

TEST_CASE("breaking is detected and reported") {
  EvolveOptions opt;
  opt.slope_cap = 0.0105;
  const auto run = evolve(default_initial_state(1e-2, 64), 5.0, 1e-2, opt);
  CHECK(run.broke);
  CHECK(run.breaking_reason == "slope above cap");
  CHECK(run.breaking_time < 5.0);
  CHECK(run.states.back().time == doctest::Approx(run.breaking_time));
  CHECK_THROWS_AS(evolve(default_initial_state(1e-2, 64), 1.0, 0.0), DomainError);
}

TEST_CASE("instability experiment output") {
  const auto r = instability_experiment(1e-2, 2.0, 1e-2, 128);
  CHECK(r.v0.front() == doctest::Approx(-1e-2));
  CHECK(r.t.size() == r.records.size());
  CHECK(r.fitted_rate > 0.0);
  CHECK(r.theory_rate == doctest::Approx(std::sqrt(2.0) / 2.0));
}

TEST_CASE("conserved quantities of full profiles") {
  const int n = 400;
  const auto peaked = full_conserved(peaked_profile(Grid(n)));
  CHECK(peaked.mass == doctest::Approx(-kPi * kPi * kPi / 24.0).epsilon(1e-4));
  CHECK(peaked.momentum == doctest::Approx(kPi * kPi * kPi / 48.0).epsilon(1e-4));
  CHECK(peaked.energy == doctest::Approx(0.7172336362155034).epsilon(1e-4));

  std::vector<double> zero(2 * n + 1, 0.0), c(2 * n + 1), sl(2 * n + 1);
  const auto z = full_conserved(zero, zero);
  CHECK(z.mass == 0.0);
  CHECK(z.momentum == 0.0);
  CHECK(z.energy == 0.0);
  for (int j = -n; j <= n; ++j) {
    c[j + n] = std::cos(j * kPi / n);
    sl[j + n] = -std::sin(j * kPi / n);
  }
  const auto cc = full_conserved(c, sl);
  CHECK(std::abs(cc.mass) < 1e-13);
  CHECK(cc.momentum == doctest::Approx(kPi / 2.0).epsilon(1e-13));
  CHECK(cc.energy == doctest::Approx(kPi / 2.0).epsilon(1e-13));
  CHECK_THROWS_AS(full_conserved(std::vector<double>(4), std::vector<double>(4)), DomainError);

  // independent quadrature of the peaked profile
  const double m = oracle::integrate([](double x) { return oracle::peaked(x); }, -kPi, kPi);
  CHECK(m == doctest::Approx(-kPi * kPi * kPi / 24.0).epsilon(1e-12));
}
