#include <doctest.h>

#include <cmath>
#include <random>

#include "peakwave/errors.hpp"
#include "peakwave/peakedops.hpp"

using namespace peakwave;

namespace {

Eigen::VectorXcd sampled(const CrestGrid& cg, auto&& f) {
  Eigen::VectorXcd out(cg.samples());
  for (int k = 0; k < cg.samples(); ++k) out[k] = f(cg.y()[k]);
  return out;
}

double rel(const CrestGrid& cg, const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return cg.norm(a - b) / cg.norm(b);
}

}  // namespace

TEST_CASE("crest grid geometry") {
  const CrestGrid cg(Grid(16));
  CHECK(cg.samples() == 33);
  CHECK(cg.y().front() == 0.0);
  CHECK(cg.y().back() == 2.0 * kPi);
  CHECK(cg.coefficient().front() == 0.0);
  CHECK(cg.slope().front() == doctest::Approx(-kPi / 4));
  CHECK(cg.slope().back() == doctest::Approx(kPi / 4));
  // c*^2 - 2 eta* from the peaked profile itself
  const auto prof = peaked_profile(Grid(16));
  std::vector<double> a(33);
  for (int j = -16; j <= 16; ++j) a[j + 16] = kCStar * kCStar - 2.0 * prof.values[j + 16];
  const auto from = cg.from_grid(a);
  for (int k = 0; k < 33; ++k) CHECK(from[k].real() == doctest::Approx(cg.coefficient()[k]).epsilon(1e-12));
  CHECK(std::abs(cg.integrate(sampled(cg, [](double y) { return std::cos(y); }))) < 1e-14);
  CHECK_THROWS_AS(cg.sample(std::vector<double>(5)), DomainError);
}

TEST_CASE("spectral derivative and K on Fourier modes") {
  const CrestGrid cg(Grid(32));
  for (int n : {1, 3, 17}) {
    CAPTURE(n);
    const auto e = sampled(cg, [&](double y) { return std::exp(cplx(0.0, n * y)); });
    CHECK(rel(cg, cg.derivative(e), cplx(0.0, n) * e) < 1e-12);
    CHECK(rel(cg, cg.apply_K(e), cplx(0.0, -0.5 / n) * e) < 1e-12);
  }
  const auto saw = sampled(cg, [](double y) { return y - kPi; });
  const auto d = cg.derivative(saw);
  for (int k = 0; k < cg.samples(); ++k) CHECK(std::abs(d[k] - 1.0) < 1e-12);
  // zero-mean primitive of the sawtooth, halved
  const auto k_saw = cg.apply_K(saw);
  for (int k = 0; k < cg.samples(); ++k) {
    const double y = cg.y()[k];
    CHECK(std::abs(k_saw[k] - ((y - kPi) * (y - kPi) / 4.0 - kPi * kPi / 12.0)) < 1e-12);
  }
}

TEST_CASE("dense forms match the matrix-free operators") {
  const CrestGrid cg(Grid(24));
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  Eigen::VectorXcd f(cg.samples());
  for (auto& v : f) v = cplx(g(rng), g(rng));
  CHECK((cg.derivative_matrix().cast<cplx>() * f - cg.derivative(f)).norm() < 1e-10 * f.norm() * 24);
  CHECK((cg.K_matrix().cast<cplx>() * f - cg.apply_K(f)).norm() < 1e-12 * f.norm());
  CHECK((A_matrix(cg) * f - apply_A(cg, f)).norm() < 1e-10 * f.norm() * 24);
  CHECK((apply_A(cg, f) - apply_A0(cg, f) - cg.apply_K(f)).norm() == doctest::Approx(0.0));
}

TEST_CASE("kernel of A") {
  double prev_saw = 0.0;
  for (int n : {64, 128}) {
    const CrestGrid cg{Grid(n)};
    const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(cg.samples());
    const auto saw = sampled(cg, [](double y) { return y - kPi; });
    const auto slope = sampled(cg, [](double y) { return (y - kPi) / 4.0; });
    CHECK(cg.norm(apply_A(cg, one)) < 1e-9);
    const double r = cg.norm(apply_A(cg, saw));
    CHECK(cg.norm(apply_A(cg, slope)) == doctest::Approx(r / 4.0));
    // the only error is the trapezoid moment of (y - pi)^2, O(h^2)
    if (prev_saw > 0.0) CHECK(prev_saw / r == doctest::Approx(4.0).epsilon(0.02));
    prev_saw = r;
  }
}

TEST_CASE("A0 maps into zero-mean functions") {
  // a has a kink at the crest, so the trapezoid mean is only O(h^2)
  double prev = 0.0;
  for (int n : {64, 128, 256}) {
    const CrestGrid cg{Grid(n)};
    const auto f = sampled(cg, [](double y) { return std::cos(y) + std::sin(2.0 * y) + 0.3 * std::cos(5.0 * y); });
    const double m = std::abs(cg.integrate(apply_A0(cg, f)));
    CHECK(m < 3e-3);
    if (prev > 0.0) CHECK(prev / m == doctest::Approx(4.0).epsilon(0.02));
    prev = m;
  }
}

TEST_CASE("coordinate map") {
  CHECK(coord_map(0.0) == doctest::Approx(kPi));
  for (double z : {-7.0, -1.0, 0.25, 3.0}) {
    CHECK(coord_map_inverse(coord_map(z)) == doctest::Approx(z).epsilon(1e-12));
    const double dz = 1e-5;
    const double num = (coord_map(z + dz) - coord_map(z - dz)) / (2.0 * dz);
    const double s = 1.0 / std::cosh(kPi * z / 4.0);
    CHECK(num == doctest::Approx(kPi * kPi / 4.0 * s * s).epsilon(1e-8));
  }
  CHECK_THROWS_AS(coord_map_inverse(0.0), DomainError);
  CHECK_THROWS_AS(coord_map_inverse(7.0), DomainError);
}

TEST_CASE("line operator D0") {
  const LineGrid lg(40.0, 4096);
  Eigen::VectorXcd w(lg.nodes);
  for (int k = 0; k < lg.nodes; ++k) w[k] = lg.w[k];
  const auto d0w = apply_D0(lg, w);
  CHECK(lg.norm(d0w.values) < 1e-10);
  CHECK_FALSE(d0w.tail_warning);

  // range is orthogonal to w
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  Eigen::VectorXcd h(lg.nodes);
  h.setZero();
  for (int b = 0; b < 4; ++b) {
    const double c = g(rng), mu = 3.0 * g(rng);
    for (int k = 0; k < lg.nodes; ++k) h[k] += c * std::exp(-std::pow(lg.z[k] - mu, 2));
  }
  const auto dh = apply_D0(lg, h);
  Eigen::VectorXcd wd(lg.nodes);
  for (int k = 0; k < lg.nodes; ++k) wd[k] = w[k] * dh.values[k];
  CHECK(std::abs(lg.integrate(wd)) < 1e-10 * lg.norm(h));

  Eigen::VectorXcd wide = Eigen::VectorXcd::Ones(lg.nodes);
  CHECK(apply_D0(lg, wide).tail_warning);
  CHECK_THROWS_AS(apply_D0(lg, Eigen::VectorXcd(3)), DomainError);
}

TEST_CASE("D0 eigenfunctions follow the closed form") {
  const LineGrid lg(40.0, 4096);
  for (cplx lambda : {cplx(0.3), cplx(-0.4), cplx(0.2, 0.7)}) {
    CAPTURE(lambda);
    const auto p = d0_eigenfunction(lambda, lg);
    CHECK(p.residual_norm < 5e-6);
    CHECK(p.constraint_residual < 1e-10);
    // beta = -(pi/8) int sech^2(pi z/4) e^{lambda z} = -2 lambda / sin(2 lambda)
    const cplx beta = -2.0 * lambda / std::sin(2.0 * lambda);
    Eigen::VectorXcd e(lg.nodes);
    for (int k = 0; k < lg.nodes; ++k) e[k] = (std::exp(lambda * lg.z[k]) + beta) * lg.w[k];
    e /= lg.norm(e);
    Eigen::VectorXcd pe(lg.nodes);
    for (int k = 0; k < lg.nodes; ++k) pe[k] = std::conj(e[k]) * p.values[k];
    CHECK(std::abs(lg.integrate(pe)) == doctest::Approx(1.0).epsilon(1e-9));
  }
  const auto zero = d0_eigenfunction(0.0, lg);
  CHECK(std::abs(zero.values[lg.nodes / 2] - lg.w[lg.nodes / 2] / lg.norm(Eigen::Map<const Eigen::VectorXd>(lg.w.data(), lg.nodes).cast<cplx>())) < 1e-12);
  CHECK_THROWS_AS(d0_eigenfunction(cplx(0.8), lg), DomainError);
}

TEST_CASE("A eigenfunctions inside the strip") {
  const Grid g(128);
  for (cplx lambda : {cplx(0.3), cplx(-0.5), cplx(0.1, 1.5)}) {
    CAPTURE(lambda);
    const auto p = a_eigenfunction(lambda, g);
    CHECK(p.residual_norm < 1e-4);
    CHECK(p.wronskian_relative < 1e-8);
    CHECK(p.constraint_residual < 1e-8);
    CHECK(p.values.size() == 255);
  }
  CHECK_THROWS_AS(a_eigenfunction(0.0, g), DomainError);
  CHECK_THROWS_AS(a_eigenfunction(cplx(kPi / 4), g), DomainError);
}

TEST_CASE("f2 square integrability switches at |Re lambda| = pi/4") {
  // |f2|^2 ~ x^{-4|Re lambda|/pi} at one end, so the square-norm increments
  // per factor 100 in x_min scale like 100^{4|Re lambda|/pi - 1}
  for (double re : {0.3, -0.6, 0.6, 1.0, -1.0, 1.4}) {
    CAPTURE(re);
    const double a = std::pow(f2_truncated_norm(re, 1e-6), 2);
    const double b = std::pow(f2_truncated_norm(re, 1e-8), 2);
    const double c = std::pow(f2_truncated_norm(re, 1e-10), 2);
    const double ratio = (c - b) / (b - a);
    CHECK(ratio == doctest::Approx(std::pow(100.0, 4.0 * std::abs(re) / kPi - 1.0)).epsilon(0.05));
    CHECK((ratio < 1.0) == (std::abs(re) < kPi / 4));
  }
  CHECK_THROWS_AS(f2_truncated_norm(0.0, 1e-4), DomainError);
}

TEST_CASE("resolvent bound outside the strip") {
  CHECK(resolvent_constant() == doctest::Approx(1.0 + 2.0 / std::sqrt(3.0)));
  const CrestGrid cg(Grid(64));
  const auto g = sampled(cg, [](double y) { return std::cos(y) + 0.5 * std::sin(3.0 * y); });
  for (cplx lambda : {cplx(2.0), cplx(-1.5, 0.5), cplx(1.0, 3.0)}) {
    CAPTURE(lambda);
    const auto r = resolvent_probe(lambda, cg, g);
    CHECK(r.bound_ratio <= 1.0);
    CHECK_FALSE(r.near_singular);
    CHECK(rel(cg, apply_A(cg, r.f) - lambda * r.f, g) < 1e-10);
  }
  CHECK_THROWS_AS(resolvent_probe(0.5, cg, g), DomainError);
}

TEST_CASE("strip report") {
  CHECK(classify_strip(0.3) == StripClass::interior);
  CHECK(classify_strip(kPi / 4) == StripClass::boundary);
  CHECK(classify_strip(cplx(-kPi / 4, 2.0)) == StripClass::boundary);
  CHECK(classify_strip(1.0) == StripClass::resolvent);
  const auto rows = strip_report(Grid(64), {0.0, 0.3, kPi / 4, 2.0});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].status == "kernel: 1 and x - pi");
  CHECK(rows[1].status == "eigenfunction");
  CHECK(rows[2].status == "untested: boundary of strip");
  CHECK(std::isnan(rows[2].value));
  CHECK(rows[3].status == "bound holds");
  CHECK(strip_verdict(rows));
  auto bad = rows;
  bad[1].ok = false;
  CHECK_FALSE(strip_verdict(bad));
}
