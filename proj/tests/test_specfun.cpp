#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "peakwave/errors.hpp"
#include "peakwave/specfun.hpp"

using namespace peakwave;

TEST_CASE("elliptic E at the ends of its range") {
  CHECK(complete_elliptic_E(0.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(complete_elliptic_E(1.0) == 1.0);
}

TEST_CASE("elliptic E matches Gauss-Legendre of the defining integral") {
  // 40-digit reference for kappa = 0.5.
  CHECK(std::abs(complete_elliptic_E(0.5) - 1.4674622093394271555) < 1e-15);
  CHECK(std::abs(complete_elliptic_E(0.5) - oracle::elliptic_E(0.5)) < 1e-13);
  for (int i = 1; i <= 9; ++i) {
    const double k = 0.1 * i;
    CAPTURE(k);
    CHECK(std::abs(complete_elliptic_E(k) - oracle::elliptic_E(k)) < 1e-13);
  }
}

TEST_CASE("elliptic E agrees with adaptive quadrature") {
  for (int i = 1; i <= 9; ++i) {
    const double k = 0.1 * i;
    const auto q = adaptive_quad([&](double t) { return std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t)); }, 0.0,
                                 std::numbers::pi / 2, 1e-14);
    CHECK(std::abs(q.value - complete_elliptic_E(k)) < 1e-12);
  }
}

TEST_CASE("elliptic E rejects arguments outside [0, 1]") {
  CHECK_THROWS_AS(complete_elliptic_E(-0.1), DomainError);
  CHECK_THROWS_AS(complete_elliptic_E(1.0000001), DomainError);
  CHECK_THROWS_AS(complete_elliptic_E(std::nan("")), DomainError);
}

TEST_CASE("adaptive quadrature on reference integrals") {
  const auto one = adaptive_quad([](double) { return 1.0; }, 0.0, 1.0, 1e-14);
  CHECK(std::abs(one.value - 1.0) < 1e-14);
  CHECK(one.evaluations >= 1);
  CHECK(one.error_estimate >= 0.0);

  const auto arcsine = adaptive_quad([](double x) { return 1.0 / std::sqrt(1.0 - x * x); }, 0.0, 1.0, 1e-13);
  CHECK(std::abs(arcsine.value - std::numbers::pi / 2) < 1e-12);

  QuadOptions plain;
  plain.sqrt_endpoint_substitution = false;
  const auto sech = adaptive_quad(
      [](double x) {
        const double s = 1.0 / std::cosh(std::numbers::pi * x / 4.0);
        return s * s;
      },
      -50.0, 50.0, 1e-13, plain);
  CHECK(std::abs(sech.value - 8.0 / std::numbers::pi) < 1e-12);
}

TEST_CASE("adaptive quadrature sees endpoint distances without cancellation") {
  // 1/sqrt((1-x)(1+x)) near x = 1 with the distance supplied directly.
  const auto r = adaptive_quad(
      [](const QuadPoint& q) { return 1.0 / std::sqrt(q.to_upper * (2.0 - q.to_upper)); }, 1.0 - 1e-6, 1.0, 1e-15);
  CHECK(std::abs(r.value - (std::numbers::pi / 2 - std::asin(1.0 - 1e-6))) < 1e-14);
}

TEST_CASE("adaptive quadrature is linear") {
  auto f = [](double x) { return std::exp(-x) * std::cos(3.0 * x); };
  auto g = [](double x) { return 1.0 / (1.0 + x * x); };
  const double tol = 1e-12, a = 2.5, b = -0.75;
  const double lhs = adaptive_quad([&](double x) { return a * f(x) + b * g(x); }, 0.0, 2.0, tol).value;
  const double rhs = a * adaptive_quad(f, 0.0, 2.0, tol).value + b * adaptive_quad(g, 0.0, 2.0, tol).value;
  CHECK(std::abs(lhs - rhs) <= 10.0 * tol);
}

TEST_CASE("adaptive quadrature of complex integrands") {
  const std::complex<double> lam(0.3, 0.5);
  const auto r = adaptive_quad([&](double x) { return std::exp(lam * x); }, 0.0, 1.0, 1e-14);
  CHECK(std::abs(r.value - (std::exp(lam) - 1.0) / lam) < 1e-14);
}

TEST_CASE("adaptive quadrature errors") {
  CHECK_THROWS_AS(adaptive_quad([](double) { return 1.0; }, 1.0, 0.0, 1e-10), DomainError);
  CHECK_THROWS_AS(adaptive_quad([](double) { return 1.0; }, 0.0, 1.0, 0.0), DomainError);
  QuadOptions tight;
  tight.max_evaluations = 200;
  tight.sqrt_endpoint_substitution = false;
  CHECK_THROWS_AS(adaptive_quad([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0, 1e-14, tight),
                  ConvergenceError);
}
