#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "peakwave/errors.hpp"
#include "peakwave/hessian.hpp"

using namespace peakwave;

namespace {

double max_asymmetry(const Eigen::MatrixXd& m) { return (m - m.transpose()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("constant-coefficient FD matrix is the circulant second difference") {
  const int n = 64;
  const Grid g(n);
  const auto L = assemble_L_fd_constant(g, 1.0);
  const double h = g.step();
  REQUIRE(L.dimension() == 2 * n);
  CHECK(L.real(0, 0) == doctest::Approx(2.0 / (h * h) - 1.0));
  CHECK(L.real(0, 1) == doctest::Approx(-1.0 / (h * h)));
  CHECK(L.real(0, 2 * n - 1) == doctest::Approx(-1.0 / (h * h)));
  CHECK(max_asymmetry(L.real) == 0.0);

  const auto sp = eig(L);
  std::vector<double> closed;
  for (int k = -n; k < n; ++k) closed.push_back((2.0 - 2.0 * std::cos(k * h)) / (h * h) - 1.0);
  std::sort(closed.begin(), closed.end());
  for (int i = 0; i < 2 * n; ++i) CHECK(std::abs(sp.eigenvalues[i].real() - closed[i]) < 1e-10);
  // n^2 - 1 up to O(h^2) for low modes
  CHECK(std::abs(sp.eigenvalues[0].real() + 1.0) < 1e-12);
  CHECK(std::abs(sp.eigenvalues[1].real() - 0.0) < 1e-3);
  CHECK(std::abs(sp.eigenvalues[3].real() - 3.0) < 1e-2);
}

TEST_CASE("identity matrix spectrum") {
  OperatorMatrix m;
  m.basis = Basis::physical;
  m.symmetric = true;
  m.real = Eigen::MatrixXd::Identity(6, 6);
  const auto sp = eig(m);
  for (const auto& l : sp.eigenvalues) CHECK(l == std::complex<double>(1.0));
}

TEST_CASE("FD Hessian of a smooth wave") {
  const auto prof = smooth_profile(1.03, Grid(100));
  const auto L = assemble_L_fd(prof);
  CHECK(L.symmetric);
  CHECK(max_asymmetry(L.real) == 0.0);
  const auto sp = eig(L);
  for (const auto& l : sp.eigenvalues) CHECK(std::abs(l.imag()) <= 1e-10);
  for (int k = 0; k < 4; ++k) CHECK(sp.residuals[k] < 1e-9);
  // translation mode decays at O(h^2)
  const auto fine = eigenvalues(assemble_L_fd(smooth_profile(1.03, Grid(200))));
  const double r = std::abs(sp.eigenvalues[2].real()) / std::abs(fine[2].real());
  CHECK(r == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("W0 equals 2 eta'' - 1 from a centered difference") {
  const int n = 400;
  const auto prof = smooth_profile(1.05, Grid(n));
  const double c2 = 1.05 * 1.05, e = prof.params.energy, h = prof.grid.step();
  for (int j : {-200, -37, 1, 90, 333}) {
    const double eta = prof.values[j + n];
    const double q = c2 - 2.0 * eta;
    const double w0 = (4.0 * e + 2.0 * eta * eta - 2.0 * c2 * eta) / (q * q) - 1.0;
    const double dd = (prof.values[j + n + 1] - 2.0 * eta + prof.values[j + n - 1]) / (h * h);
    CHECK(std::abs(w0 - (2.0 * dd - 1.0)) < 1e-3);
  }
}

TEST_CASE("translation mode residual of L applied to the profile slope") {
  double prev = 0.0;
  for (int n : {100, 200}) {
    const auto prof = smooth_profile(1.03, Grid(n));
    const auto L = assemble_L_fd(prof);
    Eigen::VectorXd d(2 * n);
    const double h = prof.grid.step();
    for (int i = 0; i < 2 * n; ++i) {
      const int ip = (i + 1) % (2 * n), im = (i + 2 * n - 1) % (2 * n);
      d[i] = (prof.values[ip] - prof.values[im]) / (2.0 * h);
    }
    const double r = (L.real * d).norm() / d.norm();
    if (prev > 0.0) CHECK(prev / r == doctest::Approx(4.0).epsilon(0.1));
    prev = r;
  }
}

TEST_CASE("degenerate coefficient and peaked input are rejected") {
  auto prof = smooth_profile(1.03, Grid(32));
  CHECK_THROWS_AS(assemble_L_fd(peaked_profile(Grid(32))), DomainError);
  prof.values[32] = 0.6;  // c^2 - 2 eta < 0
  CHECK_THROWS_AS(assemble_L_fd(prof), DegenerateCoefficientError);
}

TEST_CASE("Fourier Hessian structure") {
  SUBCASE("zero profile gives the diagonal n^2 c^2 - 1") {
    FourierCoeffs zero;
    zero.n_half = 8;
    zero.coeffs.assign(17, 0.0);
    const auto L = assemble_L_fourier(zero, 1.0);
    for (int a = 0; a < 17; ++a)
      for (int b = 0; b < 17; ++b) {
        const double n = b - 8;
        CHECK(std::abs(L.complex(a, b) - (a == b ? n * n - 1.0 : 0.0)) < 1e-15);
      }
  }
  SUBCASE("reality symmetry for a real profile") {
    const auto prof = smooth_profile(1.05, Grid(32));
    const auto L = assemble_L_fourier(dft(prof.values), 1.05);
    const int d = 65;
    const double scale = L.complex.cwiseAbs().maxCoeff();
    double worst = 0.0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        worst = std::max(worst, std::abs(std::conj(L.complex(d - 1 - a, d - 1 - b)) - L.complex(a, b)));
    CHECK(worst < 1e-14 * scale);
  }
}

TEST_CASE("Fourier and FD eigenvalues agree and converge") {
  const double c = 1.03;
  double prev = 1.0;
  for (int n : {50, 100, 200}) {
    const auto prof = smooth_profile(c, Grid(n));
    const auto fd = eigenvalues(assemble_L_fd(prof));
    const auto fo = eigenvalues(assemble_L_fourier(dft(prof.values), c));
    double dev = 0.0;
    for (int k = 0; k < 4; ++k) dev = std::max(dev, std::abs(fd[k] - fo[k]));
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("identity shift moves every Fourier eigenvalue") {
  const auto prof = smooth_profile(1.05, Grid(32));
  const auto co = dft(prof.values);
  const auto a = eigenvalues(assemble_L_fourier(co, 1.05, -1.0));
  const auto b = eigenvalues(assemble_L_fourier(co, 1.05, -kPi));
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(b[k] - a[k] + (kPi - 1.0)) < 1e-10);
}

TEST_CASE("eigenvector conventions") {
  const auto prof = smooth_profile(1.05, Grid(64));
  for (const auto& L : {assemble_L_fd(prof), assemble_L_fourier(dft(prof.values), 1.05)}) {
    const auto sp = eig(L);
    CHECK(sp.parities[1] == Parity::even);
    CHECK(sp.parities[2] == Parity::odd);
    CHECK(sp.parities[3] == Parity::even);
    for (int k = 0; k < 4; ++k) {
      CHECK(sp.eigenvectors.col(k).norm() == doctest::Approx(1.0));
      CHECK(sp.residuals[k] < 1e-8);
      for (int i = 0; i + 1 < 4; ++i) CHECK(sp.eigenvalues[i].real() <= sp.eigenvalues[i + 1].real());
    }
    // positive slope near -pi
    const Eigen::VectorXcd phys = L.is_real() ? Eigen::VectorXcd(sp.eigenvectors.col(2)) : fourier_to_physical(sp.eigenvectors.col(2));
    CHECK((phys[2] - phys[1]).real() > 0.0);
  }
}

TEST_CASE("peaked regularizations") {
  const Grid g(100);
  const auto fd = assemble_L_peaked(g, Method::fd);
  CHECK(max_asymmetry(fd.real) == 0.0);
  // Gaussian of width h: Poisson summation gives 1 + 2 sum exp(-pi^2 k^2)
  const double alpha = kPi / 100, h = g.step();
  double mass = 0.0;
  for (int j = -100; j < 100; ++j) mass += std::exp(-std::pow(g.node(j) / alpha, 2)) / std::sqrt(kPi * alpha * alpha);
  double poisson = 1.0;
  for (int k = 1; k <= 3; ++k) poisson += 2.0 * std::exp(-kPi * kPi * k * k);
  CHECK(std::abs(mass * h - poisson) < 1e-12);

  const auto sfd = eigenvalues(fd);
  const auto sfo = eigenvalues(assemble_L_peaked(g, Method::fourier));
  CHECK(sfd[0].real() < -10.0);
  CHECK(sfo[0].real() < -10.0);
  CHECK(sfd[1].real() > sfd[0].real() + 10.0);
  // more negative as N grows
  CHECK(eigenvalues(assemble_L_peaked(Grid(200), Method::fd))[0].real() < sfd[0].real());
}

TEST_CASE("sweep rows") {
  SweepOptions opt;
  opt.methods = {Method::fd, Method::fourier};
  opt.include_peaked_endpoint = true;
  opt.jobs = 2;
  const auto rows = eigen_sweep({1.001, 1.05}, Grid(64), opt);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].c == 1.001);
  CHECK(rows[0].method == Method::fd);
  CHECK(rows[1].method == Method::fourier);
  CHECK(rows[4].peaked);
  CHECK(rows[4].c == kCStar);
  for (const auto& r : rows) CHECK(r.ok);
  // small amplitude: (-1, c^2 - 1, c^2 - 1, 4c^2 - 1) up to O(E)
  CHECK(std::abs(rows[0].lambda[0] + 1.0) < 2e-2);
  CHECK(std::abs(rows[0].lambda[3] - 3.0) < 2e-2);
  CHECK_FALSE(rows[0].grey);
  CHECK(rows[4].grey);
}
