#include "peakwave/hessian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "peakwave/detail/parallel.hpp"
#include "peakwave/errors.hpp"

namespace peakwave {

const char* to_string(Basis b) { return b == Basis::physical ? "physical" : "fourier"; }
const char* to_string(Method m) { return m == Method::fd ? "fd" : "fourier"; }
const char* to_string(Parity p) {
  switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    default: return "mixed";
  }
}

int OperatorMatrix::n_half() const {
  const auto d = dimension();
  return static_cast<int>(is_real() ? d / 2 : (d - 1) / 2);
}

namespace {

// Shared M stencils; w0 supplies the diagonal potential per node.
template <typename W0>
OperatorMatrix fd_matrix(const std::vector<double>& eta, int n, double c, W0&& w0) {
  const int m = 2 * n;
  const double h = kPi / n;
  const double c2 = c * c;
  const double ih2 = 1.0 / (h * h);
  OperatorMatrix out;
  out.basis = Basis::physical;
  out.symmetric = true;
  out.real = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    const int ip = (i + 1) % m, im = (i + m - 1) % m;
    const double e = eta[i], ep = eta[ip], em = eta[im];
    out.real(i, i) += (2.0 * c2 - 2.0 * e - ep - em) * ih2 + w0(i);
    // Grouping (e + ep) keeps entry (i, i+1) bitwise equal to (i+1, i).
    out.real(i, ip) += -(c2 - (e + ep)) * ih2;
    out.real(i, im) += -(c2 - (e + em)) * ih2;
  }
  return out;
}

// Hermitian Fourier matrix: -2 eta_{m-n} (m^2 - mn + n^2) + c^2 n^2 delta + band(m-n).
template <typename Diag, typename Band>
OperatorMatrix fourier_matrix(const FourierCoeffs& co, double c, Diag&& diag, Band&& band) {
  const int n = co.n_half;
  const int dim = 2 * n + 1;
  OperatorMatrix out;
  out.basis = Basis::fourier;
  out.symmetric = true;
  out.complex = Eigen::MatrixXcd::Zero(dim, dim);
  const double c2 = c * c;
  for (int a = -n; a <= n; ++a) {
    for (int b = -n; b <= n; ++b) {
      const int d = a - b;
      std::complex<double> v = 0.0;
      if (std::abs(d) <= n) {
        // 2 Toep(D1 eta) D1 + 2 Toep(eta) D2 collapses to -2 eta_d m n.
        v = -2.0 * co.at(d) * (double(a) * double(b)) + band(d);
      }
      if (a == b) v += c2 * double(b) * double(b) + diag;
      out.complex(a + n, b + n) = v;
    }
  }
  return out;
}

}  // namespace

OperatorMatrix assemble_L_fd(const WaveProfile& profile) {
  if (profile.kind != ProfileKind::smooth)
    throw DomainError("assemble_L_fd: smooth profile required (use assemble_L_peaked)");
  const int n = profile.grid.n_half;
  const double c2 = profile.params.c * profile.params.c;
  const double e4 = 4.0 * profile.params.energy;
  std::vector<double> eta(profile.values.begin(), profile.values.end() - 1);
  for (int i = 0; i < 2 * n; ++i) {
    if (c2 - 2.0 * eta[i] <= 0.0) {
      std::ostringstream msg;
      msg << "assemble_L_fd: c^2 - 2 eta <= 0 at node " << i - n;
      throw DegenerateCoefficientError(msg.str());
    }
  }
  return fd_matrix(eta, n, profile.params.c, [&](int i) {
    const double e = eta[i];
    const double q = c2 - 2.0 * e;
    return (e4 + 2.0 * e * e - 2.0 * c2 * e) / (q * q) - 1.0;
  });
}

OperatorMatrix assemble_L_fd_constant(const Grid& grid, double c) {
  std::vector<double> eta(2 * grid.n_half, 0.0);
  return fd_matrix(eta, grid.n_half, c, [](int) { return -1.0; });
}

OperatorMatrix assemble_L_fourier(const FourierCoeffs& coeffs, double c, double identity_shift) {
  // 2 eta'' - 1: the Toeplitz band of -m^2 eta_m doubled, minus the identity.
  return fourier_matrix(coeffs, c, identity_shift, [&](int d) { return -2.0 * double(d) * double(d) * coeffs.at(d); });
}

OperatorMatrix assemble_L_peaked(const Grid& grid, Method method) {
  const auto prof = peaked_profile(grid);
  const int n = grid.n_half;
  if (method == Method::fd) {
    std::vector<double> eta(prof.values.begin(), prof.values.end() - 1);
    const double alpha = kPi / n;
    const double norm = 1.0 / std::sqrt(kPi * alpha * alpha);
    return fd_matrix(eta, n, kCStar, [&](int i) {
      const double x = grid.node(i - n);
      return -0.5 - kPi * norm * std::exp(-(x * x) / (alpha * alpha));
    });
  }
  // 2 eta*'' - 1 = -1/2 - pi delta_0; every mode of delta_0 is 1/(2 pi).
  return fourier_matrix(dft(prof.values), kCStar, -0.5, [](int) { return std::complex<double>(-0.5); });
}

Eigen::VectorXcd fourier_to_physical(const Eigen::VectorXcd& modes) {
  FourierCoeffs co;
  co.n_half = static_cast<int>((modes.size() - 1) / 2);
  co.coeffs.assign(modes.data(), modes.data() + modes.size());
  const auto vals = inverse_dft(co);
  return Eigen::Map<const Eigen::VectorXcd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

namespace {

Parity classify(const Eigen::VectorXcd& v, Basis basis) {
  const Eigen::Index m = v.size();
  double even = 0.0, odd = 0.0, total = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    // physical: node j <-> -j, i.e. i -> (2N - i) mod 2N; fourier: n <-> -n.
    const auto r = v[basis == Basis::physical ? (m - i) % m : m - 1 - i];
    even += std::norm(v[i] - r);
    odd += std::norm(v[i] + r);
    total += std::norm(v[i]);
  }
  const double thr = 1e-6 * std::sqrt(total);
  if (std::sqrt(even) < thr) return Parity::even;
  if (std::sqrt(odd) < thr) return Parity::odd;
  return Parity::mixed;
}

double first_slope(const Eigen::VectorXcd& phys) {
  const double scale = phys.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 1; i + 1 < phys.size(); ++i) {
    const double d = phys[i + 1].real() - phys[i].real();
    if (std::abs(d) > 1e-10 * scale) return d;
  }
  return 1.0;
}

void normalize_vector(Eigen::Ref<Eigen::VectorXcd> v, Basis basis) {
  v.normalize();
  if (basis == Basis::fourier) {
    Eigen::VectorXcd phys = fourier_to_physical(v);
    Eigen::Index k = 0;
    phys.cwiseAbs().maxCoeff(&k);
    const auto phase = std::polar(1.0, -std::arg(phys[k]));
    v *= phase;
    phys *= phase;
    if (first_slope(phys) < 0.0) v = -v;
  } else if (first_slope(v) < 0.0) {
    v = -v;
  }
}

bool hermitian(const Eigen::MatrixXcd& a) {
  const double scale = a.cwiseAbs().maxCoeff();
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

}  // namespace

Spectrum eig(const OperatorMatrix& matrix) {
  Spectrum sp;
  sp.basis = matrix.basis;
  const Eigen::Index dim = matrix.dimension();
  if (dim == 0) throw DomainError("eig: empty matrix");
  Eigen::VectorXcd values(dim);
  Eigen::MatrixXcd vectors(dim, dim);

  auto fail = [](const char* which, int max_it) {
    std::ostringstream msg;
    msg << "eig: " << which << " did not converge within " << max_it << " iterations per eigenvalue";
    throw ConvergenceError(msg.str());
  };

  if (matrix.is_real()) {
    sp.matrix_norm = matrix.real.norm();
    if (matrix.symmetric) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix.real);
      if (es.info() != Eigen::Success) fail("symmetric QR", Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>::m_maxIterations);
      values = es.eigenvalues().cast<std::complex<double>>();
      vectors = es.eigenvectors().cast<std::complex<double>>();
    } else {
      Eigen::EigenSolver<Eigen::MatrixXd> es(matrix.real);
      if (es.info() != Eigen::Success) fail("real Schur", 40);
      values = es.eigenvalues();
      vectors = es.eigenvectors();
    }
  } else {
    sp.matrix_norm = matrix.complex.norm();
    if (hermitian(matrix.complex)) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix.complex);
      if (es.info() != Eigen::Success) fail("Hermitian QR", Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>::m_maxIterations);
      values = es.eigenvalues().cast<std::complex<double>>();
      vectors = es.eigenvectors();
    } else {
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(matrix.complex);
      if (es.info() != Eigen::Success) fail("complex Schur", 30);
      values = es.eigenvalues();
      vectors = es.eigenvectors();
    }
  }

  std::vector<Parity> parity(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    normalize_vector(vectors.col(k), matrix.basis);
    parity[k] = classify(vectors.col(k), matrix.basis);
  }

  std::vector<Eigen::Index> order(dim);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (values[a].real() != values[b].real()) return values[a].real() < values[b].real();
    if (values[a].imag() != values[b].imag()) return values[a].imag() < values[b].imag();
    return static_cast<int>(parity[a]) < static_cast<int>(parity[b]);
  });

  sp.eigenvalues.resize(dim);
  sp.parities.resize(dim);
  sp.eigenvectors.resize(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    sp.eigenvalues[k] = values[order[k]];
    sp.parities[k] = parity[order[k]];
    sp.eigenvectors.col(k) = vectors.col(order[k]);
  }

  Eigen::MatrixXcd lv = matrix.is_real() ? Eigen::MatrixXcd(matrix.real.cast<std::complex<double>>() * sp.eigenvectors)
                                         : Eigen::MatrixXcd(matrix.complex * sp.eigenvectors);
  sp.residuals.resize(dim);
  for (Eigen::Index k = 0; k < dim; ++k)
    sp.residuals[k] = (lv.col(k) - sp.eigenvalues[k] * sp.eigenvectors.col(k)).norm();
  return sp;
}

std::vector<std::complex<double>> eigenvalues(const OperatorMatrix& matrix) {
  Eigen::VectorXcd values;
  if (matrix.is_real() && matrix.symmetric) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix.real, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceError("eigenvalues: symmetric QR did not converge");
    values = es.eigenvalues().cast<std::complex<double>>();
  } else if (matrix.is_real()) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(matrix.real, false);
    if (es.info() != Eigen::Success) throw ConvergenceError("eigenvalues: real Schur did not converge");
    values = es.eigenvalues();
  } else if (hermitian(matrix.complex)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix.complex, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceError("eigenvalues: Hermitian QR did not converge");
    values = es.eigenvalues().cast<std::complex<double>>();
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(matrix.complex, false);
    if (es.info() != Eigen::Success) throw ConvergenceError("eigenvalues: complex Schur did not converge");
    values = es.eigenvalues();
  }
  std::vector<std::complex<double>> out(values.data(), values.data() + values.size());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

std::vector<SweepRow> eigen_sweep(const std::vector<double>& c_values, const Grid& grid,
                                  const SweepOptions& options) {
  const std::size_t per_c = options.methods.size();
  const std::size_t n_points = c_values.size() + (options.include_peaked_endpoint ? 1 : 0);
  std::vector<SweepRow> rows(n_points * per_c);

  auto fill = [](SweepRow& row, const OperatorMatrix& mat) {
    const auto sp = eig(mat);
    for (int k = 0; k < 4; ++k) {
      row.lambda[k] = sp.eigenvalues[k].real();
      row.parity[k] = sp.parities[k];
      row.residual[k] = sp.residuals[k];
    }
  };

  detail::parallel_for(n_points, options.jobs, [&](std::size_t i) {
    const bool peaked = i >= c_values.size();
    const double c = peaked ? kCStar : c_values[i];
    for (std::size_t m = 0; m < per_c; ++m) {
      SweepRow& row = rows[i * per_c + m];
      row.c = c;
      row.method = options.methods[m];
      row.peaked = peaked;
    }
    try {
      if (peaked) {
        for (std::size_t m = 0; m < per_c; ++m) {
          SweepRow& row = rows[i * per_c + m];
          try {
            fill(row, assemble_L_peaked(grid, row.method));
          } catch (const std::exception& ex) {
            row.ok = false;
            row.error = ex.what();
          }
        }
        return;
      }
      const auto prof = smooth_profile(c, grid);
      for (std::size_t m = 0; m < per_c; ++m) {
        SweepRow& row = rows[i * per_c + m];
        try {
          fill(row, row.method == Method::fd ? assemble_L_fd(prof)
                                             : assemble_L_fourier(dft(prof.values), prof.params.c));
        } catch (const std::exception& ex) {
          row.ok = false;
          row.error = ex.what();
        }
      }
    } catch (const std::exception& ex) {
      for (std::size_t m = 0; m < per_c; ++m) {
        rows[i * per_c + m].ok = false;
        rows[i * per_c + m].error = ex.what();
      }
    }
  });

  // Grey zone: both methods present and some lambda_k disagrees.
  if (per_c > 1) {
    for (std::size_t i = 0; i < n_points; ++i) {
      double worst = 0.0;
      bool all_ok = true;
      for (std::size_t a = 0; a < per_c; ++a)
        for (std::size_t b = a + 1; b < per_c; ++b) {
          const auto& ra = rows[i * per_c + a];
          const auto& rb = rows[i * per_c + b];
          all_ok = all_ok && ra.ok && rb.ok;
          for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(ra.lambda[k] - rb.lambda[k]));
        }
      if (all_ok && worst > options.grey_threshold)
        for (std::size_t a = 0; a < per_c; ++a) rows[i * per_c + a].grey = true;
    }
  }
  return rows;
}

}  // namespace peakwave
