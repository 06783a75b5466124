#pragma once

// Hessian operator L = -d/dx (c^2 - 2 eta) d/dx + (2 eta'' - 1) in two
// discretizations, plus the dense eigensolver used on both.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string>
#include <vector>

#include "peakwave/waveprofile.hpp"

namespace peakwave {

enum class Basis { physical, fourier };
enum class Method { fd, fourier };
enum class Parity { even, odd, mixed };

const char* to_string(Basis b);
const char* to_string(Method m);
const char* to_string(Parity p);

/// Dense operator matrix. FD matrices are real (2N x 2N, node x_N dropped);
/// Fourier matrices are complex over modes -N..N.
struct OperatorMatrix {
  Basis basis = Basis::physical;
  bool symmetric = false;
  Eigen::MatrixXd real;
  Eigen::MatrixXcd complex;

  bool is_real() const { return basis == Basis::physical; }
  Eigen::Index dimension() const { return is_real() ? real.rows() : complex.rows(); }
  /// The grid half-size N this matrix was assembled for.
  int n_half() const;
};

struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;
  Eigen::MatrixXcd eigenvectors;  // columns match eigenvalues
  std::vector<Parity> parities;
  std::vector<double> residuals;  // ||L v - lambda v||_2 with ||v||_2 = 1
  Basis basis = Basis::physical;
  double matrix_norm = 0.0;  // Frobenius
};

OperatorMatrix assemble_L_fd(const WaveProfile& profile);
/// identity_shift is the constant multiplied onto I in the potential term;
/// -1 is the consistent value; -pi is kept for comparison.
OperatorMatrix assemble_L_fourier(const FourierCoeffs& coeffs, double c, double identity_shift = -1.0);
OperatorMatrix assemble_L_peaked(const Grid& grid, Method method);

/// Constant-coefficient case eta = 0, E = 0 (used as a reference operator).
OperatorMatrix assemble_L_fd_constant(const Grid& grid, double c);

Spectrum eig(const OperatorMatrix& matrix);
/// Eigenvalues only, same ordering rule without the parity tie-break.
std::vector<std::complex<double>> eigenvalues(const OperatorMatrix& matrix);

/// Sample values of a Fourier-basis eigenvector at x_j, j = -N..N-1.
Eigen::VectorXcd fourier_to_physical(const Eigen::VectorXcd& modes);

struct SweepRow {
  double c = 0.0;
  Method method = Method::fd;
  bool peaked = false;  // regularized endpoint at c*
  std::array<double, 4> lambda{};
  std::array<Parity, 4> parity{};
  std::array<double, 4> residual{};
  bool ok = true;
  bool grey = false;  // cross-method disagreement above threshold
  std::string error;
};

struct SweepOptions {
  std::vector<Method> methods{Method::fd};
  bool include_peaked_endpoint = false;
  double grey_threshold = 1e-2;
  int jobs = 1;
};

std::vector<SweepRow> eigen_sweep(const std::vector<double>& c_values, const Grid& grid,
                                  const SweepOptions& options = {});

}  // namespace peakwave
