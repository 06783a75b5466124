#pragma once

// Linearized operators around the peaked wave: A, its truncation A0, the line
// operator D0, closed-form strip eigenfunctions and resolvent probes.
//
// Grid functions live on the crest frame y_k = k h, k = 0..2N, i.e. the grid
// nodes taken mod 2pi so the crest sits at both ends. Samples 0 and 2N are
// the one-sided crest values f(0+) and f(2pi-); they may differ.

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "peakwave/waveprofile.hpp"

namespace peakwave {

using cplx = std::complex<double>;

enum class StripClass { interior, boundary, resolvent };
const char* to_string(StripClass c);
StripClass classify_strip(cplx lambda);

/// 1 + 4 sqrt(2 pi) ||eta*'|| / pi^2 = 1 + 2/sqrt(3).
double resolvent_constant();

class CrestGrid {
 public:
  explicit CrestGrid(const Grid& grid);

  int n_half() const { return n_; }
  int samples() const { return 2 * n_ + 1; }
  double step() const { return h_; }
  const std::vector<double>& y() const { return y_; }
  /// c*^2 - 2 eta* = y (2pi - y) / 4.
  const std::vector<double>& coefficient() const { return a_; }
  /// eta*' = (y - pi)/4 with the one-sided crest values at both ends.
  const std::vector<double>& slope() const { return slope_; }

  Eigen::VectorXcd sample(const std::vector<double>& values) const;
  /// Grid order (j = -N..N) to crest order; node 0 fills both crest samples.
  Eigen::VectorXcd from_grid(const std::vector<double>& grid_values) const;

  cplx integrate(const Eigen::VectorXcd& f) const;  // trapezoid, half weights at the crest
  double norm(const Eigen::VectorXcd& f) const;

  /// Jump-corrected spectral derivative.
  Eigen::VectorXcd derivative(const Eigen::VectorXcd& f) const;
  /// 1/2 Pi0 d^{-1} Pi0 f.
  Eigen::VectorXcd apply_K(const Eigen::VectorXcd& f) const;

  /// Dense forms of derivative() and apply_K() acting on all 2N+1 samples.
  Eigen::MatrixXd derivative_matrix() const;
  Eigen::MatrixXd K_matrix() const;

 private:
  int n_;
  double h_;
  std::vector<double> y_, a_, slope_, sigma_, primitive_;
  std::vector<double> diff_, inv_;  // circulant rows by offset
  Eigen::VectorXcd periodic_part(const Eigen::VectorXcd& f, cplx& jump) const;
  Eigen::VectorXcd circulant(const std::vector<double>& row, const Eigen::VectorXcd& g) const;
};

Eigen::VectorXcd apply_A(const CrestGrid& cg, const Eigen::VectorXcd& f);
Eigen::VectorXcd apply_A0(const CrestGrid& cg, const Eigen::VectorXcd& f);
Eigen::MatrixXcd A_matrix(const CrestGrid& cg);

double coord_map(double z);
double coord_map_inverse(double x);

struct LineGrid {
  double half_width = 40.0;
  int nodes = 4096;

  LineGrid();
  LineGrid(double z_max, int n);
  double spacing() const { return 2.0 * half_width / (nodes - 1); }
  std::vector<double> z, w;

  cplx integrate(const Eigen::VectorXcd& f) const;  // trapezoid
  double norm(const Eigen::VectorXcd& f) const;
};

struct D0Result {
  Eigen::VectorXcd values;
  bool tail_warning = false;  // |h(+-Z)| > 1e-8
};
D0Result apply_D0(const LineGrid& grid, const Eigen::VectorXcd& h);

struct SpectralProbe {
  cplx lambda;
  Eigen::VectorXcd values;  // A: interior crest samples 1..2N-1; D0: line nodes
  double residual_norm = 0.0;
  double constraint_residual = 0.0;
  double wronskian_deviation = 0.0;  // A only, max over interior nodes
  double wronskian_relative = 0.0;
};

SpectralProbe d0_eigenfunction(cplx lambda, const LineGrid& grid);

struct AEigenOptions {
  double x_min_fraction = 1e-6;  // x_min = fraction * 2 pi
  double rtol = 1e-10;
};
SpectralProbe a_eigenfunction(cplx lambda, const Grid& grid, const AEigenOptions& opt = {});

/// sqrt of the integral of |f2|^2 over (x_min, 2pi - x_min), f2 normalized by
/// W(pi) = 1. Defined for any lambda != 0.
double f2_truncated_norm(cplx lambda, double x_min, double rtol = 1e-10);

struct ResolventResult {
  Eigen::VectorXcd f;
  double bound_ratio = 0.0;
  double condition = 0.0;
  bool near_singular = false;
};

class ResolventSolver {
 public:
  ResolventSolver(cplx lambda, const CrestGrid& cg);
  ResolventResult solve(const Eigen::VectorXcd& g) const;
  double condition() const { return condition_; }

 private:
  cplx lambda_;
  const CrestGrid& cg_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  double condition_ = 0.0;
};

ResolventResult resolvent_probe(cplx lambda, const CrestGrid& cg, const Eigen::VectorXcd& g);

struct StripRow {
  cplx lambda;
  StripClass cls = StripClass::interior;
  double value = 0.0;  // eigen-residual (interior) or bound ratio (resolvent)
  std::string status;
  bool ok = true;
};

struct StripOptions {
  int jobs = 1;
  double residual_tol = 1e-4;
  double kernel_tol = 1e-3;
};

std::vector<StripRow> strip_report(const Grid& grid, const std::vector<cplx>& samples,
                                   const StripOptions& opt = {});
bool strip_verdict(const std::vector<StripRow>& rows);

}  // namespace peakwave
