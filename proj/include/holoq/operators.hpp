#ifndef HOLOQ_OPERATORS_HPP
#define HOLOQ_OPERATORS_HPP

// Dense complex matrix helpers for the 3x3 / 6x6 operators used throughout:
// Hermitian matrix exponentials, norms and unitarity/Hermiticity checks.
// Basis convention: index 0 <-> |0>, 1 <-> |1>, 2 <-> |e>.

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "holoq/errors.hpp"

namespace holoq {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kHermTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;

inline bool is_hermitian(const Mat& a, double tol = kHermTol) {
  const double scale = std::max(a.norm(), 1.0);
  return (a - a.adjoint()).norm() <= tol * scale;
}

inline bool is_unitary(const Mat& a, double tol = kUnitaryTol) {
  const Mat res = a.adjoint() * a - Mat::Identity(a.rows(), a.cols());
  return res.norm() <= tol;
}

// e^{-iHt} via spectral decomposition; exact for the small Hermitian
// generators used here.
inline Mat expm_hermitian(const Mat& h, double t) {
  if (!is_hermitian(h)) {
    throw InvalidOperator("expm_hermitian: generator is not Hermitian");
  }
  if (!std::isfinite(t)) {
    throw InvalidArgument("expm_hermitian: non-finite duration");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const Eigen::VectorXd& lam = es.eigenvalues();
  Vec phases(lam.size());
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    phases(k) = std::exp(cplx(0.0, -lam(k) * t));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline double frobenius_distance(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("frobenius_distance: dimension mismatch");
  }
  return (a - b).norm();
}

// min over chi of ||A - e^{i chi} B||_F; the minimizer is chi = arg tr(B^dag A).
inline double global_phase_distance(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("global_phase_distance: dimension mismatch");
  }
  const cplx overlap = (b.adjoint() * a).trace();
  const double chi = std::arg(overlap);
  return (a - std::exp(cplx(0.0, chi)) * b).norm();
}

}  // namespace holoq

#endif
