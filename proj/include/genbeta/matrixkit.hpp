#pragma once

// Small dense symmetric-matrix toolkit: positive definiteness, symmetric
// square roots, interval checks and trace-word evaluation.  Everything here
// is sized for the m <= 6 regime the series machinery supports.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace genbeta {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Relative eigenvalue floor: a matrix counts as PD when every eigenvalue
// exceeds pd_tol times the spectral radius.  Relative so behavior is
// scale-free.
inline constexpr double kPdTol = 1e-10;

inline Matrix symmetrize(const Matrix& A) { return 0.5 * (A + A.transpose()); }

inline bool is_symmetric(const Matrix& A, double tol = 1e-12) {
  if (A.rows() != A.cols()) return false;
  double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  return (A - A.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

inline Vector sym_eigenvalues(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(S), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline bool is_positive_definite(const Matrix& S, double pd_tol = kPdTol) {
  Vector ev = sym_eigenvalues(S);
  double radius = ev.cwiseAbs().maxCoeff();
  if (radius == 0.0) return false;
  return ev.minCoeff() > pd_tol * radius;
}

inline bool is_positive_semidefinite(const Matrix& S, double pd_tol = kPdTol) {
  Vector ev = sym_eigenvalues(S);
  double radius = ev.cwiseAbs().maxCoeff();
  if (radius == 0.0) return true;  // zero matrix is admissible noncentrality
  return ev.minCoeff() > -pd_tol * radius;
}

// Symmetric power S^p of a positive definite matrix through its spectral
// decomposition; spd_sqrt and spd_inv_sqrt are the cases p = 1/2, -1/2.
inline Matrix spd_power(const Matrix& S, double p, double pd_tol = kPdTol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(S));
  const Vector& ev = es.eigenvalues();
  double radius = ev.cwiseAbs().maxCoeff();
  if (radius == 0.0 || ev.minCoeff() <= pd_tol * radius)
    throw std::domain_error("spd_power: matrix is not positive definite");
  Vector powered = ev.array().pow(p);
  return es.eigenvectors() * powered.asDiagonal() * es.eigenvectors().transpose();
}

inline Matrix spd_sqrt(const Matrix& S) { return spd_power(S, 0.5); }
inline Matrix spd_inv_sqrt(const Matrix& S) { return spd_power(S, -0.5); }

// PSD square root that tolerates zero eigenvalues (noncentrality matrices
// may be singular, including Omega = 0).
inline Matrix psd_sqrt(const Matrix& S, double pd_tol = kPdTol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(S));
  Vector ev = es.eigenvalues();
  double radius = ev.cwiseAbs().maxCoeff();
  if (radius > 0.0 && ev.minCoeff() < -pd_tol * radius)
    throw std::domain_error("psd_sqrt: matrix has negative eigenvalues");
  Vector r = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * r.asDiagonal() * es.eigenvectors().transpose();
}

// True iff 0 < U < I_m: both U and I - U positive definite.
inline bool interval_check(const Matrix& U, double pd_tol = kPdTol) {
  if (U.rows() != U.cols()) return false;
  Matrix I = Matrix::Identity(U.rows(), U.cols());
  return is_positive_definite(U, pd_tol) && is_positive_definite(I - U, pd_tol);
}

// log |A| for positive definite A via Cholesky.
inline double spd_logdet(const Matrix& A) {
  Eigen::LLT<Matrix> llt(symmetrize(A));
  if (llt.info() != Eigen::Success)
    throw std::domain_error("spd_logdet: matrix is not positive definite");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

// tr(args[word[0]] args[word[1]] ...) in word order.  Letters are 0-based
// indices into args; all arguments must share one dimension.
inline double trace_word(const std::vector<int>& word,
                         const std::vector<const Matrix*>& args) {
  if (word.empty()) throw std::invalid_argument("trace_word: empty word");
  const Eigen::Index m = args.at(static_cast<std::size_t>(word[0]))->rows();
  for (const Matrix* a : args)
    if (a->rows() != m || a->cols() != m)
      throw std::invalid_argument("trace_word: dimension mismatch");
  if (word.size() == 1) return args[static_cast<std::size_t>(word[0])]->trace();
  Matrix P = *args[static_cast<std::size_t>(word[0])];
  for (std::size_t i = 1; i + 1 < word.size(); ++i)
    P = P * (*args[static_cast<std::size_t>(word[i])]);
  return (P * (*args[static_cast<std::size_t>(word.back())])).trace();
}

}  // namespace genbeta
