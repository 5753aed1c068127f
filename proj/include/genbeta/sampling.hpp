#pragma once

// Seeded samplers: Haar orthogonal matrices, noncentral matrix gamma
// variates with half-integer shape, and the beta / bimatrix constructions
// built from them.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "genbeta/matrixkit.hpp"
#include "genbeta/rng.hpp"

namespace genbeta {

inline Matrix sample_gaussian_matrix(int rows, int cols, Rng& rng) {
  Matrix G(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) G(i, j) = rng.normal();
  return G;
}

// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the sign
// of diag(R) pushed into Q.
inline Matrix sample_haar_orthogonal(int m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("sample_haar_orthogonal: m >= 1");
  Matrix G = sample_gaussian_matrix(m, m, rng);
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ();
  Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < m; ++j)
    if (R(j, j) < 0) Q.col(j) *= -1.0;
  return Q;
}

// A ~ G_m(a, I, Omega) with 2a a positive integer and 2a >= m:
// A = (M + E/sqrt(2))'(M + E/sqrt(2)) where E is n x m standard Gaussian and
// M stacks Omega^{1/2} over zeros.  Any M with M'M = Omega is equivalent in
// law; this one is fixed for reproducibility.
inline Matrix sample_matgamma(double a, const Matrix& Omega, int m, Rng& rng) {
  double n_real = 2.0 * a;
  int n = static_cast<int>(std::lround(n_real));
  if (std::abs(n_real - n) > 1e-9 || n < 1)
    throw std::invalid_argument("sample_matgamma: 2a must be a positive integer");
  if (n < m) throw std::invalid_argument("sample_matgamma: requires 2a >= m");
  if (Omega.rows() != m || Omega.cols() != m || !is_positive_semidefinite(Omega))
    throw std::invalid_argument("sample_matgamma: Omega must be m x m PSD");
  Matrix X = sample_gaussian_matrix(n, m, rng) / std::sqrt(2.0);
  X.topRows(m) += psd_sqrt(Omega);
  return symmetrize(X.transpose() * X);
}

enum class BetaDefinition { kDef1 = 1, kDef2 = 2 };
enum class BetaType { kTypeI, kTypeII };

// The beta matrix built from two independent gamma draws, eqs. (4)/(6).
inline Matrix construct_beta(const Matrix& A, const Matrix& B, BetaDefinition def,
                             BetaType type) {
  if (!is_positive_definite(A) || !is_positive_definite(B))
    throw std::domain_error("construct_beta: inputs must be positive definite");
  if (type == BetaType::kTypeI) {
    if (def == BetaDefinition::kDef1) {
      Matrix S = spd_inv_sqrt(A + B);
      return symmetrize(S * A * S);
    }
    Matrix R = spd_sqrt(A);
    return symmetrize(R * (A + B).inverse() * R);
  }
  if (def == BetaDefinition::kDef1) {
    Matrix S = spd_inv_sqrt(B);
    return symmetrize(S * A * S);
  }
  Matrix R = spd_sqrt(A);
  return symmetrize(R * B.inverse() * R);
}

// U1 = (A+C)^{-1/2} A (A+C)^{-1/2}, U2 = (B+C)^{-1/2} B (B+C)^{-1/2}
inline std::pair<Matrix, Matrix> construct_bgb1(const Matrix& A, const Matrix& B,
                                                const Matrix& C) {
  Matrix S1 = spd_inv_sqrt(A + C);
  Matrix S2 = spd_inv_sqrt(B + C);
  return {symmetrize(S1 * A * S1), symmetrize(S2 * B * S2)};
}

// F1 = C^{-1/2} A C^{-1/2}, F2 = C^{-1/2} B C^{-1/2}
inline std::pair<Matrix, Matrix> construct_bgb2(const Matrix& A, const Matrix& B,
                                                const Matrix& C) {
  Matrix S = spd_inv_sqrt(C);
  return {symmetrize(S * A * S), symmetrize(S * B * S)};
}

}  // namespace genbeta
