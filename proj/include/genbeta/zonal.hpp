#pragma once

// Zonal polynomials C_kappa in the monomial symmetric-function basis, built
// by the classical recurrence on monomial coefficients, normalized so that
// sum_{kappa |- k} C_kappa(X) = (tr X)^k.  Coefficients do not depend on the
// matrix dimension, so one table serves every m; evaluation happens through
// eigenvalues.  Also hosts the truncated matrix-argument hypergeometric
// series 0F0, 0F1, 1F1.

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "genbeta/matrixkit.hpp"
#include "genbeta/partition.hpp"
#include "genbeta/symfun.hpp"

namespace genbeta {

struct ZonalTable {
  int max_degree = 0;
  // C_kappa = sum_lambda monomial[kappa][lambda] m_lambda
  std::map<Partition, MonomialVec> monomial;
  // C_kappa = sum_rho powersum[kappa][rho] p_rho   (same polynomials)
  std::map<Partition, MonomialVec> powersum;
};

namespace detail {

// rho_kappa = sum_i kappa_i (kappa_i - i), the eigenvalue that separates
// partitions of equal weight in the recurrence (1-based i).
inline double rho_kappa(const Partition& kappa) {
  double r = 0;
  for (int i = 0; i < kappa.length(); ++i)
    r += kappa.part(i) * (kappa.part(i) - (i + 1));
  return r;
}

inline double factorial(int n) {
  double v = 1;
  for (int i = 2; i <= n; ++i) v *= i;
  return v;
}

}  // namespace detail

// Builds the coefficient table up to max_degree.  The recurrence determines
// each C_kappa up to scale from its leading monomial coefficient; the scale
// is then fixed per weight by matching the expansion of (tr X)^k.  Power-sum
// coordinates (used by the invariant-polynomial calibration, degree <= 4)
// are converted only up to powersum_degree; the orbit enumeration behind the
// conversion gets expensive past degree ~10.
inline ZonalTable build_zonal_table(int max_degree, int powersum_degree = 8) {
  if (max_degree < 1) throw std::invalid_argument("build_zonal_table: degree >= 1 required");
  ZonalTable table;
  table.max_degree = max_degree;
  table.monomial[Partition{}] = {{Partition{}, 1.0}};
  table.powersum[Partition{}] = {{Partition{}, 1.0}};

  for (int k = 1; k <= max_degree; ++k) {
    std::vector<Partition> parts = enumerate_partitions(k, k);  // revlex order

    // Monic coefficients within each kappa: c[kappa][kappa] = 1 and, for
    // lambda < kappa,
    //   c[kappa][lambda] = sum_{(i,j,t)} ((l_i+t)-(l_j-t)) c[kappa][mu]
    //                      / (rho_kappa - rho_lambda),
    // mu the sorted result of moving t units from row j up to row i,
    // with lambda < mu <= kappa in dominance order.
    std::map<Partition, MonomialVec> monic;
    for (const Partition& kappa : parts) {
      MonomialVec& c = monic[kappa];
      c[kappa] = 1.0;
      for (const Partition& lambda : parts) {
        if (lambda == kappa || !dominated_by(lambda, kappa)) continue;
        double acc = 0.0;
        const int len = lambda.length();
        for (int i = 0; i < len; ++i) {
          for (int j = i + 1; j < len; ++j) {
            for (int t = 1; t <= lambda.part(j); ++t) {
              std::vector<int> mu_raw = lambda.parts();
              mu_raw[static_cast<std::size_t>(i)] += t;
              mu_raw[static_cast<std::size_t>(j)] -= t;
              double weight = mu_raw[static_cast<std::size_t>(i)] -
                              mu_raw[static_cast<std::size_t>(j)];
              Partition mu = detail::exponents_to_partition(std::move(mu_raw));
              if (mu == lambda) continue;
              if (!dominated_by(lambda, mu) || !dominated_by(mu, kappa)) continue;
              auto it = c.find(mu);
              if (it != c.end()) acc += weight * it->second;
            }
          }
        }
        double denom = detail::rho_kappa(kappa) - detail::rho_kappa(lambda);
        if (acc != 0.0) c[lambda] = acc / denom;
      }
    }

    // Normalization: solve sum_kappa s_kappa c[kappa][lambda] = k!/prod(lambda_i!)
    // in revlex order (triangular since c[kappa][lambda] != 0 needs lambda <= kappa).
    std::map<Partition, double> scale;
    for (const Partition& lambda : parts) {
      double rhs = detail::factorial(k);
      for (int i = 0; i < lambda.length(); ++i) rhs /= detail::factorial(lambda.part(i));
      for (const Partition& kappa : parts) {
        if (kappa == lambda) break;  // revlex: all kappa > lambda come first
        auto it = monic[kappa].find(lambda);
        if (it != monic[kappa].end()) rhs -= scale[kappa] * it->second;
      }
      scale[lambda] = rhs;  // monic diagonal = 1
    }

    for (const Partition& kappa : parts) {
      MonomialVec scaled;
      for (const auto& [lambda, coef] : monic[kappa]) scaled[lambda] = scale[kappa] * coef;
      table.monomial[kappa] = std::move(scaled);
    }

    // Power-sum coordinates: solve P z = c with P[lambda][rho] the monomial
    // expansion of p_rho.
    if (k > powersum_degree) continue;
    const int n = static_cast<int>(parts.size());
    Eigen::MatrixXd P(n, n);
    for (int col = 0; col < n; ++col) {
      MonomialVec prho = power_sum_monomials(parts[static_cast<std::size_t>(col)], k);
      for (int row = 0; row < n; ++row) {
        auto it = prho.find(parts[static_cast<std::size_t>(row)]);
        P(row, col) = it == prho.end() ? 0.0 : it->second;
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(P);
    for (const Partition& kappa : parts) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
      for (int row = 0; row < n; ++row) {
        auto it = table.monomial[kappa].find(parts[static_cast<std::size_t>(row)]);
        if (it != table.monomial[kappa].end()) c(row) = it->second;
      }
      Eigen::VectorXd z = lu.solve(c);
      MonomialVec zp;
      for (int row = 0; row < n; ++row)
        if (z(row) != 0.0) zp[parts[static_cast<std::size_t>(row)]] = z(row);
      table.powersum[kappa] = std::move(zp);
    }
  }
  return table;
}

template <typename Scalar>
Scalar zonal_eval_generic(const ZonalTable& table, const Partition& kappa,
                          const std::vector<Scalar>& eigenvalues) {
  if (kappa.weight() > table.max_degree)
    throw std::domain_error("zonal_eval: partition weight exceeds table degree");
  if (kappa.length() > static_cast<int>(eigenvalues.size())) return Scalar(0);
  auto it = table.monomial.find(kappa);
  if (it == table.monomial.end())
    throw std::domain_error("zonal_eval: partition missing from table");
  Scalar v(0);
  for (const auto& [lambda, coef] : it->second)
    v += coef * monomial_eval<Scalar>(lambda, eigenvalues);
  return v;
}

inline double zonal_eval(const ZonalTable& table, const Partition& kappa,
                         const std::vector<double>& eigenvalues) {
  return zonal_eval_generic<double>(table, kappa, eigenvalues);
}

inline double zonal_at_identity(const ZonalTable& table, const Partition& kappa, int m) {
  if (kappa.weight() > table.max_degree)
    throw std::domain_error("zonal_at_identity: weight exceeds table degree");
  if (kappa.length() > m) return 0.0;
  double v = 0;
  for (const auto& [lambda, coef] : table.monomial.at(kappa))
    v += coef * monomial_count_at_identity(lambda, m);
  return v;
}

// Eigenvalues of a general real square matrix, for zonal evaluation at
// non-symmetric arguments (products of PSD factors have real spectra; the
// complex path keeps conjugate pairs honest and returns a real value).
inline std::vector<std::complex<double>> general_eigenvalues(const Matrix& X) {
  if (is_symmetric(X)) {
    Vector ev = sym_eigenvalues(X);
    std::vector<std::complex<double>> out(static_cast<std::size_t>(ev.size()));
    for (Eigen::Index i = 0; i < ev.size(); ++i) out[static_cast<std::size_t>(i)] = ev(i);
    return out;
  }
  Eigen::EigenSolver<Matrix> es(X, false);
  std::vector<std::complex<double>> out(static_cast<std::size_t>(es.eigenvalues().size()));
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return out;
}

struct SeriesValue {
  double value = 0.0;
  int shells_used = 0;
  double last_shell_magnitude = 0.0;
};

// Truncated sum_{k<=D} sum_{kappa|-k} [prod (a_i)_kappa / prod (b_j)_kappa]
// C_kappa(X) / k!.  Supported (p,q): (0,0), (0,1), (1,1).  Denominator
// parameters must avoid the poles b - (i-1)/2 in -N_0 for i <= m.
inline SeriesValue hypergeom_matrix(const std::vector<double>& num,
                                    const std::vector<double>& den,
                                    const Matrix& X, int trunc,
                                    const ZonalTable& table) {
  const auto p = num.size(), q = den.size();
  if (!((p == 0 && q == 0) || (p == 0 && q == 1) || (p == 1 && q == 1)))
    throw std::invalid_argument("hypergeom_matrix: only 0F0, 0F1, 1F1 supported");
  const int m = static_cast<int>(X.rows());
  for (double b : den)
    for (int i = 0; i < m; ++i) {
      double shifted = b - 0.5 * i;
      if (shifted < 0.5 && std::abs(shifted - std::round(shifted)) < 1e-12 &&
          std::round(shifted) <= 0.0)
        throw std::domain_error("hypergeom_matrix: denominator parameter at a pole");
    }

  SeriesValue out;
  if (m == 1) {
    // Scalar fast path: only single-row partitions survive, so the series
    // reduces to the classical one and any truncation depth is available.
    double x = X(0, 0);
    double total = 1.0, shell = 1.0;
    double term = 1.0;
    for (int k = 1; k <= trunc; ++k) {
      double ratio = x / k;
      for (double a : num) ratio *= a + (k - 1);
      for (double b : den) ratio /= b + (k - 1);
      term *= ratio;
      total += term;
      shell = term;
    }
    out.value = total;
    out.shells_used = trunc;
    out.last_shell_magnitude = std::abs(shell);
    return out;
  }

  if (trunc > table.max_degree)
    throw std::domain_error("hypergeom_matrix: truncation exceeds zonal table degree");
  std::vector<std::complex<double>> eig = general_eigenvalues(X);
  double total = 1.0, last_shell = 0.0;
  for (int k = 1; k <= trunc; ++k) {
    std::complex<double> shell(0.0, 0.0);
    for (const Partition& kappa : enumerate_partitions(k, std::min(k, m))) {
      double coef = 1.0;
      for (double a : num) coef *= gen_pochhammer(a, kappa);
      for (double b : den) coef /= gen_pochhammer(b, kappa);
      shell += coef * zonal_eval_generic<std::complex<double>>(table, kappa, eig);
    }
    double shell_re = shell.real() / detail::factorial(k);
    total += shell_re;
    last_shell = shell_re;
  }
  out.value = total;
  out.shells_used = trunc;
  out.last_shell_magnitude = std::abs(last_shell);
  return out;
}

}  // namespace genbeta
