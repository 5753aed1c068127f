#pragma once

// Density evaluators: noncentral matrix gamma, doubly noncentral matrix
// beta type I/II (symmetrised and nonsymmetrised), the one-sided noncentral
// variants, and the bimatrix generalised beta type I/II families with their
// M/N transforms and all corollary special cases.
//
// Kernels are computed in log space; the truncated invariant-polynomial
// series factor is computed in linear space and clamped at zero if a
// truncated partial sum dips negative (diagnostics flag the clamp).  The
// noncentral gamma density carries the etr(-Omega) normalizer: without it
// the m = 1 density does not integrate to one, and the beta and bimatrix
// series below require it in place.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "genbeta/invariant.hpp"
#include "genbeta/matrixkit.hpp"
#include "genbeta/partition.hpp"
#include "genbeta/zonal.hpp"

namespace genbeta {

struct Tables {
  const ZonalTable* zonal = nullptr;
  const InvariantTable* invariant = nullptr;
};

enum class DensityMode { kNonsym, kSym };

struct DensityValue {
  double value = 0.0;
  double log_value = -std::numeric_limits<double>::infinity();
  int shells_used = 0;
  double last_shell_magnitude = 0.0;
  bool series_clamped = false;
};

struct GammaParams {
  int m = 1;
  double a = 1.0;
  Matrix Theta;  // positive definite scale
  Matrix Omega;  // positive semidefinite noncentrality
};

struct BetaParams {
  int m = 1;
  double a = 1.0, b = 1.0;
  Matrix Omega1, Omega2;
};

struct TriParams {
  int m = 1;
  double a = 1.0, b = 1.0, c = 1.0;
  Matrix Omega1, Omega2, Omega3;
};

namespace dens_detail {

inline void require_shape(double a, int m, const char* name) {
  if (!(a > 0.5 * (m - 1)))
    throw std::domain_error(std::string(name) + " must exceed (m-1)/2");
}

inline void require_psd(const Matrix& Om, int m, const char* name) {
  if (Om.rows() != m || Om.cols() != m)
    throw std::invalid_argument(std::string(name) + ": wrong dimension");
  if (!is_positive_semidefinite(Om))
    throw std::domain_error(std::string(name) + " must be positive semidefinite");
}

inline DensityValue assemble(double log_kernel, double series, int shells,
                             double last_shell) {
  DensityValue out;
  out.shells_used = shells;
  out.last_shell_magnitude = last_shell;
  if (series <= 0.0) {
    out.series_clamped = true;
    out.value = 0.0;
    return out;
  }
  out.log_value = log_kernel + std::log(series);
  out.value = std::exp(out.log_value);
  return out;
}

struct SeriesAccum {
  double total = 0.0;
  double shell = 0.0;
  double last_shell = 0.0;
  void close_shell() {
    total += shell;
    last_shell = shell;
    shell = 0.0;
  }
};

inline const InvariantEntry& entry_for(const Tables& t, const InvariantKey& key) {
  if (!t.invariant) throw std::runtime_error("invariant table not loaded");
  auto it = t.invariant->entries.find(key);
  if (it == t.invariant->entries.end())
    throw std::runtime_error("invariant table has no key " + key.str() +
                             " (truncation beyond calibrated degree?)");
  return it->second;
}

inline double zonal_general(const Tables& t, const Partition& kappa, const Matrix& X) {
  return zonal_eval_generic<std::complex<double>>(*t.zonal, kappa,
                                                  general_eigenvalues(X))
      .real();
}

// One series term summed over phi for a tuple of slot partitions (empty
// partitions reduce the key and drop the matching argument).  poch_top is
// the (a+b[+c])_phi numerator parameter.
inline double invariant_series_term(const Tables& t, double poch_top,
                                    const std::vector<Partition>& parts,
                                    const std::vector<Matrix>& nonsym_args,
                                    const std::vector<Matrix>& omega_args,
                                    const std::vector<Matrix>& m_args,
                                    DensityMode mode, int m) {
  std::vector<Partition> live;
  std::vector<Matrix> args_ns, args_om, args_mm;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].empty()) continue;
    live.push_back(parts[i]);
    args_ns.push_back(nonsym_args[i]);
    args_om.push_back(omega_args[i]);
    args_mm.push_back(m_args[i]);
  }
  if (live.empty()) return 1.0;  // the empty term
  if (live.size() == 1) {
    const Partition& kappa = live[0];
    if (kappa.length() > m) return 0.0;
    if (mode == DensityMode::kNonsym) {
      return gen_pochhammer(poch_top, kappa) * zonal_general(t, kappa, args_ns[0]);
    }
    return gen_pochhammer(poch_top, kappa) * zonal_general(t, kappa, args_om[0]) *
           zonal_general(t, kappa, args_mm[0]) /
           zonal_at_identity(*t.zonal, kappa, m);
  }
  const InvariantEntry& e = entry_for(t, InvariantKey{live});
  double total = 0.0;
  for (const PhiBlock& blk : e.blocks) {
    if (blk.phi.length() > m) continue;
    double w = gen_pochhammer(poch_top, blk.phi);
    if (mode == DensityMode::kNonsym) {
      total += w * theta_weighted_eval(e, blk, args_ns);
    } else {
      total += w * paired_eval(e, blk, args_om, args_mm) /
               zonal_at_identity(*t.zonal, blk.phi, m);
    }
  }
  return total;
}

// Scalar (m = 1) series: sum over shells of
//   (s_top)_{k+l} / ((a)_k (b)_l k! l!) x1^k x2^l        (pair)
// with the triple version analogous.  Equals both density modes at m = 1.
inline SeriesAccum scalar_pair_series(double s_top, double a, double b, double x1,
                                      double x2, int trunc) {
  SeriesAccum acc;
  // c(k,l) coefficients by stable recursion along rows
  std::vector<double> prev_row;  // c(k, .) for fixed k
  double ck0 = 1.0;
  std::vector<std::vector<double>> c(static_cast<std::size_t>(trunc) + 1);
  for (int k = 0; k <= trunc; ++k) {
    if (k > 0) ck0 *= (s_top + k - 1) / ((a + k - 1) * k);
    auto& row = c[static_cast<std::size_t>(k)];
    row.resize(static_cast<std::size_t>(trunc - k) + 1);
    row[0] = ck0;
    for (int l = 1; l + k <= trunc; ++l)
      row[static_cast<std::size_t>(l)] = row[static_cast<std::size_t>(l - 1)] *
                                         (s_top + k + l - 1) / ((b + l - 1) * l);
  }
  double p1 = 1.0;
  std::vector<double> pow1(static_cast<std::size_t>(trunc) + 1), pow2 = pow1;
  for (int i = 0; i <= trunc; ++i) {
    pow1[static_cast<std::size_t>(i)] = i == 0 ? 1.0 : pow1[static_cast<std::size_t>(i - 1)] * x1;
    pow2[static_cast<std::size_t>(i)] = i == 0 ? 1.0 : pow2[static_cast<std::size_t>(i - 1)] * x2;
  }
  (void)p1;
  for (int s = 0; s <= trunc; ++s) {
    for (int k = 0; k <= s; ++k) {
      int l = s - k;
      acc.shell += c[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] *
                   pow1[static_cast<std::size_t>(k)] * pow2[static_cast<std::size_t>(l)];
    }
    acc.close_shell();
  }
  return acc;
}

// The coefficient table (s_top)_{k+t+l} / ((a)_k (b)_t (c)_l k! t! l!) is
// cached across calls: quadrature and Monte Carlo loops evaluate the same
// parameter set at many points.
struct TripleCoefCache {
  double s_top = 0, a = 0, b = 0, c = 0;
  int trunc = -1;
  std::vector<double> coef;  // indexed by (k, t) pairs per shell; see layout below
  std::vector<double> pow_buf;
};

inline SeriesAccum scalar_triple_series(double s_top, double a, double b, double cc,
                                        double x1, double x2, double x3, int trunc) {
  thread_local TripleCoefCache cache;
  const int n = trunc + 1;
  if (cache.s_top != s_top || cache.a != a || cache.b != b || cache.c != cc ||
      cache.trunc != trunc) {
    cache = TripleCoefCache{};
    cache.s_top = s_top;
    cache.a = a;
    cache.b = b;
    cache.c = cc;
    cache.trunc = trunc;
    cache.coef.assign(static_cast<std::size_t>(n) * n * n, 0.0);
    auto at = [n](int k, int t, int l) {
      return (static_cast<std::size_t>(k) * n + t) * n + l;
    };
    cache.coef[at(0, 0, 0)] = 1.0;
    for (int k = 0; k <= trunc; ++k)
      for (int t = 0; k + t <= trunc; ++t)
        for (int l = 0; k + t + l <= trunc; ++l) {
          if (k + t + l == 0) continue;
          int s = k + t + l;
          if (k > 0)
            cache.coef[at(k, t, l)] =
                cache.coef[at(k - 1, t, l)] * (s_top + s - 1) / ((a + k - 1) * k);
          else if (t > 0)
            cache.coef[at(k, t, l)] =
                cache.coef[at(k, t - 1, l)] * (s_top + s - 1) / ((b + t - 1) * t);
          else
            cache.coef[at(k, t, l)] =
                cache.coef[at(k, t, l - 1)] * (s_top + s - 1) / ((cc + l - 1) * l);
        }
  }
  auto at = [n](int k, int t, int l) {
    return (static_cast<std::size_t>(k) * n + t) * n + l;
  };
  std::vector<double>& p = cache.pow_buf;
  p.assign(static_cast<std::size_t>(3) * n, 1.0);
  for (int i = 1; i <= trunc; ++i) {
    p[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i - 1)] * x1;
    p[static_cast<std::size_t>(n + i)] = p[static_cast<std::size_t>(n + i - 1)] * x2;
    p[static_cast<std::size_t>(2 * n + i)] = p[static_cast<std::size_t>(2 * n + i - 1)] * x3;
  }
  SeriesAccum acc;
  for (int s = 0; s <= trunc; ++s) {
    for (int k = 0; k <= s; ++k)
      for (int t = 0; k + t <= s; ++t) {
        int l = s - k - t;
        acc.shell += cache.coef[at(k, t, l)] * p[static_cast<std::size_t>(k)] *
                     p[static_cast<std::size_t>(n + t)] * p[static_cast<std::size_t>(2 * n + l)];
      }
    acc.close_shell();
  }
  return acc;
}

}  // namespace dens_detail

// ---------------------------------------------------------------------------
// Noncentral matrix gamma, eq. kernel |A|^{a-(m+1)/2} etr(-Theta^{-1} A)
// / (Gamma_m[a] |Theta|^a) times etr(-Omega) 0F1(a; Omega Theta^{-1} A).
inline DensityValue matgamma_pdf(const Matrix& A, const GammaParams& p, int trunc,
                                 const Tables& t) {
  dens_detail::require_shape(p.a, p.m, "a");
  dens_detail::require_psd(p.Omega, p.m, "Omega");
  if (!is_positive_definite(p.Theta)) throw std::domain_error("Theta must be PD");
  if (!is_positive_definite(A)) throw std::domain_error("A must be positive definite");
  const double h = 0.5 * (p.m + 1);
  Matrix theta_inv = p.Theta.inverse();
  double log_kernel = (p.a - h) * spd_logdet(A) - (theta_inv * A).trace() -
                      lgamma_m(p.m, p.a) - p.a * spd_logdet(p.Theta) - p.Omega.trace();
  SeriesValue s = hypergeom_matrix({}, {p.a}, p.Omega * theta_inv * A, trunc, *t.zonal);
  return dens_detail::assemble(log_kernel, s.value, s.shells_used,
                               s.last_shell_magnitude);
}

// ---------------------------------------------------------------------------
// Doubly noncentral matrix variate beta type I.
inline DensityValue beta1_pdf(const Matrix& U, const BetaParams& p, DensityMode mode,
                              int trunc, const Tables& t) {
  dens_detail::require_shape(p.a, p.m, "a");
  dens_detail::require_shape(p.b, p.m, "b");
  dens_detail::require_psd(p.Omega1, p.m, "Omega1");
  dens_detail::require_psd(p.Omega2, p.m, "Omega2");
  if (!interval_check(U)) throw std::domain_error("beta1_pdf: requires 0 < U < I");
  const double h = 0.5 * (p.m + 1);
  Matrix IU = Matrix::Identity(p.m, p.m) - U;
  double log_kernel = -lbeta_m(p.m, p.a, p.b) + (p.a - h) * spd_logdet(U) +
                      (p.b - h) * spd_logdet(IU) - p.Omega1.trace() - p.Omega2.trace();

  if (p.m == 1) {
    auto acc = dens_detail::scalar_pair_series(p.a + p.b, p.a, p.b,
                                               p.Omega1(0, 0) * U(0, 0),
                                               p.Omega2(0, 0) * IU(0, 0), trunc);
    return dens_detail::assemble(log_kernel, acc.total, trunc, std::abs(acc.last_shell));
  }

  std::vector<Matrix> nonsym{p.Omega1 * U, p.Omega2 * IU};
  std::vector<Matrix> omegas{p.Omega1, p.Omega2};
  std::vector<Matrix> inner{U, IU};
  dens_detail::SeriesAccum acc;
  for (int s = 0; s <= trunc; ++s) {
    for (int k = 0; k <= s; ++k) {
      int l = s - k;
      for (const Partition& kappa : enumerate_partitions(k, std::min(std::max(k, 1), p.m)))
        for (const Partition& lambda : enumerate_partitions(l, std::min(std::max(l, 1), p.m))) {
          double denom = gen_pochhammer(p.a, kappa) * gen_pochhammer(p.b, lambda) *
                         detail::factorial(k) * detail::factorial(l);
          acc.shell += dens_detail::invariant_series_term(t, p.a + p.b, {kappa, lambda},
                                                          nonsym, omegas, inner, mode,
                                                          p.m) /
                       denom;
        }
    }
    acc.close_shell();
  }
  return dens_detail::assemble(log_kernel, acc.total, trunc, std::abs(acc.last_shell));
}

// Doubly noncentral matrix variate beta type II.
inline DensityValue beta2_pdf(const Matrix& F, const BetaParams& p, DensityMode mode,
                              int trunc, const Tables& t) {
  dens_detail::require_shape(p.a, p.m, "a");
  dens_detail::require_shape(p.b, p.m, "b");
  dens_detail::require_psd(p.Omega1, p.m, "Omega1");
  dens_detail::require_psd(p.Omega2, p.m, "Omega2");
  if (!is_positive_definite(F)) throw std::domain_error("beta2_pdf: requires F > 0");
  const double h = 0.5 * (p.m + 1);
  Matrix I = Matrix::Identity(p.m, p.m);
  Matrix IFinv = (I + F).inverse();
  double log_kernel = -lbeta_m(p.m, p.a, p.b) + (p.a - h) * spd_logdet(F) -
                      (p.a + p.b) * spd_logdet(I + F) - p.Omega1.trace() -
                      p.Omega2.trace();

  if (p.m == 1) {
    double f = F(0, 0);
    auto acc = dens_detail::scalar_pair_series(p.a + p.b, p.a, p.b,
                                               p.Omega1(0, 0) * f / (1 + f),
                                               p.Omega2(0, 0) / (1 + f), trunc);
    return dens_detail::assemble(log_kernel, acc.total, trunc, std::abs(acc.last_shell));
  }

  std::vector<Matrix> nonsym{p.Omega1 * IFinv * F, p.Omega2 * IFinv};
  std::vector<Matrix> omegas{p.Omega1, p.Omega2};
  std::vector<Matrix> inner{IFinv * F, IFinv};
  dens_detail::SeriesAccum acc;
  for (int s = 0; s <= trunc; ++s) {
    for (int k = 0; k <= s; ++k) {
      int l = s - k;
      for (const Partition& kappa : enumerate_partitions(k, std::min(std::max(k, 1), p.m)))
        for (const Partition& lambda : enumerate_partitions(l, std::min(std::max(l, 1), p.m))) {
          double denom = gen_pochhammer(p.a, kappa) * gen_pochhammer(p.b, lambda) *
                         detail::factorial(k) * detail::factorial(l);
          acc.shell += dens_detail::invariant_series_term(t, p.a + p.b, {kappa, lambda},
                                                          nonsym, omegas, inner, mode,
                                                          p.m) /
                       denom;
        }
    }
    acc.close_shell();
  }
  return dens_detail::assemble(log_kernel, acc.total, trunc, std::abs(acc.last_shell));
}

enum class BetaKind { kTypeI, kTypeII };
enum class NoncentralSide { kA, kB };  // A: Omega1 = 0; B: Omega2 = 0

// One-sided noncentral beta variants (the W, U, V, F densities).  side A
// zeroes Omega1, side B zeroes Omega2; the remaining series collapses to a
// matrix 1F1 term by term.
inline DensityValue beta_noncentral_variant(BetaKind kind, NoncentralSide side,
                                            const Matrix& X, double a, double b,
                                            const Matrix& Omega, int m,
                                            DensityMode mode, int trunc,
                                            const Tables& t) {
  BetaParams p;
  p.m = m;
  p.a = a;
  p.b = b;
  Matrix zero = Matrix::Zero(m, m);
  p.Omega1 = side == NoncentralSide::kB ? Omega : zero;
  p.Omega2 = side == NoncentralSide::kA ? Omega : zero;
  return kind == BetaKind::kTypeI ? beta1_pdf(X, p, mode, trunc, t)
                                  : beta2_pdf(X, p, mode, trunc, t);
}

// ---------------------------------------------------------------------------
// Bimatrix argument transforms.
struct TransformsM {
  Matrix M1, M2, M;
};

// M1 = (I-U2)(I-U1U2)^{-1} U1,  M2 = (I-U1)(I-U2U1)^{-1} U2,
// M  = (I-U2)(I-U1U2)^{-1}(I-U1).
// This order makes M symmetric and satisfies
//   M^{-1} = (I-U1)^{-1} U1 + (I-U2)^{-1} U2 + I
// (the transposed order does not); M2 carries U2 U1 inside the inverse so
// that it mirrors M1 under swapping the indices.
inline TransformsM transforms_M(const Matrix& U1, const Matrix& U2) {
  if (!interval_check(U1) || !interval_check(U2))
    throw std::domain_error("transforms_M: inputs must satisfy 0 < U < I");
  const Eigen::Index m = U1.rows();
  Matrix I = Matrix::Identity(m, m);
  Eigen::FullPivLU<Matrix> lu12(I - U1 * U2);
  Eigen::FullPivLU<Matrix> lu21(I - U2 * U1);
  if (!lu12.isInvertible()) throw std::domain_error("transforms_M: I - U1 U2 singular");
  Matrix W12 = lu12.inverse();
  Matrix W21 = lu21.inverse();
  TransformsM out;
  out.M1 = (I - U2) * W12 * U1;
  out.M2 = (I - U1) * W21 * U2;
  out.M = symmetrize((I - U2) * W12 * (I - U1));
  return out;
}

// Under U_i = I - (I+F_i)^{-1} the type-I transforms reduce exactly to
// N1 = N F1, N2 = N F2, N = (I+F1+F2)^{-1}.
inline TransformsM transforms_N(const Matrix& F1, const Matrix& F2) {
  if (!is_positive_definite(F1) || !is_positive_definite(F2))
    throw std::domain_error("transforms_N: inputs must be positive definite");
  const Eigen::Index m = F1.rows();
  Matrix I = Matrix::Identity(m, m);
  Matrix N = (I + F1 + F2).inverse();
  TransformsM out;
  out.M1 = N * F1;
  out.M2 = N * F2;
  out.M = symmetrize(N);
  return out;
}

namespace dens_detail {

inline void tri_validate(const TriParams& p) {
  require_shape(p.a, p.m, "a");
  require_shape(p.b, p.m, "b");
  require_shape(p.c, p.m, "c");
  require_psd(p.Omega1, p.m, "Omega1");
  require_psd(p.Omega2, p.m, "Omega2");
  require_psd(p.Omega3, p.m, "Omega3");
}

inline DensityValue bgb_series(const TriParams& p, double log_kernel,
                               const TransformsM& tr, DensityMode mode, int trunc,
                               const Tables& t) {
  if (p.m == 1) {
    auto acc = scalar_triple_series(p.a + p.b + p.c, p.a, p.b, p.c,
                                    p.Omega1(0, 0) * tr.M1(0, 0),
                                    p.Omega2(0, 0) * tr.M2(0, 0),
                                    p.Omega3(0, 0) * tr.M(0, 0), trunc);
    return assemble(log_kernel, acc.total, trunc, std::abs(acc.last_shell));
  }
  std::vector<Matrix> nonsym{p.Omega1 * tr.M1, p.Omega2 * tr.M2, p.Omega3 * tr.M};
  std::vector<Matrix> omegas{p.Omega1, p.Omega2, p.Omega3};
  std::vector<Matrix> inner{tr.M1, tr.M2, tr.M};
  SeriesAccum acc;
  for (int s = 0; s <= trunc; ++s) {
    for (int k = 0; k <= s; ++k)
      for (int tt = 0; k + tt <= s; ++tt) {
        int l = s - k - tt;
        for (const Partition& kappa : enumerate_partitions(k, std::min(std::max(k, 1), p.m)))
          for (const Partition& tau : enumerate_partitions(tt, std::min(std::max(tt, 1), p.m)))
            for (const Partition& lambda :
                 enumerate_partitions(l, std::min(std::max(l, 1), p.m))) {
              double denom = gen_pochhammer(p.a, kappa) * gen_pochhammer(p.b, tau) *
                             gen_pochhammer(p.c, lambda) * detail::factorial(k) *
                             detail::factorial(tt) * detail::factorial(l);
              acc.shell += invariant_series_term(t, p.a + p.b + p.c,
                                                 {kappa, tau, lambda}, nonsym, omegas,
                                                 inner, mode, p.m) /
                           denom;
            }
      }
    acc.close_shell();
  }
  return assemble(log_kernel, acc.total, trunc, std::abs(acc.last_shell));
}

}  // namespace dens_detail

// Central bimatrix generalised beta type I log kernel.
inline double bgb1_log_kernel(const Matrix& U1, const Matrix& U2, const TriParams& p) {
  const double h = 0.5 * (p.m + 1);
  Matrix I = Matrix::Identity(p.m, p.m);
  double log_det_iuu = std::log(std::abs((I - U1 * U2).determinant()));
  return -lbeta_star_m(p.m, p.a, p.b, p.c) + (p.a - h) * spd_logdet(U1) +
         (p.b - h) * spd_logdet(U2) + (p.b + p.c - h) * spd_logdet(I - U1) +
         (p.a + p.c - h) * spd_logdet(I - U2) - (p.a + p.b + p.c) * log_det_iuu;
}

inline double bgb2_log_kernel(const Matrix& F1, const Matrix& F2, const TriParams& p) {
  const double h = 0.5 * (p.m + 1);
  Matrix I = Matrix::Identity(p.m, p.m);
  return -lbeta_star_m(p.m, p.a, p.b, p.c) + (p.a - h) * spd_logdet(F1) +
         (p.b - h) * spd_logdet(F2) - (p.a + p.b + p.c) * spd_logdet(I + F1 + F2);
}

// Doubly noncentral bimatrix variate generalised beta type I.
inline DensityValue bgb1_pdf(const Matrix& U1, const Matrix& U2, const TriParams& p,
                             DensityMode mode, int trunc, const Tables& t) {
  dens_detail::tri_validate(p);
  if (!interval_check(U1) || !interval_check(U2))
    throw std::domain_error("bgb1_pdf: requires 0 < U_i < I");
  TransformsM tr = transforms_M(U1, U2);
  double log_kernel = bgb1_log_kernel(U1, U2, p) - p.Omega1.trace() -
                      p.Omega2.trace() - p.Omega3.trace();
  return dens_detail::bgb_series(p, log_kernel, tr, mode, trunc, t);
}

// Doubly noncentral bimatrix variate generalised beta type II.
inline DensityValue bgb2_pdf(const Matrix& F1, const Matrix& F2, const TriParams& p,
                             DensityMode mode, int trunc, const Tables& t) {
  dens_detail::tri_validate(p);
  if (!is_positive_definite(F1) || !is_positive_definite(F2))
    throw std::domain_error("bgb2_pdf: requires F_i > 0");
  TransformsM tr = transforms_N(F1, F2);
  double log_kernel = bgb2_log_kernel(F1, F2, p) - p.Omega1.trace() -
                      p.Omega2.trace() - p.Omega3.trace();
  return dens_detail::bgb_series(p, log_kernel, tr, mode, trunc, t);
}

// Reduced special cases, 1..6 per type.  Case patterns (zeroed slots):
//   1: Omega1 = Omega2 = 0        4: Omega1 = Omega3 = 0
//   2: Omega3 = 0                 5: Omega2 = 0
//   3: Omega2 = Omega3 = 0        6: Omega1 = 0
// Cases 1, 3, 4 collapse to a matrix 1F1 whose denominator parameter is the
// shape attached to the surviving slot (c, a, b respectively): that is what
// the full series reduces to term by term when the other slots are zeroed.
inline DensityValue bgb_special_pdf(BetaKind type, int case_id, const Matrix& X1,
                                    const Matrix& X2, const TriParams& p,
                                    DensityMode mode, int trunc, const Tables& t) {
  dens_detail::tri_validate(p);
  auto is_zero = [](const Matrix& Om) { return Om.cwiseAbs().maxCoeff() == 0.0; };
  bool z1 = is_zero(p.Omega1), z2 = is_zero(p.Omega2), z3 = is_zero(p.Omega3);
  auto need = [&](bool want1, bool want2, bool want3) {
    if ((want1 && !z1) || (want2 && !z2) || (want3 && !z3))
      throw std::invalid_argument("bgb_special_pdf: nonzero Omega in a zeroed slot");
  };
  TransformsM tr;
  double log_kernel;
  if (type == BetaKind::kTypeI) {
    if (!interval_check(X1) || !interval_check(X2))
      throw std::domain_error("bgb_special_pdf: requires 0 < U_i < I");
    tr = transforms_M(X1, X2);
    log_kernel = bgb1_log_kernel(X1, X2, p);
  } else {
    if (!is_positive_definite(X1) || !is_positive_definite(X2))
      throw std::domain_error("bgb_special_pdf: requires F_i > 0");
    tr = transforms_N(X1, X2);
    log_kernel = bgb2_log_kernel(X1, X2, p);
  }
  log_kernel -= p.Omega1.trace() + p.Omega2.trace() + p.Omega3.trace();
  double s_top = p.a + p.b + p.c;

  // single surviving slot: nonsymmetrised collapses to 1F1(s_top; den; Om X);
  // symmetrised keeps the C_lambda(Om) C_lambda(X) / C_lambda(I) pairing.
  auto one_slot = [&](double den, const Matrix& omega, const Matrix& inner) {
    if (mode == DensityMode::kNonsym) {
      SeriesValue s = hypergeom_matrix({s_top}, {den}, omega * inner, trunc, *t.zonal);
      return dens_detail::assemble(log_kernel, s.value, s.shells_used,
                                   s.last_shell_magnitude);
    }
    dens_detail::SeriesAccum acc;
    for (int s = 0; s <= trunc; ++s) {
      for (const Partition& lambda : enumerate_partitions(s, std::min(std::max(s, 1), p.m))) {
        if (lambda.length() > p.m) continue;
        double denom = gen_pochhammer(den, lambda) * detail::factorial(s);
        acc.shell += gen_pochhammer(s_top, lambda) *
                     dens_detail::zonal_general(t, lambda, omega) *
                     dens_detail::zonal_general(t, lambda, inner) /
                     (denom * zonal_at_identity(*t.zonal, lambda, p.m));
      }
      acc.close_shell();
    }
    return dens_detail::assemble(log_kernel, acc.total, trunc, std::abs(acc.last_shell));
  };

  switch (case_id) {
    case 1:
      need(true, true, false);
      return one_slot(p.c, p.Omega3, tr.M);
    case 3:
      need(false, true, true);
      return one_slot(p.a, p.Omega1, tr.M1);
    case 4:
      need(true, false, true);
      return one_slot(p.b, p.Omega2, tr.M2);
    default:
      break;
  }

  // two-argument reduced series for cases 2, 5, 6
  struct Slot {
    double shape;
    Matrix omega, inner;
  };
  std::vector<Slot> slots;
  if (case_id == 2) {
    need(false, false, true);
    slots = {{p.a, p.Omega1, tr.M1}, {p.b, p.Omega2, tr.M2}};
  } else if (case_id == 5) {
    need(false, true, false);
    slots = {{p.a, p.Omega1, tr.M1}, {p.c, p.Omega3, tr.M}};
  } else if (case_id == 6) {
    need(true, false, false);
    slots = {{p.b, p.Omega2, tr.M2}, {p.c, p.Omega3, tr.M}};
  } else {
    throw std::invalid_argument("bgb_special_pdf: case must be 1..6");
  }

  if (p.m == 1) {
    auto acc = dens_detail::scalar_pair_series(
        s_top, slots[0].shape, slots[1].shape, slots[0].omega(0, 0) * slots[0].inner(0, 0),
        slots[1].omega(0, 0) * slots[1].inner(0, 0), trunc);
    return dens_detail::assemble(log_kernel, acc.total, trunc, std::abs(acc.last_shell));
  }
  std::vector<Matrix> nonsym{slots[0].omega * slots[0].inner,
                             slots[1].omega * slots[1].inner};
  std::vector<Matrix> omegas{slots[0].omega, slots[1].omega};
  std::vector<Matrix> inner{slots[0].inner, slots[1].inner};
  dens_detail::SeriesAccum acc;
  for (int s = 0; s <= trunc; ++s) {
    for (int k = 0; k <= s; ++k) {
      int l = s - k;
      for (const Partition& kappa : enumerate_partitions(k, std::min(std::max(k, 1), p.m)))
        for (const Partition& lambda : enumerate_partitions(l, std::min(std::max(l, 1), p.m))) {
          double denom = gen_pochhammer(slots[0].shape, kappa) *
                         gen_pochhammer(slots[1].shape, lambda) * detail::factorial(k) *
                         detail::factorial(l);
          acc.shell += dens_detail::invariant_series_term(t, s_top, {kappa, lambda},
                                                          nonsym, omegas, inner, mode,
                                                          p.m) /
                       denom;
        }
    }
    acc.close_shell();
  }
  return dens_detail::assemble(log_kernel, acc.total, trunc, std::abs(acc.last_shell));
}

}  // namespace genbeta
