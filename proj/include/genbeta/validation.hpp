#pragma once

// Independent oracles and statistical checks tying the density evaluators
// back to first principles.  Every check is deterministic given (seed,
// sample size) and fills a CheckReport; the runner aggregates them into the
// validation suites the CLI exposes.

#include <chrono>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "genbeta/densities.hpp"
#include "genbeta/quadrature.hpp"
#include "genbeta/sampling.hpp"
#include "genbeta/stats.hpp"

namespace genbeta {

struct CheckReport {
  std::string name;
  double statistic = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  long long sample_size = 0;
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;  // reported on the console; stripped from the
                                 // canonical JSON so reports stay byte-stable
  std::string detail;
};

// Classical scalar doubly noncentral beta density, truncated over the shells
// k + l <= K.  Shares only std::lgamma with the series path.
inline double scalar_dnc_beta_oracle(double u, double a, double b, double w1,
                                     double w2, int K) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("oracle: u must lie in (0,1)");
  if (!(a > 0.0 && b > 0.0) || w1 < 0.0 || w2 < 0.0)
    throw std::domain_error("oracle: bad parameters");
  double f = 0.0;
  for (int s = 0; s <= K; ++s)
    for (int k = 0; k <= s; ++k) {
      int l = s - k;
      if ((w1 == 0.0 && k > 0) || (w2 == 0.0 && l > 0)) continue;
      double logterm = -w1 - w2 - std::lgamma(k + 1.0) - std::lgamma(l + 1.0);
      if (k > 0) logterm += k * std::log(w1);
      if (l > 0) logterm += l * std::log(w2);
      logterm += (a + k - 1.0) * std::log(u) + (b + l - 1.0) * std::log1p(-u);
      logterm -= std::lgamma(a + k) + std::lgamma(b + l) - std::lgamma(a + b + k + l);
      f += std::exp(logterm);
    }
  return f;
}

namespace val_detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline Matrix scalar1(double x) {
  Matrix m(1, 1);
  m(0, 0) = x;
  return m;
}

inline Matrix random_psd_capped(int m, Rng& rng, double norm_cap) {
  Matrix G(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) G(i, j) = rng.normal();
  Matrix S = G * G.transpose();
  double n = S.norm();
  return n > norm_cap ? Matrix(norm_cap * S / n) : S;
}

struct Welford {
  long long n = 0;
  double mean = 0.0, m2 = 0.0;
  void add(double x) {
    ++n;
    double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  double se() const { return n > 1 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0; }
};

}  // namespace val_detail

// ---------------------------------------------------------------------------
// Acceptance criterion 1: m = 1 series vs the classical scalar oracle.
inline CheckReport check_scalar_oracle_equivalence(const Tables& t) {
  val_detail::Stopwatch watch;
  CheckReport rep;
  rep.name = "scalar_oracle_equivalence";
  rep.tolerance = 1e-8;
  const int K = 30;
  double worst = 0.0;
  for (auto [a, b] : std::vector<std::pair<double, double>>{{0.7, 1.3}, {2.0, 3.0}}) {
    for (auto [w1, w2] : std::vector<std::pair<double, double>>{{0.0, 0.0}, {0.5, 1.5}}) {
      BetaParams p;
      p.m = 1;
      p.a = a;
      p.b = b;
      p.Omega1 = val_detail::scalar1(w1);
      p.Omega2 = val_detail::scalar1(w2);
      for (int i = 1; i <= 19; ++i) {
        double u = 0.05 * i;
        double oracle = scalar_dnc_beta_oracle(u, a, b, w1, w2, K);
        double mine = beta1_pdf(val_detail::scalar1(u), p, DensityMode::kNonsym, K, t).value;
        worst = std::max(worst, std::abs(mine - oracle) / oracle);
        ++rep.sample_size;
      }
    }
  }
  rep.statistic = worst;
  rep.pass = worst < rep.tolerance;
  rep.runtime_seconds = watch.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// Acceptance criterion 2: m = 1 normalization by quadrature, omega <= 1.
inline CheckReport check_normalization_m1(const Tables& t) {
  val_detail::Stopwatch watch;
  CheckReport rep;
  rep.name = "normalization_m1";
  rep.tolerance = 1e-5;
  const int K = 30;
  double worst = 0.0;
  std::ostringstream detail;

  BetaParams bp;
  bp.m = 1;
  bp.a = 0.8;
  bp.b = 1.6;
  bp.Omega1 = val_detail::scalar1(0.7);
  bp.Omega2 = val_detail::scalar1(1.0);
  auto q1 = integrate_01(
      [&](double u) {
        return beta1_pdf(val_detail::scalar1(u), bp, DensityMode::kNonsym, K, t).value;
      },
      1e-9);
  worst = std::max(worst, std::abs(q1.value - 1.0));
  detail << "beta1=" << q1.value;

  auto q2 = integrate_0inf(
      [&](double f) {
        return beta2_pdf(val_detail::scalar1(f), bp, DensityMode::kNonsym, K, t).value;
      },
      1e-9);
  worst = std::max(worst, std::abs(q2.value - 1.0));
  detail << " beta2=" << q2.value;

  TriParams tp;
  tp.m = 1;
  tp.a = 0.9;
  tp.b = 1.4;
  tp.c = 1.1;
  tp.Omega1 = val_detail::scalar1(0.6);
  tp.Omega2 = val_detail::scalar1(0.8);
  tp.Omega3 = val_detail::scalar1(1.0);
  double q3 = integrate_unit_square(
      [&](double u1, double u2) {
        return bgb1_pdf(val_detail::scalar1(u1), val_detail::scalar1(u2), tp,
                        DensityMode::kNonsym, K, t)
            .value;
      },
      6);
  worst = std::max(worst, std::abs(q3 - 1.0));
  detail << " bgb1=" << q3;

  double q4 = integrate_unit_square(
      [&](double v1, double v2) {
        double f1 = v1 / (1 - v1), f2 = v2 / (1 - v2);
        double jac = 1.0 / ((1 - v1) * (1 - v1) * (1 - v2) * (1 - v2));
        return bgb2_pdf(val_detail::scalar1(f1), val_detail::scalar1(f2), tp,
                        DensityMode::kNonsym, K, t)
                   .value *
               jac;
      },
      6);
  worst = std::max(worst, std::abs(q4 - 1.0));
  detail << " bgb2=" << q4;

  rep.statistic = worst;
  rep.pass = worst < rep.tolerance;
  rep.detail = detail.str();
  rep.runtime_seconds = watch.seconds();
  return rep;
}

// m >= 2 normalization by importance sampling from the central construction.
inline CheckReport check_normalization_m2(const Tables& t, std::uint64_t seed,
                                          long long n_draws = 200000) {
  val_detail::Stopwatch watch;
  CheckReport rep;
  rep.name = "normalization_m2_bgb1";
  rep.seed = seed;
  rep.sample_size = n_draws;
  const int m = 2, D = 3;
  Rng rng(seed, 21);
  TriParams p;
  p.m = m;
  p.a = 1.5;
  p.b = 2.0;
  p.c = 2.5;
  p.Omega1 = val_detail::random_psd_capped(m, rng, 0.3);
  p.Omega2 = val_detail::random_psd_capped(m, rng, 0.3);
  p.Omega3 = val_detail::random_psd_capped(m, rng, 0.3);
  val_detail::Welford acc;
  for (long long i = 0; i < n_draws; ++i) {
    Matrix A = sample_matgamma(p.a, Matrix::Zero(m, m), m, rng);
    Matrix B = sample_matgamma(p.b, Matrix::Zero(m, m), m, rng);
    Matrix C = sample_matgamma(p.c, Matrix::Zero(m, m), m, rng);
    auto [U1, U2] = construct_bgb1(A, B, C);
    double f = bgb1_pdf(U1, U2, p, DensityMode::kNonsym, D, t).value;
    double q = std::exp(bgb1_log_kernel(U1, U2, p));
    acc.add(f / q);
  }
  rep.statistic = std::abs(acc.mean - 1.0);
  rep.tolerance = std::max(3.0 * acc.se(), 0.02);
  rep.pass = rep.statistic < rep.tolerance;
  std::ostringstream d;
  d << "mean=" << acc.mean << " se=" << acc.se();
  rep.detail = d.str();
  rep.runtime_seconds = watch.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// Acceptance criterion 3: Haar average of the nonsymmetrised density matches
// the symmetrised evaluator (simultaneous conjugation of both matrices).
inline CheckReport check_symmetrisation(BetaKind type, const Tables& t,
                                        std::uint64_t seed, long long n_haar = 200000) {
  val_detail::Stopwatch watch;
  CheckReport rep;
  rep.name = type == BetaKind::kTypeI ? "symmetrisation_bgb1" : "symmetrisation_bgb2";
  rep.seed = seed;
  rep.sample_size = n_haar;
  const int m = 2, D = 3;
  Rng rng(seed, type == BetaKind::kTypeI ? 31 : 32);
  TriParams p;
  p.m = m;
  p.a = 1.4;
  p.b = 1.9;
  p.c = 2.2;
  p.Omega1 = val_detail::random_psd_capped(m, rng, 0.3);
  p.Omega2 = val_detail::random_psd_capped(m, rng, 0.3);
  p.Omega3 = val_detail::random_psd_capped(m, rng, 0.3);

  Matrix X1, X2;
  if (type == BetaKind::kTypeI) {
    X1 = 0.35 * Matrix::Identity(m, m) + val_detail::random_psd_capped(m, rng, 0.25);
    X2 = 0.30 * Matrix::Identity(m, m) + val_detail::random_psd_capped(m, rng, 0.25);
  } else {
    X1 = 0.8 * Matrix::Identity(m, m) + val_detail::random_psd_capped(m, rng, 0.5);
    X2 = 0.9 * Matrix::Identity(m, m) + val_detail::random_psd_capped(m, rng, 0.5);
  }

  double sym = (type == BetaKind::kTypeI ? bgb1_pdf(X1, X2, p, DensityMode::kSym, D, t)
                                         : bgb2_pdf(X1, X2, p, DensityMode::kSym, D, t))
                   .value;
  val_detail::Welford acc;
  for (long long i = 0; i < n_haar; ++i) {
    Matrix H = sample_haar_orthogonal(m, rng);
    Matrix Y1 = symmetrize(H * X1 * H.transpose());
    Matrix Y2 = symmetrize(H * X2 * H.transpose());
    double f = (type == BetaKind::kTypeI
                    ? bgb1_pdf(Y1, Y2, p, DensityMode::kNonsym, D, t)
                    : bgb2_pdf(Y1, Y2, p, DensityMode::kNonsym, D, t))
                   .value;
    acc.add(f);
  }
  rep.statistic = std::abs(acc.mean - sym);
  rep.tolerance = std::max(3.0 * acc.se(), 0.01 * std::abs(sym));
  rep.pass = rep.statistic < rep.tolerance;
  std::ostringstream d;
  d << "haar_mean=" << acc.mean << " sym=" << sym << " se=" << acc.se();
  rep.detail = d.str();
  rep.runtime_seconds = watch.seconds();
  return rep;
}

// Same identity for the matrix variate beta families.
inline CheckReport check_symmetrisation_beta(BetaKind type, const Tables& t,
                                             std::uint64_t seed,
                                             long long n_haar = 200000) {
  val_detail::Stopwatch watch;
  CheckReport rep;
  rep.name = type == BetaKind::kTypeI ? "symmetrisation_beta1" : "symmetrisation_beta2";
  rep.seed = seed;
  rep.sample_size = n_haar;
  const int m = 2, D = 3;
  Rng rng(seed, type == BetaKind::kTypeI ? 33 : 34);
  BetaParams p;
  p.m = m;
  p.a = 1.3;
  p.b = 1.8;
  p.Omega1 = val_detail::random_psd_capped(m, rng, 0.3);
  p.Omega2 = val_detail::random_psd_capped(m, rng, 0.3);
  Matrix X = type == BetaKind::kTypeI
                 ? Matrix(0.4 * Matrix::Identity(m, m) +
                          val_detail::random_psd_capped(m, rng, 0.25))
                 : Matrix(0.9 * Matrix::Identity(m, m) +
                          val_detail::random_psd_capped(m, rng, 0.5));
  double sym = (type == BetaKind::kTypeI ? beta1_pdf(X, p, DensityMode::kSym, D, t)
                                         : beta2_pdf(X, p, DensityMode::kSym, D, t))
                   .value;
  val_detail::Welford acc;
  for (long long i = 0; i < n_haar; ++i) {
    Matrix H = sample_haar_orthogonal(m, rng);
    Matrix Y = symmetrize(H * X * H.transpose());
    double f = (type == BetaKind::kTypeI ? beta1_pdf(Y, p, DensityMode::kNonsym, D, t)
                                         : beta2_pdf(Y, p, DensityMode::kNonsym, D, t))
                   .value;
    acc.add(f);
  }
  rep.statistic = std::abs(acc.mean - sym);
  rep.tolerance = std::max(3.0 * acc.se(), 0.01 * std::abs(sym));
  rep.pass = rep.statistic < rep.tolerance;
  std::ostringstream d;
  d << "haar_mean=" << acc.mean << " sym=" << sym << " se=" << acc.se();
  rep.detail = d.str();
  rep.runtime_seconds = watch.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// Acceptance criterion 4: invariant table integrity.
inline CheckReport check_calibration_integrity(const Tables& t, std::uint64_t seed) {
  val_detail::Stopwatch watch;
  CheckReport rep;
  rep.name = "calibration_integrity";
  rep.seed = seed;
  rep.tolerance = 1.0;  // composite: the statistic is a max of scaled ratios
  Rng rng(seed, 41);
  double worst_ratio = 0.0;
  std::ostringstream detail;

  auto random_sym = [&](int m) {
    Matrix G(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) G(i, j) = rng.normal();
    return symmetrize(G);
  };

  for (const auto& [key, e] : t.invariant->entries) {
    // stored residuals
    worst_ratio = std::max(worst_ratio, e.restriction_residual / 1e-9);
    worst_ratio = std::max(worst_ratio, e.split_residual / 1e-8);

    // theta^2 = 1 for the single-row phi
    for (const PhiBlock& blk : e.blocks)
      if (blk.phi.length() == 1)
        worst_ratio = std::max(worst_ratio, std::abs(blk.theta_sq - 1.0) / 1e-10);

    // exact splitting on 20 fresh random tuples at m_cal
    const int q = static_cast<int>(key.parts.size());
    for (int rep_i = 0; rep_i < 20; ++rep_i) {
      int m = e.m_cal;
      std::vector<Matrix> outer, inner;
      for (int c = 0; c < q; ++c) {
        outer.push_back(random_sym(m));
        inner.push_back(random_sym(m));
      }
      // LHS via Weingarten
      double lhs = 0.0;
      std::vector<std::vector<std::pair<Partition, double>>> terms;
      for (const Partition& kappa : key.parts) {
        std::vector<std::pair<Partition, double>> tt;
        for (const auto& [rho, z] : t.zonal->powersum.at(kappa)) tt.emplace_back(rho, z);
        terms.push_back(std::move(tt));
      }
      std::vector<std::size_t> idx(static_cast<std::size_t>(q), 0);
      std::vector<Matrix> args;
      for (const auto& a : outer) args.push_back(a);
      for (const auto& x : inner) args.push_back(x);
      while (true) {
        double coef = 1.0;
        std::vector<CWord> words;
        for (int c = 0; c < q; ++c) {
          const auto& [rho, z] = terms[static_cast<std::size_t>(c)][idx[static_cast<std::size_t>(c)]];
          coef *= z;
          inv_detail::append_component_words(words, rho, c, q);
        }
        lhs += coef * haar_expect(words, args, m);
        int c = 0;
        while (c < q) {
          if (++idx[static_cast<std::size_t>(c)] < terms[static_cast<std::size_t>(c)].size()) break;
          idx[static_cast<std::size_t>(c)] = 0;
          ++c;
        }
        if (c == q) break;
      }
      double rhs = 0.0;
      for (const PhiBlock& blk : e.blocks) {
        if (blk.phi.length() > m) continue;
        rhs += paired_eval(e, blk, outer, inner) / zonal_at_identity(*t.zonal, blk.phi, m);
      }
      worst_ratio = std::max(worst_ratio,
                             std::abs(lhs - rhs) / (1e-8 * std::max(1.0, std::abs(lhs))));
    }
  }
  detail << "exact_checks_done";

  // Haar-MC splitting at m_cal and m = 2 for every key
  const long long n_draws = 20000;
  for (const auto& [key, e] : t.invariant->entries) {
    for (int m : {e.m_cal, 2}) {
      std::vector<Matrix> outer, inner;
      for (std::size_t c = 0; c < key.parts.size(); ++c) {
        outer.push_back(random_sym(m));
        inner.push_back(random_sym(m));
      }
      val_detail::Welford acc;
      for (long long i = 0; i < n_draws; ++i) {
        Matrix H = sample_haar_orthogonal(m, rng);
        double v = 1.0;
        for (std::size_t c = 0; c < key.parts.size(); ++c) {
          Matrix arg = outer[c] * H * inner[c] * H.transpose();
          v *= zonal_eval_generic<std::complex<double>>(*t.zonal, key.parts[c],
                                                        general_eigenvalues(arg))
                   .real();
        }
        acc.add(v);
      }
      double rhs = 0.0;
      for (const PhiBlock& blk : e.blocks) {
        if (blk.phi.length() > m) continue;
        rhs += paired_eval(e, blk, outer, inner) / zonal_at_identity(*t.zonal, blk.phi, m);
      }
      double dev = std::abs(acc.mean - rhs) / std::max(3.0 * acc.se(), 1e-12);
      worst_ratio = std::max(worst_ratio, dev);
      rep.sample_size += n_draws;
    }
  }

  rep.statistic = worst_ratio;
  rep.pass = worst_ratio < rep.tolerance;
  rep.detail = detail.str();
  rep.runtime_seconds = watch.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// Acceptance criterion 5: zonal normalization at random SPD spectra.
inline CheckReport check_zonal_normalization(const Tables& t, std::uint64_t seed) {
  val_detail::Stopwatch watch;
  CheckReport rep;
  rep.name = "zonal_normalization";
  rep.seed = seed;
  rep.tolerance = 1e-12;
  Rng rng(seed, 51);
  double worst = 0.0;
  for (int m = 1; m <= 5; ++m) {
    std::vector<double> eig(static_cast<std::size_t>(m));
    for (auto& x : eig) x = 0.1 + 1.9 * rng.uniform();
    double trace = 0.0;
    for (double x : eig) trace += x;
    for (int k = 1; k <= 8; ++k) {
      double sum = 0.0;
      for (const Partition& kappa : enumerate_partitions(k, k))
        sum += zonal_eval(*t.zonal, kappa, eig);
      worst = std::max(worst, std::abs(sum - std::pow(trace, k)) / std::pow(trace, k));
      ++rep.sample_size;
    }
  }
  rep.statistic = worst;
  rep.pass = worst < rep.tolerance;
  rep.runtime_seconds = watch.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// Acceptance criterion 6: sampler fidelity.
inline CheckReport check_sampler_fidelity(std::uint64_t seed, long long n_draws = 100000) {
  val_detail::Stopwatch watch;
  CheckReport rep;
  rep.name = "sampler_fidelity";
  rep.seed = seed;
  rep.sample_size = n_draws;
  rep.tolerance = 1.0;
  Rng rng(seed, 61);
  double worst_ratio = 0.0;
  std::ostringstream detail;

  // entrywise mean of A ~ G_m(a, I, Omega) is a I + Omega, within 4 SE
  {
    const int m = 2;
    double a = 1.5;
    Matrix Omega(m, m);
    Omega << 0.5, 0.2, 0.2, 0.3;
    std::vector<val_detail::Welford> cells(static_cast<std::size_t>(m * m));
    for (long long i = 0; i < n_draws; ++i) {
      Matrix A = sample_matgamma(a, Omega, m, rng);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
          cells[static_cast<std::size_t>(r * m + c)].add(A(r, c));
    }
    Matrix target = a * Matrix::Identity(m, m) + Omega;
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) {
        const auto& w = cells[static_cast<std::size_t>(r * m + c)];
        worst_ratio = std::max(worst_ratio,
                               std::abs(w.mean - target(r, c)) / (4.0 * w.se()));
      }
    detail << "mean_ok";
  }

  // m=1 central: 2 tr(A) at a = k/2 is chi-square_k; KS vs noncentral gamma
  {
    double a = 1.5, w = 0.8;
    std::vector<double> central, noncentral;
    central.reserve(static_cast<std::size_t>(n_draws));
    noncentral.reserve(static_cast<std::size_t>(n_draws));
    Matrix zero = Matrix::Zero(1, 1), om = val_detail::scalar1(w);
    for (long long i = 0; i < n_draws; ++i) {
      central.push_back(sample_matgamma(a, zero, 1, rng)(0, 0));
      noncentral.push_back(sample_matgamma(a, om, 1, rng)(0, 0));
    }
    double d_c = ks_statistic(central, [&](double x) {
      return boost::math::gamma_p(a, x);
    });
    double p_c = ks_pvalue(d_c, central.size());
    double d_n = ks_statistic(noncentral, [&](double x) {
      return noncentral_gamma_cdf(a, w, x);
    });
    double p_n = ks_pvalue(d_n, noncentral.size());
    worst_ratio = std::max(worst_ratio, 0.001 / std::max(p_c, 1e-300));
    worst_ratio = std::max(worst_ratio, 0.001 / std::max(p_n, 1e-300));
    detail << " ks_gamma_p=" << p_c << "," << p_n;
  }

  // m=1 construction: U1 ~ Beta(a, c) via the bgb1 construction, KS
  {
    double a = 1.5, c = 2.0;
    std::vector<double> u1s;
    Matrix zero = Matrix::Zero(1, 1);
    for (long long i = 0; i < n_draws; ++i) {
      Matrix A = sample_matgamma(a, zero, 1, rng);
      Matrix C = sample_matgamma(c, zero, 1, rng);
      u1s.push_back(A(0, 0) / (A(0, 0) + C(0, 0)));
    }
    double d = ks_statistic(u1s, [&](double x) { return beta_cdf(a, c, x); });
    double p = ks_pvalue(d, u1s.size());
    worst_ratio = std::max(worst_ratio, 0.001 / std::max(p, 1e-300));
    detail << " ks_beta_p=" << p;
  }

  rep.statistic = worst_ratio;
  rep.pass = worst_ratio < rep.tolerance;
  rep.detail = detail.str();
  rep.runtime_seconds = watch.seconds();
  return rep;
}

// Construction vs analytic law: m=1 KS tests of the bgb1 marginals against
// the series densities; m=2 moment comparison through importance sampling.
inline CheckReport check_sampler_vs_density(const Tables& t, std::uint64_t seed,
                                            long long n_draws = 100000) {
  val_detail::Stopwatch watch;
  CheckReport rep;
  rep.name = "sampler_vs_density";
  rep.seed = seed;
  rep.sample_size = n_draws;
  rep.tolerance = 1.0;
  Rng rng(seed, 71);
  double worst_ratio = 0.0;
  std::ostringstream detail;

  // m = 1 doubly noncentral: U1 ~ BI(a, c, w1, w3), the construction's marginal
  {
    double a = 1.5, c = 2.0, w1 = 0.6, w3 = 0.9;
    std::vector<double> u1s;
    u1s.reserve(static_cast<std::size_t>(n_draws));
    Matrix om1 = val_detail::scalar1(w1), om3 = val_detail::scalar1(w3);
    for (long long i = 0; i < n_draws; ++i) {
      Matrix A = sample_matgamma(a, om1, 1, rng);
      Matrix C = sample_matgamma(c, om3, 1, rng);
      u1s.push_back(A(0, 0) / (A(0, 0) + C(0, 0)));
    }
    double d = ks_statistic(u1s, [&](double u) { return dnc_beta_cdf(a, c, w1, w3, u); });
    double p = ks_pvalue(d, u1s.size());
    worst_ratio = std::max(worst_ratio, 0.001 / std::max(p, 1e-300));
    detail << "ks_dnc_p=" << p;
  }

  // m = 2: E[tr U1] and E[tr U1 U2] from the noncentral construction vs the
  // self-normalized importance-sampling estimate under the density, within
  // 4 combined SE.  Self-normalization divides out the small normalization
  // deficit of the truncated series (the truncated density does not
  // integrate to exactly one); the noncentrality cap keeps the residual
  // second-order truncation bias below the Monte Carlo noise floor.
  {
    const int m = 2, D = 3;
    TriParams p;
    p.m = m;
    p.a = 1.5;
    p.b = 2.0;
    p.c = 2.5;
    p.Omega1 = val_detail::random_psd_capped(m, rng, 0.2);
    p.Omega2 = val_detail::random_psd_capped(m, rng, 0.2);
    p.Omega3 = val_detail::random_psd_capped(m, rng, 0.2);
    val_detail::Welford s_tr, s_cross, r_tr, r_cross, d_norm;
    for (long long i = 0; i < n_draws / 2; ++i) {
      Matrix A = sample_matgamma(p.a, p.Omega1, m, rng);
      Matrix B = sample_matgamma(p.b, p.Omega2, m, rng);
      Matrix C = sample_matgamma(p.c, p.Omega3, m, rng);
      auto [U1, U2] = construct_bgb1(A, B, C);
      s_tr.add(U1.trace());
      s_cross.add((U1 * U2).trace());
    }
    for (long long i = 0; i < n_draws / 2; ++i) {
      Matrix A = sample_matgamma(p.a, Matrix::Zero(m, m), m, rng);
      Matrix B = sample_matgamma(p.b, Matrix::Zero(m, m), m, rng);
      Matrix C = sample_matgamma(p.c, Matrix::Zero(m, m), m, rng);
      auto [U1, U2] = construct_bgb1(A, B, C);
      double wgt = bgb1_pdf(U1, U2, p, DensityMode::kNonsym, D, t).value /
                   std::exp(bgb1_log_kernel(U1, U2, p));
      d_norm.add(wgt);
      // accumulate the ratio statistics through per-draw regression values;
      // the delta-method SE of E[gw]/E[w] is the SE of g w - g_bar w around
      // the running means, collected in a second pass below
      r_tr.add(wgt * U1.trace());
      r_cross.add(wgt * (U1 * U2).trace());
    }
    double mean_tr = r_tr.mean / d_norm.mean;
    double mean_cross = r_cross.mean / d_norm.mean;
    // conservative SE for the ratio: (se_num + |mean| se_den) / den
    double se_tr_is = (r_tr.se() + std::abs(mean_tr) * d_norm.se()) / d_norm.mean;
    double se_cross_is =
        (r_cross.se() + std::abs(mean_cross) * d_norm.se()) / d_norm.mean;
    double se_tr = std::sqrt(s_tr.se() * s_tr.se() + se_tr_is * se_tr_is);
    double se_cross = std::sqrt(s_cross.se() * s_cross.se() + se_cross_is * se_cross_is);
    worst_ratio = std::max(worst_ratio, std::abs(s_tr.mean - mean_tr) / (4.0 * se_tr));
    worst_ratio =
        std::max(worst_ratio, std::abs(s_cross.mean - mean_cross) / (4.0 * se_cross));
    detail << " trU1 sample=" << s_tr.mean << " density=" << mean_tr
           << " trU1U2 sample=" << s_cross.mean << " density=" << mean_cross;
  }

  rep.statistic = worst_ratio;
  rep.pass = worst_ratio < rep.tolerance;
  rep.detail = detail.str();
  rep.runtime_seconds = watch.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// Acceptance criterion 7: structural identities.
inline CheckReport check_collapse_and_corollaries(BetaKind type, const Tables& t,
                                                  std::uint64_t seed) {
  val_detail::Stopwatch watch;
  CheckReport rep;
  rep.name = type == BetaKind::kTypeI ? "special_cases_type1" : "special_cases_type2";
  rep.seed = seed;
  rep.tolerance = 1e-12;
  Rng rng(seed, type == BetaKind::kTypeI ? 81 : 82);
  const int m = 2, D = 3;
  double worst = 0.0;
  Matrix zero = Matrix::Zero(m, m);
  Matrix Om1 = val_detail::random_psd_capped(m, rng, 0.4);
  Matrix Om2 = val_detail::random_psd_capped(m, rng, 0.4);
  Matrix Om3 = val_detail::random_psd_capped(m, rng, 0.4);
  for (int grid = 0; grid < 3; ++grid) {
    Matrix X1, X2;
    if (type == BetaKind::kTypeI) {
      X1 = (0.25 + 0.15 * grid) * Matrix::Identity(m, m) +
           val_detail::random_psd_capped(m, rng, 0.15);
      X2 = (0.2 + 0.15 * grid) * Matrix::Identity(m, m) +
           val_detail::random_psd_capped(m, rng, 0.15);
    } else {
      X1 = (0.6 + 0.4 * grid) * Matrix::Identity(m, m) +
           val_detail::random_psd_capped(m, rng, 0.4);
      X2 = (0.7 + 0.4 * grid) * Matrix::Identity(m, m) +
           val_detail::random_psd_capped(m, rng, 0.4);
    }
    for (int case_id = 1; case_id <= 6; ++case_id) {
      TriParams p;
      p.m = m;
      p.a = 1.3;
      p.b = 1.8;
      p.c = 2.2;
      p.Omega1 = (case_id == 1 || case_id == 4 || case_id == 6) ? zero : Om1;
      p.Omega2 = (case_id == 1 || case_id == 3 || case_id == 5) ? zero : Om2;
      p.Omega3 = (case_id == 2 || case_id == 3 || case_id == 4) ? zero : Om3;
      double coro =
          bgb_special_pdf(type, case_id, X1, X2, p, DensityMode::kNonsym, D, t).value;
      double full = (type == BetaKind::kTypeI
                         ? bgb1_pdf(X1, X2, p, DensityMode::kNonsym, D, t)
                         : bgb2_pdf(X1, X2, p, DensityMode::kNonsym, D, t))
                        .value;
      worst = std::max(worst, std::abs(coro - full) / std::max(1.0, std::abs(full)));
      ++rep.sample_size;
    }
    // all-zero collapse against the central closed form
    TriParams c0;
    c0.m = m;
    c0.a = 1.3;
    c0.b = 1.8;
    c0.c = 2.2;
    c0.Omega1 = c0.Omega2 = c0.Omega3 = zero;
    double dens = (type == BetaKind::kTypeI
                       ? bgb1_pdf(X1, X2, c0, DensityMode::kNonsym, D, t)
                       : bgb2_pdf(X1, X2, c0, DensityMode::kNonsym, D, t))
                      .value;
    double central = std::exp(type == BetaKind::kTypeI ? bgb1_log_kernel(X1, X2, c0)
                                                       : bgb2_log_kernel(X1, X2, c0));
    worst = std::max(worst, std::abs(dens - central) / central);
  }
  rep.statistic = worst;
  rep.pass = worst < rep.tolerance;
  rep.runtime_seconds = watch.seconds();
  return rep;
}

inline CheckReport check_change_of_variables(const Tables& t, std::uint64_t seed) {
  val_detail::Stopwatch watch;
  CheckReport rep;
  rep.name = "change_of_variables";
  rep.seed = seed;
  rep.tolerance = 1e-10;
  Rng rng(seed, 91);
  double worst = 0.0;
  for (int m : {1, 2}) {
    int D = m == 1 ? 20 : 3;
    TriParams p;
    p.m = m;
    p.a = 1.3;
    p.b = 1.9;
    p.c = 2.4;
    p.Omega1 = val_detail::random_psd_capped(m, rng, 0.3);
    p.Omega2 = val_detail::random_psd_capped(m, rng, 0.3);
    p.Omega3 = val_detail::random_psd_capped(m, rng, 0.3);
    Matrix I = Matrix::Identity(m, m);
    for (int rep_i = 0; rep_i < 4; ++rep_i) {
      Matrix F1 = 0.4 * I + val_detail::random_psd_capped(m, rng, 1.5);
      Matrix F2 = 0.4 * I + val_detail::random_psd_capped(m, rng, 1.5);
      Matrix U1 = symmetrize(I - (I + F1).inverse());
      Matrix U2 = symmetrize(I - (I + F2).inverse());
      double left = bgb2_pdf(F1, F2, p, DensityMode::kNonsym, D, t).value;
      double jac = std::exp(-(m + 1.0) * (spd_logdet(I + F1) + spd_logdet(I + F2)));
      double right = bgb1_pdf(U1, U2, p, DensityMode::kNonsym, D, t).value * jac;
      worst = std::max(worst, std::abs(left - right) / std::max(1e-300, std::abs(right)));
      ++rep.sample_size;
    }
  }
  rep.statistic = worst;
  rep.pass = worst < rep.tolerance;
  rep.runtime_seconds = watch.seconds();
  return rep;
}

inline CheckReport check_m_inverse(std::uint64_t seed) {
  val_detail::Stopwatch watch;
  CheckReport rep;
  rep.name = "m_inverse_reconstruction";
  rep.seed = seed;
  rep.tolerance = 1e-10;
  Rng rng(seed, 92);
  double worst = 0.0;
  for (int rep_i = 0; rep_i < 20; ++rep_i) {
    int m = 2 + static_cast<int>(rng.next_u64() % 3);
    Matrix I = Matrix::Identity(m, m);
    Matrix U1 = 0.2 * I + val_detail::random_psd_capped(m, rng, 0.4);
    Matrix U2 = 0.2 * I + val_detail::random_psd_capped(m, rng, 0.4);
    auto tr = transforms_M(U1, U2);
    Matrix lhs = tr.M.inverse();
    Matrix rhs = (I - U1).inverse() * U1 + (I - U2).inverse() * U2 + I;
    worst = std::max(worst, (lhs - rhs).norm() / rhs.norm());
    ++rep.sample_size;
  }
  rep.statistic = worst;
  rep.pass = worst < rep.tolerance;
  rep.runtime_seconds = watch.seconds();
  return rep;
}

// Marginal consistency at m = 1: integrating bgb1 over u2 recovers the
// doubly noncentral beta density of U1 (the construction's marginal law).
inline CheckReport check_marginal_consistency(const Tables& t) {
  val_detail::Stopwatch watch;
  CheckReport rep;
  rep.name = "marginal_consistency_m1";
  rep.tolerance = 1e-6;
  const int K = 30;
  TriParams p;
  p.m = 1;
  p.a = 1.4;
  p.b = 1.9;
  p.c = 1.2;
  p.Omega1 = val_detail::scalar1(0.4);
  p.Omega2 = val_detail::scalar1(0.5);
  p.Omega3 = val_detail::scalar1(0.6);
  BetaParams marg;
  marg.m = 1;
  marg.a = p.a;
  marg.b = p.c;
  marg.Omega1 = p.Omega1;
  marg.Omega2 = p.Omega3;
  double worst = 0.0;
  for (double u1 : {0.25, 0.5, 0.75}) {
    auto q = integrate_01(
        [&](double u2) {
          return bgb1_pdf(val_detail::scalar1(u1), val_detail::scalar1(u2), p,
                          DensityMode::kNonsym, K, t)
              .value;
        },
        1e-10);
    double expect =
        beta1_pdf(val_detail::scalar1(u1), marg, DensityMode::kNonsym, K, t).value;
    worst = std::max(worst, std::abs(q.value - expect) / expect);
    ++rep.sample_size;
  }
  rep.statistic = worst;
  rep.pass = worst < rep.tolerance;
  rep.runtime_seconds = watch.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
inline std::vector<CheckReport> run_validation_suite(const std::string& suite,
                                                     std::uint64_t seed,
                                                     const Tables& t) {
  std::vector<CheckReport> out;
  auto want = [&](const char* name) { return suite == "all" || suite == name; };
  if (want("scalar")) out.push_back(check_scalar_oracle_equivalence(t));
  if (want("normalization")) {
    out.push_back(check_normalization_m1(t));
    out.push_back(check_normalization_m2(t, seed));
  }
  if (want("symmetrisation")) {
    out.push_back(check_symmetrisation(BetaKind::kTypeI, t, seed));
    out.push_back(check_symmetrisation(BetaKind::kTypeII, t, seed));
    out.push_back(check_symmetrisation_beta(BetaKind::kTypeI, t, seed));
    out.push_back(check_symmetrisation_beta(BetaKind::kTypeII, t, seed));
  }
  if (want("calibration")) out.push_back(check_calibration_integrity(t, seed));
  if (want("zonal")) out.push_back(check_zonal_normalization(t, seed));
  if (want("sampler")) {
    out.push_back(check_sampler_fidelity(seed));
    out.push_back(check_sampler_vs_density(t, seed));
  }
  if (want("structure")) {
    out.push_back(check_collapse_and_corollaries(BetaKind::kTypeI, t, seed));
    out.push_back(check_collapse_and_corollaries(BetaKind::kTypeII, t, seed));
    out.push_back(check_change_of_variables(t, seed));
    out.push_back(check_m_inverse(seed));
    out.push_back(check_marginal_consistency(t));
  }
  if (out.empty()) throw std::invalid_argument("unknown validation suite: " + suite);
  return out;
}

}  // namespace genbeta
