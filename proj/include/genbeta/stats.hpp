#pragma once

// Kolmogorov-Smirnov machinery and the scalar CDFs the sampler checks test
// against.  The scalar special functions come from Boost.Math so the oracle
// path shares nothing with the series evaluators.

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <functional>
#include <vector>

namespace genbeta {

inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double F = cdf(samples[i]);
    d = std::max(d, std::abs(F - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - F));
  }
  return d;
}

// Asymptotic Kolmogorov p-value with the Stephens small-sample correction.
inline double ks_pvalue(double d, std::size_t n) {
  double sqrt_n = std::sqrt(static_cast<double>(n));
  double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
  double p = 0.0;
  for (int j = 1; j <= 100; ++j) {
    double term = 2.0 * std::pow(-1.0, j - 1) * std::exp(-2.0 * j * j * lambda * lambda);
    p += term;
    if (std::abs(term) < 1e-14) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

inline double beta_cdf(double a, double b, double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  return boost::math::ibeta(a, b, x);
}

// scalar noncentral gamma CDF (unit scale): sum_j e^{-w} w^j / j! P(a+j, x)
inline double noncentral_gamma_cdf(double a, double w, double x) {
  if (x <= 0) return 0;
  if (w == 0) return boost::math::gamma_p(a, x);
  double f = 0.0;
  double logw = std::log(w);
  int jmax = static_cast<int>(w + 10 * std::sqrt(w) + 40);
  for (int j = 0; j <= jmax; ++j) {
    double logpois = -w + j * logw - std::lgamma(j + 1.0);
    f += std::exp(logpois) * boost::math::gamma_p(a + j, x);
  }
  return std::clamp(f, 0.0, 1.0);
}

// scalar doubly noncentral beta CDF, shells k+l <= K; Poisson weights below
// 1e-15 are dropped (their ibeta factors are bounded by one)
inline double dnc_beta_cdf(double a, double b, double w1, double w2, double u,
                           int K = 40) {
  if (u <= 0) return 0;
  if (u >= 1) return 1;
  if (w1 == 0 && w2 == 0) return beta_cdf(a, b, u);
  double f = 0.0;
  const double log_cut = std::log(1e-15);
  for (int s = 0; s <= K; ++s)
    for (int k = 0; k <= s; ++k) {
      int l = s - k;
      if ((w1 == 0 && k > 0) || (w2 == 0 && l > 0)) continue;
      double logpois = -w1 - w2 - std::lgamma(k + 1.0) - std::lgamma(l + 1.0);
      if (k > 0) logpois += k * std::log(w1);
      if (l > 0) logpois += l * std::log(w2);
      if (logpois < log_cut) continue;
      f += std::exp(logpois) * boost::math::ibeta(a + k, b + l, u);
    }
  return std::clamp(f, 0.0, 1.0);
}

}  // namespace genbeta
