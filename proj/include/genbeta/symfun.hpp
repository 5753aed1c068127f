#pragma once

// Symmetric-function plumbing in the monomial basis m_lambda.  Degrees stay
// small (<= 12), so exact orbit enumeration is affordable and keeps every
// coefficient an exact small rational combination.

#include <algorithm>
#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "genbeta/partition.hpp"

namespace genbeta {

// Homogeneous symmetric polynomial of one fixed degree, stored as
// coefficients over monomial symmetric functions of that degree.
using MonomialVec = std::map<Partition, double>;

namespace detail {

// Distinct permutations of the parts of lambda padded with zeros to n slots.
inline std::vector<std::vector<int>> padded_orbit(const Partition& lambda, int n) {
  std::vector<int> v(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < lambda.length(); ++i) v[static_cast<std::size_t>(i)] = lambda.part(i);
  std::sort(v.begin(), v.end());
  std::vector<std::vector<int>> orbit;
  do {
    orbit.push_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return orbit;
}

inline Partition exponents_to_partition(std::vector<int> e) {
  std::sort(e.begin(), e.end(), std::greater<int>());
  while (!e.empty() && e.back() == 0) e.pop_back();
  return Partition(std::move(e));
}

}  // namespace detail

// f * m_(r) by orbit convolution: the coefficient of m_nu in the product
// counts pairs (alpha, i) with alpha + r e_i equal to the canonical
// weakly-decreasing exponent vector of nu.  n_vars must be at least the
// product's total degree.
inline MonomialVec multiply_by_power_sum(const MonomialVec& f, int r, int n_vars) {
  MonomialVec out;
  for (const auto& [lambda, coef] : f) {
    for (const auto& alpha : detail::padded_orbit(lambda, n_vars)) {
      for (int i = 0; i < n_vars; ++i) {
        std::vector<int> beta = alpha;
        beta[static_cast<std::size_t>(i)] += r;
        bool canonical = true;
        for (std::size_t j = 1; j < beta.size(); ++j)
          if (beta[j] > beta[j - 1]) { canonical = false; break; }
        if (!canonical) continue;
        out[detail::exponents_to_partition(beta)] += coef;
      }
    }
  }
  return out;
}

// p_rho = prod_j p_{rho_j} expanded in the monomial basis.
inline MonomialVec power_sum_monomials(const Partition& rho, int n_vars) {
  MonomialVec f;
  f[Partition{}] = 1.0;
  for (int j = 0; j < rho.length(); ++j)
    f = multiply_by_power_sum(f, rho.part(j), n_vars);
  return f;
}

// m_lambda evaluated at the eigenvalues x (sum over distinct permutations of
// lambda of the corresponding monomial).  Zero when lambda is longer than x.
template <typename Scalar>
Scalar monomial_eval(const Partition& lambda, const std::vector<Scalar>& x) {
  const int n = static_cast<int>(x.size());
  if (lambda.length() > n) return Scalar(0);
  if (lambda.empty()) return Scalar(1);
  Scalar total(0);
  for (const auto& alpha : detail::padded_orbit(lambda, n)) {
    Scalar term(1);
    for (int i = 0; i < n; ++i)
      for (int e = 0; e < alpha[static_cast<std::size_t>(i)]; ++e)
        term *= x[static_cast<std::size_t>(i)];
    total += term;
  }
  return total;
}

// m_lambda at m ones: the number of distinct permutations of lambda padded
// to m slots (a multinomial coefficient).
inline double monomial_count_at_identity(const Partition& lambda, int m) {
  if (lambda.length() > m) return 0.0;
  if (lambda.empty()) return 1.0;
  std::map<int, int> mult;
  for (int i = 0; i < lambda.length(); ++i) ++mult[lambda.part(i)];
  mult[0] = m - lambda.length();
  double v = std::lgamma(m + 1.0);
  for (const auto& [value, count] : mult) v -= std::lgamma(count + 1.0);
  return std::round(std::exp(v));
}

}  // namespace genbeta
