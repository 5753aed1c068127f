#pragma once

// Integer partitions and the generalized Pochhammer / multivariate gamma
// constants built on them.  Partitions index every series in the library:
// zonal polynomials, invariant polynomials, and the hypergeometric shells.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace genbeta {

// Weakly decreasing list of positive integers.  The empty partition has
// weight zero and acts as the unit index: (a)_{} = 1, C_{}(X) = 1.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] <= 0)
        throw std::invalid_argument("Partition: parts must be positive");
      if (i > 0 && parts_[i] > parts_[i - 1])
        throw std::invalid_argument("Partition: parts must be weakly decreasing");
    }
  }
  Partition(std::initializer_list<int> parts)
      : Partition(std::vector<int>(parts)) {}

  int weight() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }
  int length() const { return static_cast<int>(parts_.size()); }
  bool empty() const { return parts_.empty(); }
  // Zero-padded access: part(i) = 0 beyond the last part.
  int part(int i) const {
    return i < length() ? parts_[static_cast<std::size_t>(i)] : 0;
  }
  const std::vector<int>& parts() const { return parts_; }

  bool operator==(const Partition& o) const { return parts_ == o.parts_; }
  bool operator!=(const Partition& o) const { return !(*this == o); }

  // Canonical order: by weight, then reverse lexicographic, so that (4)
  // precedes (3,1) precedes (2,2) ...  This refines dominance order.
  bool operator<(const Partition& o) const {
    int w = weight(), wo = o.weight();
    if (w != wo) return w < wo;
    return std::lexicographical_compare(o.parts_.begin(), o.parts_.end(),
                                        parts_.begin(), parts_.end());
  }

  std::string str() const {
    if (parts_.empty()) return "()";
    std::string s = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(parts_[i]);
    }
    return s + ")";
  }

 private:
  std::vector<int> parts_;
};

// lambda <= kappa in dominance order (equal weights assumed by caller).
inline bool dominated_by(const Partition& lambda, const Partition& kappa) {
  int acc_l = 0, acc_k = 0;
  int n = std::max(lambda.length(), kappa.length());
  for (int i = 0; i < n; ++i) {
    acc_l += lambda.part(i);
    acc_k += kappa.part(i);
    if (acc_l > acc_k) return false;
  }
  return true;
}

// All partitions of k with at most max_len parts, in reverse lexicographic
// order.  enumerate_partitions(0, m) = { () }.
inline std::vector<Partition> enumerate_partitions(int k, int max_len) {
  if (k < 0 || max_len < 1) throw std::invalid_argument("enumerate_partitions: bad arguments");
  std::vector<Partition> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int remaining, int max_part, int slots) -> void {
    if (remaining == 0) {
      out.emplace_back(cur);
      return;
    }
    if (slots == 0) return;
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      cur.push_back(p);
      self(self, remaining - p, p, slots - 1);
      cur.pop_back();
    }
  };
  rec(rec, k, k == 0 ? 1 : k, max_len);
  return out;
}

// Partition counting by the standard dynamic program; used as an oracle in
// tests and for sanity checks.
inline long long partition_count(int k) {
  std::vector<long long> p(static_cast<std::size_t>(k) + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= k; ++part)
    for (int s = part; s <= k; ++s) p[s] += p[s - part];
  return p[static_cast<std::size_t>(k)];
}

// Rising factorial (x)_n = x (x+1) ... (x+n-1).
inline double rising_factorial(double x, int n) {
  double v = 1.0;
  for (int j = 0; j < n; ++j) v *= x + j;
  return v;
}

// Generalized Pochhammer symbol (a)_kappa = prod_i (a - (i-1)/2)_{kappa_i}.
// This is the convention under which 0F0(X) = etr(X) and all m = 1
// reductions below hold.
inline double gen_pochhammer(double a, const Partition& kappa) {
  double v = 1.0;
  for (int i = 0; i < kappa.length(); ++i)
    v *= rising_factorial(a - 0.5 * i, kappa.part(i));
  return v;
}

// log Gamma_m[a] = (m(m-1)/4) log pi + sum_i log Gamma(a - (i-1)/2),
// defined for a > (m-1)/2.
inline double lgamma_m(int m, double a) {
  if (m < 1) throw std::invalid_argument("lgamma_m: m must be >= 1");
  if (!(a > 0.5 * (m - 1)))
    throw std::domain_error("lgamma_m: requires a > (m-1)/2");
  double v = 0.25 * m * (m - 1) * std::log(M_PI);
  for (int i = 0; i < m; ++i) v += std::lgamma(a - 0.5 * i);
  return v;
}

// log beta_m[a,b] = log Gamma_m[a] + log Gamma_m[b] - log Gamma_m[a+b].
inline double lbeta_m(int m, double a, double b) {
  return lgamma_m(m, a) + lgamma_m(m, b) - lgamma_m(m, a + b);
}

// log beta*_m[a,b,c] = log of Gamma_m[a] Gamma_m[b] Gamma_m[c] / Gamma_m[a+b+c].
inline double lbeta_star_m(int m, double a, double b, double c) {
  return lgamma_m(m, a) + lgamma_m(m, b) + lgamma_m(m, c) - lgamma_m(m, a + b + c);
}

}  // namespace genbeta
