#pragma once

// Perfect matchings of {0..2d-1} and the orthogonal-group Weingarten table:
// Wg is the (pseudo-)inverse of the Gram matrix G(sigma,tau) = m^{#loops},
// where loops are the connected components of the union of the two
// matchings.  Haar moments follow as
//   E[prod_r H_{i_r j_r}] = sum_{sigma,tau} delta_sigma(i) delta_tau(j) Wg(sigma,tau).

#include <Eigen/Dense>
#include <map>
#include <stdexcept>
#include <vector>

namespace genbeta {

using Pairing = std::vector<int>;  // partner[i] = j, an involution without fixed points

// All (two_d - 1)!! matchings, canonical order: the smallest unpaired point
// is matched with each larger point in increasing order, recursively.
inline std::vector<Pairing> enumerate_pairings(int two_d) {
  if (two_d < 0 || two_d % 2 != 0)
    throw std::invalid_argument("enumerate_pairings: even count required");
  if (two_d > 16) throw std::domain_error("enumerate_pairings: order too large");
  std::vector<Pairing> out;
  Pairing partner(static_cast<std::size_t>(two_d), -1);
  auto rec = [&](auto&& self) -> void {
    int first = -1;
    for (int i = 0; i < two_d; ++i)
      if (partner[static_cast<std::size_t>(i)] < 0) { first = i; break; }
    if (first < 0) {
      out.push_back(partner);
      return;
    }
    for (int j = first + 1; j < two_d; ++j) {
      if (partner[static_cast<std::size_t>(j)] >= 0) continue;
      partner[static_cast<std::size_t>(first)] = j;
      partner[static_cast<std::size_t>(j)] = first;
      self(self);
      partner[static_cast<std::size_t>(first)] = -1;
      partner[static_cast<std::size_t>(j)] = -1;
    }
  };
  rec(rec);
  return out;
}

inline int pairing_loop_count(const Pairing& a, const Pairing& b) {
  const int n = static_cast<int>(a.size());
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  int loops = 0;
  for (int start = 0; start < n; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    ++loops;
    int x = start;
    while (!seen[static_cast<std::size_t>(x)]) {
      seen[static_cast<std::size_t>(x)] = true;
      int y = a[static_cast<std::size_t>(x)];
      seen[static_cast<std::size_t>(y)] = true;
      x = b[static_cast<std::size_t>(y)];
    }
  }
  return loops;
}

struct WeingartenTable {
  int order = 0;      // d: matchings of 2d points
  int dim = 0;        // m
  std::vector<Pairing> pairings;
  Eigen::MatrixXd wg;
  bool gram_singular = false;  // pseudo-inverse was needed (expected when m < d)
};

inline WeingartenTable weingarten_orth(int d, int m) {
  if (d < 0 || d > 4) throw std::domain_error("weingarten_orth: order must be in [0,4]");
  if (m < 1) throw std::invalid_argument("weingarten_orth: m >= 1");
  WeingartenTable t;
  t.order = d;
  t.dim = m;
  t.pairings = enumerate_pairings(2 * d);
  const int n = static_cast<int>(t.pairings.size());
  Eigen::MatrixXd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      G(i, j) = std::pow(static_cast<double>(m),
                         pairing_loop_count(t.pairings[static_cast<std::size_t>(i)],
                                            t.pairings[static_cast<std::size_t>(j)]));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  const Eigen::VectorXd& ev = es.eigenvalues();
  double thresh = 1e-12 * ev.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (std::abs(ev(i)) > thresh)
      inv(i) = 1.0 / ev(i);
    else
      t.gram_singular = true;
  }
  t.wg = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
  return t;
}

// Shared tables: calibration and checks reuse a handful of (d, m) pairs.
inline const WeingartenTable& weingarten_cached(int d, int m) {
  static std::map<std::pair<int, int>, WeingartenTable> cache;
  auto key = std::make_pair(d, m);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, weingarten_orth(d, m)).first;
  return it->second;
}

}  // namespace genbeta
