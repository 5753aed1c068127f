#pragma once

// Test-only oracle: monic Jack polynomials P_lambda at parameter alpha = 2,
// built by Gram-Schmidt in power-sum coordinates against the Jack inner
// product <p_rho, p_sigma> = delta_{rho sigma} z_rho 2^{len(rho)}.  Zonal
// polynomials must be scalar multiples of these; the construction shares
// nothing with the coefficient recurrence in genbeta/zonal.hpp.

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "genbeta/partition.hpp"
#include "genbeta/symfun.hpp"

namespace jack_oracle {

using genbeta::Partition;

inline double z_rho(const Partition& rho) {
  std::map<int, int> mult;
  for (int i = 0; i < rho.length(); ++i) ++mult[rho.part(i)];
  double v = 1.0;
  for (const auto& [r, m] : mult) {
    for (int j = 0; j < m; ++j) v *= r;
    for (int j = 2; j <= m; ++j) v *= j;
  }
  return v;
}

// Power-sum coordinates of every monic Jack P_lambda of weight k, keyed by
// lambda then rho.
inline std::map<Partition, std::map<Partition, double>> jack_p2_powersum(int k) {
  using genbeta::enumerate_partitions;
  std::vector<Partition> parts = enumerate_partitions(k, k);
  const int n = static_cast<int>(parts.size());

  // monomial coordinates of p_rho, then invert to express each m_lambda in
  // power sums
  Eigen::MatrixXd P(n, n);
  for (int col = 0; col < n; ++col) {
    auto prho = genbeta::power_sum_monomials(parts[static_cast<std::size_t>(col)], k);
    for (int row = 0; row < n; ++row) {
      auto it = prho.find(parts[static_cast<std::size_t>(row)]);
      P(row, col) = it == prho.end() ? 0.0 : it->second;
    }
  }
  Eigen::MatrixXd Minv = P.inverse();  // column l gives p-coords of m_lambda? no:
  // P maps p-coords -> m-coords, so m_lambda (unit m-vector) has p-coords
  // P^{-1} e_lambda.

  auto inner = [&](const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
    double s = 0;
    for (int i = 0; i < n; ++i) {
      const Partition& rho = parts[static_cast<std::size_t>(i)];
      double w = z_rho(rho);
      for (int j = 0; j < rho.length(); ++j) w *= 2.0;
      s += f(i) * g(i) * w;
    }
    return s;
  };

  // Gram-Schmidt from the most dominated partition upward (reverse revlex).
  std::map<Partition, Eigen::VectorXd> done;
  std::vector<Partition> order(parts.rbegin(), parts.rend());
  for (const Partition& lambda : order) {
    int idx = 0;
    for (int i = 0; i < n; ++i)
      if (parts[static_cast<std::size_t>(i)] == lambda) idx = i;
    Eigen::VectorXd v = Minv.col(idx);
    for (const auto& [mu, pv] : done)
      v -= inner(v, pv) / inner(pv, pv) * pv;
    done[lambda] = v;
  }

  std::map<Partition, std::map<Partition, double>> out;
  for (const auto& [lambda, v] : done) {
    std::map<Partition, double> coords;
    for (int i = 0; i < n; ++i)
      if (v(i) != 0.0) coords[parts[static_cast<std::size_t>(i)]] = v(i);
    out[lambda] = coords;
  }
  return out;
}

}  // namespace jack_oracle
