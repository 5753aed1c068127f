#pragma once

// Davis invariant polynomials C_phi^{kappa,lambda}(X,Y) and
// C_phi^{kappa,tau,lambda}(X,Y,Z), calibrated through exact Haar integration
// over the orthogonal group.
//
// The splitting identity (for symmetric arguments)
//   int C_kappa(A H X H') C_lambda(B H Y H') (dH)
//     = sum_phi C_phi(A,B) C_phi(X,Y) / C_phi(I_m)
// defines the polynomials up to the block structure over phi.  Calibration
// computes the left side symbolically (Weingarten), recovers the bilinear
// kernel G over the symmetric trace-monomial basis, splits G into phi-blocks
// using the dilation operator L_t f(A...) = E_{C ~ Gamma_m(t,I)} f(A_1 C, ...)
// (whose eigenvalue on the phi-block is exactly (t)_phi), and solves for the
// PSD coefficient kernel Q_phi = sum_i v_i v_i' over the rotation-only word
// basis.  Densities only ever consume the invariant combinations
//   sum_i theta_i C_i(args)            (theta_vec . T(args))
//   sum_i C_i(args1) C_i(args2)        (T(args1)' Q T(args2)),
// so the block factorization and signs never need to be pinned.

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "genbeta/contraction.hpp"
#include "genbeta/matrixkit.hpp"
#include "genbeta/partition.hpp"
#include "genbeta/trace_words.hpp"
#include "genbeta/zonal.hpp"

namespace genbeta {

struct InvariantKey {
  std::vector<Partition> parts;  // (kappa, lambda) or (kappa, tau, lambda); all nonempty
  bool operator<(const InvariantKey& o) const {
    if (parts.size() != o.parts.size()) return parts.size() < o.parts.size();
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i] < o.parts[i]) return true;
      if (o.parts[i] < parts[i]) return false;
    }
    return false;
  }
  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) s += "x";
      s += parts[i].str();
    }
    return s;
  }
};

struct PhiBlock {
  Partition phi;
  Eigen::MatrixXd Q;          // PSD kernel over the rotation-only basis
  Eigen::VectorXd theta_vec;  // Q r_phi: coefficients of sum_i theta_i C_i
  double theta_sq = 0.0;      // r_phi' Q r_phi = sum_i theta_i^2
  int multiplicity = 0;       // rank of Q
};

struct InvariantEntry {
  std::vector<int> profile;            // degrees per argument
  std::vector<TraceMono> gen_basis;    // rotation-only canonical monomials
  std::vector<TraceMono> sym_basis;    // rotation+reversal classes
  std::vector<PhiBlock> blocks;
  int m_cal = 0;
  double split_residual = 0.0;         // G reconstruction, relative
  double offblock_residual = 0.0;      // cross-phi leakage in G, relative
  double restriction_residual = 0.0;   // non-phi zonal content of Q columns
  double psd_clamp = 0.0;              // largest clamped negative eigenvalue
};

struct InvariantTable {
  std::string version;
  int max_pair_degree = 0;
  int max_triple_degree = 0;
  std::map<InvariantKey, InvariantEntry> entries;
};

inline constexpr const char* kInvariantTableVersion = "genbeta-invariant-v1";

namespace inv_detail {

// Zonal coordinates of the power-sum products p_rho of one weight:
// column rho of the inverse transpose of the zonal power-sum matrix.
struct ZonalCoords {
  std::vector<Partition> partitions;  // of weight d, revlex
  Eigen::MatrixXd p_to_zonal;         // [phi][rho]
};

inline ZonalCoords zonal_coords_for_weight(const ZonalTable& zt, int d) {
  ZonalCoords zc;
  zc.partitions = enumerate_partitions(d, d);
  const int n = static_cast<int>(zc.partitions.size());
  Eigen::MatrixXd Z(n, n);  // Z[kappa][rho] = z_{kappa,rho}
  for (int i = 0; i < n; ++i) {
    const auto& ps = zt.powersum.at(zc.partitions[static_cast<std::size_t>(i)]);
    for (int j = 0; j < n; ++j) {
      auto it = ps.find(zc.partitions[static_cast<std::size_t>(j)]);
      Z(i, j) = it == ps.end() ? 0.0 : it->second;
    }
  }
  // y = Z' alpha  =>  alpha = Z'^{-1} y ; p_rho has y = e_rho
  zc.p_to_zonal = Z.transpose().inverse();
  return zc;
}

// Conjugation words for one component of the splitting integrand:
// tr((A_c H X_c H')^r) for each part r of rho, outer letter c, inner letter
// n_comp + c.
inline void append_component_words(std::vector<CWord>& words, const Partition& rho,
                                   int comp, int n_comp) {
  for (int j = 0; j < rho.length(); ++j) {
    CWord w;
    for (int rep = 0; rep < rho.part(j); ++rep) {
      w.push_back(fixed_atom(comp));
      w.push_back(random_atom(false));
      w.push_back(fixed_atom(n_comp + comp));
      w.push_back(random_atom(true));
    }
    words.push_back(std::move(w));
  }
}

inline int index_of(const std::vector<TraceMono>& basis, const TraceMono& m) {
  auto it = std::lower_bound(basis.begin(), basis.end(), m);
  if (it == basis.end() || !(*it == m))
    throw std::logic_error("invariant calibration: monomial missing from basis");
  return static_cast<int>(it - basis.begin());
}

}  // namespace inv_detail

// The symmetric-basis bilinear kernel G of the splitting integral for one
// key, computed exactly at dimension m.
inline Eigen::MatrixXd splitting_kernel_sym(const InvariantKey& key,
                                            const std::vector<TraceMono>& sym_basis,
                                            const ZonalTable& zt, int m) {
  const int n_comp = static_cast<int>(key.parts.size());
  const int B = static_cast<int>(sym_basis.size());
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(B, B);

  // iterate over tuples of power-sum indices, one per component
  std::vector<std::vector<Partition>> rho_lists;
  for (const Partition& kappa : key.parts)
    rho_lists.push_back(enumerate_partitions(kappa.weight(), kappa.weight()));
  std::vector<std::size_t> idx(static_cast<std::size_t>(n_comp), 0);
  while (true) {
    double coef = 1.0;
    std::vector<CWord> words;
    for (int c = 0; c < n_comp; ++c) {
      const Partition& rho = rho_lists[static_cast<std::size_t>(c)][idx[static_cast<std::size_t>(c)]];
      const auto& ps = zt.powersum.at(key.parts[static_cast<std::size_t>(c)]);
      auto it = ps.find(rho);
      coef *= it == ps.end() ? 0.0 : it->second;
      inv_detail::append_component_words(words, rho, c, n_comp);
    }
    if (coef != 0.0) {
      auto kernel = haar_split_kernel(words, n_comp, m);
      for (const auto& [pq, w] : kernel) {
        int i = inv_detail::index_of(sym_basis, pq.first);
        int j = inv_detail::index_of(sym_basis, pq.second);
        G(i, j) += coef * w;
      }
    }
    int c = 0;
    while (c < n_comp) {
      if (++idx[static_cast<std::size_t>(c)] < rho_lists[static_cast<std::size_t>(c)].size()) break;
      idx[static_cast<std::size_t>(c)] = 0;
      ++c;
    }
    if (c == n_comp) break;
  }
  return G;
}

// Dilation operator on the symmetric basis: column p holds the coordinates
// of E_C[T_p(A_1 C, ..., A_q C)] over the basis, with C ~ Gamma_m(t, I).
inline Eigen::MatrixXd dilation_operator_sym(const std::vector<TraceMono>& sym_basis,
                                             int n_letters, int m, double t) {
  const int B = static_cast<int>(sym_basis.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(B, B);
  for (int p = 0; p < B; ++p) {
    std::vector<CWord> words;
    for (const NWord& w : sym_basis[static_cast<std::size_t>(p)].words) {
      CWord cw;
      for (int letter : w) {
        cw.push_back(fixed_atom(letter));
        cw.push_back(random_atom(false));
      }
      words.push_back(std::move(cw));
    }
    (void)n_letters;
    auto img = wick_matgamma_symbolic(words, m, 2.0 * t);
    for (const auto& [mono, coef] : img)
      L(inv_detail::index_of(sym_basis, mono), p) += coef;
  }
  return L;
}

namespace inv_detail {

// Minimal-norm symmetric solution Q of S Q S' = Rhs.
inline Eigen::MatrixXd solve_symmetric_factor(const Eigen::MatrixXd& S,
                                              const Eigen::MatrixXd& Rhs) {
  const int Bs = static_cast<int>(S.rows());
  const int Bg = static_cast<int>(S.cols());
  const int n_unknown = Bg * (Bg + 1) / 2;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(Bs * Bs, n_unknown);
  Eigen::VectorXd b(Bs * Bs);
  auto unk = [&](int g, int h) { return g <= h ? g * Bg - g * (g - 1) / 2 + (h - g)
                                               : h * Bg - h * (h - 1) / 2 + (g - h); };
  for (int i = 0; i < Bs; ++i)
    for (int j = 0; j < Bs; ++j) {
      b(i * Bs + j) = Rhs(i, j);
      for (int g = 0; g < Bg; ++g)
        for (int h = 0; h < Bg; ++h)
          if (S(i, g) != 0.0 && S(j, h) != 0.0)
            A(i * Bs + j, unk(g, h)) += S(i, g) * S(j, h);
    }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  Eigen::VectorXd x = cod.solve(b);
  Eigen::MatrixXd Q(Bg, Bg);
  for (int g = 0; g < Bg; ++g)
    for (int h = g; h < Bg; ++h) Q(g, h) = Q(h, g) = x(unk(g, h));
  return Q;
}

}  // namespace inv_detail

// Calibrates one key.  zt must hold power-sum coordinates up to the key's
// total degree.
inline InvariantEntry calibrate_entry(const InvariantKey& key, const ZonalTable& zt,
                                      double dilation_t = 3.5) {
  InvariantEntry e;
  int d = 0;
  for (const Partition& p : key.parts) {
    if (p.empty()) throw std::invalid_argument("calibrate_entry: empty component");
    e.profile.push_back(p.weight());
    d += p.weight();
  }
  e.m_cal = d + 1;
  e.gen_basis = trace_monomial_basis(e.profile, false);
  e.sym_basis = trace_monomial_basis(e.profile, true);
  const int Bg = static_cast<int>(e.gen_basis.size());
  const int Bs = static_cast<int>(e.sym_basis.size());

  // S: merge rotation-only classes into rotation+reversal classes
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(Bs, Bg);
  for (int g = 0; g < Bg; ++g)
    S(inv_detail::index_of(e.sym_basis, to_symmetric_class(e.gen_basis[static_cast<std::size_t>(g)])), g) = 1.0;

  Eigen::MatrixXd G = splitting_kernel_sym(key, e.sym_basis, zt, e.m_cal);
  const double g_norm = G.norm();

  // eigen-split of the dilation operator
  Eigen::MatrixXd L = dilation_operator_sym(e.sym_basis, static_cast<int>(key.parts.size()),
                                            e.m_cal, dilation_t);
  std::vector<Partition> candidates = enumerate_partitions(d, d);
  std::vector<Eigen::MatrixXd> spaces;
  std::vector<Partition> present;
  int total_dim = 0;
  for (const Partition& phi : candidates) {
    double ev = gen_pochhammer(dilation_t, phi);
    Eigen::MatrixXd M = L - ev * Eigen::MatrixXd::Identity(Bs, Bs);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    double smax = svd.singularValues()(0);
    int dim = 0;
    for (int i = 0; i < Bs; ++i)
      if (svd.singularValues()(i) < 1e-9 * smax) ++dim;
    if (dim == 0) continue;
    spaces.push_back(svd.matrixV().rightCols(dim));
    present.push_back(phi);
    total_dim += dim;
  }
  if (total_dim != Bs)
    throw std::runtime_error("calibrate_entry: dilation eigenspaces do not span (key " +
                             key.str() + ")");

  Eigen::MatrixXd V(Bs, Bs);
  int col = 0;
  std::vector<std::pair<int, int>> ranges;
  for (const auto& sp : spaces) {
    V.block(0, col, Bs, sp.cols()) = sp;
    ranges.emplace_back(col, static_cast<int>(sp.cols()));
    col += static_cast<int>(sp.cols());
  }
  Eigen::MatrixXd Vinv = V.inverse();
  Eigen::MatrixXd Ghat = Vinv * G * Vinv.transpose();

  // off-block leakage check
  double off = 0.0;
  for (std::size_t a = 0; a < ranges.size(); ++a)
    for (std::size_t b = 0; b < ranges.size(); ++b) {
      if (a == b) continue;
      off = std::max(off, Ghat.block(ranges[a].first, ranges[b].first,
                                     ranges[a].second, ranges[b].second)
                              .cwiseAbs()
                              .maxCoeff());
    }
  e.offblock_residual = off / std::max(1.0, Ghat.cwiseAbs().maxCoeff());

  // restriction coordinates: R[psi][g] = zonal-psi coefficient of the
  // equal-argument restriction of gen basis element g
  inv_detail::ZonalCoords zc = inv_detail::zonal_coords_for_weight(zt, d);
  const int nPhi = static_cast<int>(zc.partitions.size());
  Eigen::MatrixXd R(nPhi, Bg);
  for (int g = 0; g < Bg; ++g) {
    Partition rho = restriction_powersum(e.gen_basis[static_cast<std::size_t>(g)]);
    int rho_idx = 0;
    for (int i = 0; i < nPhi; ++i)
      if (zc.partitions[static_cast<std::size_t>(i)] == rho) rho_idx = i;
    R.col(g) = zc.p_to_zonal.col(rho_idx);
  }

  Eigen::MatrixXd reconstructed = Eigen::MatrixXd::Zero(Bs, Bs);
  for (std::size_t a = 0; a < present.size(); ++a) {
    const Partition& phi = present[a];
    Eigen::MatrixXd Gphi = V.block(0, ranges[a].first, Bs, ranges[a].second) *
                           Ghat.block(ranges[a].first, ranges[a].first, ranges[a].second,
                                      ranges[a].second) *
                           V.block(0, ranges[a].first, Bs, ranges[a].second).transpose();
    if (Gphi.cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, G.cwiseAbs().maxCoeff()))
      continue;  // channel absent from this key
    double cphi_id = zonal_at_identity(zt, phi, e.m_cal);
    Eigen::MatrixXd Q = inv_detail::solve_symmetric_factor(S, cphi_id * Gphi);

    // PSD clamp
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
    Eigen::VectorXd ev = es.eigenvalues();
    double emax = ev.cwiseAbs().maxCoeff();
    double clamp = 0.0;
    int mult = 0;
    for (int i = 0; i < ev.size(); ++i) {
      if (ev(i) < 0) {
        clamp = std::max(clamp, -ev(i));
        ev(i) = 0.0;
      }
      if (ev(i) > 1e-10 * emax) ++mult;
    }
    Q = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
    e.psd_clamp = std::max(e.psd_clamp, clamp / std::max(1.0, emax));

    PhiBlock blk;
    blk.phi = phi;
    blk.Q = Q;
    int phi_row = 0;
    for (int i = 0; i < nPhi; ++i)
      if (zc.partitions[static_cast<std::size_t>(i)] == phi) phi_row = i;
    Eigen::VectorXd r = R.row(phi_row).transpose();
    blk.theta_vec = Q * r;
    blk.theta_sq = r.dot(blk.theta_vec);
    blk.multiplicity = mult;

    // restriction residual: columns of Q must restrict inside span{C_phi}
    Eigen::MatrixXd RQ = R * Q;
    double scale = std::max(1.0, RQ.cwiseAbs().maxCoeff());
    for (int i = 0; i < nPhi; ++i) {
      if (i == phi_row) continue;
      e.restriction_residual =
          std::max(e.restriction_residual, RQ.row(i).cwiseAbs().maxCoeff() / scale);
    }

    reconstructed += S * Q * S.transpose() / cphi_id;
    e.blocks.push_back(std::move(blk));
  }
  e.split_residual = (reconstructed - G).norm() / std::max(1e-300, g_norm);
  return e;
}

// Gen-basis evaluations at the given argument matrices.
inline Eigen::VectorXd gen_basis_values(const InvariantEntry& e,
                                        const std::vector<Matrix>& args) {
  Eigen::VectorXd T(static_cast<int>(e.gen_basis.size()));
  for (std::size_t i = 0; i < e.gen_basis.size(); ++i)
    T(static_cast<int>(i)) = eval_trace_mono(e.gen_basis[i], args);
  return T;
}

// sum_i theta_i C_{phi,i}(args): the combination entering nonsymmetrised
// densities.
inline double theta_weighted_eval(const InvariantEntry& e, const PhiBlock& blk,
                                  const std::vector<Matrix>& args) {
  return blk.theta_vec.dot(gen_basis_values(e, args));
}

// sum_i C_{phi,i}(args1) C_{phi,i}(args2): the combination entering
// symmetrised densities (divide by C_phi(I_m) at the call site).
inline double paired_eval(const InvariantEntry& e, const PhiBlock& blk,
                          const std::vector<Matrix>& args1,
                          const std::vector<Matrix>& args2) {
  return gen_basis_values(e, args1).dot(blk.Q * gen_basis_values(e, args2));
}

inline InvariantTable calibrate_invariants(int max_pair_degree = 4,
                                           int max_triple_degree = 3,
                                           const ZonalTable* zt_in = nullptr) {
  if (max_pair_degree < 2 || max_pair_degree > 4)
    throw std::invalid_argument("calibrate_invariants: pair degree in [2,4]");
  if (max_triple_degree < 3 || max_triple_degree > 3)
    throw std::invalid_argument("calibrate_invariants: triple degree must be 3");
  ZonalTable local;
  const ZonalTable* zt = zt_in;
  if (!zt) {
    local = build_zonal_table(std::max(max_pair_degree, max_triple_degree));
    zt = &local;
  }
  InvariantTable table;
  table.version = kInvariantTableVersion;
  table.max_pair_degree = max_pair_degree;
  table.max_triple_degree = max_triple_degree;
  for (int k = 1; k < max_pair_degree; ++k)
    for (int l = 1; k + l <= max_pair_degree; ++l)
      for (const Partition& kappa : enumerate_partitions(k, k))
        for (const Partition& lambda : enumerate_partitions(l, l)) {
          InvariantKey key{{kappa, lambda}};
          table.entries[key] = calibrate_entry(key, *zt);
        }
  for (int k = 1; k + 2 <= max_triple_degree; ++k)
    for (int t = 1; k + t + 1 <= max_triple_degree; ++t)
      for (int l = 1; k + t + l <= max_triple_degree; ++l)
        for (const Partition& kappa : enumerate_partitions(k, k))
          for (const Partition& tau : enumerate_partitions(t, t))
            for (const Partition& lambda : enumerate_partitions(l, l)) {
              InvariantKey key{{kappa, tau, lambda}};
              table.entries[key] = calibrate_entry(key, *zt);
            }
  return table;
}

}  // namespace genbeta
