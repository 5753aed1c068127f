#pragma once

// Exact expectations of products of traces containing a random matrix:
//   - Haar orthogonal H (and H'), via the Weingarten sum over pairings of
//     row indices and column indices separately;
//   - a central matrix gamma C ~ G_m(t, I) with 2t integer, via Gaussian
//     Wick contractions of C = E'E/2.
// Both reduce to the same bookkeeping: replacing random entries by pairing
// deltas glues the fixed-matrix chain segments into closed cycles whose
// traces multiply.

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "genbeta/matrixkit.hpp"
#include "genbeta/pairings.hpp"
#include "genbeta/trace_words.hpp"

namespace genbeta {

struct CAtom {
  int arg = -1;            // index into the fixed-argument list
  bool transposed = false; // for Haar atoms: H' instead of H
  bool random = false;
};
using CWord = std::vector<CAtom>;

inline CAtom fixed_atom(int arg, bool transposed = false) { return {arg, transposed, false}; }
inline CAtom random_atom(bool transposed = false) { return {-1, transposed, true}; }

namespace detail {

struct Segment {
  int tail_port = -1;  // right port of occurrence i
  int head_port = -1;  // left port of occurrence i+1 (cyclic in the word)
  std::vector<CAtom> atoms;
};

struct Topology {
  int n_occ = 0;
  std::vector<bool> occ_swapped;        // the occurrence is H' rather than H
  std::vector<Segment> segments;
  std::vector<int> seg_of_port;         // every port touches exactly one segment
  std::vector<CWord> constant_words;    // words without random atoms
};

inline Topology build_topology(const std::vector<CWord>& words) {
  Topology t;
  for (const CWord& w : words) {
    std::vector<int> pos;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i].random) pos.push_back(static_cast<int>(i));
    if (pos.empty()) {
      t.constant_words.push_back(w);
      continue;
    }
    int base = t.n_occ;
    for (std::size_t r = 0; r < pos.size(); ++r)
      t.occ_swapped.push_back(w[static_cast<std::size_t>(pos[r])].transposed);
    t.n_occ += static_cast<int>(pos.size());
    const int nw = static_cast<int>(w.size());
    for (std::size_t r = 0; r < pos.size(); ++r) {
      Segment seg;
      int occ_from = base + static_cast<int>(r);
      int occ_to = base + static_cast<int>((r + 1) % pos.size());
      seg.tail_port = 2 * occ_from + 1;
      seg.head_port = 2 * occ_to;
      int p = pos[r];
      int q = pos[(r + 1) % pos.size()];
      for (int i = (p + 1) % nw; i != q; i = (i + 1) % nw)
        seg.atoms.push_back(w[static_cast<std::size_t>(i)]);
      t.segments.push_back(std::move(seg));
    }
  }
  t.seg_of_port.assign(static_cast<std::size_t>(2 * t.n_occ), -1);
  for (std::size_t s = 0; s < t.segments.size(); ++s) {
    t.seg_of_port[static_cast<std::size_t>(t.segments[s].tail_port)] = static_cast<int>(s);
    t.seg_of_port[static_cast<std::size_t>(t.segments[s].head_port)] = static_cast<int>(s);
  }
  return t;
}

// row index of occurrence r sits on its left wire for H, right wire for H'
inline int row_port(const Topology& t, int occ) { return t.occ_swapped[static_cast<std::size_t>(occ)] ? 2 * occ + 1 : 2 * occ; }
inline int col_port(const Topology& t, int occ) { return t.occ_swapped[static_cast<std::size_t>(occ)] ? 2 * occ : 2 * occ + 1; }

// Given a full matching on ports, walk the alternating segment/glue cycles
// and emit each cycle's fixed-atom chain (orientation applied).
inline std::vector<std::vector<CAtom>> extract_cycles(const Topology& t,
                                                      const std::vector<int>& glue_partner) {
  std::vector<std::vector<CAtom>> cycles;
  std::vector<bool> visited(static_cast<std::size_t>(2 * t.n_occ), false);
  for (int start = 0; start < 2 * t.n_occ; ++start) {
    if (visited[static_cast<std::size_t>(start)]) continue;
    std::vector<CAtom> chain;
    int port = start;
    do {
      visited[static_cast<std::size_t>(port)] = true;
      const Segment& seg = t.segments[static_cast<std::size_t>(t.seg_of_port[static_cast<std::size_t>(port)])];
      int other;
      if (port == seg.tail_port) {
        for (const CAtom& a : seg.atoms) chain.push_back(a);
        other = seg.head_port;
      } else {
        for (auto it = seg.atoms.rbegin(); it != seg.atoms.rend(); ++it) {
          CAtom a = *it;
          a.transposed = !a.transposed;
          chain.push_back(a);
        }
        other = seg.tail_port;
      }
      visited[static_cast<std::size_t>(other)] = true;
      port = glue_partner[static_cast<std::size_t>(other)];
    } while (port != start);
    cycles.push_back(std::move(chain));
  }
  return cycles;
}

inline double cycle_value(const std::vector<CAtom>& chain, const std::vector<Matrix>& args, int m) {
  if (chain.empty()) return static_cast<double>(m);
  Matrix P = Matrix::Identity(m, m);
  for (const CAtom& a : chain) {
    const Matrix& A = args[static_cast<std::size_t>(a.arg)];
    P = a.transposed ? Matrix(P * A.transpose()) : Matrix(P * A);
  }
  return P.trace();
}

inline double constant_factor(const Topology& t, const std::vector<Matrix>& args, int m) {
  double v = 1.0;
  for (const CWord& w : t.constant_words) {
    Matrix P = Matrix::Identity(m, m);
    for (const CAtom& a : w) {
      const Matrix& A = args[static_cast<std::size_t>(a.arg)];
      P = a.transposed ? Matrix(P * A.transpose()) : Matrix(P * A);
    }
    v *= P.trace();
  }
  return v;
}

// Symmetric-argument canonical form of a cycle: transposes dropped, then the
// rotation+reversal representative.  Letters are remapped by base offset.
inline NWord cycle_to_sym_word(const std::vector<CAtom>& chain, int base) {
  NWord w;
  for (const CAtom& a : chain) w.push_back(a.arg - base);
  if (w.empty()) return w;
  return canonical_rot_rev(w);
}

}  // namespace detail

// E_H[ prod_r tr(words_r) ] over Haar O(m).  Random atoms are H (or H' when
// transposed).  Odd H-degree integrates to zero.
inline double haar_expect(const std::vector<CWord>& words, const std::vector<Matrix>& args,
                          int m) {
  detail::Topology t = detail::build_topology(words);
  double c0 = detail::constant_factor(t, args, m);
  if (t.n_occ == 0) return c0;
  if (t.n_occ % 2 != 0) return 0.0;
  const int d = t.n_occ / 2;
  const WeingartenTable& wg = weingarten_cached(d, m);
  const auto& matchings = wg.pairings;
  const int nM = static_cast<int>(matchings.size());

  std::vector<int> glue(static_cast<std::size_t>(2 * t.n_occ), -1);
  double total = 0.0;
  for (int si = 0; si < nM; ++si) {
    // rows glued by sigma
    for (int r = 0; r < t.n_occ; ++r) {
      int s = matchings[static_cast<std::size_t>(si)][static_cast<std::size_t>(r)];
      glue[static_cast<std::size_t>(detail::row_port(t, r))] = detail::row_port(t, s);
    }
    for (int ti = 0; ti < nM; ++ti) {
      if (wg.wg(si, ti) == 0.0) continue;
      for (int r = 0; r < t.n_occ; ++r) {
        int s = matchings[static_cast<std::size_t>(ti)][static_cast<std::size_t>(r)];
        glue[static_cast<std::size_t>(detail::col_port(t, r))] = detail::col_port(t, s);
      }
      double prod = 1.0;
      for (const auto& cyc : detail::extract_cycles(t, glue))
        prod *= detail::cycle_value(cyc, args, m);
      total += wg.wg(si, ti) * prod;
    }
  }
  return c0 * total;
}

// Symbolic bilinear kernel of E_H[ prod tr(...) ] for conjugation-structured
// words: every random pair sandwiches inner letters (H X H') and outer
// letters sit between H' ... H.  Row cycles then contain only outer letters
// and column cycles only inner letters, so the expectation is
//   sum_{p,q} K[p][q] T_p(outer args) T_q(inner args)
// over symmetric-argument trace monomials.  Outer letters are arg ids
// [0, n_outer), inner letters [n_outer, n_outer + n_inner).
inline std::map<std::pair<TraceMono, TraceMono>, double> haar_split_kernel(
    const std::vector<CWord>& words, int n_outer, int m) {
  detail::Topology t = detail::build_topology(words);
  if (!t.constant_words.empty())
    throw std::logic_error("haar_split_kernel: constant words not supported here");
  if (t.n_occ % 2 != 0) return {};
  const int d = t.n_occ / 2;
  const WeingartenTable& wg = weingarten_cached(d, m);
  const auto& matchings = wg.pairings;
  const int nM = static_cast<int>(matchings.size());

  // verify the row/col separation the split relies on
  for (const auto& seg : t.segments) {
    bool tail_row = false, head_row = false;
    for (int occ = 0; occ < t.n_occ; ++occ) {
      if (detail::row_port(t, occ) == seg.tail_port) tail_row = true;
      if (detail::row_port(t, occ) == seg.head_port) head_row = true;
    }
    if (tail_row != head_row)
      throw std::logic_error("haar_split_kernel: words lack conjugation structure");
    for (const CAtom& a : seg.atoms) {
      bool outer = a.arg < n_outer;
      if (outer != tail_row)
        throw std::logic_error("haar_split_kernel: letter on the wrong side");
    }
  }

  // row-side monomial per sigma, column-side per tau
  auto side_mono = [&](const Pairing& match, bool rows) {
    std::vector<int> glue(static_cast<std::size_t>(2 * t.n_occ), -1);
    std::vector<bool> in_side(static_cast<std::size_t>(2 * t.n_occ), false);
    for (int r = 0; r < t.n_occ; ++r) {
      int p = rows ? detail::row_port(t, r) : detail::col_port(t, r);
      int q = rows ? detail::row_port(t, match[static_cast<std::size_t>(r)])
                   : detail::col_port(t, match[static_cast<std::size_t>(r)]);
      glue[static_cast<std::size_t>(p)] = q;
      in_side[static_cast<std::size_t>(p)] = true;
    }
    // walk only this side's ports
    std::vector<NWord> cyc_words;
    std::vector<bool> visited(static_cast<std::size_t>(2 * t.n_occ), false);
    for (int start = 0; start < 2 * t.n_occ; ++start) {
      if (!in_side[static_cast<std::size_t>(start)] || visited[static_cast<std::size_t>(start)]) continue;
      std::vector<CAtom> chain;
      int port = start;
      do {
        visited[static_cast<std::size_t>(port)] = true;
        const auto& seg = t.segments[static_cast<std::size_t>(t.seg_of_port[static_cast<std::size_t>(port)])];
        int other;
        if (port == seg.tail_port) {
          for (const CAtom& a : seg.atoms) chain.push_back(a);
          other = seg.head_port;
        } else {
          for (auto it = seg.atoms.rbegin(); it != seg.atoms.rend(); ++it) chain.push_back(*it);
          other = seg.tail_port;
        }
        visited[static_cast<std::size_t>(other)] = true;
        port = glue[static_cast<std::size_t>(other)];
      } while (port != start);
      cyc_words.push_back(detail::cycle_to_sym_word(chain, rows ? 0 : n_outer));
    }
    // empty cycles (bare tr I) cannot occur here: every exponent >= 1 word
    // has a letter in each segment-cycle at these degrees; if one appears it
    // means a factor m, handled via a sentinel letter below.
    std::vector<NWord> nonempty;
    int empties = 0;
    for (auto& w : cyc_words) {
      if (w.empty()) ++empties;
      else nonempty.push_back(w);
    }
    std::sort(nonempty.begin(), nonempty.end());
    return std::make_pair(TraceMono{nonempty}, empties);
  };

  std::vector<TraceMono> row_mono(static_cast<std::size_t>(nM)), col_mono(static_cast<std::size_t>(nM));
  std::vector<int> row_empty(static_cast<std::size_t>(nM)), col_empty(static_cast<std::size_t>(nM));
  for (int i = 0; i < nM; ++i) {
    auto [rm, re] = side_mono(matchings[static_cast<std::size_t>(i)], true);
    row_mono[static_cast<std::size_t>(i)] = rm;
    row_empty[static_cast<std::size_t>(i)] = re;
    auto [cm, ce] = side_mono(matchings[static_cast<std::size_t>(i)], false);
    col_mono[static_cast<std::size_t>(i)] = cm;
    col_empty[static_cast<std::size_t>(i)] = ce;
  }

  std::map<std::pair<TraceMono, TraceMono>, double> kernel;
  for (int si = 0; si < nM; ++si)
    for (int ti = 0; ti < nM; ++ti) {
      double w = wg.wg(si, ti);
      if (w == 0.0) continue;
      double scale = std::pow(static_cast<double>(m),
                              row_empty[static_cast<std::size_t>(si)] +
                                  col_empty[static_cast<std::size_t>(ti)]);
      kernel[{row_mono[static_cast<std::size_t>(si)], col_mono[static_cast<std::size_t>(ti)]}] +=
          w * scale;
    }
  return kernel;
}

// E_C[ prod_r tr(words_r) ] for C ~ G_m(t, I) with n2t = 2t a positive
// integer, via Wick contraction of C = E'E/2 (E an n x m standard Gaussian).
// Random atoms stand for C; transposition is ignored (C is symmetric).
inline double wick_matgamma_expect(const std::vector<CWord>& words,
                                   const std::vector<Matrix>& args, int m, double n2t) {
  detail::Topology t = detail::build_topology(words);
  double c0 = detail::constant_factor(t, args, m);
  if (t.n_occ == 0) return c0;
  auto matchings = enumerate_pairings(2 * t.n_occ);
  double total = 0.0;
  for (const Pairing& match : matchings) {
    // r-index loops: components of {same-occurrence edges} U {match edges}
    int loops = 0;
    std::vector<bool> seen(static_cast<std::size_t>(2 * t.n_occ), false);
    for (int s = 0; s < 2 * t.n_occ; ++s) {
      if (seen[static_cast<std::size_t>(s)]) continue;
      ++loops;
      int x = s;
      while (!seen[static_cast<std::size_t>(x)]) {
        seen[static_cast<std::size_t>(x)] = true;
        int y = x ^ 1;  // same-occurrence partner
        seen[static_cast<std::size_t>(y)] = true;
        x = match[static_cast<std::size_t>(y)];
      }
    }
    double prod = std::pow(n2t, loops) * std::pow(0.5, t.n_occ);
    for (const auto& cyc : detail::extract_cycles(t, match))
      prod *= detail::cycle_value(cyc, args, m);
    total += prod;
  }
  return c0 * total;
}

// Symbolic version of the matrix-gamma expectation for words whose fixed
// letters are symbolic: returns sym-canonical trace monomials over those
// letters with coefficients.  Used to build the dilation operator whose
// eigenvalues are the generalized Pochhammer symbols (t)_phi.
inline std::map<TraceMono, double> wick_matgamma_symbolic(const std::vector<CWord>& words,
                                                          int m, double n2t) {
  detail::Topology t = detail::build_topology(words);
  if (!t.constant_words.empty())
    throw std::logic_error("wick_matgamma_symbolic: constant words not supported");
  if (t.n_occ == 0) return {};
  auto matchings = enumerate_pairings(2 * t.n_occ);
  std::map<TraceMono, double> out;
  for (const Pairing& match : matchings) {
    int loops = 0;
    std::vector<bool> seen(static_cast<std::size_t>(2 * t.n_occ), false);
    for (int s = 0; s < 2 * t.n_occ; ++s) {
      if (seen[static_cast<std::size_t>(s)]) continue;
      ++loops;
      int x = s;
      while (!seen[static_cast<std::size_t>(x)]) {
        seen[static_cast<std::size_t>(x)] = true;
        int y = x ^ 1;
        seen[static_cast<std::size_t>(y)] = true;
        x = match[static_cast<std::size_t>(y)];
      }
    }
    double coef = std::pow(n2t, loops) * std::pow(0.5, t.n_occ);
    std::vector<NWord> cyc_words;
    int empties = 0;
    for (const auto& cyc : detail::extract_cycles(t, match)) {
      NWord w = detail::cycle_to_sym_word(cyc, 0);
      if (w.empty()) ++empties;
      else cyc_words.push_back(std::move(w));
    }
    coef *= std::pow(static_cast<double>(m), empties);
    std::sort(cyc_words.begin(), cyc_words.end());
    out[TraceMono{cyc_words}] += coef;
  }
  return out;
}

}  // namespace genbeta
