#pragma once

// Trace-monomial bases for invariant polynomials of several matrix
// arguments.  A basis element is a multiset of necklace words over the
// argument alphabet; its value is the product of the corresponding traces.
// Two canonicalizations are used: rotation-only (general square arguments)
// and rotation+reversal (symmetric arguments, where tr w = tr w-reversed).

#include <algorithm>
#include <map>
#include <vector>

#include "genbeta/matrixkit.hpp"
#include "genbeta/partition.hpp"

namespace genbeta {

using NWord = std::vector<int>;  // letters are 0-based argument indices

inline NWord canonical_rotation(const NWord& w) {
  NWord best = w;
  NWord rot = w;
  for (std::size_t s = 1; s < w.size(); ++s) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (rot < best) best = rot;
  }
  return best;
}

inline NWord canonical_rot_rev(const NWord& w) {
  NWord best = canonical_rotation(w);
  NWord rev(w.rbegin(), w.rend());
  NWord best_rev = canonical_rotation(rev);
  return std::min(best, best_rev);
}

// Multiset of canonical words; ordering makes it usable as a map key.
struct TraceMono {
  std::vector<NWord> words;
  bool operator<(const TraceMono& o) const { return words < o.words; }
  bool operator==(const TraceMono& o) const { return words == o.words; }
};

inline TraceMono make_trace_mono(std::vector<NWord> words, bool with_reversal) {
  for (auto& w : words) w = with_reversal ? canonical_rot_rev(w) : canonical_rotation(w);
  std::sort(words.begin(), words.end());
  return TraceMono{std::move(words)};
}

// Collapse a rotation-only monomial to its rotation+reversal class.
inline TraceMono to_symmetric_class(const TraceMono& mono) {
  return make_trace_mono(mono.words, true);
}

namespace detail {

inline std::vector<int> letter_counts(const NWord& w, int n_letters) {
  std::vector<int> c(static_cast<std::size_t>(n_letters), 0);
  for (int x : w) ++c[static_cast<std::size_t>(x)];
  return c;
}

// All canonical necklaces whose letter counts fit inside the profile.
inline std::vector<NWord> necklaces_within(const std::vector<int>& profile,
                                           bool with_reversal) {
  const int n_letters = static_cast<int>(profile.size());
  int total = 0;
  for (int p : profile) total += p;
  std::vector<NWord> out;
  NWord cur;
  auto rec = [&](auto&& self) -> void {
    if (!cur.empty()) {
      NWord canon = with_reversal ? canonical_rot_rev(cur) : canonical_rotation(cur);
      if (canon == cur) out.push_back(cur);
    }
    if (static_cast<int>(cur.size()) == total) return;
    for (int letter = 0; letter < n_letters; ++letter) {
      auto counts = letter_counts(cur, n_letters);
      if (counts[static_cast<std::size_t>(letter)] >= profile[static_cast<std::size_t>(letter)])
        continue;
      cur.push_back(letter);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

// Basis of invariant trace monomials with the exact letter-count profile
// (degree k in argument 0, etc.).  Elements are ordered deterministically.
inline std::vector<TraceMono> trace_monomial_basis(const std::vector<int>& profile,
                                                   bool with_reversal) {
  auto words = detail::necklaces_within(profile, with_reversal);
  std::vector<TraceMono> out;
  std::vector<NWord> chosen;
  const int n_letters = static_cast<int>(profile.size());
  auto counts_of_chosen = [&]() {
    std::vector<int> c(static_cast<std::size_t>(n_letters), 0);
    for (const auto& w : chosen)
      for (int x : w) ++c[static_cast<std::size_t>(x)];
    return c;
  };
  auto rec = [&](auto&& self, std::size_t min_word) -> void {
    auto c = counts_of_chosen();
    if (c == profile) {
      out.push_back(make_trace_mono(chosen, with_reversal));
      return;
    }
    for (std::size_t i = min_word; i < words.size(); ++i) {
      auto wc = detail::letter_counts(words[i], n_letters);
      bool fits = true;
      for (int l = 0; l < n_letters; ++l)
        if (c[static_cast<std::size_t>(l)] + wc[static_cast<std::size_t>(l)] >
            profile[static_cast<std::size_t>(l)]) {
          fits = false;
          break;
        }
      if (!fits) continue;
      chosen.push_back(words[i]);
      self(self, i);  // non-decreasing word sequence avoids duplicate multisets
      chosen.pop_back();
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

// Value of a trace monomial at the given arguments.  With reversal_average,
// each word contributes (tr w + tr w-reversed)/2; for symmetric arguments
// the two coincide.
inline double eval_trace_mono(const TraceMono& mono, const std::vector<Matrix>& args,
                              bool reversal_average = false) {
  double v = 1.0;
  std::vector<const Matrix*> ptrs(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) ptrs[i] = &args[i];
  for (const NWord& w : mono.words) {
    double t = trace_word(w, ptrs);
    if (reversal_average) {
      NWord rev(w.rbegin(), w.rend());
      t = 0.5 * (t + trace_word(rev, ptrs));
    }
    v *= t;
  }
  return v;
}

// Equal-argument restriction: each word of length s becomes tr(X^s), so the
// monomial restricts to the power-sum product p_rho with rho the multiset of
// word lengths.
inline Partition restriction_powersum(const TraceMono& mono) {
  std::vector<int> lens;
  for (const NWord& w : mono.words) lens.push_back(static_cast<int>(w.size()));
  std::sort(lens.begin(), lens.end(), std::greater<int>());
  return Partition(std::move(lens));
}

}  // namespace genbeta
