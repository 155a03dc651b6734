#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <vector>

#include "circles.hpp"
#include "diagram.hpp"
#include "laurent.hpp"
#include "sparse.hpp"

namespace kht {

namespace detail {

struct BinomialTable {
  int64_t c[33][33];
  constexpr BinomialTable() : c{} {
    for (int n = 0; n < 33; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
    }
  }
};
inline constexpr BinomialTable binomial_table{};

inline int64_t nCk(int n, int k) {
  return (k < 0 || k > n || n < 0) ? 0 : binomial_table.c[n][k];
}

// next larger integer with the same popcount
inline uint32_t gosper_next(uint32_t v) {
  const uint32_t u = v & (~v + 1u);
  const uint32_t w = v + u;
  return w | (((v ^ w) >> 2) / u);
}

// position of mask among all same-popcount masks of any width, ascending
inline int64_t combination_rank(uint32_t mask) {
  int64_t r = 0;
  int j = 0;
  while (mask) {
    const int pos = std::countr_zero(mask);
    ++j;
    r += nCk(pos, j);
    mask &= mask - 1;
  }
  return r;
}

// drop the bit at position pos, closing the gap
inline uint32_t squeeze_bit(uint32_t mask, int pos) {
  return (mask & ((1u << pos) - 1u)) | ((mask >> (pos + 1)) << pos);
}

}  // namespace detail

// sign masks pack circle i at bit (count-1-i), with bit 1 meaning epsilon = +1,
// so ascending masks enumerate sign vectors in binary order, circle 0 first
inline uint32_t sign_bit_of(uint32_t emask, int count, int circle) {
  return (emask >> (count - 1 - circle)) & 1u;
}

// sign masks of up to two target generators produced by one marker flip
struct TargetSigns {
  uint32_t masks[2] = {0, 0};
  int n = 0;
};

inline TargetSigns resmooth_signs(const Resmoothing& rm, uint32_t emask, int src_count,
                                  int tgt_count) {
  uint32_t common = 0;
  for (int ct = 0; ct < tgt_count; ++ct)
    if (rm.carry[ct] >= 0 && sign_bit_of(emask, src_count, rm.carry[ct]))
      common |= 1u << (tgt_count - 1 - ct);
  TargetSigns out;
  if (rm.is_merge) {
    const uint32_t x = sign_bit_of(emask, src_count, rm.x);
    const uint32_t y = sign_bit_of(emask, src_count, rm.y);
    if (x & y) return out;  // both circles carry +1, the fused sign overflows
    out.masks[out.n++] = common | ((x | y) << (tgt_count - 1 - rm.z));
  } else {
    const uint32_t x = sign_bit_of(emask, src_count, rm.x);
    const uint32_t bz = 1u << (tgt_count - 1 - rm.z);
    const uint32_t bz2 = 1u << (tgt_count - 1 - rm.z2);
    if (x) {
      out.masks[out.n++] = common | bz | bz2;
    } else {
      out.masks[out.n++] = common | bz;
      out.masks[out.n++] = common | bz2;
    }
  }
  return out;
}

// enhanced Kauffman state: a marker per crossing plus a sign per circle
struct EnhancedState {
  KauffmanState state;
  std::vector<int> signs;  // +1 or -1 per circle, canonical circle order

  int sigma() const {
    int b = 0;
    for (Marker m : state.labels) b += m == Marker::B ? 1 : 0;
    return (int)state.labels.size() - 2 * b;
  }
  int tau() const {
    int t = 0;
    for (int s : signs) t += s;
    return t;
  }
  int a() const { return sigma(); }
  int b() const { return sigma() + 2 * tau(); }
};

// the full framed complex of a word, materialized; generators in each bidegree
// are ordered by state mask then sign mask, both ascending
struct BigradedComplex {
  SmoothedBraidWord word;
  std::map<std::pair<int, int>, std::vector<EnhancedState>> generators;
  std::map<std::pair<int, int>, SparseIntMatrix> differentials;  // (a,b) -> block into (a-2,b)

  int64_t total_generators() const {
    int64_t n = 0;
    for (const auto& [k, v] : generators) n += (int64_t)v.size();
    return n;
  }
};

inline constexpr int64_t default_generator_cap = 50'000'000;

inline BigradedComplex enumerate_generators(const SmoothedBraidWord& w,
                                            int64_t max_generators = default_generator_cap) {
  validate(w);
  const int c = w.crossing_count();
  if (c > 26) throw ResourceLimitError("too many crossings to enumerate states");
  WordArcs arcs(w);
  BigradedComplex cx;
  cx.word = w;
  int64_t total = 0;
  for (uint32_t mask = 0;; ++mask) {
    const CircleDecomposition d = detail::resolve_arcs(w, arcs, mask);
    if (d.count > 26) throw ResourceLimitError("too many circles in one state");
    total += (int64_t)1 << d.count;
    if (total > max_generators)
      throw ResourceLimitError("generator count exceeds cap of " +
                               std::to_string(max_generators));
    const int sigma = c - 2 * std::popcount(mask);
    for (uint32_t emask = 0; emask < (1u << d.count); ++emask) {
      EnhancedState g;
      g.state = KauffmanState::from_mask(mask, c);
      g.signs.resize(d.count);
      for (int i = 0; i < d.count; ++i)
        g.signs[i] = sign_bit_of(emask, d.count, i) ? +1 : -1;
      const int tau = 2 * std::popcount(emask) - d.count;
      cx.generators[{sigma, sigma + 2 * tau}].push_back(std::move(g));
    }
    if (mask == (c ? (1u << c) - 1u : 0u)) break;
  }
  return cx;
}

// fills in all blocks of the differential; the (s:s') coefficient is
// (-1)^{number of B markers after the flipped crossing}
inline void build_differential(BigradedComplex& cx) {
  const SmoothedBraidWord& w = cx.word;
  const int c = w.crossing_count();
  WordArcs arcs(w);
  const std::vector<int> cpos = w.crossing_letter_positions();

  // per-bucket lookup of (state mask, sign mask) -> column
  std::map<std::pair<int, int>, std::vector<uint64_t>> keys;
  for (const auto& [ab, gens] : cx.generators) {
    auto& ks = keys[ab];
    ks.reserve(gens.size());
    for (const EnhancedState& g : gens) {
      uint32_t emask = 0;
      const int cnt = (int)g.signs.size();
      for (int i = 0; i < cnt; ++i)
        if (g.signs[i] > 0) emask |= 1u << (cnt - 1 - i);
      ks.push_back(((uint64_t)g.state.to_mask() << 32) | emask);
    }
  }
  auto column_of = [&](const std::pair<int, int>& ab, uint32_t smask, uint32_t emask) {
    const auto& ks = keys.at(ab);
    const uint64_t key = ((uint64_t)smask << 32) | emask;
    const auto it = std::lower_bound(ks.begin(), ks.end(), key);
    if (it == ks.end() || *it != key) throw std::logic_error("missing differential target");
    return (int)(it - ks.begin());
  };

  for (const auto& [ab, gens] : cx.generators) {
    const auto [aa, bb] = ab;
    const std::pair<int, int> tgt_ab{aa - 2, bb};
    const auto tgt_it = cx.generators.find(tgt_ab);
    if (tgt_it == cx.generators.end()) continue;
    SparseIntMatrix mat((int)tgt_it->second.size(), (int)gens.size());

    uint32_t cur_smask = ~0u;
    CircleDecomposition src, tgt[32];
    Resmoothing rms[32];
    for (int col = 0; col < (int)gens.size(); ++col) {
      const EnhancedState& g = gens[col];
      const uint32_t smask = g.state.to_mask();
      if (smask != cur_smask) {
        cur_smask = smask;
        src = detail::resolve_arcs(w, arcs, smask);
        for (int t = 0; t < c; ++t) {
          const uint32_t bit = 1u << (c - 1 - t);
          if (smask & bit) continue;
          tgt[t] = detail::resolve_arcs(w, arcs, smask | bit);
          rms[t] = resmooth(arcs, src, tgt[t], cpos[t]);
        }
      }
      uint32_t emask = 0;
      const int cnt = (int)g.signs.size();
      for (int i = 0; i < cnt; ++i)
        if (g.signs[i] > 0) emask |= 1u << (cnt - 1 - i);
      for (int t = 0; t < c; ++t) {
        const uint32_t bit = 1u << (c - 1 - t);
        if (smask & bit) continue;
        const int sign = std::popcount(smask & (bit - 1u)) % 2 ? -1 : 1;
        const TargetSigns ts = resmooth_signs(rms[t], emask, src.count, tgt[t].count);
        for (int i = 0; i < ts.n; ++i)
          mat.add(column_of(tgt_ab, smask | bit, ts.masks[i]), col, sign);
      }
    }
    mat.canonicalize();
    cx.differentials[ab] = std::move(mat);
  }
}

// skein recursion on the first unsmoothed crossing; a fully smoothed closure
// contributes delta^{circles} with delta = -A^2 - A^{-2}
inline Laurent kauffman_bracket_delta() {
  return Laurent::term(-1, 2) + Laurent::term(-1, -2);
}

inline Laurent kauffman_bracket(const SmoothedBraidWord& w) {
  validate(w);
  if (w.crossing_count() > 22) throw ResourceLimitError("bracket recursion too deep");
  const auto cps = w.crossing_letter_positions();
  if (cps.empty()) return kauffman_bracket_delta().pow(stats(w).components);
  const int p = cps.front();
  return Laurent::term(1, 1) * kauffman_bracket(smooth_at(w, p, Marker::A)) +
         Laurent::term(1, -1) * kauffman_bracket(smooth_at(w, p, Marker::B));
}

// graded Euler characteristic of the complex in the bracket variable
inline Laurent euler_polynomial(const BigradedComplex& cx) {
  Laurent p;
  for (const auto& [ab, gens] : cx.generators) {
    const auto [a, b] = ab;
    const int tau = (b - a) / 2;
    p += Laurent::term(tau % 2 ? -1 : 1, b) * Laurent::term((int64_t)gens.size(), 0);
  }
  return p;
}

}  // namespace kht
