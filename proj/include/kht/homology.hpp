#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "abelian.hpp"
#include "cube.hpp"
#include "reduce.hpp"
#include "snf.hpp"

namespace kht {

inline const AbelianGroup zero_group{};

// framed table H_{a,b}: a = sigma, b = sigma + 2 tau; only nonzero groups stored
struct FramedHomologyTable {
  int writhe = 0;
  bool complete = true;
  std::map<std::pair<int, int>, AbelianGroup> groups;

  const AbelianGroup& at(int a, int b) const {
    const auto it = groups.find({a, b});
    return it == groups.end() ? zero_group : it->second;
  }
  friend bool operator==(const FramedHomologyTable& x, const FramedHomologyTable& y) {
    return x.groups == y.groups;
  }
};

// classical table H^{i,j}; for reduced tables j holds the shifted grading jt = j - 1
struct ClassicalHomologyTable {
  bool complete = true;
  bool reduced = false;
  std::map<std::pair<int, int>, AbelianGroup> groups;

  const AbelianGroup& at(int i, int j) const {
    const auto it = groups.find({i, j});
    return it == groups.end() ? zero_group : it->second;
  }
  friend bool operator==(const ClassicalHomologyTable& x, const ClassicalHomologyTable& y) {
    return x.groups == y.groups;
  }
};

// homology at one spot of a chain C_up --d_in--> C (dim) --d_out--> C_down
inline AbelianGroup homology_at(const SparseIntMatrix& d_out, const SparseIntMatrix& d_in,
                                int64_t dim) {
  if (d_out.cols != dim || d_in.rows != dim)
    throw std::invalid_argument("homology_at dimension mismatch");
  if (!multiply(d_out, d_in).is_zero())
    throw std::invalid_argument("differentials do not compose to zero");
  const SNFResult out_snf = smith_normal_form(d_out);
  const SNFResult in_snf = smith_normal_form(d_in);
  AbelianGroup g;
  g.free_rank = dim - out_snf.rank - in_snf.rank;
  if (g.free_rank < 0) throw std::logic_error("negative free rank");
  g.torsion = in_snf.nontrivial();
  return g;
}

struct HomologyOptions {
  bool unit_reduce = true;
  int64_t max_generators = default_generator_cap;
  std::optional<std::vector<int>> b_filter;        // compute only these framed b values
  std::optional<int> basepoint_strand;             // 1-based; quotient (reduced) complex
  std::optional<std::vector<int>> crossing_order;  // rank per crossing for the sign rule
};

namespace detail {

// one a-layer of the descendant complex of a fixed b: states with a given
// B-marker count, each contributing a block of fixed-popcount sign masks
struct EngineLayer {
  std::vector<std::pair<uint32_t, int32_t>> offs;  // (state mask, block start), ascending
  int64_t dim = 0;

  // block start of a state, or -1 when the state has no generators here
  int32_t offset_of(uint32_t mask) const {
    const auto it = std::lower_bound(
        offs.begin(), offs.end(), mask,
        [](const std::pair<uint32_t, int32_t>& e, uint32_t m) { return e.first < m; });
    return (it == offs.end() || it->first != mask) ? -1 : it->second;
  }
};

struct EngineTriplet {
  int32_t r, c;
  int8_t v;
};

}  // namespace detail

// full framed homology of the closure, built one secondary degree b at a time:
// enumerate the descendant complex of b, cancel unit pivots along the chain,
// then read each bidegree off the small residual matrices
inline FramedHomologyTable full_homology(const SmoothedBraidWord& w,
                                         const HomologyOptions& opt = {}) {
  validate(w);
  const int c = w.crossing_count();
  if (c > 26) throw ResourceLimitError("too many crossings to enumerate states");
  const bool reduced = opt.basepoint_strand.has_value();
  int bp_arc = -1;
  if (reduced) {
    const int p = *opt.basepoint_strand;
    if (p < 1 || p > w.strands) throw std::invalid_argument("basepoint strand out of range");
    bp_arc = p - 1;
  }
  const WordArcs arcs(w);
  const uint32_t nmask = c ? (1u << c) : 1u;
  const auto bit_of = [c](int t) { return 1u << (c - 1 - t); };

  std::vector<uint32_t> after_mask(std::max(c, 1), 0);
  if (opt.crossing_order) {
    const auto& ord = *opt.crossing_order;
    if ((int)ord.size() != c) throw std::invalid_argument("crossing order has wrong length");
    std::vector<char> seen(c, 0);
    for (int r : ord) {
      if (r < 0 || r >= c || seen[r]) throw std::invalid_argument("crossing order is not a permutation");
      seen[r] = 1;
    }
    for (int t = 0; t < c; ++t)
      for (int t2 = 0; t2 < c; ++t2)
        if (ord[t2] > ord[t]) after_mask[t] |= bit_of(t2);
  } else {
    for (int t = 0; t < c; ++t) after_mask[t] = bit_of(t) - 1u;
  }

  // pass over all states: circle counts, resource guard, occupied b range
  std::vector<uint8_t> cnt(nmask);
  detail::ResolveScratch scratch;
  CircleDecomposition decomp;
  int64_t total = 0;
  int bmin = 0, bmax = 0;
  bool any = false;
  std::vector<char> occupied;
  {
    for (uint32_t mask = 0; mask < nmask; ++mask) {
      detail::resolve_arcs_into(w, arcs, mask, scratch, decomp);
      if (decomp.count > 26) throw ResourceLimitError("too many circles in one state");
      cnt[mask] = (uint8_t)decomp.count;
      total += (int64_t)1 << (decomp.count - (reduced ? 1 : 0));
      if (total > opt.max_generators)
        throw ResourceLimitError("generator count exceeds cap of " +
                                 std::to_string(opt.max_generators));
      const int sigma = c - 2 * std::popcount(mask);
      const int lo = sigma - 2 * decomp.count, hi = sigma + 2 * decomp.count;
      if (!any || lo < bmin) bmin = lo;
      if (!any || hi > bmax) bmax = hi;
      any = true;
    }
    occupied.assign((bmax - bmin) / 2 + 1, 0);
    for (uint32_t mask = 0; mask < nmask; ++mask) {
      const int sigma = c - 2 * std::popcount(mask);
      const int n = cnt[mask];
      const int pmax = reduced ? n - 1 : n;
      for (int p = 0; p <= pmax; ++p) occupied[(sigma + 2 * (2 * p - n) - bmin) / 2] = 1;
    }
  }

  FramedHomologyTable table;
  // the closure orientation can reverse along flat letters, so the writhe that
  // indexes classical gradings is the traced one, not the letter-sign sum
  table.writhe = stats(w).oriented_writhe;
  table.complete = !opt.b_filter.has_value();

  detail::ResolveScratch tscratch;
  std::vector<CircleDecomposition> tgts(std::max(c, 1));
  std::vector<Resmoothing> rms(std::max(c, 1));
  const std::vector<int> cpos = w.crossing_letter_positions();

  // local move data and target bookkeeping per free crossing of one state
  struct TgtInfo {
    int32_t base = -1;
    int count = 0;
    int bp_pos = -1;  // bit position of the target basepoint circle
    int8_t sgn = 1;
  };
  std::vector<TgtInfo> tinfo(std::max(c, 1));

  for (int b = bmin; b <= bmax; b += 2) {
    if (!occupied[(b - bmin) / 2]) continue;
    if (opt.b_filter &&
        std::find(opt.b_filter->begin(), opt.b_filter->end(), b) == opt.b_filter->end())
      continue;

    // layer table for this b
    std::vector<detail::EngineLayer> layers(c + 1);
    for (uint32_t mask = 0; mask < nmask; ++mask) {
      const int bcount = std::popcount(mask);
      const int sigma = c - 2 * bcount;
      const int n = cnt[mask];
      const int p2 = (b - sigma) / 2 + n;
      if (p2 % 2 || p2 < 0) continue;
      const int p = p2 / 2;
      const int pmax = reduced ? n - 1 : n;
      if (p > pmax) continue;
      const int64_t block = detail::nCk(reduced ? n - 1 : n, p);
      if (block == 0) continue;
      layers[bcount].offs.push_back({mask, (int32_t)layers[bcount].dim});
      layers[bcount].dim += block;
      if (layers[bcount].dim > INT32_MAX) throw ResourceLimitError("layer dimension overflow");
    }

    // differential triplets per adjacent layer pair
    std::vector<std::vector<detail::EngineTriplet>> trips(std::max(c, 1));
    for (int k = 0; k < c; ++k) {
      const detail::EngineLayer& src_layer = layers[k];
      const detail::EngineLayer& tgt_layer = layers[k + 1];
      for (const auto& [mask, base] : src_layer.offs) {
        const int n = cnt[mask];
        const int sigma = c - 2 * k;
        const int p = ((b - sigma) / 2 + n) / 2;
        detail::resolve_arcs_into(w, arcs, mask, scratch, decomp);
        const int src_bp = reduced ? decomp.circle_of_arc[bp_arc] : -1;
        for (int t = 0; t < c; ++t) {
          if (mask & bit_of(t)) continue;
          const uint32_t tmask = mask | bit_of(t);
          detail::resolve_arcs_into(w, arcs, tmask, tscratch, tgts[t]);
          rms[t] = resmooth(arcs, decomp, tgts[t], cpos[t]);
          TgtInfo& ti = tinfo[t];
          ti.count = tgts[t].count;
          ti.base = tgt_layer.offset_of(tmask);
          ti.sgn = (int8_t)(std::popcount(mask & after_mask[t]) % 2 ? -1 : 1);
          if (reduced) ti.bp_pos = ti.count - 1 - tgts[t].circle_of_arc[bp_arc];
        }

        // enumerate this state's sign masks of the right popcount
        const int width = reduced ? n - 1 : n;
        const int src_bp_pos = reduced ? n - 1 - src_bp : -1;
        uint32_t packed = p ? (1u << p) - 1u : 0u;
        const int64_t block = detail::nCk(width, p);
        for (int64_t idx = 0; idx < block; ++idx) {
          uint32_t emask = packed;
          if (reduced) {
            // reinsert the basepoint circle's bit as 0 (sign -1)
            emask = ((emask >> src_bp_pos) << (src_bp_pos + 1)) |
                    (emask & ((1u << src_bp_pos) - 1u));
          }
          const int32_t col = base + (int32_t)idx;
          for (int t = 0; t < c; ++t) {
            if (mask & bit_of(t)) continue;
            const TgtInfo& ti = tinfo[t];
            const TargetSigns ts = resmooth_signs(rms[t], emask, n, ti.count);
            for (int i = 0; i < ts.n; ++i) {
              uint32_t tm = ts.masks[i];
              if (reduced) {
                if ((tm >> ti.bp_pos) & 1u) continue;  // projected away in the quotient
                tm = detail::squeeze_bit(tm, ti.bp_pos);
              }
              if (ti.base < 0) throw std::logic_error("target state missing from layer");
              trips[k].push_back({(int32_t)(ti.base + detail::combination_rank(tm)), col, ti.sgn});
            }
          }
          if (idx + 1 < block) packed = detail::gosper_next(packed);
        }
      }
    }

    // assemble, reduce, and read off homology
    std::vector<RowMat> mats;
    mats.reserve(c);
    for (int k = 0; k < c; ++k) {
      RowMat rm((int)layers[k + 1].dim, (int)layers[k].dim);
      std::sort(trips[k].begin(), trips[k].end(),
                [](const detail::EngineTriplet& x, const detail::EngineTriplet& y) {
                  return std::pair{x.r, x.c} < std::pair{y.r, y.c};
                });
      for (const auto& tr : trips[k]) rm.push_entry(tr.r, tr.c, Int(tr.v));
      trips[k] = {};
      mats.push_back(std::move(rm));
    }
    if (opt.unit_reduce && !mats.empty()) chain_eliminate(mats);

    std::vector<SparseIntMatrix> residuals(mats.size());
    std::vector<SNFResult> snfs(mats.size());
    for (size_t k = 0; k < mats.size(); ++k) {
      residuals[k] = mats[k].residual();
      snfs[k] = residuals[k].is_zero() ? SNFResult{} : smith_normal_form(residuals[k]);
    }
    for (int k = 0; k <= c; ++k) {
      if (layers[k].dim == 0) continue;
      int64_t dim;
      if (mats.empty())
        dim = layers[k].dim;
      else
        dim = k < (int)mats.size() ? mats[k].ncols_alive() : mats[k - 1].nrows_alive();
      AbelianGroup g;
      const int rank_out = k < (int)mats.size() ? snfs[k].rank : 0;
      const int rank_in = k > 0 ? snfs[k - 1].rank : 0;
      g.free_rank = dim - rank_out - rank_in;
      if (g.free_rank < 0) throw std::logic_error("negative free rank in layer");
      if (k > 0) g.torsion = snfs[k - 1].nontrivial();
      if (!g.is_zero()) table.groups[{c - 2 * k, b}] = std::move(g);
    }
  }
  return table;
}

inline ClassicalHomologyTable to_classical(const FramedHomologyTable& t,
                                           std::optional<int> writhe = std::nullopt) {
  const int w = writhe.value_or(t.writhe);
  ClassicalHomologyTable out;
  out.complete = t.complete;
  for (const auto& [ab, g] : t.groups) {
    const auto [a, b] = ab;
    if ((w - a) % 2 != 0 || (3 * w - b) % 2 != 0)
      throw std::invalid_argument("framed gradings have wrong parity for this writhe");
    out.groups[{(w - a) / 2, (3 * w - b) / 2}] = g;
  }
  return out;
}

inline FramedHomologyTable to_framed(const ClassicalHomologyTable& t, int writhe) {
  FramedHomologyTable out;
  out.writhe = writhe;
  out.complete = t.complete;
  for (const auto& [ij, g] : t.groups)
    out.groups[{writhe - 2 * ij.first, 3 * writhe - 2 * ij.second}] = g;
  return out;
}

// effect of adding nu positive kinks: H_{a,b} moves to H_{a+nu, b+3nu}
inline FramedHomologyTable framing_shift(const FramedHomologyTable& t, int nu) {
  FramedHomologyTable out;
  out.writhe = t.writhe + nu;
  out.complete = t.complete;
  for (const auto& [ab, g] : t.groups) out.groups[{ab.first + nu, ab.second + 3 * nu}] = g;
  return out;
}

// reduced homology via the quotient by the subcomplex of basepoint-sign +1
// generators; reported in classical gradings with jt = j - 1
inline ClassicalHomologyTable reduced_homology(const SmoothedBraidWord& w, int basepoint_strand,
                                               HomologyOptions opt = {}) {
  opt.basepoint_strand = basepoint_strand;
  const FramedHomologyTable framed = full_homology(w, opt);
  ClassicalHomologyTable cl = to_classical(framed);
  ClassicalHomologyTable out;
  out.complete = cl.complete;
  out.reduced = true;
  for (const auto& [ij, g] : cl.groups) out.groups[{ij.first, ij.second - 1}] = g;
  return out;
}

// graded Euler characteristic in the bracket variable, from a complete table
inline Laurent euler_polynomial(const FramedHomologyTable& t) {
  if (!t.complete) throw std::invalid_argument("euler polynomial needs a complete table");
  Laurent p;
  for (const auto& [ab, g] : t.groups) {
    const int tau = (ab.second - ab.first) / 2;
    p += Laurent::term(Int(g.free_rank) * (tau % 2 ? -1 : 1), ab.second);
  }
  return p;
}

// graded Euler characteristic in q from a classical table
inline Laurent graded_euler_q(const ClassicalHomologyTable& t) {
  if (!t.complete) throw std::invalid_argument("euler polynomial needs a complete table");
  Laurent p;
  for (const auto& [ij, g] : t.groups)
    p += Laurent::term(Int(g.free_rank) * (ij.first % 2 ? -1 : 1), ij.second);
  return p;
}

}  // namespace kht
