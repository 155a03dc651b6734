#pragma once

#include <map>
#include <set>
#include <vector>

#include "cube.hpp"
#include "snf.hpp"
#include "sparse.hpp"

namespace kht {

// Gaussian cancellation along a chain of matrices M_k : L_k -> L_{k+1}
// (rows of M_k are L_{k+1}, cols are L_k). Cancelling a unit pair
// (col g, row g') Schur-updates M_k only; the neighbours just lose the
// mirrored row g (in M_{k-1}) and column g' (in M_{k+1}). One forward
// sweep suffices because kills never create new unit entries upstream.
inline int64_t chain_eliminate(std::vector<RowMat>& mats) {
  int64_t total = 0;
  for (size_t k = 0; k < mats.size(); ++k) {
    RowMat* prev = k > 0 ? &mats[k - 1] : nullptr;
    RowMat* next = k + 1 < mats.size() ? &mats[k + 1] : nullptr;
    total += eliminate_units(mats[k], [&](int r, int c) {
      if (prev && prev->row_alive(c)) prev->kill_row(c);
      if (next && next->col_alive(r)) next->kill_col(r);
    });
  }
  return total;
}

// in-place unit-pivot reduction of a materialized complex; the surviving
// generators span a smaller complex with identical homology
inline int64_t unit_pivot_reduce(BigradedComplex& cx) {
  std::set<int> bs;
  int64_t cancelled = 0;
  for (const auto& [ab, gens] : cx.generators) bs.insert(ab.second);

  std::map<std::pair<int, int>, std::vector<EnhancedState>> new_gens;
  std::map<std::pair<int, int>, SparseIntMatrix> new_diffs;

  for (int b : bs) {
    int amax = 0, amin = 0;
    bool seen = false;
    for (const auto& [ab, gens] : cx.generators)
      if (ab.second == b) {
        amax = seen ? std::max(amax, ab.first) : ab.first;
        amin = seen ? std::min(amin, ab.first) : ab.first;
        seen = true;
      }
    std::vector<int> layer_a;
    for (int a = amax; a >= amin; a -= 2) layer_a.push_back(a);
    auto dim_of = [&](int a) {
      auto it = cx.generators.find({a, b});
      return it == cx.generators.end() ? 0 : (int)it->second.size();
    };

    std::vector<RowMat> mats;
    for (size_t k = 0; k + 1 < layer_a.size(); ++k) {
      const auto it = cx.differentials.find({layer_a[k], b});
      if (it != cx.differentials.end())
        mats.push_back(RowMat::from_coo(it->second));
      else
        mats.push_back(RowMat(dim_of(layer_a[k + 1]), dim_of(layer_a[k])));
    }
    cancelled += chain_eliminate(mats);

    for (size_t k = 0; k < layer_a.size(); ++k) {
      const auto git = cx.generators.find({layer_a[k], b});
      if (git == cx.generators.end()) continue;
      std::vector<EnhancedState> kept;
      for (int i = 0; i < (int)git->second.size(); ++i) {
        const bool alive = mats.empty() ||
                           (k < mats.size() ? mats[k].col_alive(i) : mats[k - 1].row_alive(i));
        if (alive) kept.push_back(git->second[i]);
      }
      if (!kept.empty()) new_gens[{layer_a[k], b}] = std::move(kept);
    }
    for (size_t k = 0; k + 1 < layer_a.size(); ++k) {
      SparseIntMatrix res = mats[k].residual();
      if (res.rows > 0 && res.cols > 0 && !res.is_zero()) {
        res.canonicalize();
        new_diffs[{layer_a[k], b}] = std::move(res);
      }
    }
  }

  cx.generators = std::move(new_gens);
  cx.differentials = std::move(new_diffs);
  return cancelled;
}

}  // namespace kht
