#pragma once

#include <functional>
#include <queue>
#include <tuple>
#include <vector>

#include "sparse.hpp"

namespace kht {

// Markowitz-style elimination of +-1 pivots; on_cancel(r, c) fires after each
// cancelled pair so chain-complex callers can drop the mirrored row and column
// in the neighbouring matrices
inline int64_t eliminate_units(RowMat& m, const std::function<void(int, int)>& on_cancel = {}) {
  using QE = std::tuple<int64_t, int, int>;  // (fill score, row, col)
  std::priority_queue<QE, std::vector<QE>, std::greater<QE>> q;
  auto score = [&m](int r, int c) {
    return (m.row_nnz(r) - 1) * (m.col_nnz(c) - 1);
  };
  for (int r = 0; r < m.nrows(); ++r) {
    if (!m.row_alive(r)) continue;
    for (const auto& e : m.row(r))
      if (e.v == 1 || e.v == -1) q.push({score(r, e.c), r, e.c});
  }
  int64_t count = 0;
  while (!q.empty()) {
    auto [s, r, c] = q.top();
    q.pop();
    if (!m.row_alive(r) || !m.col_alive(c)) continue;
    const Int v = m.get(r, c);
    if (v != 1 && v != -1) continue;
    const int64_t cur = score(r, c);
    if (cur > s) {
      q.push({cur, r, c});
      continue;
    }
    const std::vector<int> touched = m.rows_with_col(c);
    m.cancel_unit(r, c);
    if (on_cancel) on_cancel(r, c);
    ++count;
    for (int r2 : touched) {
      if (r2 == r || !m.row_alive(r2)) continue;
      for (const auto& e : m.row(r2))
        if (e.v == 1 || e.v == -1) q.push({score(r2, e.c), r2, e.c});
    }
  }
  return count;
}

namespace detail {

// textbook Smith diagonalization of a dense matrix; returns the nonzero
// diagonal as a divisibility chain
inline std::vector<Int> dense_smith_diagonal(std::vector<std::vector<Int>> m) {
  const int R = (int)m.size();
  const int C = R ? (int)m[0].size() : 0;
  std::vector<Int> diag;
  for (int k = 0; k < std::min(R, C); ++k) {
    for (;;) {
      int pr = -1, pc = -1;
      Int best;
      for (int r = k; r < R; ++r)
        for (int c = k; c < C; ++c)
          if (m[r][c] != 0) {
            Int a = abs_int(m[r][c]);
            if (pr < 0 || a < best) {
              best = a;
              pr = r;
              pc = c;
            }
          }
      if (pr < 0) return diag;
      std::swap(m[k], m[pr]);
      if (pc != k)
        for (int r = 0; r < R; ++r) std::swap(m[r][k], m[r][pc]);

      bool clean = true;
      for (int r = k + 1; r < R; ++r)
        if (m[r][k] != 0) {
          const Int qq = m[r][k] / m[k][k];
          if (qq != 0)
            for (int c = k; c < C; ++c) m[r][c] -= qq * m[k][c];
          if (m[r][k] != 0) clean = false;
        }
      if (!clean) continue;
      for (int c = k + 1; c < C; ++c)
        if (m[k][c] != 0) {
          const Int qq = m[k][c] / m[k][k];
          if (qq != 0)
            for (int r = k; r < R; ++r) m[r][c] -= qq * m[r][k];
          if (m[k][c] != 0) clean = false;
        }
      if (!clean) continue;

      int br = -1;
      for (int r = k + 1; r < R && br < 0; ++r)
        for (int c = k + 1; c < C && br < 0; ++c)
          if (m[r][c] % m[k][k] != 0) br = r;
      if (br >= 0) {
        for (int c = k; c < C; ++c) m[k][c] += m[br][c];
        continue;
      }
      break;
    }
    if (m[k][k] < 0) m[k][k] = -m[k][k];
    diag.push_back(m[k][k]);
  }
  return diag;
}

}  // namespace detail

struct SNFResult {
  std::vector<Int> factors;  // invariant factors d_1 | d_2 | ... | d_r, including 1s
  int rank = 0;              // r == factors.size()

  std::vector<Int> nontrivial() const {
    std::vector<Int> out;
    for (const Int& d : factors)
      if (d > 1) out.push_back(d);
    return out;
  }
};

// exact Smith normal form: +-1 pivots are cancelled sparsely first, the
// remaining core is diagonalized densely; the core area is capped so oversized
// inputs fail predictably instead of thrashing
inline SNFResult smith_normal_form(const SparseIntMatrix& m,
                                   int64_t dense_area_cap = 25'000'000) {
  RowMat rm = RowMat::from_coo(m);
  const int64_t units = eliminate_units(rm);
  SNFResult res;
  res.factors.assign((size_t)units, Int(1));
  if (rm.nnz() > 0) {
    const SparseIntMatrix core = rm.residual();
    if ((int64_t)core.rows * core.cols > dense_area_cap)
      throw ResourceLimitError("Smith normal form core exceeds dense area cap");
    for (Int& d : detail::dense_smith_diagonal(core.dense()))
      res.factors.push_back(std::move(d));
  }
  res.rank = (int)res.factors.size();
  return res;
}

}  // namespace kht
