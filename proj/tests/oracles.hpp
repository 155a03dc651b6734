#pragma once

// independent reference implementations used only by the tests: a planar-graph
// circle counter, a dense gcd-style Smith reduction with transform matrices, a
// kernel/image homology reader built on it, and a seeded word generator

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "kht/abelian.hpp"
#include "kht/circles.hpp"
#include "kht/diagram.hpp"
#include "kht/ints.hpp"
#include "kht/sparse.hpp"

namespace oracle {

using kht::Int;

// circles of a fully smoothed closure, counted by BFS over (level, strand)
// nodes of the strand grid instead of arc union-find
inline int circle_count(const kht::SmoothedBraidWord& w, const kht::KauffmanState& st) {
  const int n = w.strands;
  const int L = (int)w.letters.size();
  const int nodes = (L + 1) * n;
  std::vector<std::vector<int>> adj(nodes);
  const auto link = [&](int l1, int p1, int l2, int p2) {
    adj[l1 * n + p1].push_back(l2 * n + p2);
    adj[l2 * n + p2].push_back(l1 * n + p1);
  };
  int crossing = 0;
  for (int l = 0; l < L; ++l) {
    const kht::Letter& lt = w.letters[l];
    const int i = lt.index - 1;
    bool vertical = false;
    if (lt.is_crossing()) {
      const kht::Marker m = st.labels[crossing++];
      vertical = (lt.sign > 0) == (m == kht::Marker::A);
    }
    if (vertical) {
      link(l, i, l + 1, i);
      link(l, i + 1, l + 1, i + 1);
    } else {
      link(l, i, l, i + 1);
      link(l + 1, i, l + 1, i + 1);
    }
    for (int p = 0; p < n; ++p)
      if (p != i && p != i + 1) link(l, p, l + 1, p);
  }
  for (int p = 0; p < n; ++p) link(L, p, 0, p);

  std::vector<char> seen(nodes, 0);
  int comps = 0;
  std::vector<int> stack;
  for (int s = 0; s < nodes; ++s) {
    if (seen[s]) continue;
    ++comps;
    stack.push_back(s);
    seen[s] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int u : adj[v])
        if (!seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
    }
  }
  return comps;
}

using Dense = std::vector<std::vector<Int>>;

inline Dense to_dense(const kht::SparseIntMatrix& m) { return m.dense(); }

// fraction-free determinant, for the SNF product property
inline Int abs_det(Dense m) {
  const int n = (int)m.size();
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k < n; ++k) {
    if (m[k][k] == 0) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (m[i][k] != 0) {
          piv = i;
          break;
        }
      if (piv < 0) return 0;
      std::swap(m[k], m[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  Int d = m[n - 1][n - 1] * sign;
  return d < 0 ? -d : d;
}

struct SmithTransforms {
  Dense d;        // l * input * r
  Dense l, r;     // unimodular
  int rank = 0;
  std::vector<Int> diagonal;  // nonzero entries, divisibility chain
};

namespace detail {

inline Dense identity(int n) {
  Dense m(n, std::vector<Int>(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

}  // namespace detail

// classic gcd-chasing Smith reduction carrying row ops into l and col ops into r;
// cols_hint supplies the width when m has no rows to read it from
inline SmithTransforms smith_with_transforms(Dense m, int cols_hint = 0) {
  const int rows = (int)m.size();
  const int cols = rows ? (int)m[0].size() : cols_hint;
  SmithTransforms out;
  out.l = detail::identity(rows);
  out.r = detail::identity(cols);

  const auto row_sub = [&](int i, int k, const Int& q) {
    for (int j = 0; j < cols; ++j) m[i][j] -= q * m[k][j];
    for (int j = 0; j < rows; ++j) out.l[i][j] -= q * out.l[k][j];
  };
  const auto col_sub = [&](int j, int k, const Int& q) {
    for (int i = 0; i < rows; ++i) m[i][j] -= q * m[i][k];
    for (int i = 0; i < cols; ++i) out.r[i][j] -= q * out.r[i][k];
  };
  const auto row_swap = [&](int i, int k) {
    std::swap(m[i], m[k]);
    std::swap(out.l[i], out.l[k]);
  };
  const auto col_swap = [&](int j, int k) {
    for (int i = 0; i < rows; ++i) std::swap(m[i][j], m[i][k]);
    for (int i = 0; i < cols; ++i) std::swap(out.r[i][j], out.r[i][k]);
  };
  const auto row_neg = [&](int i) {
    for (int j = 0; j < cols; ++j) m[i][j] = -m[i][j];
    for (int j = 0; j < rows; ++j) out.l[i][j] = -out.l[i][j];
  };

  // each round re-picks the minimal pivot (ties stay at (k,k)), clears the
  // pivot cross leaving remainders in place, and folds one offending row; a
  // leftover remainder or a fold both force a strictly smaller pivot next
  // round, so the inner loop terminates without entry blowup
  int k = 0;
  bool exhausted = false;
  while (k < rows && k < cols && !exhausted) {
    for (;;) {
      int pi = -1, pj = -1;
      Int best;
      for (int i = k; i < rows; ++i)
        for (int j = k; j < cols; ++j)
          if (m[i][j] != 0) {
            const Int a = kht::abs_int(m[i][j]);
            if (pi < 0 || a < best) {
              best = a;
              pi = i;
              pj = j;
            }
          }
      if (pi < 0) {
        exhausted = true;
        break;
      }
      if (pi != k) row_swap(pi, k);
      if (pj != k) col_swap(pj, k);

      bool clean = true;
      for (int i = k + 1; i < rows; ++i)
        if (m[i][k] != 0) {
          const Int q = m[i][k] / m[k][k];
          if (q != 0) row_sub(i, k, q);
          if (m[i][k] != 0) clean = false;
        }
      if (!clean) continue;
      for (int j = k + 1; j < cols; ++j)
        if (m[k][j] != 0) {
          const Int q = m[k][j] / m[k][k];
          if (q != 0) col_sub(j, k, q);
          if (m[k][j] != 0) clean = false;
        }
      if (!clean) continue;

      int bad = -1;
      for (int i = k + 1; i < rows && bad < 0; ++i)
        for (int j = k + 1; j < cols && bad < 0; ++j)
          if (m[i][j] % m[k][k] != 0) bad = i;
      if (bad >= 0) {
        row_sub(k, bad, Int(-1));  // fold the offending row into the pivot row
        continue;
      }
      break;
    }
    if (exhausted) break;
    if (m[k][k] < 0) row_neg(k);
    ++k;
  }
  out.rank = k;
  for (int i = 0; i < k; ++i) out.diagonal.push_back(m[i][i]);
  out.d = std::move(m);
  return out;
}

inline std::vector<Int> smith_diagonal(const Dense& m) {
  return smith_with_transforms(m).diagonal;
}

inline Dense matmul(const Dense& a, const Dense& b) {
  const int r = (int)a.size();
  const int mid = r ? (int)a[0].size() : 0;
  const int c = mid && !b.empty() ? (int)b[0].size() : 0;
  Dense out(r, std::vector<Int>(c, 0));
  for (int i = 0; i < r; ++i)
    for (int t = 0; t < mid; ++t) {
      if (a[i][t] == 0) continue;
      for (int j = 0; j < c; ++j) out[i][j] += a[i][t] * b[t][j];
    }
  return out;
}

// homology at the middle of C --d_in--> C' --d_out--> C'' by an explicit
// kernel basis and coordinates of the image inside it
inline kht::AbelianGroup homology_group(const kht::SparseIntMatrix& d_out,
                                        const kht::SparseIntMatrix& d_in) {
  if (d_out.cols != d_in.rows) throw std::invalid_argument("oracle dimension mismatch");
  const int dim = (int)d_out.cols;
  const Dense mo = to_dense(d_out);
  const SmithTransforms so = smith_with_transforms(mo, dim);

  // kernel basis: columns of r over the zero columns of the smith form
  const int kdim = dim - so.rank;
  Dense kernel(dim, std::vector<Int>(kdim, 0));
  for (int j = 0; j < kdim; ++j)
    for (int i = 0; i < dim; ++i) kernel[i][j] = so.r[i][so.rank + j];

  const SmithTransforms sk = smith_with_transforms(kernel);
  if (sk.rank != kdim) throw std::logic_error("oracle kernel basis is not independent");

  // coordinates of each boundary column in the kernel basis
  const Dense mi = to_dense(d_in);
  const int bcols = (int)d_in.cols;
  Dense coords(kdim, std::vector<Int>(bcols, 0));
  for (int j = 0; j < bcols; ++j) {
    std::vector<Int> v(dim, 0);
    for (int i = 0; i < dim; ++i) v[i] = mi[i][j];
    std::vector<Int> lv(dim, 0);
    for (int i = 0; i < dim; ++i)
      for (int t = 0; t < dim; ++t) lv[i] += sk.l[i][t] * v[t];
    std::vector<Int> x(kdim, 0);
    for (int i = 0; i < kdim; ++i) {
      if (lv[i] % sk.d[i][i] != 0) throw std::logic_error("oracle: boundary outside kernel");
      x[i] = lv[i] / sk.d[i][i];
    }
    for (int i = kdim; i < dim; ++i)
      if (lv[i] != 0) throw std::logic_error("oracle: boundary outside kernel");
    for (int i = 0; i < kdim; ++i)
      for (int t = 0; t < kdim; ++t) coords[i][j] += sk.r[i][t] * x[t];
  }

  const std::vector<Int> q = smith_diagonal(coords);
  kht::AbelianGroup g;
  g.free_rank = kdim - (int)q.size();
  for (const Int& d : q)
    if (d > 1) g.torsion.push_back(d);
  return g;
}

inline kht::SmoothedBraidWord random_word(std::mt19937& rng, int max_strands, int max_letters,
                                          double e_prob = 0.1) {
  std::uniform_int_distribution<int> strands_d(2, max_strands);
  const int n = strands_d(rng);
  std::uniform_int_distribution<int> len_d(0, max_letters);
  const int len = len_d(rng);
  std::uniform_int_distribution<int> idx_d(1, n - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  kht::SmoothedBraidWord w;
  w.strands = n;
  for (int p = 0; p < len; ++p) {
    kht::Letter l;
    l.index = idx_d(rng);
    l.sign = u(rng) < e_prob ? 0 : (u(rng) < 0.5 ? +1 : -1);
    w.letters.push_back(l);
  }
  return w;
}

inline kht::SparseIntMatrix random_matrix(std::mt19937& rng, int max_dim, int lo = -10,
                                          int hi = 10) {
  std::uniform_int_distribution<int> dim_d(0, max_dim);
  const int r = dim_d(rng), c = dim_d(rng);
  std::uniform_int_distribution<int> val_d(lo, hi);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double density = 0.2 + 0.6 * u(rng);
  kht::SparseIntMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      if (u(rng) < density) {
        const int v = val_d(rng);
        if (v != 0) m.add(i, j, v);
      }
  m.canonicalize();
  return m;
}

}  // namespace oracle
