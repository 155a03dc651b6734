#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ints.hpp"

namespace kht {

// coordinate-format integer matrix; canonical form is sorted by (row, col) with
// duplicates merged and zeros dropped
struct SparseIntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> ri, ci;
  std::vector<Int> val;

  SparseIntMatrix() = default;
  SparseIntMatrix(int r, int c) : rows(r), cols(c) {}

  void add(int r, int c, Int v) {
    if (r < 0 || r >= rows || c < 0 || c >= cols)
      throw std::invalid_argument("sparse entry out of bounds");
    if (v == 0) return;
    ri.push_back(r);
    ci.push_back(c);
    val.push_back(std::move(v));
  }

  int64_t nnz() const { return (int64_t)val.size(); }
  bool is_zero() const { return val.empty(); }

  void canonicalize() {
    std::vector<int> order(val.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::pair{ri[a], ci[a]} < std::pair{ri[b], ci[b]};
    });
    std::vector<int> nr, nc;
    std::vector<Int> nv;
    for (int idx : order) {
      if (!nv.empty() && nr.back() == ri[idx] && nc.back() == ci[idx]) {
        nv.back() += val[idx];
        if (nv.back() == 0) {
          nr.pop_back();
          nc.pop_back();
          nv.pop_back();
        }
      } else if (val[idx] != 0) {
        nr.push_back(ri[idx]);
        nc.push_back(ci[idx]);
        nv.push_back(val[idx]);
      }
    }
    ri = std::move(nr);
    ci = std::move(nc);
    val = std::move(nv);
  }

  std::vector<std::vector<Int>> dense() const {
    std::vector<std::vector<Int>> d(rows, std::vector<Int>(cols, Int(0)));
    for (size_t i = 0; i < val.size(); ++i) d[ri[i]][ci[i]] += val[i];
    return d;
  }
};

// c = a * b with exact integer arithmetic
inline SparseIntMatrix multiply(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matrix product dimension mismatch");
  std::vector<std::vector<std::pair<int, Int>>> brow(b.rows);
  for (size_t i = 0; i < b.val.size(); ++i) brow[b.ri[i]].push_back({b.ci[i], b.val[i]});
  std::map<std::pair<int, int>, Int> acc;
  for (size_t i = 0; i < a.val.size(); ++i)
    for (const auto& [c2, v2] : brow[a.ci[i]]) acc[{a.ri[i], c2}] += a.val[i] * v2;
  SparseIntMatrix out(a.rows, b.cols);
  for (auto& [rc, v] : acc)
    if (v != 0) out.add(rc.first, rc.second, v);
  return out;
}

// row-major working matrix for elimination; rows are sorted by column and hold
// only alive columns, the column index may carry stale row ids that get filtered
// and compacted on access
class RowMat {
 public:
  RowMat(int nrows, int ncols)
      : rows_(nrows),
        col_rows_(ncols),
        col_nnz_(ncols, 0),
        row_alive_(nrows, 1),
        col_alive_(ncols, 1) {}

  static RowMat from_coo(const SparseIntMatrix& m) {
    RowMat rm(m.rows, m.cols);
    SparseIntMatrix c = m;
    c.canonicalize();
    for (size_t i = 0; i < c.val.size(); ++i)
      rm.push_entry(c.ri[i], c.ci[i], c.val[i]);
    return rm;
  }

  // build-time append; entries must arrive with strictly increasing (row, col)
  // within each row and must not repeat
  void push_entry(int r, int c, Int v) {
    if (v == 0) return;
    auto& row = rows_[r];
    if (!row.empty() && row.back().c >= c)
      throw std::invalid_argument("row entries must be pushed in column order");
    row.push_back({c, std::move(v)});
    col_rows_[c].push_back(r);
    ++col_nnz_[c];
    ++nnz_;
  }

  int nrows() const { return (int)rows_.size(); }
  int ncols() const { return (int)col_rows_.size(); }
  int64_t nnz() const { return nnz_; }
  bool row_alive(int r) const { return row_alive_[r] != 0; }
  bool col_alive(int c) const { return col_alive_[c] != 0; }
  int64_t row_nnz(int r) const { return (int64_t)rows_[r].size(); }
  int64_t col_nnz(int c) const { return col_nnz_[c]; }

  int nrows_alive() const {
    int n = 0;
    for (char a : row_alive_) n += a;
    return n;
  }
  int ncols_alive() const {
    int n = 0;
    for (char a : col_alive_) n += a;
    return n;
  }

  struct Ent {
    int c;
    Int v;
  };
  const std::vector<Ent>& row(int r) const { return rows_[r]; }

  Int get(int r, int c) const {
    const auto& row = rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const Ent& e, int cc) { return e.c < cc; });
    return (it != row.end() && it->c == c) ? it->v : Int(0);
  }

  // alive rows actually holding a nonzero in column c; compacts the column index
  const std::vector<int>& rows_with_col(int c) {
    auto& lst = col_rows_[c];
    std::sort(lst.begin(), lst.end());
    lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
    std::vector<int> out;
    out.reserve(lst.size());
    for (int r : lst)
      if (row_alive_[r] && get(r, c) != 0) out.push_back(r);
    lst = std::move(out);
    return lst;
  }

  void kill_row(int r) {
    for (const Ent& e : rows_[r]) {
      --col_nnz_[e.c];
      --nnz_;
    }
    rows_[r].clear();
    rows_[r].shrink_to_fit();
    row_alive_[r] = 0;
  }

  void kill_col(int c) {
    for (int r : rows_with_col(c)) {
      auto& row = rows_[r];
      auto it = std::lower_bound(row.begin(), row.end(), c,
                                 [](const Ent& e, int cc) { return e.c < cc; });
      row.erase(it);
      --col_nnz_[c];
      --nnz_;
    }
    col_rows_[c].clear();
    col_rows_[c].shrink_to_fit();
    col_alive_[c] = 0;
  }

  // row[dst] += coef * row[src], with coef nonzero and both rows alive
  void axpy_row(int dst, int src, const Int& coef) {
    const auto& s = rows_[src];
    auto& d = rows_[dst];
    std::vector<Ent> out;
    out.reserve(d.size() + s.size());
    size_t i = 0, j = 0;
    while (i < d.size() || j < s.size()) {
      if (j == s.size() || (i < d.size() && d[i].c < s[j].c)) {
        out.push_back(std::move(d[i]));
        ++i;
      } else if (i == d.size() || s[j].c < d[i].c) {
        Int v = coef * s[j].v;
        out.push_back({s[j].c, std::move(v)});
        col_rows_[s[j].c].push_back(dst);
        ++col_nnz_[s[j].c];
        ++nnz_;
        ++j;
      } else {
        Int v = d[i].v + coef * s[j].v;
        if (v == 0) {
          --col_nnz_[d[i].c];
          --nnz_;
        } else {
          out.push_back({d[i].c, std::move(v)});
        }
        ++i;
        ++j;
      }
    }
    d = std::move(out);
  }

  // eliminate around the unit entry (r, c): afterwards row r and column c are
  // gone and no other entry of column c survives
  void cancel_unit(int r, int c) {
    const Int u = get(r, c);
    if (u != 1 && u != -1) throw std::logic_error("pivot entry is not a unit");
    for (int r2 : std::vector<int>(rows_with_col(c)))
      if (r2 != r) axpy_row(r2, r, -get(r2, c) * u);
    kill_row(r);
    col_rows_[c].clear();
    col_rows_[c].shrink_to_fit();
    col_alive_[c] = 0;
  }

  // alive submatrix with densely renumbered indices; optional maps give the
  // original row and column ids in order
  SparseIntMatrix residual(std::vector<int>* row_ids = nullptr,
                           std::vector<int>* col_ids = nullptr) const {
    std::vector<int> rmap(rows_.size(), -1), cmap(col_rows_.size(), -1);
    int nr = 0, nc = 0;
    for (size_t r = 0; r < rows_.size(); ++r)
      if (row_alive_[r]) {
        rmap[r] = nr++;
        if (row_ids) row_ids->push_back((int)r);
      }
    for (size_t c = 0; c < col_rows_.size(); ++c)
      if (col_alive_[c]) {
        cmap[c] = nc++;
        if (col_ids) col_ids->push_back((int)c);
      }
    SparseIntMatrix out(nr, nc);
    for (size_t r = 0; r < rows_.size(); ++r)
      if (row_alive_[r])
        for (const Ent& e : rows_[r]) out.add(rmap[r], cmap[e.c], e.v);
    return out;
  }

 private:
  std::vector<std::vector<Ent>> rows_;
  std::vector<std::vector<int>> col_rows_;
  std::vector<int64_t> col_nnz_;
  std::vector<char> row_alive_, col_alive_;
  int64_t nnz_ = 0;
};

}  // namespace kht
