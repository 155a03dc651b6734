#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kht/snf.hpp"
#include "oracles.hpp"

using kht::Int;
using kht::RowMat;
using kht::smith_normal_form;
using kht::SparseIntMatrix;

namespace {

SparseIntMatrix from_dense(const std::vector<std::vector<Int>>& d) {
  const int r = (int)d.size();
  const int c = r ? (int)d[0].size() : 0;
  SparseIntMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      if (d[i][j] != 0) m.add(i, j, d[i][j]);
  m.canonicalize();
  return m;
}

std::vector<Int> ints(std::initializer_list<long> v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("sparse matrix plumbing", "[snf]") {
  SparseIntMatrix m(2, 3);
  CHECK_THROWS_AS(m.add(2, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(m.add(0, 3, 1), std::invalid_argument);
  m.add(0, 0, 1);
  m.add(0, 0, -1);
  m.add(1, 2, 5);
  m.canonicalize();
  CHECK(m.nnz() == 1);
  CHECK(m.dense()[1][2] == 5);

  const auto a = from_dense({{1, 2}, {3, 4}});
  const auto b = from_dense({{5, 6}, {7, 8}});
  CHECK(kht::multiply(a, b).dense() == std::vector<std::vector<Int>>{{19, 22}, {43, 50}});
  CHECK_THROWS_AS(kht::multiply(a, from_dense({{1, 2, 3}})), std::invalid_argument);
}

TEST_CASE("row matrix elimination", "[snf]") {
  SECTION("identity cancels completely") {
    auto rm = RowMat::from_coo(from_dense({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
    CHECK(kht::eliminate_units(rm) == 3);
    CHECK(rm.nnz() == 0);
    CHECK(rm.residual().rows == 0);
    CHECK(rm.residual().cols == 0);
  }
  SECTION("no unit entries means no cancellation") {
    auto rm = RowMat::from_coo(from_dense({{2, 4}, {6, 8}}));
    CHECK(kht::eliminate_units(rm) == 0);
    CHECK(rm.nnz() == 4);
  }
  SECTION("cancellation preserves the cokernel") {
    // [[1,3],[2,4]] ~ Z^2 / (cols) = Z_2
    auto rm = RowMat::from_coo(from_dense({{1, 3}, {2, 4}}));
    CHECK(kht::eliminate_units(rm) >= 1);
    auto res = rm.residual();
    res.canonicalize();
    const auto snf = smith_normal_form(res);
    // the surviving factors present the same group as the full matrix
    CHECK(smith_normal_form(from_dense({{1, 3}, {2, 4}})).nontrivial() == snf.nontrivial());
    CHECK(snf.nontrivial() == ints({2}));
  }
}

TEST_CASE("smith normal form literals", "[snf]") {
  CHECK(smith_normal_form(from_dense({{2, 4}, {6, 8}})).factors == ints({2, 4}));
  CHECK(smith_normal_form(from_dense({{0, 2}, {3, 0}})).factors == ints({1, 6}));
  CHECK(smith_normal_form(from_dense({{2, 0}, {0, 3}})).factors == ints({1, 6}));
  CHECK(smith_normal_form(from_dense({{0, 0}, {0, 0}})).rank == 0);
  CHECK(smith_normal_form(SparseIntMatrix(0, 5)).factors.empty());
  const auto id = smith_normal_form(from_dense({{1, 0}, {0, 1}}));
  CHECK(id.factors == ints({1, 1}));
  CHECK(id.nontrivial().empty());
}

TEST_CASE("smith normal form of a rank-one product", "[snf]") {
  // [[4,6],[6,9]] has rank 1 with content 1
  const auto r = smith_normal_form(from_dense({{4, 6}, {6, 9}}));
  CHECK(r.rank == 1);
  CHECK(r.factors == ints({1}));
}

TEST_CASE("smith normal form matches the dense oracle", "[snf]") {
  std::mt19937 rng(20260808);
  for (int trial = 0; trial < 500; ++trial) {
    const auto m = oracle::random_matrix(rng, 8);
    const auto got = smith_normal_form(m);
    const auto want = oracle::smith_diagonal(m.dense());
    INFO("trial " << trial << ", " << m.rows << "x" << m.cols);
    CHECK(got.factors == want);
    CHECK(got.rank == (int)want.size());
    for (size_t i = 0; i + 1 < got.factors.size(); ++i)
      CHECK(got.factors[i + 1] % got.factors[i] == 0);
  }
}

TEST_CASE("invariant factors of square full-rank matrices multiply to the determinant",
          "[snf]") {
  std::mt19937 rng(20260809);
  int done = 0;
  while (done < 60) {
    const auto m = oracle::random_matrix(rng, 6);
    if (m.rows != m.cols || m.rows == 0) continue;
    const Int det = oracle::abs_det(m.dense());
    if (det == 0) continue;
    const auto got = smith_normal_form(m);
    Int prod = 1;
    for (const Int& d : got.factors) prod *= d;
    CHECK(prod == det);
    ++done;
  }
}

TEST_CASE("dense fallback respects its area cap", "[snf]") {
  const auto m = from_dense({{2, 4}, {6, 8}});
  CHECK_THROWS_AS(smith_normal_form(m, 3), kht::ResourceLimitError);
  CHECK_NOTHROW(smith_normal_form(m, 4));
}
