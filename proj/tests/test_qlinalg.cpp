#include <catch2/catch_amalgamated.hpp>

#include "derham/qlinalg.hpp"
#include "derham/rng.hpp"

using namespace derham;

namespace {
QMatrix from(const std::vector<std::vector<long>>& rows) {
  QMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rat(rows[i][j]);
  return m;
}
}  // namespace

TEST_CASE("rank basics") {
  CHECK(mat_rank(from({{1, 0}, {0, 1}})) == 2);
  CHECK(mat_rank(from({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}})) == 0);
  CHECK(mat_rank(from({{1, 2}, {2, 4}})) == 1);
}

TEST_CASE("nullspace basics") {
  auto ns = mat_nullspace(from({{1, 1}}));
  REQUIRE(ns.size() == 1);
  CHECK(ns[0][0] == -ns[0][1]);

  CHECK(mat_nullspace(from({{1, 0}, {0, 1}})).empty());

  auto ns2 = mat_nullspace(from({{1, 2}, {2, 4}}));
  REQUIRE(ns2.size() == 1);
  // proportional to (2, -1)
  CHECK(ns2[0][0] * rat(-1) == ns2[0][1] * rat(2));
}

TEST_CASE("solve basics") {
  {
    SolveResult s = solve_linear(from({{1, 0}, {0, 1}}), {rat(3, 2), rat(-1)});
    CHECK(s.nullity == 0);
    CHECK(s.particular == QVector{rat(3, 2), rat(-1)});
  }
  {
    SolveResult s = solve_linear(from({{2}}), {rat(1)});
    CHECK(s.particular[0] == rat(1, 2));
  }
  CHECK_THROWS_AS(solve_linear(from({{1, 1}, {1, 1}}), {rat(1), rat(2)}), Inconsistent);
  {
    // underdetermined consistent system flagged with a particular solution
    SolveResult s = solve_linear(from({{1, 1}}), {rat(2)});
    CHECK(s.nullity == 1);
    CHECK(s.particular[0] + s.particular[1] == rat(2));
  }
  {
    // rhs denser than any column must not confuse pivoting
    SolveResult s = solve_linear(from({{1, 0}, {1, 0}, {0, 1}}), {rat(1), rat(1), rat(1)});
    CHECK(s.particular == QVector{rat(1), rat(1)});
  }
}

TEST_CASE("rank-nullity and invariance properties") {
  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t r = 1 + rng.below(5), c = 1 + rng.below(6);
    QMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (rng.below(3)) m(i, j) = rng.rational();
    const std::size_t rank = mat_rank(m);
    CHECK(rank + mat_nullspace(m).size() == c);
    // every nullspace vector is annihilated exactly
    for (const auto& v : mat_nullspace(m))
      for (const auto& y : mat_apply(m, v)) CHECK(is_zero(y));
    // row permutation and row scaling leave the rank alone
    QMatrix m2 = m;
    m2.swap_rows(0, r - 1);
    for (std::size_t j = 0; j < c; ++j) m2(0, j) *= rat(3, 7);
    CHECK(mat_rank(m2) == rank);
  }
}
