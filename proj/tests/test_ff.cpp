#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "modrep/ff.hpp"

#include <random>

using modrep::ff::Matrix;
namespace ff = modrep::ff;

namespace {

Matrix random_matrix(std::mt19937_64& rng, int p, int r, int c) {
  Matrix m(p, r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.set(i, j, static_cast<long long>(rng() % p));
  return m;
}

// Brute-force null space dimension by enumerating F_p^n.
int brute_nullity(const Matrix& m) {
  const int p = m.p(), n = m.cols();
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= p;
  long long count = 0;
  for (long long code = 0; code < total; ++code) {
    Matrix v(p, n, 1);
    long long x = code;
    for (int i = 0; i < n; ++i) {
      v.set(i, 0, x % p);
      x /= p;
    }
    if ((m * v).is_zero()) ++count;
  }
  int dim = 0;
  while (count > 1) {
    count /= p;
    ++dim;
  }
  return dim;
}

}  // namespace

TEST_CASE("rref of identity over F_3") {
  auto r = ff::rref(Matrix::identity(3, 2));
  CHECK(r.reduced == Matrix::identity(3, 2));
  CHECK(r.rank == 2);
  CHECK(r.pivots == std::vector<int>{0, 1});
}

TEST_CASE("rref of a rank one matrix over F_5") {
  auto r = ff::rref(Matrix::from_rows(5, {{1, 2}, {2, 4}}));
  CHECK(r.reduced == Matrix::from_rows(5, {{1, 2}, {0, 0}}));
  CHECK(r.rank == 1);
  CHECK(r.pivots == std::vector<int>{0});
}

TEST_CASE("rref of zero over F_2") {
  auto r = ff::rref(Matrix(2, 3, 3));
  CHECK(r.reduced.is_zero());
  CHECK(r.rank == 0);
  CHECK(r.pivots.empty());
}

TEST_CASE("kernel examples") {
  CHECK(ff::kernel(Matrix::identity(5, 3)).cols() == 0);
  CHECK(ff::kernel(Matrix::from_rows(2, {{1, 1}})) == Matrix::from_rows(2, {{1}, {1}}));
  CHECK(ff::kernel(Matrix::from_rows(3, {{0}})) == Matrix::from_rows(3, {{1}}));
}

TEST_CASE("invert examples") {
  CHECK(ff::invert(Matrix::identity(7, 3)) == Matrix::identity(7, 3));
  Matrix swap = Matrix::from_rows(2, {{0, 1}, {1, 0}});
  CHECK(ff::invert(swap) == swap);
  CHECK(ff::invert(Matrix::from_rows(3, {{1, 1}, {0, 1}})) == Matrix::from_rows(3, {{1, 2}, {0, 1}}));
  CHECK_THROWS_AS(ff::invert(Matrix::from_rows(5, {{1, 2}, {2, 4}})), ff::SingularMatrix);
}

TEST_CASE("sylvester family examples") {
  SUBCASE("identity family gives the full matrix space") {
    Matrix id = Matrix::identity(3, 2);
    auto sols = ff::solve_sylvester_family({{id, id}});
    CHECK(sols.size() == 4);
  }
  SUBCASE("inequivalent characters of C_2 over F_3") {
    auto sols = ff::solve_sylvester_family({{Matrix::from_rows(3, {{1}}), Matrix::from_rows(3, {{-1}})}});
    CHECK(sols.empty());
  }
  SUBCASE("Schur for the natural module of GL(2,2)") {
    Matrix a = Matrix::from_rows(2, {{1, 1}, {0, 1}});
    Matrix b = Matrix::from_rows(2, {{0, 1}, {1, 0}});
    auto sols = ff::solve_sylvester_family({{a, a}, {b, b}});
    REQUIRE(sols.size() == 1);
    CHECK(sols[0] == Matrix::identity(2, 2));
  }
  SUBCASE("solutions satisfy the relations") {
    std::mt19937_64 rng(5);
    Matrix a = random_matrix(rng, 5, 3, 3);
    Matrix x0 = random_matrix(rng, 5, 2, 3);
    // B with x0 a = b x0 cannot be chosen freely; use a commuting family instead.
    auto sols = ff::solve_sylvester_family({{a, a}});
    for (auto& x : sols) CHECK(x * a == a * x);
    CHECK(x0.rows() == 2);
  }
}

TEST_CASE("random properties") {
  std::mt19937_64 rng(2024);
  for (int p : {2, 3, 5, 7, 11, 13}) {
    for (int trial = 0; trial < 40; ++trial) {
      int r = 1 + static_cast<int>(rng() % 5), c = 1 + static_cast<int>(rng() % 5);
      Matrix m = random_matrix(rng, p, r, c);
      auto rr = ff::rref(m);
      CHECK(ff::rref(rr.reduced).reduced == rr.reduced);
      Matrix k = ff::kernel(m);
      CHECK((m * k).is_zero());
      CHECK(rr.rank + k.cols() == c);
      CHECK(ff::rank(k) == k.cols());
      if (p <= 3 && c <= 4) CHECK(brute_nullity(m) == k.cols());
      Matrix sq = random_matrix(rng, p, r, r);
      if (auto inv = ff::try_invert(sq)) {
        CHECK((*inv * sq).is_identity());
        CHECK((sq * *inv).is_identity());
        CHECK(ff::determinant(sq) != 0);
      } else {
        CHECK(ff::determinant(sq) == 0);
      }
      CHECK(ff::rref(m).reduced == rr.reduced);
    }
  }
}

TEST_CASE("solve and subspace helpers") {
  Matrix a = Matrix::from_rows(5, {{1, 2}, {3, 4}, {0, 1}});
  Matrix x = Matrix::from_rows(5, {{2}, {3}});
  auto sol = ff::solve(a, a * x);
  REQUIRE(sol);
  CHECK(*sol == x);
  CHECK_FALSE(ff::solve(Matrix::from_rows(5, {{0}, {0}}), Matrix::from_rows(5, {{1}, {0}})));
  Matrix e1 = Matrix::from_rows(3, {{1}, {0}, {0}});
  Matrix comp = ff::complement_basis(e1, 3);
  CHECK(comp.cols() == 2);
  CHECK(ff::rank(Matrix::hconcat(e1, comp)) == 3);
  Matrix span12 = Matrix::from_rows(3, {{1, 0}, {0, 1}, {0, 0}});
  Matrix span23 = Matrix::from_rows(3, {{0, 0}, {1, 0}, {0, 1}});
  CHECK(ff::same_span(ff::intersect_spaces(span12, span23), Matrix::from_rows(3, {{0}, {1}, {0}})));
}

TEST_CASE("sparse rank agrees with dense rank") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    int p = 3, r = 6, c = 5;
    Matrix m(p, r, c);
    std::vector<std::vector<std::pair<int64_t, int>>> cols(c);
    for (int j = 0; j < c; ++j)
      for (int i = 0; i < r; ++i)
        if (rng() % 3 == 0) {
          int v = static_cast<int>(rng() % p);
          m.set(i, j, v);
          cols[j].push_back({i * 1000, v});
        }
    CHECK(ff::sparse_rank(p, cols) == ff::rank(m));
  }
}

TEST_CASE("determinism and moduli") {
  Matrix m = Matrix::from_rows(7, {{3, 1, 4}, {1, 5, 2}, {6, 5, 3}});
  CHECK(ff::rref(m).reduced == ff::rref(m).reduced);
  CHECK_THROWS_AS(Matrix::from_scalars(1, 2, {ff::Scalar(1, 3), ff::Scalar(1, 5)}), ff::FieldError);
  CHECK_THROWS_AS(ff::check_prime(4), ff::FieldError);
  CHECK_THROWS_AS(ff::check_prime(17), ff::FieldError);
  CHECK(ff::inv_mod(3, 7) == 5);
}
