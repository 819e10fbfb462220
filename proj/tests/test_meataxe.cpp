#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "modrep/meataxe.hpp"

#include <random>

using modrep::ff::Matrix;
namespace ff = modrep::ff;
namespace mx = modrep::meataxe;

namespace {

std::vector<Matrix> gl2_generators(int p) {
  int z = (p == 2) ? 1 : (p == 3 ? 2 : 2);
  return {Matrix::from_rows(p, {{1, 1}, {0, 1}}), Matrix::from_rows(p, {{z, 0}, {0, 1}}),
          Matrix::from_rows(p, {{0, 1}, {1, 0}})};
}

mx::ModuleRep natural(int p) { return {p, 2, gl2_generators(p), "GL2"}; }

// Permutation module on the projective line P^1(F_p).
mx::ModuleRep projective_line(int p) {
  std::vector<std::pair<int, int>> pts;
  for (int a = 0; a < p; ++a) pts.push_back({a, 1});
  pts.push_back({1, 0});
  auto normalize = [&](int x, int y) -> std::pair<int, int> {
    if (y) {
      int iy = ff::inv_mod(y, p);
      return {x * iy % p, 1};
    }
    return {1, 0};
  };
  mx::ModuleRep m{p, static_cast<int>(pts.size()), {}, "GL2"};
  for (auto& g : gl2_generators(p)) {
    Matrix perm(p, m.dim, m.dim);
    for (int i = 0; i < m.dim; ++i) {
      auto [x, y] = pts[i];
      auto img = normalize((g.at(0, 0) * x + g.at(0, 1) * y) % p, (g.at(1, 0) * x + g.at(1, 1) * y) % p);
      int j = static_cast<int>(std::find(pts.begin(), pts.end(), img) - pts.begin());
      perm.set(j, i, 1);
    }
    m.generators.push_back(perm);
  }
  return m;
}

Matrix random_invertible(std::mt19937_64& rng, int p, int n) {
  while (true) {
    Matrix m(p, n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.set(i, j, static_cast<long long>(rng() % p));
    if (ff::try_invert(m)) return m;
  }
}

mx::ModuleRep conjugate(const mx::ModuleRep& m, const Matrix& x) {
  mx::ModuleRep c = m;
  Matrix xi = ff::invert(x);
  for (auto& g : c.generators) g = x * g * xi;
  return c;
}

}  // namespace

TEST_CASE("one-dimensional modules are irreducible") {
  mx::ModuleRep m{5, 1, {Matrix::from_rows(5, {{2}})}, "C4"};
  CHECK(mx::is_irreducible(m, 1).irreducible);
  CHECK(mx::is_irreducible_exhaustive(mx::ModuleRep{3, 1, {Matrix::from_rows(3, {{2}})}, "C2"}).irreducible);
}

TEST_CASE("natural module of GL(2,2) is irreducible") {
  auto m = natural(2);
  auto v = mx::is_irreducible(m, 7);
  CHECK(v.irreducible);
  CHECK(mx::is_irreducible_exhaustive(m).irreducible);
  if (!v.certificate.exhaustive) {
    Matrix n = mx::eval_poly(v.certificate.factor, v.certificate.algebra_element);
    CHECK((n * v.certificate.kernel_vector).is_zero());
    CHECK(mx::spin(m.generators, v.certificate.kernel_vector).cols() == 2);
  }
  CHECK(mx::is_absolutely_irreducible(m));
}

TEST_CASE("permutation module on the projective line over F_3") {
  auto m = projective_line(3);
  auto v = mx::is_irreducible(m, 3);
  REQUIRE_FALSE(v.irreducible);
  Matrix ones = Matrix::column_vector(3, {1, 1, 1, 1});
  CHECK(mx::spin(m.generators, ones).cols() == 1);
  auto cs = mx::chop(m, 11);
  REQUIRE(cs.factors.size() == 2);
  CHECK(cs.total_dim() == 4);
  CHECK(cs.factors[0].first.dim == 1);
  CHECK(cs.factors[0].second == 1);
  CHECK(cs.factors[1].first.dim == 3);
  CHECK(cs.factors[1].second == 1);
  for (auto& g : cs.factors[0].first.generators) CHECK(g.is_identity());
}

TEST_CASE("permutation module on the projective line over F_2") {
  auto cs = mx::chop(projective_line(2), 5);
  REQUIRE(cs.factors.size() == 2);
  CHECK(cs.factors[0].first.dim == 1);
  CHECK(cs.factors[1].first.dim == 2);
  CHECK(mx::is_isomorphic(cs.factors[1].first, natural(2)).has_value());
}

TEST_CASE("verdicts agree with the exhaustive oracle") {
  std::mt19937_64 rng(99);
  std::vector<mx::ModuleRep> samples = {natural(2), natural(3), projective_line(2), projective_line(3),
                                        mx::direct_sum(natural(3), natural(3)), mx::dual(natural(3)),
                                        mx::tensor(natural(2), natural(2))};
  for (auto& m : samples) {
    bool oracle = mx::is_irreducible_exhaustive(m).irreducible;
    for (uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      auto v = mx::is_irreducible(m, seed);
      CHECK(v.irreducible == oracle);
      if (!v.irreducible) {
        CHECK(v.subspace.cols() > 0);
        CHECK(v.subspace.cols() < m.dim);
        CHECK(mx::spin(m.generators, v.subspace).cols() == v.subspace.cols());
      }
    }
    auto conj = conjugate(m, random_invertible(rng, m.p, m.dim));
    CHECK(mx::is_isomorphic(m, conj).has_value());
  }
}

TEST_CASE("composition factors are independent of the seed") {
  auto m = mx::tensor(natural(3), natural(3));
  auto a = mx::chop(m, 1), b = mx::chop(m, 12345);
  REQUIRE(a.factors.size() == b.factors.size());
  for (size_t i = 0; i < a.factors.size(); ++i) {
    CHECK(a.factors[i].second == b.factors[i].second);
    CHECK(mx::is_isomorphic(a.factors[i].first, b.factors[i].first).has_value());
  }
  CHECK(a.total_dim() == 4);
}

TEST_CASE("isomorphism examples") {
  auto m = natural(3);
  Matrix x = Matrix::from_rows(3, {{1, 2}, {0, 1}});
  auto iso = mx::is_isomorphic(m, conjugate(m, x));
  REQUIRE(iso);
  for (size_t i = 0; i < m.generators.size(); ++i)
    CHECK(*iso * m.generators[i] == conjugate(m, x).generators[i] * *iso);
  mx::ModuleRep triv{3, 1, {Matrix::identity(3, 1), Matrix::identity(3, 1), Matrix::identity(3, 1)}, "GL2"};
  mx::ModuleRep sign{3, 1, {Matrix::identity(3, 1), Matrix::from_rows(3, {{2}}), Matrix::from_rows(3, {{2}})}, "GL2"};
  CHECK_FALSE(mx::is_isomorphic(triv, sign).has_value());
  CHECK(mx::endomorphism_dimension(mx::direct_sum(triv, triv)) == 4);
}

TEST_CASE("characteristic polynomial and factors") {
  Matrix a = Matrix::from_rows(5, {{0, 1}, {1, 0}});
  auto chi = mx::charpoly(a);
  CHECK(chi == mx::Poly{4, 0, 1});
  CHECK(mx::eval_poly(chi, a).is_zero());
  auto f = mx::irreducible_factors_small({1, 1, 1}, 2, 2);
  REQUIRE(f.size() == 1);
  CHECK(f[0] == mx::Poly{1, 1, 1});
  std::mt19937_64 rng(3);
  for (int p : {2, 3, 7, 13})
    for (int t = 0; t < 20; ++t) {
      int n = 1 + static_cast<int>(rng() % 6);
      Matrix m(p, n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.set(i, j, static_cast<long long>(rng() % p));
      CHECK(mx::eval_poly(mx::charpoly(m), m).is_zero());
    }
}

TEST_CASE("invalid input") {
  mx::ModuleRep bad{3, 2, {Matrix::from_rows(3, {{1, 1}, {1, 1}})}, "x"};
  CHECK_THROWS_AS(mx::validate(bad), ff::FieldError);
  CHECK_THROWS_AS(mx::is_irreducible_exhaustive(mx::ModuleRep{5, 2, gl2_generators(5), "GL2"}), ff::FieldError);
}
