#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "modrep/localfield.hpp"

#include <random>
#include <set>

using namespace modrep::local;
using modrep::ff::Matrix;

namespace {

Laurent poly(int p, int lo, std::vector<int> c) { return Laurent::from_coeffs(p, lo, c); }

Laurent random_poly(std::mt19937_64& rng, int p, int lo, int hi) {
  std::vector<int> c;
  for (int e = lo; e < hi; ++e) c.push_back(static_cast<int>(rng() % p));
  return Laurent::from_coeffs(p, lo, c);
}

LMatrix elementary(int p, int n, int r, int c, const Laurent& x) {
  LMatrix m = LMatrix::identity(p, n);
  m.at(r, c) = x;
  return m;
}

// Random element of K as a product of integral elementary matrices, units and swaps.
LMatrix random_k(std::mt19937_64& rng, int p, int n) {
  LMatrix k = LMatrix::identity(p, n);
  for (int step = 0; step < 3 * n; ++step) {
    int r = static_cast<int>(rng() % n), c = static_cast<int>(rng() % n);
    if (r != c) k = elementary(p, n, r, c, random_poly(rng, p, 0, 3)) * k;
    if (rng() % 3 == 0) {
      LMatrix d = LMatrix::identity(p, n);
      d.at(r, r) = Laurent::constant(p, 1 + static_cast<int>(rng() % (p - 1))) + random_poly(rng, p, 1, 3);
      k = d * k;
    }
    if (rng() % 4 == 0 && r != c) {
      LMatrix w = LMatrix::identity(p, n);
      w.at(r, r) = Laurent(p);
      w.at(c, c) = Laurent(p);
      w.at(r, c) = Laurent::constant(p, 1);
      w.at(c, r) = Laurent::constant(p, 1);
      k = w * k;
    }
  }
  return k;
}

// Random element of G(F) with Laurent polynomial entries.
LMatrix random_g(std::mt19937_64& rng, int p, int n) {
  std::vector<int> e(n);
  for (auto& x : e) x = static_cast<int>(rng() % 5) - 2;
  LMatrix g = LMatrix::diag_power(p, e);
  for (int step = 0; step < 2 * n; ++step) {
    int r = static_cast<int>(rng() % n), c = static_cast<int>(rng() % n);
    if (r != c) g = g * elementary(p, n, r, c, random_poly(rng, p, -2, 2));
  }
  return g * random_k(rng, p, n);
}

LMatrix antidiag(int p, const Laurent& a, const Laurent& b) {
  LMatrix m(p, 2, 2);
  m.at(0, 1) = a;
  m.at(1, 0) = b;
  return m;
}

// Membership in s^{-1} Nbar_{plus?} s for a lower block-unipotent matrix.
bool in_conjugated(const LMatrix& h, const std::vector<int>& s, RootSet J, bool plus) {
  const int n = h.rows();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      int br = modrep::finred::block_of(J, r), bc = modrep::finred::block_of(J, c);
      if (br > bc && h.at(r, c).valuation() < (plus ? 1 : 0) + s[c] - s[r]) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("laurent arithmetic") {
  const int p = 3;
  Laurent a = poly(p, 0, {1, 1}), b = poly(p, 0, {1, -1});
  CHECK(a * b == poly(p, 0, {1, 0, -1}));
  CHECK((a * b).exact());
  CHECK(invert_unit(poly(p, 0, {1, -1}), 4) == Laurent::from_coeffs(p, 0, {1, 1, 1, 1}, 4));
  CHECK(poly(p, -2, {1, 0, 1}).valuation() == -2);
  CHECK((a - a).is_zero());
  CHECK(Laurent::monomial(p, 2, -1).to_string() == "2t^-1");
  Laurent x = Laurent::from_coeffs(p, 0, {1, 2}, 5);
  CHECK(x.prec() == 5);
  CHECK((x * Laurent::monomial(p, 1, 2)).prec() == 7);
  CHECK((x + poly(p, 0, {1})).prec() == 5);
  CHECK_THROWS_AS(invert_unit(x, 8), PrecisionError);
  CHECK_THROWS_AS(invert_unit(Laurent::monomial(p, 1, 1), 3), PrecisionError);
  CHECK_THROWS_AS(x.below(6), PrecisionError);
  CHECK(inverse(Laurent::monomial(p, 2, 3)) == Laurent::monomial(p, 2, -3));
  {
    PrecisionScope scope(6);
    Laurent inv = inverse(poly(p, 1, {1, 1}));
    CHECK(inv.prec() == 5);
    CHECK((inv * poly(p, 1, {1, 1})).below(5) == Laurent::constant(p, 1));
  }
}

TEST_CASE("smith invariants") {
  const int p = 2;
  CHECK(smith_invariants(LMatrix::identity(p, 3)) == std::vector<int>{0, 0, 0});
  CHECK(smith_invariants(LMatrix::diag_power(p, {1, 0})) == std::vector<int>{1, 0});
  LMatrix u = LMatrix::identity(p, 2);
  u.at(0, 1) = Laurent::monomial(p, 1, -1);
  CHECK(smith_invariants(u) == std::vector<int>{1, -1});
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + trial % 2;
    LMatrix g = random_g(rng, p, n);
    auto inv = smith_invariants(g);
    int sum = 0;
    for (int x : inv) sum += x;
    CHECK(sum == g.det_val());
    CHECK(smith_invariants(random_k(rng, p, n) * g * random_k(rng, p, n)) == inv);
  }
}

TEST_CASE("canonical coset examples") {
  for (int p : {2, 3}) {
    auto key = canonical_coset(LMatrix::identity(p, 2));
    CHECK(key.key.rep.is_identity());
    std::mt19937_64 rng(p);
    CHECK(canonical_coset(random_k(rng, p, 3)).key.rep.is_identity());
    auto sw = canonical_coset(antidiag(p, Laurent::constant(p, 1), Laurent::monomial(p, 1, 1)));
    CHECK(sw.key.rep == LMatrix::diag_power(p, {1, 0}));
    CHECK(sw.k_mod_t == Matrix::from_rows(p, {{0, 1}, {1, 0}}));
  }
}

TEST_CASE("canonical coset invariance") {
  for (int p : {2, 3}) {
    for (int n : {2, 3}) {
      std::mt19937_64 rng(100 * p + n);
      for (int trial = 0; trial < 200; ++trial) {
        LMatrix g = random_g(rng, p, n), k = random_k(rng, p, n);
        auto a = canonical_coset(g), b = canonical_coset(k * g);
        REQUIRE(a.key == b.key);
        CHECK(a.key.rep.exact());
        auto kbar = with_precision_retry([&] { return reduce_mod_t(a.key.rep * g.inverse()); });
        CHECK(kbar == a.k_mod_t);
        CHECK(canonical_coset(a.key.rep).key == a.key);
      }
    }
  }
}

TEST_CASE("iwasawa") {
  const int p = 2;
  std::mt19937_64 rng(9);
  LMatrix k = random_k(rng, p, 2);
  auto triv = iwasawa(k, 0);
  CHECK(triv.n.is_identity());
  CHECK(triv.m.is_identity());
  CHECK(triv.k == k);
  LMatrix w = antidiag(p, Laurent::constant(p, 1), Laurent::constant(p, 1));
  CHECK(iwasawa(w, 0).k == w);
  auto x = iwasawa(antidiag(p, Laurent::monomial(p, 1, -1), Laurent::constant(p, 1)), 0);
  CHECK(x.m == LMatrix::diag_power(p, {-1, 0}));
  CHECK(x.k == w);
  CHECK(x.n.is_identity());
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + trial % 2;
    RootSet J = n == 3 ? static_cast<RootSet>(trial % 4) : 0;
    LMatrix g = random_g(rng, 3, n);
    auto d = iwasawa(g, J);
    CHECK(d.n * d.m * d.k == g);
    CHECK(in_K(d.k));
    CHECK(in_levi(d.m, J));
    CHECK(in_parabolic(d.n, J));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (modrep::finred::block_of(J, i) == modrep::finred::block_of(J, j))
          CHECK(d.n.at(i, j) == Laurent::constant(3, i == j ? 1 : 0));
  }
}

TEST_CASE("reduction mod t") {
  const int p = 3;
  CHECK(reduce_mod_t(LMatrix::identity(p, 2)).is_identity());
  LMatrix a = LMatrix::from_polys(p, 0, {{{1, 1}, {1}}, {{0, 1}, {1}}});
  CHECK(reduce_mod_t(a) == Matrix::from_rows(p, {{1, 1}, {0, 1}}));
  LMatrix plus = LMatrix::from_polys(p, 0, {{{1, 2}, {0, 1}}, {{0, 0, 1}, {1, 1}}});
  CHECK(reduce_mod_t(plus).is_identity());
  CHECK(in_K_plus(plus));
  CHECK_THROWS_AS(reduce_mod_t(LMatrix::diag_power(p, {1, 0})), std::invalid_argument);
}

TEST_CASE("membership") {
  const int p = 2;
  std::vector<int> s{1, 0};
  LMatrix sm = LMatrix::diag_power(p, s);
  LMatrix w = antidiag(p, Laurent::constant(p, 1), Laurent::constant(p, 1));
  CHECK(in_PsP(sm, s, 0));
  CHECK(in_KsP(sm, s, 0));
  CHECK(in_KsK(w * sm, s));
  CHECK_FALSE(in_PsP(w * sm, s, 0));
  CHECK(in_M0s(sm, s, 0));
  CHECK_FALSE(in_M0s(w * sm, s, 0));
  CHECK(in_K(w));
  CHECK_FALSE(in_parahoric(w, 0));
  CHECK(in_parahoric(w, 1u));
  CHECK_THROWS_AS(in_PsP(sm, {0, 0}, 0), std::invalid_argument);
  // P s P = P s Nbar_{0+}: all of these lie in it
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    LMatrix up = LMatrix::identity(p, 2);
    up.at(0, 1) = random_poly(rng, p, 0, 3);
    up.at(0, 0) = Laurent::constant(p, 1) + random_poly(rng, p, 1, 3);
    LMatrix lo = LMatrix::identity(p, 2);
    lo.at(1, 0) = random_poly(rng, p, 1, 4);
    CHECK(in_PsP(up * sm * lo, s, 0));
    CHECK(in_KsP(w * up * sm * lo, s, 0));
  }
}

TEST_CASE("positivity") {
  const int p = 2;
  auto a = positivity(LMatrix::diag_power(p, {1, 0}), 0);
  CHECK(a.kind == Positivity::Strict);
  CHECK(a.central);
  auto b = positivity(LMatrix::diag_power(p, {1, 1, 0}), 1u);
  CHECK(b.kind == Positivity::Strict);
  CHECK(b.central);
  auto c = positivity(LMatrix::identity(p, 2), 0);
  CHECK(c.kind == Positivity::Positive);
  CHECK(positivity(std::vector<int>{0, 1}, 0).kind == Positivity::Neither);
  CHECK_FALSE(positivity(std::vector<int>{2, 1, 0}, 1u).central);
  CHECK(default_s(3, 1u) == std::vector<int>{1, 1, 0});
  CHECK(default_s(3, 0u, 2) == std::vector<int>{4, 2, 0});
}

TEST_CASE("quotient enumerations") {
  for (int p : {2, 3}) {
    std::vector<int> s{1, 0};
    auto a = enum_quotient(p, NbarQuotient::SubPlusInPlus, s, 0);
    CHECK(static_cast<int>(a.size()) == p);
    for (const auto& m : a) CHECK(m.at(1, 0).valuation() >= 1);
    CHECK(enum_quotient(p, NbarQuotient::SubZeroInPlus, s, 0).size() == 1);
    auto g = modrep::finred::build_gl(2, p);
    CHECK(static_cast<int>(parahoric_cosets(*g, 0).size()) == p + 1);
    CHECK(parahoric_cosets(*g, 1u).size() == 1);
  }
  auto g3 = modrep::finred::build_gl(3, 2);
  CHECK(parahoric_cosets(*g3, 0).size() == 21);
  CHECK(parahoric_cosets(*g3, 1u).size() == 7);
  CHECK(pzero_grid(*g3, 0, 2).size() == 21 * 8);
  CHECK(enum_N_principal(2, 3, 0, 2).size() == 64);
  const std::vector<std::vector<int>> orders = {{0, 1, 3}, {0, 0, -1}, {0, 0, 0}};
  auto bounded = enum_N_principal(3, 3, 0, orders, modrep::finred::full_roots(3));
  CHECK(bounded.size() == 81);
  for (const auto& u : bounded) {
    CHECK(u.at(1, 2).is_zero());
    CHECK(u.at(0, 1).valuation() >= -1);
  }
  CHECK(enum_N_principal(3, 3, 1u, orders, modrep::finred::full_roots(3)).size() == 27);
  // index formulas, pairwise distinctness and completeness in GL(3)
  std::mt19937_64 rng(17);
  for (RootSet J : {0u, 1u, 2u})
    for (int scale : {1, 2})
      for (auto kind : {NbarQuotient::SubPlusInPlus, NbarQuotient::SubZeroInPlus, NbarQuotient::SubZeroInZero,
                        NbarQuotient::SubPlusInZero}) {
        const int p = 2;
        auto s = default_s(3, J, scale);
        bool sub_plus = kind == NbarQuotient::SubPlusInPlus || kind == NbarQuotient::SubPlusInZero;
        bool group_plus = kind == NbarQuotient::SubPlusInPlus || kind == NbarQuotient::SubZeroInPlus;
        auto reps = enum_quotient(p, kind, s, J);
        CHECK(static_cast<long long>(reps.size()) == quotient_index(p, kind, s, J));
        long long expect = 1;
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < r; ++c)
            if (modrep::finred::block_of(J, r) > modrep::finred::block_of(J, c))
              for (int e = group_plus ? 1 : 0; e < (sub_plus ? 1 : 0) + s[c] - s[r]; ++e) expect *= p;
        CHECK(static_cast<long long>(reps.size()) == expect);
        for (size_t i = 0; i < reps.size() && reps.size() <= 256; ++i)
          for (size_t j = i + 1; j < reps.size(); ++j)
            CHECK_FALSE(in_conjugated(reps[i] * reps[j].inverse(), s, J, sub_plus));
        for (int trial = 0; trial < 10; ++trial) {
          LMatrix x = LMatrix::identity(p, 3);
          for (int r = 0; r < 3; ++r)
            for (int c = 0; c < r; ++c)
              if (modrep::finred::block_of(J, r) > modrep::finred::block_of(J, c))
                x.at(r, c) = random_poly(rng, p, group_plus ? 1 : 0, 6);
          int hits = 0;
          for (const auto& y : reps) hits += in_conjugated(x * y.inverse(), s, J, sub_plus);
          CHECK(hits == 1);
        }
      }
}

TEST_CASE("double coset K s^n K in GL(2)") {
  for (int p : {2, 3}) {
    for (int n = 1; n <= 3; ++n) {
      std::vector<int> s{n, 0};
      long long listed = 0, pr = 1;
      for (int r = 0; r <= n; ++r, pr *= p) listed += pr;
      long long inside = 1;
      for (int i = 0; i < n - 1; ++i) inside *= p;
      inside *= p + 1;  // p^n + p^{n-1}
      std::set<std::string> keys, inside_keys;
      for (int u = 0; u <= n; ++u) {
        int r = n - u;
        for (int a = 0; a < static_cast<int>(std::pow(p, r) + 0.5); ++a) {
          LMatrix m = LMatrix::diag_power(p, {u, r});
          std::vector<int> digits;
          for (int x = a, e = 0; e < r; ++e, x /= p) digits.push_back(x % p);
          m.at(0, 1) = Laurent::from_coeffs(p, 0, digits);
          CHECK(canonical_coset(m).key.rep == m);
          CHECK(m.det_val() == n);
          bool primitive = u == 0 || r == 0 || m.at(0, 1).valuation() == 0;
          CHECK(in_KsK(m, s) == primitive);
          keys.insert(canonical_coset(m).key.code);
          if (primitive) inside_keys.insert(canonical_coset(m).key.code);
        }
      }
      // the triangular list covers every integral coset of determinant valuation n
      CHECK(static_cast<long long>(keys.size()) == listed);
      CHECK(static_cast<long long>(inside_keys.size()) == inside);
      std::mt19937_64 rng(n);
      for (int trial = 0; trial < 30; ++trial) {
        LMatrix g = random_k(rng, p, 2) * LMatrix::diag_power(p, s) * random_k(rng, p, 2);
        CHECK(inside_keys.count(canonical_coset(g).key.code) == 1);
      }
    }
  }
}
