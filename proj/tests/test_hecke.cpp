#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "modrep/verify.hpp"

#include <random>

using namespace modrep;
using namespace modrep::hecke;
using modrep::ff::Matrix;

namespace {

const std::vector<finred::IrreducibleData>& table_of(int n, int p) {
  static std::map<std::pair<int, int>, std::vector<finred::IrreducibleData>> cache;
  auto it = cache.find({n, p});
  if (it == cache.end()) it = cache.emplace(std::make_pair(n, p), finred::classify_all(finred::build_gl(n, p), 7)).first;
  return it->second;
}

const finred::IrreducibleData& trivial_rep(int n, int p) {
  return table_of(n, p)[finred::find_by_parameters(table_of(n, p), std::vector<int>(n, 0), finred::full_roots(n))];
}

const finred::IrreducibleData& natural_rep(int p) {
  return table_of(2, p)[finred::find_by_parameters(table_of(2, p), {1 % (p - 1), 0}, 0)];
}

const finred::IrreducibleData& steinberg_gl3() {
  for (const auto& d : table_of(3, 2))
    if (d.rep.dim == 8) return d;
  throw std::logic_error("no Steinberg representation");
}

Matrix column(int p, int dim, int i) {
  Matrix w(p, dim, 1);
  w.set(i, 0, 1);
  return w;
}

LMatrix diag(int p, std::vector<int> e) { return LMatrix::diag_power(p, e); }

}  // namespace

TEST_CASE("T_G for trivial GL(2) has p+1 cosets at s") {
  for (int p : {2, 3, 5}) {
    auto ctx = make_context(trivial_rep(2, p), 0, {1, 0});
    HeckeOp tg = make_T_G(ctx);
    CHECK(tg.image.terms.size() == static_cast<size_t>(p + 1));
    for (const auto& [key, v] : tg.image.terms) CHECK(local::smith_invariants(key.rep) == std::vector<int>{1, 0});
  }
}

TEST_CASE("T_M sends [1,v] to s^-1 [1,v]") {
  auto ctx = make_context(natural_rep(3), 0, {1, 0});
  HeckeOp tm = make_T_M(ctx);
  Induced v = unit_vector(ctx.M, column(3, ctx.M->dim(), 0));
  CHECK(apply(tm, v) == translate(ctx.s_matrix().inverse(), v));
}

TEST_CASE("T_KP on [1,v]_P is a single term for GL(2)") {
  auto ctx = make_context(natural_rep(3), 0, {1, 0});
  HeckeOp tkp = make_T_KP(ctx);
  Matrix w = column(3, ctx.P->dim(), 0);
  Induced out = apply(tkp, unit_vector(ctx.P, w));
  CHECK(out.terms.size() == 1);
  CHECK(out == translate(ctx.s_matrix().inverse(), unit_vector(ctx.K, ctx.split.phi * w)));
}

TEST_CASE("unit laws") {
  auto ctx = make_context(natural_rep(3), 0, {1, 0});
  HeckeOp tg = make_T_G(ctx), unit = unit_operator(ctx.K);
  CHECK(compose(unit, tg) == tg);
  CHECK(compose(tg, unit) == tg);
  Induced f = translate(diag(3, {2, -1}), unit_vector(ctx.K, column(3, 2, 1)));
  CHECK(apply(unit, f) == f);
}

TEST_CASE("T_Z * T_Z has support s^2 and value id") {
  auto ctx = make_context(natural_rep(3), 0, {1, 0});
  HeckeOp tz = make_T_Z(ctx);
  HeckeOp sq = compose(tz, tz);
  CHECK(sq == make_operator(ctx.Z, ctx.Z, diag(3, {2, 0}), Matrix::identity(3, ctx.Z->dim())));
  CHECK(sq.image.terms.size() == 1);
}

TEST_CASE("inadmissible value raises a diagnostic") {
  auto ctx = make_context(natural_rep(3), 0, {1, 0});
  CHECK_THROWS_AS(make_operator(ctx.K, ctx.K, ctx.s_matrix(), Matrix::identity(3, 2)), Contradiction);
  CHECK(admissible_values(ctx.K, ctx.K, ctx.s_matrix()).size() == 1);
}

TEST_CASE("S' of the unit is the unit") {
  auto ctx = make_context(steinberg_gl3(), 1, {1, 1, 0});
  CHECK(satake_prime(unit_operator(ctx.K), ctx.M) == unit_operator(ctx.M));
  CHECK(satake_prime(unit_operator(ctx.M), ctx.Z) == unit_operator(ctx.Z));
}

TEST_CASE("S' of the characteristic function of KsK for trivial GL(2)") {
  for (int p : {2, 3}) {
    auto ctx = make_context(trivial_rep(2, p), 0, {1, 0});
    HeckeOp one_s = make_operator(ctx.K, ctx.K, ctx.s_matrix(), Matrix::identity(p, 1));
    CHECK(satake_prime(one_s, ctx.M) == make_T_M(ctx));
    // At s^2 the double coset of diag(t, t) contributes q - 1 = -1.
    HeckeOp one_s2 = make_operator(ctx.K, ctx.K, diag(p, {2, 0}), Matrix::identity(p, 1));
    HeckeOp expected = make_operator(ctx.M, ctx.M, diag(p, {2, 0}), Matrix::identity(p, 1)) -
                       make_operator(ctx.M, ctx.M, diag(p, {1, 1}), Matrix::identity(p, 1));
    CHECK(satake_prime(one_s2, ctx.M) == expected);
  }
}

TEST_CASE("S' is multiplicative on T_G powers") {
  auto ctx = make_context(steinberg_gl3(), 1, {1, 1, 0});
  HeckeOp tg = make_T_G(ctx);
  CHECK(satake_prime(compose(tg, tg), ctx.M) == compose(satake_prime(tg, ctx.M), satake_prime(tg, ctx.M)));
}

TEST_CASE("iota intertwines the two Satake maps") {
  auto ctx = make_context(natural_rep(3), 0, {1, 0});
  LevelPtr kd = make_level(LevelKind::Levi, 1, finred::contragredient(ctx.data.rep));
  for (const auto& b : operator_basis(kd, -1, 1))
    CHECK(iota_of_classical(b.op, ctx.M) == satake_prime(iota(b.op, ctx.K), ctx.M));
  CHECK(iota_of_classical(unit_operator(kd), ctx.M) == unit_operator(ctx.M));
}

TEST_CASE("xi on [1,e1] for the natural module of GL(2,2)") {
  auto ctx = make_context(natural_rep(2), 0, {1, 0});
  Induced out = apply(make_xi(ctx), unit_vector(ctx.K, column(2, 2, 0)));
  CHECK(!out.is_zero());
  CHECK(out.terms.size() <= 3);
}

TEST_CASE("I0 at the identity is reduction modulo N") {
  auto ctx = make_context(steinberg_gl3(), 2, {1, 0, 0});
  HeckeOp xi = make_xi(ctx);
  const LMatrix one = LMatrix::identity(2, 3);
  for (int i = 0; i < ctx.K->dim(); ++i) {
    Matrix w = column(2, ctx.K->dim(), i);
    CHECK(eval(zeta(ctx, apply(xi, unit_vector(ctx.K, w))), one) == unit_vector(ctx.M, ctx.M->projection() * w));
  }
}

TEST_CASE("zeta intertwines T_P and T_M") {
  auto ctx = make_context(steinberg_gl3(), 1, {1, 1, 0});
  HeckeOp tp = make_T_P(ctx), tm = make_T_M(ctx);
  for (int i = 0; i < ctx.P->dim(); ++i) {
    Induced v = unit_vector(ctx.P, column(2, ctx.P->dim(), i));
    CHECK(equal_parabolic(zeta(ctx, apply(tp, v)), apply_levi(tm, zeta(ctx, v))).equal);
  }
}

TEST_CASE("levi component and big cell") {
  const int p = 3;
  CHECK(levi_component(LMatrix::identity(p, 2), 0).value() == LMatrix::identity(p, 2));
  LMatrix w = LMatrix::lift(Matrix::from_rows(p, {{0, 1}, {1, 0}}));
  CHECK(!levi_component(w, 0).has_value());
  LMatrix x = diag(p, {2, -1});
  CHECK(levi_component(x, 0).value() == x);
}

TEST_CASE("equal_parabolic separates and identifies") {
  auto ctx = make_context(natural_rep(3), 0, {1, 0});
  Induced y = unit_vector(ctx.M, column(3, 1, 0));
  ParabolicFunction f = basic_function(y);
  CHECK(equal_parabolic(f, f).equal);
  CHECK(!equal_parabolic(f, f + translate(diag(3, {0, 1}), f)).equal);
  CHECK(equal_parabolic(f.scaled(2) - f, f).equal);
}

TEST_CASE("echelon relations reconstruct dependent inputs") {
  Echelon e(5);
  CHECK(e.insert({{0, 1}, {3, 2}}));
  CHECK(e.insert({{3, 1}, {7, 4}}));
  std::vector<int> rel;
  CHECK(!e.insert({{0, 2}, {3, 2}, {7, 2}}, &rel));
  CHECK(rel == std::vector<int>{2, 3});
  CHECK(!e.express({{7, 1}}).has_value());
  CHECK(e.rank() == 2);
}

TEST_CASE("double coset bookkeeping") {
  auto ctx = make_context(trivial_rep(2, 2), 0, {1, 0});
  const auto& dc = expand_double_coset(ctx.K, ctx.P, ctx.s_matrix());
  CHECK(dc.keys.size() == dc.left.size());
  CHECK(!dc.keys.empty());
  std::mt19937_64 rng(3);
  CHECK_NOTHROW(check_biequivariance(make_T_P(ctx), rng, 50));
}

TEST_CASE("verification suites on GL(2,3) natural module") {
  auto ctx = make_context(natural_rep(3), 0, {1, 0});
  CHECK(!verify::verify_prop_xi(ctx, 1).failed());
  CHECK(!verify::verify_main_stage(ctx, 1).failed());
  CHECK(!verify::verify_localization(ctx, 1).failed());
  CHECK(!verify::verify_duality(ctx, 1).failed());
}

TEST_CASE("GL(2) remark table") {
  CHECK(!verify::gl2_remark_table(3, 1).failed());
  // q - 1 cosets of diag(t, t) lie in K s^2 K.
  auto r = verify::gl2_remark_table(2, 2);
  CHECK(r.failed());
}

TEST_CASE("second choice of s") {
  CHECK(verify::shifted_s(2, 0) == std::vector<int>{2, 0});
  CHECK(verify::shifted_s(3, 0) == std::vector<int>{3, 2, 0});
  CHECK(verify::shifted_s(3, 1) == std::vector<int>{2, 2, 0});
  CHECK(verify::shifted_s(3, 2) == std::vector<int>{2, 0, 0});
}
