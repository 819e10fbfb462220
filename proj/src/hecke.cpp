#include "modrep/hecke.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "modrep/diagnostic.hpp"

namespace modrep::hecke {

using local::with_precision_retry;

std::string SatakeContext::label() const {
  std::ostringstream os;
  os << "GL(" << n() << "," << p() << ") V[" << data.label() << "] J=" << finred::roots_to_string(J) << " s=(";
  for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << ")";
  return os.str();
}

SatakeContext make_context(const finred::IrreducibleData& data, RootSet J, std::vector<int> s) {
  const int n = data.rep.group->n();
  if (static_cast<int>(s.size()) != n) throw std::invalid_argument("s has the wrong length");
  if (J == finred::full_roots(n)) throw std::invalid_argument("the parabolic must be proper");
  local::require_strict(s, J);
  SatakeContext ctx;
  ctx.data = data;
  ctx.J = J;
  ctx.s = std::move(s);
  ctx.K = make_level(LevelKind::Levi, finred::full_roots(n), data.rep);
  ctx.P = make_level(LevelKind::Parahoric, J, data.rep);
  ctx.Z = make_level(LevelKind::Levi, 0, data.rep);
  ctx.M = J == 0 ? ctx.Z : make_level(LevelKind::Levi, J, data.rep);
  ctx.split = finred::deck_split(data, J);
  if (!ctx.split.phi_ok) throw Contradiction("V^{Nbar} -> V_N is not an isomorphism");
  if (!(ctx.split.quotient.projection == ctx.P->projection()))
    throw std::logic_error("coinvariant projections disagree");
  ctx.coregular = finred::is_M_coregular(data, J);
  return ctx;
}

HeckeOp make_T_G(const SatakeContext& ctx) {
  return make_operator(ctx.K, ctx.K, ctx.s_matrix(), ctx.split.phi * ctx.split.quotient.projection);
}

HeckeOp make_T_P(const SatakeContext& ctx) {
  return make_operator(ctx.P, ctx.P, ctx.s_matrix(), Matrix::identity(ctx.p(), ctx.P->dim()));
}

HeckeOp make_T_KP(const SatakeContext& ctx) { return make_operator(ctx.P, ctx.K, ctx.s_matrix(), ctx.split.phi); }

HeckeOp make_T_M(const SatakeContext& ctx) {
  return make_operator(ctx.M, ctx.M, ctx.s_matrix(), Matrix::identity(ctx.p(), ctx.M->dim()));
}

HeckeOp make_T_Z(const SatakeContext& ctx) {
  return make_operator(ctx.Z, ctx.Z, ctx.s_matrix(), Matrix::identity(ctx.p(), ctx.Z->dim()));
}

HeckeOp make_xi(const SatakeContext& ctx) {
  return make_operator(ctx.K, ctx.P, LMatrix::identity(ctx.p(), ctx.n()), ctx.P->projection());
}

std::vector<std::vector<int>> dominant_exponents(int n, RootSet J, int lo, int hi) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n);
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    int top = hi;
    if (i > 0 && finred::block_of(J, i) == finred::block_of(J, i - 1)) top = cur[i - 1];
    for (int v = lo; v <= top; ++v) {
      cur[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

std::vector<BasisOp> operator_basis(const LevelPtr& level, int lo, int hi) {
  std::vector<BasisOp> out;
  for (const auto& mu : dominant_exponents(level->n(), level->J(), lo, hi)) {
    LMatrix d = LMatrix::diag_power(level->p(), mu);
    for (HeckeOp& op : double_coset_basis(level, level, d)) out.push_back({mu, std::move(op)});
  }
  return out;
}

std::vector<BasisOp> operator_basis(const LevelPtr& level, int depth) { return operator_basis(level, -depth, depth); }

std::pair<int, int> support_range(const HeckeOp& op) {
  int lo = INT32_MAX, hi = INT32_MIN;
  for (const auto& [k, v] : op.image.terms) {
    auto inv = local::smith_invariants(k.rep);
    lo = std::min(lo, inv.back());
    hi = std::max(hi, inv.front());
  }
  return {lo, hi};
}

namespace {

LMatrix block_of_matrix(const LMatrix& g, int r0, int size) {
  LMatrix b(g.p(), size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) b.at(i, j) = g.at(r0 + i, r0 + j);
  return b;
}

std::vector<std::pair<int, int>> block_ranges(int n, RootSet J) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i) {
    if (i == 0 || finred::block_of(J, i) != finred::block_of(J, i - 1)) out.emplace_back(i, 0);
    ++out.back().second;
  }
  return out;
}

std::vector<int> block_det_vals(const LMatrix& g, RootSet J) {
  std::vector<int> out;
  for (auto [r0, size] : block_ranges(g.rows(), J)) out.push_back(block_of_matrix(g, r0, size).det_val());
  return out;
}

// Depth of principal parts n with n x in the support when x ranges over {n m}.
int sum_depth(const LMatrix& m, int vmin) {
  int minval_inv = with_precision_retry([&] { return m.inverse().min_valuation(); });
  return std::max(0, -(vmin + minval_inv));
}

// Order bound at each N position for u with u m and (u m)^{-1} meeting the support valuations.
std::vector<std::vector<int>> principal_depths(const std::vector<int>& mu, RootSet J, int vmin, int vmax, int cap) {
  const int n = static_cast<int>(mu.size());
  std::vector<std::vector<int>> out(n, std::vector<int>(n, 0));
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c) {
      const int br = finred::block_of(J, r), bc = finred::block_of(J, c);
      bool direct = true;
      for (int k = r + 1; k < c; ++k) {
        const int bk = finred::block_of(J, k);
        if (br < bk && bk < bc) direct = false;
      }
      int d = std::min(cap, mu[c] - vmin);
      if (direct) d = std::min(d, vmax - mu[r]);
      out[r][c] = std::max(0, d);
    }
  return out;
}

struct PrincipalCache {
  std::map<std::vector<std::vector<int>>, std::vector<LMatrix>> by_depth;
  int p, n;
  RootSet J, ambient;
  const std::vector<LMatrix>& get(const std::vector<std::vector<int>>& depth) {
    auto it = by_depth.find(depth);
    if (it == by_depth.end())
      it = by_depth.emplace(depth, local::enum_N_principal(p, n, J, depth, ambient)).first;
    return it->second;
  }
};

}  // namespace

HeckeOp satake_prime(const HeckeOp& phi, const LevelPtr& target) {
  const Level& src = *phi.src;
  if (phi.tgt().get() != phi.src.get() || src.kind() != LevelKind::Levi || target->kind() != LevelKind::Levi)
    throw std::invalid_argument("S' needs an algebra element of a Levi level");
  const RootSet J1 = src.J(), J2 = target->J();
  if ((J2 & ~J1) != 0) throw std::invalid_argument("target Levi must lie inside the source Levi");
  const int n = src.n(), p = src.p();
  HeckeOp out = zero_operator(target, target);
  if (phi.is_zero()) return out;

  const Matrix B = target->projection() * src.section();
  const Matrix S = src.projection() * target->section();
  const Matrix kill = Matrix::identity(p, src.dim()) - S * B;
  auto [vmin, vmax] = support_range(phi);
  std::set<std::vector<int>> sums;
  for (const auto& [k, v] : phi.image.terms) sums.insert(block_det_vals(k.rep, J1));

  PrincipalCache ns{{}, p, n, J2, J1};
  for (const auto& mu : dominant_exponents(n, J2, vmin, vmax)) {
    LMatrix m = LMatrix::diag_power(p, mu);
    if (!sums.count(block_det_vals(m, J1))) continue;
    const auto depth = principal_depths(mu, J2, vmin, vmax, sum_depth(m, vmin));
    Matrix acc(p, target->dim(), target->dim());
    Matrix leak(p, target->dim(), src.dim());
    for (const LMatrix& u : ns.get(depth)) {
      Matrix x = phi.value_at(u * m);
      if (x.is_zero()) continue;
      acc += B * x * S;
      leak += B * x * kill;
    }
    if (!leak.is_zero()) throw Contradiction("S' value at " + m.to_string() + " depends on the lift");
    if (!acc.is_zero()) out = out + make_operator(target, target, m, acc);
  }
  return out;
}

Matrix satake_classical_at(const HeckeOp& phi_dual, const Level& levi, const LMatrix& m) {
  const Level& K = *phi_dual.src;
  if (!K.is_max() || phi_dual.tgt().get() != phi_dual.src.get())
    throw std::invalid_argument("classical Satake needs an algebra element at level K");
  const int p = K.p(), n = K.n();
  const Matrix F = levi.projection().transpose();
  Matrix sum(p, K.dim(), K.dim());
  if (!phi_dual.is_zero()) {
    auto [vmin, vmax] = support_range(phi_dual);
    (void)vmax;
    const int depth = sum_depth(m, vmin);
    for (const LMatrix& u : local::enum_N_principal(p, n, levi.J(), depth)) sum += phi_dual.value_at(m * u);
  }
  auto y = ff::solve(F, sum * F);
  if (!y) throw Contradiction("S(Phi)(m) does not preserve (V*)^{N(k)} at " + m.to_string());
  return *y;
}

std::map<std::vector<int>, Matrix> satake_classical(const HeckeOp& phi_dual, const Level& levi) {
  std::map<std::vector<int>, Matrix> out;
  if (phi_dual.is_zero()) return out;
  auto [vmin, vmax] = support_range(phi_dual);
  for (const auto& mu : dominant_exponents(levi.n(), levi.J(), vmin, vmax)) {
    Matrix y = satake_classical_at(phi_dual, levi, LMatrix::diag_power(levi.p(), mu));
    if (!y.is_zero()) out.emplace(mu, y);
  }
  return out;
}

HeckeOp iota(const HeckeOp& phi_dual, const LevelPtr& K) {
  HeckeOp out = zero_operator(K, K);
  std::set<std::vector<int>> lambdas;
  for (const auto& [k, v] : phi_dual.image.terms) lambdas.insert(local::smith_invariants(k.rep));
  for (const auto& lambda : lambdas) {
    std::vector<int> neg(lambda.size());
    for (size_t i = 0; i < lambda.size(); ++i) neg[i] = -lambda[i];
    Matrix value = phi_dual.value_at(LMatrix::diag_power(K->p(), lambda)).transpose();
    out = out + make_operator(K, K, LMatrix::diag_power(K->p(), neg), value);
  }
  return out;
}

HeckeOp iota_of_classical(const HeckeOp& phi_dual, const LevelPtr& levi) {
  HeckeOp out = zero_operator(levi, levi);
  if (phi_dual.is_zero()) return out;
  auto [vmin, vmax] = support_range(phi_dual);
  for (const auto& mu : dominant_exponents(levi->n(), levi->J(), -vmax, -vmin)) {
    std::vector<int> neg(mu.size());
    for (size_t i = 0; i < mu.size(); ++i) neg[i] = -mu[i];
    Matrix y = satake_classical_at(phi_dual, *levi, LMatrix::diag_power(levi->p(), neg));
    if (!y.is_zero()) out = out + make_operator(levi, levi, LMatrix::diag_power(levi->p(), mu), y.transpose());
  }
  return out;
}

}  // namespace modrep::hecke
