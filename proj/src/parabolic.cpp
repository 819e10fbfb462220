#include "modrep/parabolic.hpp"

#include <algorithm>
#include <unordered_map>

namespace modrep::hecke {

using local::Laurent;
using local::PrecisionError;
using local::with_precision_retry;

namespace {

std::vector<std::pair<int, int>> block_ranges(int n, RootSet J) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i) {
    if (i == 0 || finred::block_of(J, i) != finred::block_of(J, i - 1)) out.emplace_back(i, 0);
    ++out.back().second;
  }
  return out;
}

LMatrix sub(const LMatrix& x, int r0, int c0, int nr, int nc) {
  LMatrix b(x.p(), nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) b.at(i, j) = x.at(r0 + i, c0 + j);
  return b;
}

// x[:, c0 .. c0+nc) -= x[:, r0 .. r0+nr) * C
void subtract_columns(LMatrix& x, int c0, int nc, int r0, int nr, const LMatrix& C) {
  for (int row = 0; row < x.rows(); ++row)
    for (int j = 0; j < nc; ++j) {
      Laurent acc(x.p());
      for (int k = 0; k < nr; ++k)
        if (!x.at(row, r0 + k).is_zero() || !x.at(row, r0 + k).exact()) acc = acc + x.at(row, r0 + k) * C.at(k, j);
      if (!acc.is_zero() || !acc.exact()) x.at(row, c0 + j) = x.at(row, c0 + j) - acc;
    }
}

void append(ParabolicFunction& F, const LMatrix& g, const Induced& y) {
  if (y.is_zero()) return;
  for (auto& [h, z] : F.terms)
    if (h == g) {
      z = z + y;
      return;
    }
  F.terms.emplace_back(g, y);
}

int payload_depth(const Induced& y) {
  int d = 0;
  for (const auto& [c, w] : y.terms) d = std::max(d, local::conjugation_depth(c.rep));
  return d;
}

std::optional<LMatrix> levi_component_once(const LMatrix& x, RootSet J) {
  const int n = x.rows();
  auto ranges = block_ranges(n, J);
  // x lies in P(F) Nbar(F) iff every trailing block minor is nonzero.
  for (size_t bi = 1; bi < ranges.size(); ++bi) {
    const int r0 = ranges[bi].first;
    Laurent minor = sub(x, r0, r0, n - r0, n - r0).det();
    if (minor.is_zero()) {
      if (minor.exact()) return std::nullopt;
      throw PrecisionError("big-cell membership undecidable at available precision");
    }
  }
  LMatrix X = x, E = LMatrix::identity(x.p(), n);
  for (int bi = static_cast<int>(ranges.size()) - 1; bi >= 1; --bi) {
    auto [r0, nr] = ranges[bi];
    LMatrix D = sub(X, r0, r0, nr, nr);
    Laurent det = D.det();
    if (det.is_zero()) throw PrecisionError("pivot block undetermined at available precision");
    LMatrix Dinv = D.inverse();
    for (int bj = 0; bj < bi; ++bj) {
      auto [c0, nc] = ranges[bj];
      LMatrix C = Dinv * sub(X, r0, c0, nr, nc);
      subtract_columns(X, c0, nc, r0, nr, C);
      subtract_columns(E, c0, nc, r0, nr, C);
    }
  }
  LMatrix nbar = E.inverse();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      if (finred::block_of(J, r) <= finred::block_of(J, c)) continue;
      const Laurent& e = nbar.at(r, c);
      if (e.is_zero()) {
        if (e.prec() < 1) throw PrecisionError("Nbar_{0+} membership undecidable at available precision");
      } else if (e.lo() < 1) {
        return std::nullopt;
      }
    }
  LMatrix m(x.p(), n, n);
  for (auto [r0, nr] : ranges)
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nr; ++j) m.at(r0 + i, r0 + j) = X.at(r0 + i, r0 + j);
  return m;
}

}  // namespace

ParabolicFunction ParabolicFunction::operator+(const ParabolicFunction& o) const {
  ParabolicFunction r = *this;
  for (const auto& [g, y] : o.terms) append(r, g, y);
  return r;
}

ParabolicFunction ParabolicFunction::operator-(const ParabolicFunction& o) const { return *this + o.scaled(-1); }

ParabolicFunction ParabolicFunction::scaled(long long c) const {
  ParabolicFunction r{levi, {}};
  for (const auto& [g, y] : terms) append(r, g, y.scaled(c));
  return r;
}

int ParabolicFunction::depth() const {
  int d = 1;
  for (const auto& [g, y] : terms) d = std::max(d, 1 + payload_depth(y) + local::conjugation_depth(g));
  return d;
}

ParabolicFunction zero_function(const LevelPtr& levi) { return {levi, {}}; }

ParabolicFunction basic_function(const Induced& y) {
  ParabolicFunction F{y.level, {}};
  append(F, LMatrix::identity(y.level->p(), y.level->n()), y);
  return F;
}

ParabolicFunction translate(const LMatrix& g, const ParabolicFunction& F) {
  ParabolicFunction r{F.levi, {}};
  for (const auto& [h, y] : F.terms) append(r, g * h, y);
  return r;
}

ParabolicFunction zeta(const SatakeContext& ctx, const Induced& f) {
  if (f.level.get() != ctx.P.get()) throw std::logic_error("zeta expects a parahoric-level vector");
  ParabolicFunction F{ctx.M, {}};
  for (const auto& [c, w] : f.terms) {
    LMatrix g = with_precision_retry([&] { return c.rep.inverse(); });
    if (!g.exact()) throw std::logic_error("coset representative with inexact inverse");
    append(F, g, unit_vector(ctx.M, w));
  }
  return F;
}

ParabolicFunction apply_levi(const HeckeOp& op, const ParabolicFunction& F) {
  ParabolicFunction r{op.tgt(), {}};
  for (const auto& [g, y] : F.terms) append(r, g, apply(op, y));
  return r;
}

std::optional<LMatrix> levi_component(const LMatrix& x, RootSet J) {
  return with_precision_retry([&] { return levi_component_once(x, J); });
}

Induced eval(const ParabolicFunction& F, const LMatrix& z) {
  Induced out = zero_vector(F.levi);
  const RootSet J = F.levi->J();
  for (const auto& [g, y] : F.terms) {
    auto m = levi_component(z * g, J);
    if (m) out = out + translate(*m, y);
  }
  return out;
}

ParabolicComparison equal_parabolic(const ParabolicFunction& a, const ParabolicFunction& b) {
  ParabolicComparison r;
  ParabolicFunction diff = a - b;
  r.depth = std::max(a.depth(), b.depth());
  if (diff.terms.empty()) return r;
  const Level& levi = *diff.levi;
  auto grid = local::pzero_grid(levi.group(), levi.J(), r.depth);
  r.grid = grid.size();
  for (const LMatrix& z : grid) {
    Induced v = eval(diff, z);
    if (!v.is_zero()) {
      r.equal = false;
      r.witness = "z=" + z.to_string() + " value=" + v.to_string();
      return r;
    }
  }
  return r;
}

}  // namespace modrep::hecke
