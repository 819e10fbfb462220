#include "modrep/localfield.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace modrep::local {

namespace {

Laurent zero(int p) { return Laurent(p); }
Laurent one(int p) { return Laurent::constant(p, 1); }

Laurent det_of(const LMatrix& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  const int p = a.p();
  const size_t k = rows.size();
  if (k == 0) return one(p);
  if (k == 1) return a.at(rows[0], cols[0]);
  if (k == 2)
    return a.at(rows[0], cols[0]) * a.at(rows[1], cols[1]) - a.at(rows[0], cols[1]) * a.at(rows[1], cols[0]);
  Laurent acc = zero(p);
  std::vector<int> rest(rows.begin() + 1, rows.end());
  for (size_t j = 0; j < k; ++j) {
    const Laurent& x = a.at(rows[0], cols[j]);
    if (x.is_zero() && x.exact()) continue;
    std::vector<int> sub;
    for (size_t c = 0; c < k; ++c)
      if (c != j) sub.push_back(cols[c]);
    Laurent term = x * det_of(a, rest, sub);
    acc = (j % 2) ? acc - term : acc + term;
  }
  return acc;
}

std::vector<int> iota(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

void swap_rows(LMatrix& a, int i, int j) {
  if (i == j) return;
  for (int c = 0; c < a.cols(); ++c) std::swap(a.at(i, c), a.at(j, c));
}

void swap_cols(LMatrix& a, int i, int j) {
  if (i == j) return;
  for (int r = 0; r < a.rows(); ++r) std::swap(a.at(r, i), a.at(r, j));
}

// Constant term of an integral element.
int residue(const Laurent& x) {
  if (x.valuation() < 0) throw std::logic_error("residue of a non-integral element");
  return x.coeff(0);
}

// Index of the entry of least valuation among the candidates; throws when undecidable.
int pick_pivot(const std::vector<const Laurent*>& entries) {
  int best = -1, best_val = kExact, unknown = kExact;
  for (size_t i = 0; i < entries.size(); ++i) {
    const Laurent& x = *entries[i];
    if (x.is_zero()) {
      if (!x.exact()) unknown = std::min(unknown, x.prec());
      continue;
    }
    if (x.valuation() < best_val) {
      best = static_cast<int>(i);
      best_val = x.valuation();
    }
  }
  if (best < 0) {
    if (unknown == kExact) throw std::invalid_argument("singular matrix");
    throw PrecisionError("pivot undecidable at available precision");
  }
  if (unknown <= best_val) throw PrecisionError("pivot undecidable at available precision");
  return best;
}

// All entries with block(r) > block(c) (lower) or block(r) < block(c) (upper).
std::vector<std::pair<int, int>> off_block_positions(int n, RootSet J, bool lower) {
  std::vector<std::pair<int, int>> out;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      int br = finred::block_of(J, r), bc = finred::block_of(J, c);
      if (lower ? br > bc : br < bc) out.emplace_back(r, c);
    }
  return out;
}

// Calls visit on every unipotent matrix 1 + sum x_rc E_rc with x_rc a polynomial
// supported in exponents [lo_rc, hi_rc).
void for_each_unipotent(int p, int n, const std::vector<std::pair<int, int>>& pos, const std::vector<int>& lo,
                        const std::vector<int>& hi, const std::function<void(const LMatrix&)>& visit) {
  std::vector<std::pair<int, int>> slots;  // (position index, exponent)
  for (size_t i = 0; i < pos.size(); ++i)
    for (int e = lo[i]; e < hi[i]; ++e) slots.emplace_back(static_cast<int>(i), e);
  std::vector<int> digit(slots.size(), 0);
  while (true) {
    LMatrix m = LMatrix::identity(p, n);
    for (size_t k = 0; k < slots.size(); ++k)
      if (digit[k]) {
        auto [r, c] = pos[slots[k].first];
        m.at(r, c) = m.at(r, c) + Laurent::monomial(p, digit[k], slots[k].second);
      }
    visit(m);
    size_t k = 0;
    while (k < digit.size() && ++digit[k] == p) digit[k++] = 0;
    if (k == digit.size()) break;
  }
}

}  // namespace

LMatrix::LMatrix(int p, int rows, int cols) : p_(p), rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols, Laurent(p)) {}

LMatrix LMatrix::identity(int p, int n) {
  LMatrix m(p, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = one(p);
  return m;
}

LMatrix LMatrix::diag_power(int p, const std::vector<int>& exps) {
  int n = static_cast<int>(exps.size());
  LMatrix m(p, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Laurent::monomial(p, 1, exps[i]);
  return m;
}

LMatrix LMatrix::lift(const ff::Matrix& a) {
  LMatrix m(a.p(), a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) m.at(r, c) = Laurent::constant(a.p(), a.at(r, c));
  return m;
}

LMatrix LMatrix::from_polys(int p, int lo, const std::vector<std::vector<std::vector<int>>>& rows) {
  int nr = static_cast<int>(rows.size()), nc = nr ? static_cast<int>(rows[0].size()) : 0;
  LMatrix m(p, nr, nc);
  for (int r = 0; r < nr; ++r) {
    if (static_cast<int>(rows[r].size()) != nc) throw std::invalid_argument("ragged rows");
    for (int c = 0; c < nc; ++c) m.at(r, c) = Laurent::from_coeffs(p, lo, rows[r][c]);
  }
  return m;
}

LMatrix LMatrix::operator*(const LMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("dimension mismatch");
  LMatrix r(p_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Laurent& x = at(i, k);
      if (x.is_zero() && x.exact()) continue;
      for (int j = 0; j < o.cols_; ++j) {
        const Laurent& y = o.at(k, j);
        if (y.is_zero() && y.exact()) continue;
        r.at(i, j) = r.at(i, j) + x * y;
      }
    }
  return r;
}

LMatrix LMatrix::operator+(const LMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("dimension mismatch");
  LMatrix r = *this;
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
  return r;
}

LMatrix LMatrix::operator-(const LMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("dimension mismatch");
  LMatrix r = *this;
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
  return r;
}

bool LMatrix::operator==(const LMatrix& o) const {
  return p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
}

LMatrix LMatrix::transpose() const {
  LMatrix r(p_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

bool LMatrix::exact() const {
  return std::all_of(e_.begin(), e_.end(), [](const Laurent& x) { return x.exact(); });
}

bool LMatrix::is_identity() const { return rows_ == cols_ && *this == identity(p_, rows_); }

int LMatrix::min_valuation() const {
  int v = kExact;
  for (const auto& x : e_) v = std::min(v, x.valuation());
  return v;
}

Laurent LMatrix::det() const {
  if (rows_ != cols_) throw std::invalid_argument("determinant of a non-square matrix");
  return det_of(*this, iota(rows_), iota(cols_));
}

int LMatrix::det_val() const {
  Laurent d = det();
  if (d.is_zero()) {
    if (d.exact()) throw std::invalid_argument("singular matrix");
    throw PrecisionError("determinant undecidable at available precision");
  }
  return d.valuation();
}

LMatrix LMatrix::inverse() const {
  Laurent d = det();
  if (d.is_zero()) {
    if (d.exact()) throw std::invalid_argument("singular matrix");
    throw PrecisionError("determinant undecidable at available precision");
  }
  Laurent dinv = local::inverse(d);
  const int n = rows_;
  LMatrix r(p_, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<int> rs, cs;
      for (int k = 0; k < n; ++k) {
        if (k != j) rs.push_back(k);
        if (k != i) cs.push_back(k);
      }
      Laurent c = det_of(*this, rs, cs) * dinv;
      r.at(i, j) = ((i + j) % 2) ? -c : c;
    }
  return r;
}

std::string LMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int r = 0; r < rows_; ++r) {
    os << (r ? ", [" : "[");
    for (int c = 0; c < cols_; ++c) os << (c ? ", " : "") << at(r, c).to_string();
    os << "]";
  }
  os << "]";
  return os.str();
}

void LMatrix::encode(std::string& out) const {
  out.push_back(static_cast<char>(rows_));
  out.push_back(static_cast<char>(cols_));
  for (const auto& x : e_) x.encode(out);
}

CosetKey make_key(const LMatrix& rep) {
  CosetKey k{rep, {}};
  rep.encode(k.code);
  return k;
}

Canonical canonical_coset_once(const LMatrix& g) {
  const int n = g.rows(), p = g.p();
  if (g.cols() != n) throw std::invalid_argument("canonical coset of a non-square matrix");
  LMatrix a = g;
  ff::Matrix kb = ff::Matrix::identity(p, n);
  // row dst -= m * row src, m integral
  auto row_axpy = [&](int dst, int src, const Laurent& m) {
    for (int c = 0; c < n; ++c) {
      const Laurent& y = a.at(src, c);
      if (y.is_zero() && y.exact()) continue;
      a.at(dst, c) = a.at(dst, c) - m * y;
    }
    int m0 = residue(m);
    if (m0)
      for (int c = 0; c < n; ++c) kb.add_to(dst, c, -m0 * kb.at(src, c));
  };
  std::vector<int> diag(n);
  for (int j = 0; j < n; ++j) {
    std::vector<const Laurent*> col;
    for (int i = j; i < n; ++i) col.push_back(&a.at(i, j));
    int piv = j + pick_pivot(col);
    swap_rows(a, j, piv);
    if (piv != j)
      for (int c = 0; c < n; ++c) {
        int x = kb.at(j, c);
        kb.set(j, c, kb.at(piv, c));
        kb.set(piv, c, x);
      }
    const int v = a.at(j, j).valuation();
    Laurent uinv = inverse(a.at(j, j).shifted(-v));
    for (int c = 0; c < n; ++c) a.at(j, c) = a.at(j, c) * uinv;
    int u0 = residue(uinv);
    for (int c = 0; c < n; ++c) kb.set(j, c, kb.at(j, c) * u0);
    a.at(j, j) = Laurent::monomial(p, 1, v);
    for (int i = j + 1; i < n; ++i) {
      const Laurent x = a.at(i, j);
      if (x.is_zero() && x.exact()) continue;
      if (!x.is_zero()) row_axpy(i, j, x.shifted(-v));
      a.at(i, j) = zero(p);
    }
    diag[j] = v;
  }
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      const Laurent x = a.at(i, j);
      Laurent rem = x.below(diag[j]);
      Laurent q = (x - rem).shifted(-diag[j]);
      if (!(q.is_zero() && q.exact())) row_axpy(i, j, q);
      a.at(i, j) = rem;
    }
  return {make_key(a), kb};
}

Canonical canonical_coset(const LMatrix& g) {
  return with_precision_retry([&] { return canonical_coset_once(g); });
}

std::vector<int> smith_invariants(const LMatrix& g) {
  const int n = g.rows();
  if (g.cols() != n) throw std::invalid_argument("Smith invariants of a non-square matrix");
  std::vector<int> divisors(n + 1, 0);
  for (int k = 1; k <= n; ++k) {
    int best = kExact, unknown = kExact;
    std::vector<int> rs, cs;
    std::function<void(int, std::vector<int>&, std::vector<std::vector<int>>&)> subsets =
        [&](int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
          if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
          }
          for (int i = start; i < n; ++i) {
            cur.push_back(i);
            subsets(i + 1, cur, out);
            cur.pop_back();
          }
        };
    std::vector<std::vector<int>> sets;
    std::vector<int> cur;
    subsets(0, cur, sets);
    for (const auto& r : sets)
      for (const auto& c : sets) {
        Laurent d = det_of(g, r, c);
        if (d.is_zero()) {
          if (!d.exact()) unknown = std::min(unknown, d.prec());
        } else {
          best = std::min(best, d.valuation());
        }
      }
    if (best == kExact) {
      if (unknown == kExact) throw std::invalid_argument("singular matrix");
      throw PrecisionError("minor valuations undecidable at available precision");
    }
    if (unknown <= best) throw PrecisionError("minor valuations undecidable at available precision");
    divisors[k] = best;
  }
  std::vector<int> inv(n);
  for (int k = 1; k <= n; ++k) inv[k - 1] = divisors[k] - divisors[k - 1];
  std::sort(inv.rbegin(), inv.rend());
  return inv;
}

namespace {

Iwasawa iwasawa_once(const LMatrix& g, RootSet J) {
  const int n = g.rows(), p = g.p();
  LMatrix b = g;
  // col dst -= m * col src
  auto col_axpy = [&](int dst, int src, const Laurent& m) {
    for (int r = 0; r < n; ++r) {
      const Laurent& y = b.at(r, src);
      if (y.is_zero() && y.exact()) continue;
      b.at(r, dst) = b.at(r, dst) - m * y;
    }
  };
  std::vector<int> diag(n);
  for (int i = n - 1; i >= 0; --i) {
    std::vector<const Laurent*> row;
    for (int c = 0; c <= i; ++c) row.push_back(&b.at(i, c));
    swap_cols(b, pick_pivot(row), i);
    const int v = b.at(i, i).valuation();
    Laurent uinv = inverse(b.at(i, i).shifted(-v));
    for (int r = 0; r < n; ++r) b.at(r, i) = b.at(r, i) * uinv;
    b.at(i, i) = Laurent::monomial(p, 1, v);
    for (int c = 0; c < i; ++c) {
      const Laurent x = b.at(i, c);
      if (x.is_zero() && x.exact()) continue;
      if (!x.is_zero()) col_axpy(c, i, x.shifted(-v));
      b.at(i, c) = zero(p);
    }
    diag[i] = v;
  }
  for (int r = n - 1; r >= 0; --r)
    for (int c = r + 1; c < n; ++c) {
      const Laurent x = b.at(r, c);
      Laurent rem = x.below(diag[r]);
      Laurent q = (x - rem).shifted(-diag[r]);
      if (!(q.is_zero() && q.exact())) col_axpy(c, r, q);
      b.at(r, c) = rem;
    }
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < r; ++c) b.at(r, c) = zero(p);
  LMatrix m(p, n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (finred::block_of(J, r) == finred::block_of(J, c)) m.at(r, c) = b.at(r, c);
  Iwasawa out{b * m.inverse(), m, b.inverse() * g};
  if (!in_K(out.k)) throw std::logic_error("compact part of the Iwasawa decomposition is not integral");
  return out;
}

}  // namespace

Iwasawa iwasawa(const LMatrix& g, RootSet J) {
  if (g.rows() != g.cols()) throw std::invalid_argument("Iwasawa decomposition of a non-square matrix");
  return with_precision_retry([&] { return iwasawa_once(g, J); });
}

ff::Matrix reduce_mod_t(const LMatrix& k) {
  if (!in_K(k)) throw std::invalid_argument("reduction of an element outside K");
  ff::Matrix m(k.p(), k.rows(), k.cols());
  for (int r = 0; r < k.rows(); ++r)
    for (int c = 0; c < k.cols(); ++c) m.set(r, c, k.at(r, c).coeff(0));
  return m;
}

int block_count(int n, RootSet J) { return finred::block_of(J, n - 1) + 1; }

std::vector<int> default_s(int n, RootSet J, int scale) {
  int blocks = block_count(n, J);
  std::vector<int> s(n);
  for (int i = 0; i < n; ++i) s[i] = scale * (blocks - finred::block_of(J, i) - 1);
  return s;
}

bool in_K(const LMatrix& g) {
  if (g.rows() != g.cols()) return false;
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c) {
      const Laurent& x = g.at(r, c);
      if (x.is_zero() && x.prec() <= 0) throw PrecisionError("integrality undecidable at available precision");
      if (x.valuation() < 0) return false;
    }
  return g.det_val() == 0;
}

bool in_K_plus(const LMatrix& g) { return in_K(g) && reduce_mod_t(g).is_identity(); }

bool in_parahoric(const LMatrix& g, RootSet J) {
  if (!in_K(g)) return false;
  ff::Matrix k = reduce_mod_t(g);
  for (auto [r, c] : off_block_positions(g.rows(), J, true))
    if (k.at(r, c)) return false;
  return true;
}

namespace {
bool zero_at(const LMatrix& g, const std::vector<std::pair<int, int>>& pos) {
  for (auto [r, c] : pos) {
    const Laurent& x = g.at(r, c);
    if (!x.is_zero()) return false;
    if (!x.exact()) throw PrecisionError("vanishing undecidable at available precision");
  }
  return true;
}
}  // namespace

bool in_parabolic(const LMatrix& g, RootSet J) { return zero_at(g, off_block_positions(g.rows(), J, true)); }

bool in_levi(const LMatrix& g, RootSet J) {
  return zero_at(g, off_block_positions(g.rows(), J, true)) && zero_at(g, off_block_positions(g.rows(), J, false));
}

bool in_KsK(const LMatrix& g, const std::vector<int>& s) {
  std::vector<int> want = s;
  std::sort(want.rbegin(), want.rend());
  return smith_invariants(g) == want;
}

namespace {
bool in_double_cell(const LMatrix& g, const std::vector<int>& s, RootSet J, NbarQuotient kind, bool parahoric) {
  require_strict(s, J);
  std::vector<int> neg(s.size());
  for (size_t i = 0; i < s.size(); ++i) neg[i] = -s[i];
  LMatrix s_inv = LMatrix::diag_power(g.p(), neg);
  for (const LMatrix& nb : enum_quotient(g.p(), kind, s, J)) {
    LMatrix h = g * nb.inverse() * s_inv;
    if (parahoric ? in_parahoric(h, J) : in_K(h)) return true;
  }
  return false;
}
}  // namespace

bool in_PsP(const LMatrix& g, const std::vector<int>& s, RootSet J) {
  return in_double_cell(g, s, J, NbarQuotient::SubPlusInPlus, true);
}

bool in_KsP(const LMatrix& g, const std::vector<int>& s, RootSet J) {
  return in_double_cell(g, s, J, NbarQuotient::SubZeroInPlus, false);
}

bool in_M0s(const LMatrix& g, const std::vector<int>& s, RootSet J) {
  std::vector<int> neg(s.size());
  for (size_t i = 0; i < s.size(); ++i) neg[i] = -s[i];
  LMatrix h = g * LMatrix::diag_power(g.p(), neg);
  return in_levi(h, J) && in_K(h);
}

PositivityReport positivity(const std::vector<int>& b, RootSet J) {
  PositivityReport rep;
  bool positive = true, strict = true, central = true;
  for (size_t i = 1; i < b.size(); ++i) {
    int d = b[i - 1] - b[i];
    if (finred::contains(J, static_cast<int>(i))) {
      if (d != 0) central = false;
    } else {
      if (d < 0) positive = false;
      if (d <= 0) strict = false;
    }
  }
  rep.kind = strict ? Positivity::Strict : positive ? Positivity::Positive : Positivity::Neither;
  rep.central = central;
  return rep;
}

PositivityReport positivity(const LMatrix& z, RootSet J) {
  const int n = z.rows();
  std::vector<int> b(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (r != c && !z.at(r, c).is_zero()) throw std::invalid_argument("positivity of a non-diagonal element");
  for (int i = 0; i < n; ++i) b[i] = z.at(i, i).valuation();
  PositivityReport rep = positivity(b, J);
  for (int i = 1; i < n; ++i)
    if (finred::contains(J, i) && !(z.at(i - 1, i - 1) == z.at(i, i))) rep.central = false;
  return rep;
}

void require_strict(const std::vector<int>& s, RootSet J) {
  auto r = positivity(s, J);
  if (r.kind != Positivity::Strict || !r.central)
    throw std::invalid_argument("s must be strictly positive and central in the Levi");
}

namespace {
void quotient_bounds(NbarQuotient kind, const std::vector<int>& s, RootSet J, std::vector<std::pair<int, int>>& pos,
                     std::vector<int>& lo, std::vector<int>& hi) {
  require_strict(s, J);
  const int n = static_cast<int>(s.size());
  bool sub_plus = kind == NbarQuotient::SubPlusInPlus || kind == NbarQuotient::SubPlusInZero;
  bool group_plus = kind == NbarQuotient::SubPlusInPlus || kind == NbarQuotient::SubZeroInPlus;
  pos = off_block_positions(n, J, true);
  for (auto [r, c] : pos) {
    lo.push_back(group_plus ? 1 : 0);
    hi.push_back((sub_plus ? 1 : 0) + s[c] - s[r]);
  }
}
}  // namespace

std::vector<LMatrix> enum_quotient(int p, NbarQuotient kind, const std::vector<int>& s, RootSet J) {
  std::vector<std::pair<int, int>> pos;
  std::vector<int> lo, hi;
  quotient_bounds(kind, s, J, pos, lo, hi);
  std::vector<LMatrix> out;
  for_each_unipotent(p, static_cast<int>(s.size()), pos, lo, hi, [&](const LMatrix& m) { out.push_back(m); });
  return out;
}

long long quotient_index(int p, NbarQuotient kind, const std::vector<int>& s, RootSet J) {
  std::vector<std::pair<int, int>> pos;
  std::vector<int> lo, hi;
  quotient_bounds(kind, s, J, pos, lo, hi);
  long long idx = 1;
  for (size_t i = 0; i < pos.size(); ++i)
    for (int e = lo[i]; e < hi[i]; ++e) idx *= p;
  return idx;
}

std::vector<LMatrix> enum_N_principal(int p, int n, RootSet J, int depth) {
  return enum_N_principal(p, n, J, depth, finred::full_roots(n));
}

std::vector<LMatrix> enum_N_principal(int p, int n, RootSet J, int depth, RootSet ambient) {
  std::vector<std::pair<int, int>> pos;
  for (auto [r, c] : off_block_positions(n, J, false))
    if (finred::block_of(ambient, r) == finred::block_of(ambient, c)) pos.emplace_back(r, c);
  std::vector<int> lo(pos.size(), -depth), hi(pos.size(), 0);
  std::vector<LMatrix> out;
  for_each_unipotent(p, n, pos, lo, hi, [&](const LMatrix& m) { out.push_back(m); });
  return out;
}

std::vector<LMatrix> enum_N_principal(int p, int n, RootSet J, const std::vector<std::vector<int>>& depth,
                                      RootSet ambient) {
  std::vector<std::pair<int, int>> pos;
  std::vector<int> lo, hi;
  for (auto [r, c] : off_block_positions(n, J, false))
    if (finred::block_of(ambient, r) == finred::block_of(ambient, c)) {
      pos.emplace_back(r, c);
      lo.push_back(-std::max(0, depth[r][c]));
      hi.push_back(0);
    }
  std::vector<LMatrix> out;
  for_each_unipotent(p, n, pos, lo, hi, [&](const LMatrix& m) { out.push_back(m); });
  return out;
}

std::vector<LMatrix> parahoric_cosets(const finred::FiniteGL& g, RootSet J) {
  const auto& par = g.subgroup(finred::Sub::P, J);
  std::set<int> reps;
  for (int x = 0; x < g.order(); ++x) {
    int best = x;
    for (int q : par) best = std::min(best, g.mul(q, x));
    reps.insert(best);
  }
  std::vector<LMatrix> out;
  for (int r : reps) out.push_back(LMatrix::lift(g.element(r)));
  return out;
}

std::vector<LMatrix> pzero_grid(const finred::FiniteGL& g, RootSet J, int d) {
  auto pos = off_block_positions(g.n(), J, true);
  std::vector<int> lo(pos.size(), 1), hi(pos.size(), std::max(1, d));
  std::vector<LMatrix> out;
  auto reps = parahoric_cosets(g, J);
  for_each_unipotent(g.p(), g.n(), pos, lo, hi, [&](const LMatrix& nb) {
    for (const auto& r : reps) out.push_back(nb * r);
  });
  return out;
}

int conjugation_depth(const LMatrix& g) {
  int a = g.min_valuation();
  int b = with_precision_retry([&] { return g.inverse().min_valuation(); });
  return std::max(0, -a) + std::max(0, -b);
}

}  // namespace modrep::local
