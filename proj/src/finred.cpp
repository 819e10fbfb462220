#include "modrep/finred.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace modrep::finred {

RootSet full_roots(int n) { return n <= 1 ? 0u : ((1u << (n - 1)) - 1u); }
bool contains(RootSet set, int i) { return (set >> (i - 1)) & 1u; }

std::string roots_to_string(RootSet set) {
  std::string s = "{";
  bool first = true;
  for (int i = 1; i <= 31; ++i)
    if (contains(set, i)) {
      if (!first) s += ",";
      s += std::to_string(i);
      first = false;
    }
  return s + "}";
}

RootSet opposite_roots(RootSet set, int n) {
  RootSet out = 0;
  for (int i = 1; i < n; ++i)
    if (contains(set, i)) out |= 1u << (n - i - 1);
  return out;
}

std::vector<RootSet> all_subsets(int n) {
  std::vector<RootSet> out;
  for (RootSet s = 0; s <= full_roots(n); ++s) out.push_back(s);
  return out;
}

namespace {

long long gl_order(int n, int p) {
  long long pn = 1;
  for (int i = 0; i < n; ++i) pn *= p;
  long long order = 1, pi = 1;
  for (int i = 0; i < n; ++i) {
    order *= (pn - pi);
    pi *= p;
    if (order > kMaxGroupOrder) return order;
  }
  return order;
}

int find_primitive_root(int p) {
  for (int z = 1; z < p; ++z) {
    int ord = 1;
    long long x = z;
    while (x != 1) {
      x = x * z % p;
      ++ord;
    }
    if (ord == p - 1) return z;
  }
  return 1;
}

Matrix elementary(int p, int n, int i, int j) {
  Matrix m = Matrix::identity(p, n);
  m.set(i, j, 1);
  return m;
}

Matrix diag_at(int p, int n, int i, int x) {
  Matrix m = Matrix::identity(p, n);
  m.set(i, i, x);
  return m;
}

}  // namespace

FiniteGL::FiniteGL(int n, int p) : n_(n), p_(p) {
  ff::check_prime(p);
  if (n < 1 || n > 4) throw ff::FieldError("rank out of range");
  if (gl_order(n, p) > kMaxGroupOrder) throw ff::FieldError("group order exceeds the materialization cap");
  zeta_ = find_primitive_root(p);
  long long total = 1;
  for (int i = 0; i < n * n; ++i) total *= p;
  for (long long code = 0; code < total; ++code) {
    Matrix m(p, n, n);
    long long t = code;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        m.set(r, c, t % p);
        t /= p;
      }
    if (ff::determinant(m) == 0) continue;
    index_[m.encode()] = static_cast<int>(elements_.size());
    elements_.push_back(std::move(m));
  }
  const size_t N = elements_.size();
  identity_ = index_of(Matrix::identity(p, n));
  table_.assign(N * N, 0);
  inverse_.assign(N, 0);
  for (size_t a = 0; a < N; ++a)
    for (size_t b = 0; b < N; ++b) {
      int c = index_of(elements_[a] * elements_[b]);
      table_[a * N + b] = c;
      if (c == identity_) inverse_[a] = static_cast<int>(b);
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) generators_.push_back(index_of(elementary(p, n, i, j)));
  if (p > 2) generators_.push_back(index_of(diag_at(p, n, 0, zeta_)));
}

int FiniteGL::index_of(const Matrix& m) const {
  auto it = index_.find(m.encode());
  if (it == index_.end() || m.rows() != n_ || m.cols() != n_) throw ff::FieldError("matrix is not in the group");
  return it->second;
}

int FiniteGL::element_order(int a) const {
  int ord = 1, x = a;
  while (x != identity_) {
    x = mul(x, a);
    ++ord;
  }
  return ord;
}

std::vector<Matrix> FiniteGL::generator_matrices() const {
  std::vector<Matrix> out;
  for (int g : generators_) out.push_back(elements_[g]);
  return out;
}

int FiniteGL::block_of(RootSet J, int i) const { return finred::block_of(J, i); }

int block_of(RootSet J, int i) {
  int b = 0;
  for (int r = 1; r <= i; ++r)
    if (!contains(J, r)) ++b;
  return b;
}

int FiniteGL::block_count(RootSet J) const { return block_of(J, n_ - 1) + 1; }

bool FiniteGL::member(Sub kind, RootSet J, const Matrix& m) const {
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c) {
      int br = block_of(J, r), bc = block_of(J, c);
      int v = m.at(r, c);
      switch (kind) {
        case Sub::P:
          if (br > bc && v) return false;
          break;
        case Sub::Pbar:
          if (br < bc && v) return false;
          break;
        case Sub::M:
          if (br != bc && v) return false;
          break;
        case Sub::N:
          if (br > bc && v) return false;
          if (br == bc && v != (r == c ? 1 : 0)) return false;
          break;
        case Sub::Nbar:
          if (br < bc && v) return false;
          if (br == bc && v != (r == c ? 1 : 0)) return false;
          break;
      }
    }
  return true;
}

bool FiniteGL::member(Sub kind, RootSet J, int idx) const { return member(kind, J, elements_[idx]); }

const std::vector<int>& FiniteGL::subgroup(Sub kind, RootSet J) const {
  uint64_t key = static_cast<uint64_t>(kind) * 4096 + J;
  {
    std::lock_guard<std::mutex> lock(cache_mu_);
    auto it = subgroup_cache_.find(key);
    if (it != subgroup_cache_.end()) return it->second;
  }
  std::vector<int> out;
  for (int i = 0; i < order(); ++i)
    if (member(kind, J, i)) out.push_back(i);
  std::lock_guard<std::mutex> lock(cache_mu_);
  return subgroup_cache_.emplace(key, std::move(out)).first->second;
}

std::vector<int> FiniteGL::subgroup_generators(Sub kind, RootSet J) const {
  std::vector<int> out;
  bool levi = kind == Sub::P || kind == Sub::Pbar || kind == Sub::M;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      if (i == j) continue;
      int bi = block_of(J, i), bj = block_of(J, j);
      bool take = (levi && bi == bj) || ((kind == Sub::P || kind == Sub::N) && bi < bj) ||
                  ((kind == Sub::Pbar || kind == Sub::Nbar) && bi > bj);
      if (take) out.push_back(index_of(elementary(p_, n_, i, j)));
    }
  if (levi && p_ > 2)
    for (int i = 0; i < n_; ++i) out.push_back(index_of(diag_at(p_, n_, i, zeta_)));
  if (out.empty()) out.push_back(identity_);
  return out;
}

int FiniteGL::root_torus_element(int i, int x) const {
  Matrix m = Matrix::identity(p_, n_);
  m.set(i - 1, i - 1, x);
  m.set(i, i, ff::inv_mod(x, p_));
  return index_of(m);
}

int FiniteGL::weyl_element(const std::vector<int>& perm) const {
  Matrix m(p_, n_, n_);
  for (int i = 0; i < n_; ++i) m.set(perm[i], i, 1);
  return index_of(m);
}

std::vector<std::vector<int>> FiniteGL::weyl_group() const {
  std::vector<int> perm(n_);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

int FiniteGL::longest_element() const {
  std::vector<int> perm(n_);
  for (int i = 0; i < n_; ++i) perm[i] = n_ - 1 - i;
  return weyl_element(perm);
}

std::vector<std::vector<int>> FiniteGL::conjugacy_classes() const {
  std::vector<char> seen(order(), 0);
  std::vector<std::vector<int>> out;
  for (int x = 0; x < order(); ++x) {
    if (seen[x]) continue;
    std::vector<int> cls;
    for (int g = 0; g < order(); ++g) {
      int y = mul(mul(g, x), inv(g));
      if (!seen[y]) {
        seen[y] = 1;
        cls.push_back(y);
      }
    }
    std::sort(cls.begin(), cls.end());
    out.push_back(cls);
  }
  return out;
}

int FiniteGL::p_regular_class_count() const {
  int count = 0;
  for (auto& cls : conjugacy_classes())
    if (element_order(cls[0]) % p_ != 0) ++count;
  return count;
}

std::vector<char> FiniteGL::double_coset_closure(const std::vector<int>& left_gens, const std::vector<char>& middle,
                                                 const std::vector<int>& right_gens) const {
  std::vector<char> mark = middle;
  std::deque<int> queue;
  for (int i = 0; i < order(); ++i)
    if (mark[i]) queue.push_back(i);
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (int l : left_gens) {
      int y = mul(l, x);
      if (!mark[y]) {
        mark[y] = 1;
        queue.push_back(y);
      }
    }
    for (int r : right_gens) {
      int y = mul(x, r);
      if (!mark[y]) {
        mark[y] = 1;
        queue.push_back(y);
      }
    }
  }
  return mark;
}

GroupPtr build_gl(int n, int p) { return std::make_shared<const FiniteGL>(n, p); }

meataxe::ModuleRep GroupRep::module() const {
  meataxe::ModuleRep m{group->p(), dim, {}, "GL(" + std::to_string(group->n()) + "," + std::to_string(group->p()) + ")"};
  for (int g : group->generators()) m.generators.push_back(images[g]);
  return m;
}

GroupRep extend(GroupPtr g, const meataxe::ModuleRep& m) {
  if (m.generators.size() != g->generators().size()) throw ff::FieldError("generator count mismatch");
  GroupRep rep{g, m.dim, std::vector<Matrix>(g->order())};
  std::vector<char> seen(g->order(), 0);
  std::deque<int> queue{g->identity()};
  rep.images[g->identity()] = Matrix::identity(g->p(), m.dim);
  seen[g->identity()] = 1;
  const auto& gens = g->generators();
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (size_t k = 0; k < gens.size(); ++k) {
      int y = g->mul(x, gens[k]);
      Matrix img = rep.images[x] * m.generators[k];
      if (!seen[y]) {
        seen[y] = 1;
        rep.images[y] = std::move(img);
        queue.push_back(y);
      } else if (!(rep.images[y] == img)) {
        throw Contradiction("generator images do not define a homomorphism");
      }
    }
  }
  return rep;
}

meataxe::ModuleRep natural_module(const FiniteGL& g) {
  return {g.p(), g.n(), g.generator_matrices(), "natural"};
}

meataxe::ModuleRep det_module(const FiniteGL& g, int power) {
  meataxe::ModuleRep m{g.p(), 1, {}, "det"};
  int e = ((power % (g.p() - 1 ? g.p() - 1 : 1)) + (g.p() - 1)) % std::max(1, g.p() - 1);
  for (auto& x : g.generator_matrices()) m.generators.push_back(Matrix::from_rows(g.p(), {{ff::pow_mod(ff::determinant(x), e, g.p())}}));
  return m;
}

meataxe::ModuleRep sym_power(const FiniteGL& g, int degree) {
  const int n = g.n(), p = g.p();
  // monomials as exponent vectors, in decreasing lexicographic order
  std::vector<std::vector<int>> monos;
  std::vector<int> cur(n, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == n - 1) {
      cur[pos] = left;
      monos.push_back(cur);
      return;
    }
    for (int e = left; e >= 0; --e) {
      cur[pos] = e;
      self(self, pos + 1, left - e);
    }
  };
  rec(rec, 0, degree);
  std::map<std::vector<int>, int> where;
  for (size_t i = 0; i < monos.size(); ++i) where[monos[i]] = static_cast<int>(i);
  meataxe::ModuleRep m{p, static_cast<int>(monos.size()), {}, "sym" + std::to_string(degree)};
  for (auto& x : g.generator_matrices()) {
    Matrix img(p, m.dim, m.dim);
    for (size_t col = 0; col < monos.size(); ++col) {
      // product over j of (sum_i x(i,j) X_i)^{e_j}
      std::map<std::vector<int>, int> poly{{std::vector<int>(n, 0), 1}};
      for (int j = 0; j < n; ++j)
        for (int rep = 0; rep < monos[col][j]; ++rep) {
          std::map<std::vector<int>, int> next;
          for (auto& [mono, c] : poly)
            for (int i = 0; i < n; ++i) {
              if (!x.at(i, j)) continue;
              auto e = mono;
              ++e[i];
              next[e] = (next[e] + c * x.at(i, j)) % p;
            }
          poly = std::move(next);
        }
      for (auto& [mono, c] : poly) img.add_to(where.at(mono), static_cast<int>(col), c);
    }
    m.generators.push_back(img);
  }
  return m;
}

meataxe::ModuleRep permutation_module(const FiniteGL& g, RootSet J) {
  const auto& par = g.subgroup(Sub::P, J);
  auto canon = [&](int x) {
    int best = g.mul(x, par[0]);
    for (int q : par) best = std::min(best, g.mul(x, q));
    return best;
  };
  std::set<int> pts;
  for (int x = 0; x < g.order(); ++x) pts.insert(canon(x));
  std::vector<int> points(pts.begin(), pts.end());
  std::map<int, int> where;
  for (size_t i = 0; i < points.size(); ++i) where[points[i]] = static_cast<int>(i);
  meataxe::ModuleRep m{g.p(), static_cast<int>(points.size()), {}, "perm" + roots_to_string(J)};
  for (int h : g.generators()) {
    Matrix perm(g.p(), m.dim, m.dim);
    for (size_t i = 0; i < points.size(); ++i) perm.set(where.at(canon(g.mul(h, points[i]))), static_cast<int>(i), 1);
    m.generators.push_back(perm);
  }
  return m;
}

Matrix fixed_space(const GroupRep& rep, const std::vector<int>& elems) {
  const int d = rep.dim, p = rep.p();
  Matrix stacked(p, d * static_cast<int>(elems.size()), d);
  for (size_t k = 0; k < elems.size(); ++k) {
    const Matrix& a = rep(elems[k]);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) stacked.set(static_cast<int>(k) * d + i, j, a.at(i, j) - (i == j ? 1 : 0));
  }
  return ff::kernel(stacked);
}

Coinvariants coinvariants(const GroupRep& rep, const std::vector<int>& elems) {
  const int d = rep.dim, p = rep.p();
  Matrix span(p, d, d * static_cast<int>(elems.size()));
  for (size_t k = 0; k < elems.size(); ++k) {
    const Matrix& a = rep(elems[k]);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) span.set(i, static_cast<int>(k) * d + j, a.at(i, j) - (i == j ? 1 : 0));
  }
  Matrix ker = ff::column_space(span);
  Matrix comp = ff::complement_basis(ker, d);
  Matrix full = ker.cols() ? Matrix::hconcat(ker, comp) : comp;
  Matrix inv = ff::invert(full);
  Coinvariants q;
  q.dim = comp.cols();
  q.projection = inv.block(ker.cols(), 0, q.dim, d);
  q.section = comp;
  return q;
}

std::vector<int> line_stabilizer(const GroupRep& rep, const Matrix& v) {
  const int p = rep.p();
  int i0 = -1;
  for (int i = 0; i < v.rows(); ++i)
    if (v.at(i, 0)) {
      i0 = i;
      break;
    }
  if (i0 < 0) throw ff::FieldError("zero vector has no line");
  int iv = ff::inv_mod(v.at(i0, 0), p);
  std::vector<int> out;
  for (int g = 0; g < rep.group->order(); ++g) {
    Matrix w = rep(g) * v;
    int lambda = w.at(i0, 0) * iv % p;
    if (w == v.scaled(lambda)) out.push_back(g);
  }
  return out;
}

namespace {

int discrete_log(int x, int zeta, int p) {
  int e = 0;
  long long y = 1;
  while (y != x) {
    y = y * zeta % p;
    if (++e > p) throw ff::FieldError("discrete log failed");
  }
  return e;
}

std::vector<int> torus_character(const GroupRep& rep, const Matrix& v) {
  const FiniteGL& g = *rep.group;
  const int n = g.n(), p = g.p();
  std::vector<int> c(n, 0);
  if (p == 2) return c;
  int i0 = 0;
  while (!v.at(i0, 0)) ++i0;
  for (int i = 0; i < n; ++i) {
    Matrix d = Matrix::identity(p, n);
    d.set(i, i, g.primitive_root());
    Matrix w = rep(g.index_of(d)) * v;
    int lambda = w.at(i0, 0) * ff::inv_mod(v.at(i0, 0), p) % p;
    c[i] = discrete_log(lambda, g.primitive_root(), p);
  }
  return c;
}

RootSet match_parabolic(const FiniteGL& g, const std::vector<int>& stab, Sub kind) {
  for (RootSet J : all_subsets(g.n()))
    if (g.subgroup(kind, J) == stab) return J;
  throw Contradiction("line stabilizer is not a standard parabolic subgroup");
}

Matrix one_dim_fixed(const GroupRep& rep, const std::vector<int>& gens, const char* what) {
  Matrix f = fixed_space(rep, gens);
  if (f.cols() != 1) throw Contradiction(std::string(what) + "-fixed space is not a line");
  return f;
}

std::vector<char> as_mask(int order, const std::vector<int>& elems) {
  std::vector<char> m(order, 0);
  for (int e : elems) m[e] = 1;
  return m;
}

int mod_pm1(int x, int p) {
  int m = std::max(1, p - 1);
  return ((x % m) + m) % m;
}

}  // namespace

std::string IrreducibleData::label() const {
  std::ostringstream os;
  os << "dim=" << rep.dim << " psi=(";
  for (size_t i = 0; i < psi.size(); ++i) os << (i ? "," : "") << psi[i];
  os << ") dV=" << roots_to_string(delta_V);
  return os.str();
}

IrreducibleData parameters(const GroupRep& rep) {
  const FiniteGL& g = *rep.group;
  IrreducibleData d;
  d.rep = rep;
  d.u_fixed_line = one_dim_fixed(rep, g.subgroup_generators(Sub::N, 0), "U");
  d.psi = torus_character(rep, d.u_fixed_line);
  for (int i = 1; i < g.n(); ++i) {
    bool trivial = true;
    for (int x = 1; x < g.p() && trivial; ++x)
      if (!(rep(g.root_torus_element(i, x)) * d.u_fixed_line == d.u_fixed_line)) trivial = false;
    if (trivial) d.delta_psi |= 1u << (i - 1);
  }
  d.delta_V = match_parabolic(g, line_stabilizer(rep, d.u_fixed_line), Sub::P);
  if ((d.delta_V & ~d.delta_psi) != 0) throw Contradiction("Delta_V is not contained in Delta_psi");
  d.ubar_fixed_line = one_dim_fixed(rep, g.subgroup_generators(Sub::Nbar, 0), "Ubar");
  d.psi_bar = torus_character(rep, d.ubar_fixed_line);
  d.delta_V_bar = match_parabolic(g, line_stabilizer(rep, d.ubar_fixed_line), Sub::Pbar);
  return d;
}

std::vector<IrreducibleData> classify_all(GroupPtr g, uint64_t seed) {
  const int n = g->n(), p = g->p();
  const int target = g->p_regular_class_count();
  std::vector<meataxe::ModuleRep> inventory;
  inventory.push_back(det_module(*g, 0));
  auto nat = natural_module(*g);
  auto power = nat;
  int kmax = std::max(1, (p - 1) * (n - 1));
  for (int k = 1; k <= kmax; ++k) {
    inventory.push_back(power);
    power = meataxe::tensor(power, nat);
  }
  inventory.push_back(meataxe::dual(nat));
  inventory.push_back(meataxe::tensor(nat, meataxe::dual(nat)));
  for (RootSet J : all_subsets(n))
    if (J != full_roots(n)) inventory.push_back(permutation_module(*g, J));

  std::vector<meataxe::ModuleRep> found;
  auto known = [&](const meataxe::ModuleRep& m) {
    for (auto& f : found)
      if (f.dim == m.dim && meataxe::is_isomorphic(f, m)) return true;
    return false;
  };
  std::vector<meataxe::ModuleRep> dets;
  for (int m = 0; m < std::max(1, p - 1); ++m) dets.push_back(det_module(*g, m));
  for (auto& seed_module : inventory) {
    if (static_cast<int>(found.size()) == target) break;
    auto cs = meataxe::chop(seed_module, seed);
    for (auto& [factor, mult] : cs.factors) {
      (void)mult;
      for (auto& d : dets) {
        auto twisted = meataxe::tensor(factor, d);
        if (known(twisted)) continue;
        if (!meataxe::is_absolutely_irreducible(twisted))
          throw Contradiction("composition factor is not absolutely irreducible");
        found.push_back(twisted);
      }
    }
  }
  if (static_cast<int>(found.size()) != target)
    throw Contradiction("seed inventory produced " + std::to_string(found.size()) + " irreducibles, expected " +
                        std::to_string(target));

  std::vector<IrreducibleData> table;
  for (auto& m : found) table.push_back(parameters(extend(g, m)));
  std::sort(table.begin(), table.end(), [](const IrreducibleData& a, const IrreducibleData& b) {
    if (a.rep.dim != b.rep.dim) return a.rep.dim < b.rep.dim;
    if (a.psi != b.psi) return a.psi < b.psi;
    return a.delta_V < b.delta_V;
  });

  // parameters must biject onto {(psi, J) : J inside Delta_psi}
  std::set<std::pair<std::vector<int>, RootSet>> params;
  for (auto& d : table) params.insert({d.psi, d.delta_V});
  if (static_cast<int>(params.size()) != target) throw Contradiction("parameters are not injective");
  long long expected = 0;
  const int m = std::max(1, p - 1);
  std::vector<int> c(n, 0);
  while (true) {
    int free_roots = 0;
    for (int i = 0; i + 1 < n; ++i)
      if (c[i] == c[i + 1]) ++free_roots;
    expected += 1LL << free_roots;
    int pos = 0;
    while (pos < n && ++c[pos] == m) c[pos++] = 0;
    if (pos == n) break;
  }
  if (expected != target) throw Contradiction("parameter set size differs from the class count");
  return table;
}

const IrreducibleData& special_rep(const std::vector<IrreducibleData>& table, RootSet J) {
  for (auto& d : table)
    if (d.delta_V == J && std::all_of(d.psi.begin(), d.psi.end(), [](int c) { return c == 0; })) return d;
  throw Contradiction("no special representation for " + roots_to_string(J));
}

int find_by_parameters(const std::vector<IrreducibleData>& table, const std::vector<int>& psi, RootSet delta_V) {
  for (size_t i = 0; i < table.size(); ++i)
    if (table[i].delta_V == delta_V && table[i].psi == psi) return static_cast<int>(i);
  return -1;
}

GroupRep contragredient(const GroupRep& rep) {
  GroupRep d{rep.group, rep.dim, std::vector<Matrix>(rep.images.size())};
  for (int g = 0; g < rep.group->order(); ++g) d.images[g] = rep(rep.group->inv(g)).transpose();
  return d;
}

DualityReport check_duality(const IrreducibleData& data) {
  const FiniteGL& g = *data.rep.group;
  const int n = g.n(), p = g.p();
  std::vector<int> w0psi(data.psi.rbegin(), data.psi.rend());
  DualityReport r;
  r.over_u = data.psi_bar == w0psi && data.delta_V_bar == opposite_roots(data.delta_V, n);
  IrreducibleData dual = parameters(contragredient(data.rep));
  std::vector<int> expected(n);
  for (int i = 0; i < n; ++i) expected[i] = mod_pm1(-w0psi[i], p);
  r.dual = dual.psi == expected && dual.delta_V == opposite_roots(data.delta_V, n);
  std::ostringstream os;
  os << "psi_bar=(";
  for (int i = 0; i < n; ++i) os << (i ? "," : "") << data.psi_bar[i];
  os << ") psi_dual=(";
  for (int i = 0; i < n; ++i) os << (i ? "," : "") << dual.psi[i];
  os << ") dV_bar=" << roots_to_string(data.delta_V_bar) << " dV_dual=" << roots_to_string(dual.delta_V);
  r.witness = os.str();
  return r;
}

CoregularityReport coregularity(const IrreducibleData& data, RootSet J) {
  const FiniteGL& g = *data.rep.group;
  CoregularityReport r;
  auto stab = line_stabilizer(data.rep, data.ubar_fixed_line);
  r.direct = std::all_of(stab.begin(), stab.end(), [&](int x) { return g.member(Sub::Pbar, J, x); });
  Matrix fixed = fixed_space(data.rep, g.subgroup_generators(Sub::Nbar, J));
  Coinvariants q = coinvariants(data.rep, g.subgroup(Sub::N, J));
  std::vector<char> support(g.order(), 0);
  for (int x = 0; x < g.order(); ++x)
    if (!(q.projection * data.rep(x) * fixed).is_zero()) {
      support[x] = 1;
      ++r.support_size;
    }
  auto left = g.subgroup_generators(Sub::P, J), right = g.subgroup_generators(Sub::Pbar, J);
  std::vector<char> id(g.order(), 0);
  id[g.identity()] = 1;
  auto big_cell = g.double_coset_closure(left, id, right);
  auto with_v = g.double_coset_closure(left, as_mask(g.order(), stab), right);
  r.via_images = support == big_cell;
  r.support_matches = support == with_v;
  return r;
}

bool is_M_coregular(const IrreducibleData& data, RootSet J) {
  auto r = coregularity(data, J);
  if (!r.support_matches) throw Contradiction("image support differs from P Pbar_V Pbar");
  if (r.direct != r.via_images) throw Contradiction("coregularity criteria disagree");
  return r.direct;
}

bool is_M_regular(const IrreducibleData& data, RootSet J) {
  const FiniteGL& g = *data.rep.group;
  auto stab = line_stabilizer(data.rep, data.u_fixed_line);
  return std::all_of(stab.begin(), stab.end(), [&](int x) { return g.member(Sub::P, J, x); });
}

DeckSplit deck_split(const IrreducibleData& data, RootSet J) {
  const FiniteGL& g = *data.rep.group;
  const int d = data.rep.dim, p = g.p();
  DeckSplit s;
  s.invariants = fixed_space(data.rep, g.subgroup_generators(Sub::N, J));
  const auto& nbar = g.subgroup(Sub::Nbar, J);
  Matrix span(p, d, d * static_cast<int>(nbar.size()));
  Matrix span_inv(p, d, s.invariants.cols() * static_cast<int>(nbar.size()));
  for (size_t k = 0; k < nbar.size(); ++k) {
    Matrix diff = Matrix::identity(p, d) - data.rep(nbar[k]);
    Matrix on_inv = diff * s.invariants;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) span.set(i, static_cast<int>(k) * d + j, diff.at(i, j));
      for (int j = 0; j < on_inv.cols(); ++j) span_inv.set(i, static_cast<int>(k) * on_inv.cols() + j, on_inv.at(i, j));
    }
  }
  s.complement = ff::column_space(span);
  bool same = ff::same_span(s.complement, ff::column_space(span_inv));
  s.first_sum_direct = same && s.invariants.cols() + s.complement.cols() == d &&
                       ff::rank(Matrix::hconcat(s.invariants, s.complement)) == d;
  s.quotient = coinvariants(data.rep, g.subgroup(Sub::N, J));
  s.nbar_invariants = fixed_space(data.rep, g.subgroup_generators(Sub::Nbar, J));
  Matrix restricted = s.quotient.projection * s.nbar_invariants;
  auto inv = restricted.square() ? ff::try_invert(restricted) : std::nullopt;
  s.second_sum_direct = inv.has_value();
  if (inv) {
    s.phi = s.nbar_invariants * *inv;
    s.phi_ok = (s.quotient.projection * s.phi).is_identity();
  }
  return s;
}

WeightSupport weight_support(const IrreducibleData& data, RootSet J, RootSet J_prime) {
  const FiniteGL& g = *data.rep.group;
  WeightSupport w;
  Matrix fixed = fixed_space(data.rep, g.subgroup_generators(Sub::N, J_prime));
  Coinvariants q = coinvariants(data.rep, g.subgroup(Sub::Nbar, J));
  w.nonzero.assign(g.order(), 0);
  for (int x = 0; x < g.order(); ++x)
    if (!(q.projection * data.rep(x) * fixed).is_zero()) {
      w.nonzero[x] = 1;
      ++w.count;
    }
  auto pv = line_stabilizer(data.rep, data.u_fixed_line);
  auto target = g.double_coset_closure(g.subgroup_generators(Sub::Pbar, J), as_mask(g.order(), pv),
                                       g.subgroup_generators(Sub::P, J_prime));
  w.matches_double_coset = w.nonzero == target;

  // Weyl-group version
  auto W = g.weyl_group();
  auto weyl_of = [&](RootSet S) {
    std::vector<int> out;
    for (auto& perm : W) {
      int e = g.weyl_element(perm);
      if (g.member(Sub::M, S, e)) out.push_back(e);
    }
    return out;
  };
  auto wj = weyl_of(J), wv = weyl_of(data.delta_V), wjp = weyl_of(J_prime);
  std::set<int> product;
  for (int a : wj)
    for (int b : wv)
      for (int c : wjp) product.insert(g.mul(g.mul(a, b), c));
  w.weyl_agrees = true;
  std::set<int> nz;
  for (auto& perm : W) {
    int e = g.weyl_element(perm);
    bool nonzero = !(q.projection * data.rep(e) * fixed).is_zero();
    if (nonzero != static_cast<bool>(w.nonzero[e]) || nonzero != static_cast<bool>(product.count(e)))
      w.weyl_agrees = false;
    if (nonzero) {
      nz.insert(e);
      w.weyl_nonzero.push_back(perm);
    }
  }
  w.weyl_union_of_cosets = true;
  for (int e : nz) {
    for (int a : wj)
      if (!nz.count(g.mul(a, e))) w.weyl_union_of_cosets = false;
    for (int c : wjp)
      if (!nz.count(g.mul(e, c))) w.weyl_union_of_cosets = false;
  }
  return w;
}

RreguReport rregu_equivalence(const IrreducibleData& data, RootSet J, RootSet J_prime) {
  const FiniteGL& g = *data.rep.group;
  RreguReport r;
  auto left = g.subgroup_generators(Sub::Pbar, J), right = g.subgroup_generators(Sub::P, J_prime);
  std::vector<char> id(g.order(), 0);
  id[g.identity()] = 1;
  auto big = g.double_coset_closure(left, id, right);
  auto pv = line_stabilizer(data.rep, data.u_fixed_line);
  auto with_v = g.double_coset_closure(left, as_mask(g.order(), pv), right);
  r.cosets_equal = big == with_v;
  const auto& mv = g.subgroup(Sub::M, data.delta_V);
  r.levi_inside = std::all_of(mv.begin(), mv.end(), [&](int x) { return big[x] != 0; });

  auto W = g.weyl_group();
  std::vector<int> wj, wjp, wv;
  for (auto& perm : W) {
    int e = g.weyl_element(perm);
    if (g.member(Sub::M, J, e)) wj.push_back(e);
    if (g.member(Sub::M, J_prime, e)) wjp.push_back(e);
    if (g.member(Sub::M, data.delta_V, e)) wv.push_back(e);
  }
  std::set<int> prod;
  for (int a : wj)
    for (int c : wjp) prod.insert(g.mul(a, c));
  r.weyl_inside = std::all_of(wv.begin(), wv.end(), [&](int e) { return prod.count(e) > 0; });

  RootSet dv = data.delta_V;
  bool roots = (dv & ~(J | J_prime)) == 0;
  RootSet only_m = dv & J & ~J_prime, only_mp = dv & J_prime & ~J;
  for (int a = 1; a < g.n(); ++a)
    for (int b = 1; b < g.n(); ++b)
      if (contains(only_m, a) && contains(only_mp, b) && std::abs(a - b) < 2) roots = false;
  r.roots_condition = roots;
  r.consistent = r.levi_inside == r.weyl_inside && r.weyl_inside == r.roots_condition &&
                 r.cosets_equal == r.levi_inside;
  std::ostringstream os;
  os << "cosets_equal=" << r.cosets_equal << " levi=" << r.levi_inside << " weyl=" << r.weyl_inside
     << " roots=" << r.roots_condition;
  r.witness = os.str();
  return r;
}

std::vector<Matrix> coinvariant_action(const GroupRep& rep, const Coinvariants& q, RootSet J) {
  const FiniteGL& g = *rep.group;
  std::vector<Matrix> out(g.order());
  Matrix kill = Matrix::identity(rep.p(), rep.dim) - q.section * q.projection;
  for (int x : g.subgroup(Sub::P, J)) {
    if (!(q.projection * rep(x) * kill).is_zero()) throw Contradiction("coinvariant action is not well defined");
    out[x] = q.projection * rep(x) * q.section;
  }
  return out;
}

}  // namespace modrep::finred
