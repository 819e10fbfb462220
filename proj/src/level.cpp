#include "modrep/level.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>
#include <stdexcept>

#include "modrep/diagnostic.hpp"

namespace modrep::hecke {

using finred::Sub;
using local::Laurent;
using local::with_precision_retry;

namespace {
uint64_t next_uid() {
  static std::atomic<uint64_t> counter{0};
  return ++counter;
}
}  // namespace

Level::Level(LevelKind kind, RootSet J, const finred::GroupRep& rep)
    : kind_(kind), J_(J), uid_(next_uid()), group_(rep.group), rep_(rep) {
  const int full = finred::full_roots(group_->n());
  if (J == static_cast<RootSet>(full)) {
    dim_ = rep.dim;
    projection_ = section_ = Matrix::identity(rep.p(), rep.dim);
    action_ = rep.images;
  } else {
    finred::Coinvariants q = finred::coinvariants(rep, group_->subgroup(Sub::N, J));
    dim_ = q.dim;
    projection_ = q.projection;
    section_ = q.section;
    action_ = finred::coinvariant_action(rep, q, J);
  }
  if (kind == LevelKind::Parahoric) {
    const auto& P = group_->subgroup(Sub::P, J);
    coset_min_.assign(group_->order(), -1);
    for (int x = 0; x < group_->order(); ++x) {
      if (coset_min_[x] >= 0) continue;
      int best = x;
      for (int h : P) best = std::min(best, group_->mul(h, x));
      for (int h : P) coset_min_[group_->mul(h, x)] = best;
    }
  }
}

std::string Level::name() const {
  std::string j = finred::roots_to_string(J_);
  if (kind_ == LevelKind::Parahoric) return "parahoric" + j;
  if (is_max()) return "K";
  if (J_ == 0) return "torus";
  return "levi" + j;
}

const Matrix& Level::action(int elem) const {
  const Matrix& a = action_.at(elem);
  if (a.rows() == 0) throw std::logic_error("element outside the reduction of " + name());
  return a;
}

Level::Reduced Level::reduce_uncached(const LMatrix& x) const {
  local::Canonical c = local::canonical_coset(x);
  int k = group_->index_of(c.k_mod_t);
  if (kind_ == LevelKind::Levi) return {c.key, k};
  int r = coset_min_[group_->inv(k)];
  LMatrix rep = LMatrix::lift(group_->element(r)) * c.key.rep;
  return {local::make_key(rep), group_->mul(r, k)};
}

Level::Reduced Level::reduce(const LMatrix& x) const {
  std::string code;
  x.encode(code);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(code);
    if (it != cache_.end()) return it->second;
  }
  Reduced r = reduce_uncached(x);
  std::lock_guard<std::mutex> lock(mu_);
  if (cache_.size() > 2'000'000) cache_.clear();
  cache_.emplace(std::move(code), r);
  return r;
}

std::vector<std::pair<LMatrix, int>> Level::generators(int m) const {
  const int n = group_->n(), p = group_->p();
  std::vector<std::pair<LMatrix, int>> out;
  Sub sub = kind_ == LevelKind::Levi ? Sub::M : Sub::P;
  for (int g : group_->subgroup_generators(sub, J_)) out.emplace_back(LMatrix::lift(group_->element(g)), g);
  const int id = group_->identity();
  for (int e = 1; e < m; ++e) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        if (kind_ == LevelKind::Levi && finred::block_of(J_, i) != finred::block_of(J_, j)) continue;
        LMatrix u = LMatrix::identity(p, n);
        u.at(i, j) = Laurent::monomial(p, 1, e);
        out.emplace_back(std::move(u), id);
      }
    for (int i = 0; i < n; ++i) {
      LMatrix u = LMatrix::identity(p, n);
      u.at(i, i) = u.at(i, i) + Laurent::monomial(p, 1, e);
      out.emplace_back(std::move(u), id);
    }
  }
  return out;
}

std::pair<LMatrix, int> Level::random_element(std::mt19937_64& rng, int m) const {
  const auto& finite = group_->subgroup(kind_ == LevelKind::Levi ? Sub::M : Sub::P, J_);
  auto gens = generators(std::max(m, 2));
  int x = finite[rng() % finite.size()];
  LMatrix g = LMatrix::lift(group_->element(x));
  int elem = x;
  for (int step = 0; step < 6; ++step) {
    const auto& [y, ybar] = gens[rng() % gens.size()];
    int power = 1 + static_cast<int>(rng() % group_->p());
    for (int k = 0; k < power; ++k) {
      g = g * y;
      elem = group_->mul(elem, ybar);
    }
  }
  return {g, elem};
}

LevelPtr make_level(LevelKind kind, RootSet J, const finred::GroupRep& rep) {
  return std::make_shared<const Level>(kind, J, rep);
}

// ---------------------------------------------------------------------------------------------

void Induced::add(const CosetKey& key, const Matrix& value) {
  if (value.is_zero()) return;
  auto it = terms.find(key);
  if (it == terms.end()) {
    terms.emplace(key, value);
    return;
  }
  it->second += value;
  if (it->second.is_zero()) terms.erase(it);
}

Induced Induced::operator+(const Induced& o) const {
  Induced r = *this;
  for (const auto& [k, v] : o.terms) r.add(k, v);
  return r;
}

Induced Induced::operator-(const Induced& o) const { return *this + o.scaled(-1); }

Induced Induced::scaled(long long c) const {
  Induced r{level, cols, {}};
  for (const auto& [k, v] : terms) r.add(k, v.scaled(c));
  return r;
}

bool Induced::operator==(const Induced& o) const {
  if (terms.size() != o.terms.size()) return false;
  for (auto a = terms.begin(), b = o.terms.begin(); a != terms.end(); ++a, ++b)
    if (!(a->first == b->first) || !(a->second == b->second)) return false;
  return true;
}

Matrix Induced::value_at(const LMatrix& g) const {
  Level::Reduced r = level->reduce(g);
  auto it = terms.find(r.key);
  if (it == terms.end()) return Matrix(level->p(), level->dim(), cols);
  return level->action(level->group().inv(r.elem)) * it->second;
}

std::string Induced::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : terms) {
    if (!first) os << " + ";
    first = false;
    os << "[" << k.rep.to_string() << "]^-1[1," << v.to_string() << "]";
  }
  if (first) os << "0";
  return os.str();
}

Induced zero_vector(const LevelPtr& level, int cols) { return Induced{level, cols, {}}; }

Induced unit_vector(const LevelPtr& level, const Matrix& w) {
  Induced f{level, w.cols(), {}};
  f.add(local::make_key(LMatrix::identity(level->p(), level->n())), w);
  return f;
}

Induced translate_inv(const LMatrix& x, const Induced& f) {
  Induced out{f.level, f.cols, {}};
  for (const auto& [c, w] : f.terms) {
    Level::Reduced r = f.level->reduce(c.rep * x);
    out.add(r.key, f.level->action(r.elem) * w);
  }
  return out;
}

Induced translate(const LMatrix& g, const Induced& f) {
  return with_precision_retry([&] { return translate_inv(g.inverse(), f); });
}

// ---------------------------------------------------------------------------------------------

HeckeOp HeckeOp::operator+(const HeckeOp& o) const { return {src, image + o.image}; }
HeckeOp HeckeOp::operator-(const HeckeOp& o) const { return {src, image - o.image}; }
HeckeOp HeckeOp::scaled(long long c) const { return {src, image.scaled(c)}; }

HeckeOp zero_operator(const LevelPtr& src, const LevelPtr& tgt) { return {src, zero_vector(tgt, src->dim())}; }

HeckeOp unit_operator(const LevelPtr& level) {
  return {level, unit_vector(level, Matrix::identity(level->p(), level->dim()))};
}

Induced apply(const HeckeOp& op, const Induced& f) {
  if (f.level.get() != op.src.get()) throw std::logic_error("operator applied at the wrong level");
  const Level& tgt = *op.tgt();
  Induced out{op.tgt(), f.cols, {}};
  for (const auto& [c, w] : f.terms)
    for (const auto& [g, a] : op.image.terms) {
      Level::Reduced r = tgt.reduce(g.rep * c.rep);
      out.add(r.key, tgt.action(r.elem) * a * w);
    }
  return out;
}

HeckeOp compose(const HeckeOp& outer, const HeckeOp& inner) { return {inner.src, apply(outer, inner.image)}; }

// ---------------------------------------------------------------------------------------------

namespace {

DoubleCoset expand(const LevelPtr& src, const LevelPtr& tgt, const LMatrix& d) {
  const finred::FiniteGL& g = src->group();
  const int m = 1 + local::conjugation_depth(d);
  auto gens = src->generators(m);
  DoubleCoset dc;
  dc.rep = d;
  Level::Reduced r0 = tgt->reduce(d);
  std::unordered_map<std::string, int> index;
  index.emplace(r0.key.code, 0);
  dc.keys.push_back(r0.key);
  dc.left.push_back(r0.elem);
  dc.right.push_back(g.identity());
  std::set<std::pair<int, int>> relations;
  for (size_t i = 0; i < dc.keys.size(); ++i) {
    for (const auto& [y, ybar] : gens) {
      Level::Reduced r = tgt->reduce(dc.keys[i].rep * y);
      int L = g.mul(r.elem, dc.left[i]);
      int R = g.mul(dc.right[i], ybar);
      auto [it, fresh] = index.emplace(r.key.code, static_cast<int>(dc.keys.size()));
      if (fresh) {
        dc.keys.push_back(r.key);
        dc.left.push_back(L);
        dc.right.push_back(R);
        continue;
      }
      int j = it->second;
      int a = g.mul(dc.right[j], g.inv(R));
      int b = g.mul(g.inv(dc.left[j]), L);
      if (a != g.identity() || b != g.identity()) relations.emplace(a, b);
    }
  }
  dc.relations.assign(relations.begin(), relations.end());
  return dc;
}

struct OrbitCache {
  std::mutex mu;
  std::map<std::tuple<uint64_t, uint64_t, std::string>, std::unique_ptr<DoubleCoset>> items;
};

OrbitCache& orbit_cache() {
  static OrbitCache cache;
  return cache;
}

}  // namespace

const DoubleCoset& expand_double_coset(const LevelPtr& src, const LevelPtr& tgt, const LMatrix& d) {
  std::string code;
  d.encode(code);
  auto key = std::make_tuple(src->uid(), tgt->uid(), code);
  OrbitCache& cache = orbit_cache();
  {
    std::lock_guard<std::mutex> lock(cache.mu);
    auto it = cache.items.find(key);
    if (it != cache.items.end()) return *it->second;
  }
  auto dc = std::make_unique<DoubleCoset>(expand(src, tgt, d));
  std::lock_guard<std::mutex> lock(cache.mu);
  auto [it, fresh] = cache.items.emplace(key, std::move(dc));
  return *it->second;
}

std::vector<Matrix> admissible_values(const LevelPtr& src, const LevelPtr& tgt, const LMatrix& d) {
  const DoubleCoset& dc = expand_double_coset(src, tgt, d);
  std::vector<std::pair<Matrix, Matrix>> pairs;
  for (auto [a, b] : dc.relations) pairs.emplace_back(src->action(a), tgt->action(b));
  return ff::solve_sylvester_family(pairs, src->p(), src->dim(), tgt->dim());
}

HeckeOp make_operator(const LevelPtr& src, const LevelPtr& tgt, const LMatrix& d, const Matrix& value) {
  if (value.rows() != tgt->dim() || value.cols() != src->dim())
    throw std::invalid_argument("operator value has the wrong shape");
  const DoubleCoset& dc = expand_double_coset(src, tgt, d);
  for (auto [a, b] : dc.relations)
    if (!(value * src->action(a) == tgt->action(b) * value))
      throw Contradiction("value at " + d.to_string() + " is not bi-equivariant for " + src->name() + " -> " +
                          tgt->name());
  HeckeOp op = zero_operator(src, tgt);
  for (size_t i = 0; i < dc.keys.size(); ++i)
    op.image.add(dc.keys[i], tgt->action(dc.left[i]) * value * src->action(dc.right[i]));
  return op;
}

std::vector<HeckeOp> double_coset_basis(const LevelPtr& src, const LevelPtr& tgt, const LMatrix& d) {
  std::vector<HeckeOp> out;
  for (const Matrix& a : admissible_values(src, tgt, d)) out.push_back(make_operator(src, tgt, d, a));
  return out;
}

void check_biequivariance(const HeckeOp& op, std::mt19937_64& rng, int samples) {
  if (op.image.terms.empty()) return;
  std::vector<const std::pair<const CosetKey, Matrix>*> terms;
  for (const auto& t : op.image.terms) terms.push_back(&t);
  const Level& src = *op.src;
  const Level& tgt = *op.tgt();
  for (int s = 0; s < samples; ++s) {
    const auto& [key, value] = *terms[rng() % terms.size()];
    auto [h, hbar] = tgt.random_element(rng, 3);
    auto [k, kbar] = src.random_element(rng, 3);
    Matrix got = op.value_at(h * key.rep * k);
    Matrix want = tgt.action(hbar) * value * src.action(kbar);
    if (!(got == want))
      throw Contradiction("bi-equivariance fails at " + key.rep.to_string() + " for " + src.name() + " -> " +
                          tgt.name());
  }
}

// ---------------------------------------------------------------------------------------------

SparseVec Coordinates::of(const Induced& f) {
  const int64_t block = static_cast<int64_t>(f.level->dim()) * f.cols;
  if (block_ < 0) {
    block_ = block;
    cols_ = f.cols;
  } else if (block_ != block) {
    throw std::logic_error("coordinates of vectors of different shapes");
  }
  SparseVec v;
  for (const auto& [k, w] : f.terms) {
    auto [it, fresh] = index_.emplace(k.code, static_cast<int64_t>(keys_.size()));
    if (fresh) keys_.push_back(k);
    const int64_t base = it->second * block_;
    for (int i = 0; i < w.rows(); ++i)
      for (int j = 0; j < w.cols(); ++j)
        if (w.at(i, j)) v[base + static_cast<int64_t>(i) * w.cols() + j] = w.at(i, j);
  }
  return v;
}

Induced Coordinates::vector(const SparseVec& v, const LevelPtr& level, int cols) const {
  Induced f{level, cols, {}};
  std::map<int64_t, Matrix> blocks;
  for (const auto& [idx, val] : v) {
    int64_t key = idx / block_, off = idx % block_;
    auto it = blocks.find(key);
    if (it == blocks.end()) it = blocks.emplace(key, Matrix(level->p(), level->dim(), cols)).first;
    it->second.set(static_cast<int>(off / cols), static_cast<int>(off % cols), val);
  }
  for (const auto& [key, m] : blocks) f.add(keys_.at(key), m);
  return f;
}

std::map<int, int> Echelon::reduce(SparseVec& v) const {
  std::map<int, int> combo;
  auto it = v.begin();
  while (it != v.end()) {
    auto row = rows_.find(it->first);
    if (row == rows_.end()) {
      ++it;
      continue;
    }
    const int c = it->second;
    const int64_t pivot = it->first;
    for (const auto& [idx, val] : row->second.vec) {
      int nv = ff::reduce(static_cast<long long>(v[idx]) - static_cast<long long>(c) * val, p_);
      if (nv == 0) v.erase(idx);
      else v[idx] = nv;
    }
    for (const auto& [idx, val] : row->second.combo) {
      int nv = ff::reduce(combo[idx] + static_cast<long long>(c) * val, p_);
      if (nv == 0) combo.erase(idx);
      else combo[idx] = nv;
    }
    it = v.upper_bound(pivot);
  }
  return combo;
}

bool Echelon::insert(const SparseVec& v, std::vector<int>* relation) {
  SparseVec w = v;
  std::map<int, int> combo = reduce(w);
  const int id = inserted_++;
  if (w.empty()) {
    if (relation) {
      relation->assign(id, 0);
      for (const auto& [i, c] : combo) (*relation)[i] = c;
    }
    return false;
  }
  // w = v - combo, stored with leading coefficient 1.
  const int64_t pivot = w.begin()->first;
  const int scale = ff::inv_mod(w.begin()->second, p_);
  Row row;
  for (const auto& [idx, val] : w) row.vec[idx] = ff::reduce(static_cast<long long>(val) * scale, p_);
  row.combo[id] = scale;
  for (const auto& [i, c] : combo) {
    int nv = ff::reduce(-static_cast<long long>(c) * scale, p_);
    if (nv) row.combo[i] = nv;
  }
  rows_.emplace(pivot, std::move(row));
  return true;
}

std::optional<std::vector<int>> Echelon::express(const SparseVec& v) const {
  SparseVec w = v;
  std::map<int, int> combo = reduce(w);
  if (!w.empty()) return std::nullopt;
  std::vector<int> out(inserted_, 0);
  for (const auto& [i, c] : combo) out[i] = c;
  return out;
}

}  // namespace modrep::hecke
