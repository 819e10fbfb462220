#include "modrep/meataxe.hpp"

#include <algorithm>
#include <deque>
#include <random>

namespace modrep::meataxe {

using ff::Matrix;

int CompositionSeries::total_dim() const {
  int d = 0;
  for (auto& [m, mult] : factors) d += m.dim * mult;
  return d;
}

void validate(const ModuleRep& m) {
  for (auto& g : m.generators) {
    if (g.rows() != m.dim || g.cols() != m.dim || g.p() != m.p) throw ff::FieldError("generator shape mismatch");
    if (!ff::try_invert(g)) throw ff::FieldError("generator not invertible");
  }
}

namespace {

// Row-echelon span with normalized pivots, used for incremental spinning.
class Echelon {
 public:
  Echelon(int p, int n) : p_(p), n_(n) {}
  // Reduces v; returns true and stores it when independent.
  bool add(std::vector<int> v) {
    reduce(v);
    int piv = -1;
    for (int i = 0; i < n_; ++i)
      if (v[i]) {
        piv = i;
        break;
      }
    if (piv < 0) return false;
    int iv = ff::inv_mod(v[piv], p_);
    for (auto& x : v) x = x * iv % p_;
    rows_.push_back(v);
    pivots_.push_back(piv);
    return true;
  }
  int size() const { return static_cast<int>(rows_.size()); }

 private:
  void reduce(std::vector<int>& v) const {
    for (size_t k = 0; k < rows_.size(); ++k) {
      int f = v[pivots_[k]];
      if (!f) continue;
      for (int i = 0; i < n_; ++i) v[i] = ff::reduce(v[i] - static_cast<long long>(f) * rows_[k][i], p_);
    }
  }
  int p_, n_;
  std::vector<std::vector<int>> rows_;
  std::vector<int> pivots_;
};

std::vector<int> col_of(const Matrix& m, int c) {
  std::vector<int> v(m.rows());
  for (int i = 0; i < m.rows(); ++i) v[i] = m.at(i, c);
  return v;
}

Matrix from_cols(int p, int n, const std::vector<std::vector<int>>& cols) {
  Matrix m(p, n, static_cast<int>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j)
    for (int i = 0; i < n; ++i) m.set(i, static_cast<int>(j), cols[j][i]);
  return m;
}

std::vector<int> mat_vec(const Matrix& g, const std::vector<int>& v) {
  const int n = g.rows(), p = g.p();
  std::vector<int> out(n, 0);
  for (int i = 0; i < n; ++i) {
    long long s = 0;
    for (int j = 0; j < n; ++j) s += static_cast<long long>(g.at(i, j)) * v[j];
    out[i] = static_cast<int>(s % p);
  }
  return out;
}

// ---- polynomials over F_p ----
void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_sub(Poly a, const Poly& b, int p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = ff::reduce(a[i] - b[i], p);
  trim(a);
  return a;
}

Poly poly_mul(const Poly& a, const Poly& b, int p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  trim(r);
  return r;
}

// Returns (quotient, remainder).
std::pair<Poly, Poly> poly_divmod(Poly a, const Poly& b, int p) {
  trim(a);
  if (b.empty()) throw ff::FieldError("polynomial division by zero");
  int db = static_cast<int>(b.size()) - 1;
  int lead_inv = ff::inv_mod(b.back(), p);
  if (static_cast<int>(a.size()) - 1 < db) return {{}, a};
  Poly q(a.size() - b.size() + 1, 0);
  for (int i = static_cast<int>(a.size()) - 1; i >= db; --i) {
    int c = a[i] * lead_inv % p;
    if (!c) continue;
    q[i - db] = c;
    for (int j = 0; j <= db; ++j) a[i - db + j] = ff::reduce(a[i - db + j] - c * b[j], p);
  }
  a.resize(db);
  trim(a);
  trim(q);
  return {q, a};
}

Poly poly_mod(const Poly& a, const Poly& b, int p) { return poly_divmod(a, b, p).second; }

Poly make_monic(Poly f, int p) {
  trim(f);
  if (f.empty()) return f;
  int iv = ff::inv_mod(f.back(), p);
  for (auto& c : f) c = c * iv % p;
  return f;
}

Poly poly_gcd(Poly a, Poly b, int p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = b;
    b = r;
  }
  return make_monic(a, p);
}

Poly poly_powmod(Poly base, long long e, const Poly& mod, int p) {
  Poly r{1};
  base = poly_mod(base, mod, p);
  while (e > 0) {
    if (e & 1) r = poly_mod(poly_mul(r, base, p), mod, p);
    base = poly_mod(poly_mul(base, base, p), mod, p);
    e >>= 1;
  }
  return r;
}

}  // namespace

Poly charpoly(const Matrix& a) {
  const int n = a.rows(), p = a.p();
  Matrix h = a;
  auto swap_rows = [&](int i, int j) {
    for (int c = 0; c < n; ++c) {
      int t = h.at(i, c);
      h.set(i, c, h.at(j, c));
      h.set(j, c, t);
    }
  };
  auto swap_cols = [&](int i, int j) {
    for (int r = 0; r < n; ++r) {
      int t = h.at(r, i);
      h.set(r, i, h.at(r, j));
      h.set(r, j, t);
    }
  };
  for (int j = 0; j + 2 < n; ++j) {
    int piv = -1;
    for (int i = j + 1; i < n; ++i)
      if (h.at(i, j)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != j + 1) {
      swap_rows(piv, j + 1);
      swap_cols(piv, j + 1);
    }
    int iv = ff::inv_mod(h.at(j + 1, j), p);
    for (int k = j + 2; k < n; ++k) {
      int f = h.at(k, j) * iv % p;
      if (!f) continue;
      for (int c = 0; c < n; ++c) h.set(k, c, h.at(k, c) - f * h.at(j + 1, c));
      for (int r = 0; r < n; ++r) h.set(r, j + 1, h.at(r, j + 1) + f * h.at(r, k));
    }
  }
  // Recurrence on leading principal submatrices (1-indexed H(i,j) = h(i-1,j-1)).
  auto H = [&](int i, int j) { return h.at(i - 1, j - 1); };
  std::vector<Poly> P(n + 1);
  P[0] = {1};
  for (int m = 1; m <= n; ++m) {
    Poly xm{ff::reduce(-H(m, m), p), 1};
    Poly cur = poly_mul(xm, P[m - 1], p);
    long long prod = 1;
    for (int i = 1; i < m; ++i) {
      prod = prod * H(m - i + 1, m - i) % p;
      long long coef = prod * H(m - i, m) % p;
      if (!coef) continue;
      Poly term = P[m - i - 1];
      for (auto& c : term) c = static_cast<int>(c * coef % p);
      cur = poly_sub(cur, term, p);
    }
    P[m] = cur;
  }
  return P[n];
}

Matrix eval_poly(const Poly& f, const Matrix& a) {
  const int n = a.rows(), p = a.p();
  Matrix r(p, n, n);
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) r = r * a + Matrix::identity(p, n).scaled(f[i]);
  return r;
}

std::vector<Poly> irreducible_factors_small(const Poly& f_in, int p, int max_degree) {
  Poly f = make_monic(f_in, p);
  std::vector<Poly> out;
  Poly x{0, 1};
  Poly xp = x;  // x^{p^d} mod f
  for (int d = 1; d <= max_degree && f.size() > 1; ++d) {
    xp = poly_powmod(xp, p, f, p);
    Poly g = poly_gcd(f, poly_sub(xp, x, p), p);
    // remove factors of degree < d already found
    for (auto& q : out) {
      while (true) {
        auto [qq, r] = poly_divmod(g, q, p);
        if (!r.empty() || g.size() <= 1) break;
        g = qq;
      }
    }
    g = make_monic(g, p);
    int dg = static_cast<int>(g.size()) - 1;
    if (dg < d) continue;
    if (dg == d) {
      out.push_back(g);
      continue;
    }
    // several degree-d factors: enumerate monic degree-d candidates
    long long count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    if (count > 200000) continue;
    for (long long code = 0; code < count && g.size() > 1; ++code) {
      Poly c(d + 1, 0);
      long long t = code;
      for (int i = 0; i < d; ++i) {
        c[i] = static_cast<int>(t % p);
        t /= p;
      }
      c[d] = 1;
      auto [qq, r] = poly_divmod(g, c, p);
      if (r.empty()) {
        out.push_back(c);
        g = qq;
      }
    }
  }
  return out;
}

Matrix spin(const std::vector<Matrix>& gens, const Matrix& vectors) {
  const int n = vectors.rows(), p = vectors.p();
  Echelon ech(p, n);
  std::vector<std::vector<int>> basis;
  std::deque<std::vector<int>> queue;
  for (int c = 0; c < vectors.cols(); ++c) {
    auto v = col_of(vectors, c);
    if (ech.add(v)) {
      basis.push_back(v);
      queue.push_back(v);
    }
  }
  while (!queue.empty() && ech.size() < n) {
    auto v = queue.front();
    queue.pop_front();
    for (auto& g : gens) {
      auto w = mat_vec(g, v);
      if (ech.add(w)) {
        basis.push_back(w);
        queue.push_back(w);
      }
    }
  }
  if (ech.size() == n) return Matrix::identity(p, n);
  return from_cols(p, n, basis);
}

ModuleRep submodule(const ModuleRep& m, const Matrix& basis) {
  ModuleRep s{m.p, basis.cols(), {}, m.group_tag};
  for (auto& g : m.generators) {
    auto x = ff::solve(basis, g * basis);
    if (!x) throw ff::FieldError("subspace is not invariant");
    s.generators.push_back(*x);
  }
  return s;
}

ModuleRep quotient(const ModuleRep& m, const Matrix& basis) {
  Matrix comp = ff::complement_basis(basis, m.dim);
  Matrix full = Matrix::hconcat(basis, comp);
  Matrix inv = ff::invert(full);
  const int k = basis.cols(), q = comp.cols();
  ModuleRep out{m.p, q, {}, m.group_tag};
  for (auto& g : m.generators) {
    Matrix coords = inv * g * comp;
    out.generators.push_back(coords.block(k, 0, q, q));
  }
  return out;
}

ModuleRep dual(const ModuleRep& m) {
  ModuleRep d{m.p, m.dim, {}, m.group_tag};
  for (auto& g : m.generators) d.generators.push_back(ff::invert(g).transpose());
  return d;
}

ModuleRep tensor(const ModuleRep& a, const ModuleRep& b) {
  if (a.generators.size() != b.generators.size()) throw ff::FieldError("generator count mismatch");
  ModuleRep t{a.p, a.dim * b.dim, {}, a.group_tag};
  for (size_t g = 0; g < a.generators.size(); ++g) {
    const Matrix &x = a.generators[g], &y = b.generators[g];
    Matrix k(a.p, t.dim, t.dim);
    for (int i = 0; i < a.dim; ++i)
      for (int j = 0; j < a.dim; ++j)
        for (int r = 0; r < b.dim; ++r)
          for (int s = 0; s < b.dim; ++s) k.set(i * b.dim + r, j * b.dim + s, x.at(i, j) * y.at(r, s));
    t.generators.push_back(k);
  }
  return t;
}

ModuleRep direct_sum(const ModuleRep& a, const ModuleRep& b) {
  ModuleRep t{a.p, a.dim + b.dim, {}, a.group_tag};
  for (size_t g = 0; g < a.generators.size(); ++g) {
    Matrix k(a.p, t.dim, t.dim);
    for (int i = 0; i < a.dim; ++i)
      for (int j = 0; j < a.dim; ++j) k.set(i, j, a.generators[g].at(i, j));
    for (int i = 0; i < b.dim; ++i)
      for (int j = 0; j < b.dim; ++j) k.set(a.dim + i, a.dim + j, b.generators[g].at(i, j));
    t.generators.push_back(k);
  }
  return t;
}

namespace {

std::vector<Matrix> transposes(const std::vector<Matrix>& gens) {
  std::vector<Matrix> t;
  for (auto& g : gens) t.push_back(g.transpose());
  return t;
}

Matrix annihilator(const Matrix& dual_basis) { return ff::kernel(dual_basis.transpose()); }

}  // namespace

Verdict is_irreducible_exhaustive(const ModuleRep& m) {
  if (m.dim > kExhaustiveCap || m.p > 3) throw ff::FieldError("exhaustive search beyond cap");
  Verdict v;
  long long total = 1;
  for (int i = 0; i < m.dim; ++i) total *= m.p;
  for (long long code = 1; code < total; ++code) {
    Matrix vec(m.p, m.dim, 1);
    long long t = code;
    for (int i = 0; i < m.dim; ++i) {
      vec.set(i, 0, t % m.p);
      t /= m.p;
    }
    Matrix s = spin(m.generators, vec);
    if (s.cols() < m.dim) {
      v.irreducible = false;
      v.subspace = s;
      return v;
    }
  }
  v.irreducible = true;
  v.certificate.exhaustive = true;
  return v;
}

Verdict is_irreducible(const ModuleRep& m, uint64_t rng_seed) {
  Verdict out;
  if (m.dim < 1) throw ff::FieldError("zero-dimensional module");
  const int p = m.p, n = m.dim;
  if (n == 1) {
    out.irreducible = true;
    out.certificate.algebra_element = Matrix::identity(p, 1);
    out.certificate.factor = {ff::reduce(-1, p), 1};
    out.certificate.kernel_vector = Matrix::identity(p, 1);
    out.certificate.dual_vector = Matrix::identity(p, 1);
    return out;
  }
  std::mt19937_64 rng(rng_seed);
  std::vector<Matrix> words = m.generators;
  if (words.empty()) {
    out.irreducible = false;
    out.subspace = Matrix::identity(p, n).column(0);
    return out;
  }
  auto gens_t = transposes(m.generators);
  for (int attempt = 0; attempt < 400; ++attempt) {
    // grow the word list with random products
    const Matrix& a1 = words[rng() % words.size()];
    const Matrix& a2 = m.generators[rng() % m.generators.size()];
    if (words.size() < 64) words.push_back(a1 * a2);
    Matrix A(p, n, n);
    for (int k = 0; k < 3; ++k) A += words[rng() % words.size()].scaled(static_cast<long long>(rng() % p));
    Poly chi = charpoly(A);
    auto factors = irreducible_factors_small(chi, p, std::min(n, 4));
    for (auto& f : factors) {
      Matrix N = eval_poly(f, A);
      Matrix ker = ff::kernel(N);
      if (ker.cols() == 0) continue;
      Matrix v = ker.column(0);
      Matrix sub = spin(m.generators, v);
      if (sub.cols() < n) {
        out.irreducible = false;
        out.subspace = sub;
        return out;
      }
      int deg = static_cast<int>(f.size()) - 1;
      if (ker.cols() != deg) continue;
      Matrix kt = ff::kernel(N.transpose());
      Matrix w = kt.column(0);
      Matrix dsub = spin(gens_t, w);
      if (dsub.cols() < n) {
        out.irreducible = false;
        out.subspace = annihilator(dsub);
        return out;
      }
      out.irreducible = true;
      out.certificate = {A, f, v, w, false};
      return out;
    }
  }
  // Fallback keeps the verdict definite for tiny modules.
  if (n <= kExhaustiveCap && p <= 3) return is_irreducible_exhaustive(m);
  throw ff::FieldError("irreducibility test did not terminate");
}

namespace {

void chop_into(const ModuleRep& m, uint64_t seed, std::vector<ModuleRep>& out) {
  Verdict v = is_irreducible(m, seed);
  if (v.irreducible) {
    out.push_back(m);
    return;
  }
  chop_into(submodule(m, v.subspace), seed * 6364136223846793005ULL + 1, out);
  chop_into(quotient(m, v.subspace), seed * 6364136223846793005ULL + 7, out);
}

}  // namespace

CompositionSeries chop(const ModuleRep& m, uint64_t rng_seed) {
  std::vector<ModuleRep> pieces;
  chop_into(m, rng_seed, pieces);
  CompositionSeries cs;
  for (auto& piece : pieces) {
    bool found = false;
    for (auto& [rep, mult] : cs.factors)
      if (is_isomorphic(rep, piece)) {
        ++mult;
        found = true;
        break;
      }
    if (!found) cs.factors.push_back({piece, 1});
  }
  std::stable_sort(cs.factors.begin(), cs.factors.end(),
                   [](const auto& a, const auto& b) { return a.first.dim < b.first.dim; });
  return cs;
}

std::optional<Matrix> is_isomorphic(const ModuleRep& a, const ModuleRep& b) {
  if (a.dim != b.dim || a.p != b.p || a.generators.size() != b.generators.size()) return std::nullopt;
  std::vector<std::pair<Matrix, Matrix>> pairs;
  for (size_t i = 0; i < a.generators.size(); ++i) pairs.push_back({a.generators[i], b.generators[i]});
  auto hom = ff::solve_sylvester_family(pairs, a.p, a.dim, b.dim);
  if (hom.empty()) return std::nullopt;
  for (auto& x : hom)
    if (ff::try_invert(x)) return x;
  std::mt19937_64 rng(hom.size() * 131 + a.dim);
  for (int t = 0; t < 200; ++t) {
    Matrix x(a.p, b.dim, a.dim);
    for (auto& h : hom) x += h.scaled(static_cast<long long>(rng() % a.p));
    if (ff::try_invert(x)) return x;
  }
  return std::nullopt;
}

int endomorphism_dimension(const ModuleRep& m) {
  std::vector<std::pair<Matrix, Matrix>> pairs;
  for (auto& g : m.generators) pairs.push_back({g, g});
  return static_cast<int>(ff::solve_sylvester_family(pairs, m.p, m.dim, m.dim).size());
}

bool is_absolutely_irreducible(const ModuleRep& m) {
  if (!is_irreducible(m, 1).irreducible) throw ff::FieldError("absolute irreducibility requires an irreducible module");
  return endomorphism_dimension(m) == 1;
}

}  // namespace modrep::meataxe
