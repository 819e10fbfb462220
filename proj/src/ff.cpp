#include "modrep/ff.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace modrep::ff {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

void check_prime(int p) {
  if (!is_prime(p) || p > kMaxPrime) throw FieldError("modulus must be a prime <= 13, got " + std::to_string(p));
}

int pow_mod(long long a, long long e, int p) {
  long long r = 1 % p, b = reduce(a, p);
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<int>(r);
}

int inv_mod(int a, int p) {
  a = reduce(a, p);
  if (a == 0) throw FieldError("inverse of zero");
  return pow_mod(a, p - 2, p);
}

Scalar::Scalar(long long v, int modulus) : value(reduce(v, modulus)), p(modulus) {}

Matrix::Matrix(int p, int rows, int cols)
    : p_(p), rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0) {}

Matrix Matrix::identity(int p, int n) {
  Matrix m(p, n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

Matrix Matrix::from_rows(int p, const std::vector<std::vector<long long>>& rows) {
  int r = static_cast<int>(rows.size());
  int c = r ? static_cast<int>(rows[0].size()) : 0;
  Matrix m(p, r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c) throw FieldError("ragged rows");
    for (int j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

Matrix Matrix::from_scalars(int rows, int cols, const std::vector<Scalar>& entries) {
  if (static_cast<int>(entries.size()) != rows * cols) throw FieldError("entry count mismatch");
  int p = entries.empty() ? 2 : entries[0].p;
  Matrix m(p, rows, cols);
  for (int i = 0; i < rows * cols; ++i) {
    if (entries[i].p != p) throw FieldError("mixed moduli");
    m.a_[i] = static_cast<uint8_t>(entries[i].value);
  }
  return m;
}

Matrix Matrix::column_vector(int p, const std::vector<long long>& v) {
  Matrix m(p, static_cast<int>(v.size()), 1);
  for (size_t i = 0; i < v.size(); ++i) m.set(static_cast<int>(i), 0, v[i]);
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_ || p_ != o.p_) throw FieldError("shape mismatch in product");
  Matrix r(p_, rows_, o.cols_);
  std::vector<int> acc(o.cols_);
  for (int i = 0; i < rows_; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (int k = 0; k < cols_; ++k) {
      int a = at(i, k);
      if (!a) continue;
      const uint8_t* orow = &o.a_[static_cast<size_t>(k) * o.cols_];
      for (int j = 0; j < o.cols_; ++j) acc[j] += a * orow[j];
    }
    for (int j = 0; j < o.cols_; ++j) r.a_[static_cast<size_t>(i) * o.cols_ + j] = static_cast<uint8_t>(acc[j] % p_);
  }
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  Matrix r = *this;
  r += o;
  return r;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_ || p_ != o.p_) throw FieldError("shape mismatch in sum");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] = static_cast<uint8_t>((a_[i] + o.a_[i]) % p_);
  return *this;
}

Matrix Matrix::operator-(const Matrix& o) const { return *this + (-o); }

Matrix Matrix::operator-() const {
  Matrix r = *this;
  for (auto& x : r.a_) x = static_cast<uint8_t>((p_ - x) % p_);
  return r;
}

Matrix Matrix::scaled(long long c) const {
  Matrix r = *this;
  int cc = reduce(c, p_);
  for (auto& x : r.a_) x = static_cast<uint8_t>(x * cc % p_);
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(p_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.a_[static_cast<size_t>(j) * rows_ + i] = at(i, j);
  return r;
}

bool Matrix::operator<(const Matrix& o) const {
  if (rows_ != o.rows_) return rows_ < o.rows_;
  if (cols_ != o.cols_) return cols_ < o.cols_;
  return a_ < o.a_;
}

bool Matrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](uint8_t x) { return x == 0; });
}

bool Matrix::is_identity() const {
  if (!square()) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if (at(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

Matrix Matrix::column(int c) const { return block(0, c, rows_, 1); }
Matrix Matrix::row(int r) const { return block(r, 0, 1, cols_); }

Matrix Matrix::columns(const std::vector<int>& idx) const {
  Matrix r(p_, rows_, static_cast<int>(idx.size()));
  for (int i = 0; i < rows_; ++i)
    for (size_t j = 0; j < idx.size(); ++j) r.set(i, static_cast<int>(j), at(i, idx[j]));
  return r;
}

Matrix Matrix::rows_subset(const std::vector<int>& idx) const {
  Matrix r(p_, static_cast<int>(idx.size()), cols_);
  for (size_t i = 0; i < idx.size(); ++i)
    for (int j = 0; j < cols_; ++j) r.set(static_cast<int>(i), j, at(idx[i], j));
  return r;
}

Matrix Matrix::block(int r0, int c0, int nr, int nc) const {
  Matrix r(p_, nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) r.set(i, j, at(r0 + i, c0 + j));
  return r;
}

Matrix Matrix::hconcat(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_) throw FieldError("hconcat row mismatch");
  Matrix r(a.p_, a.rows_, a.cols_ + b.cols_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < a.cols_; ++j) r.set(i, j, a.at(i, j));
    for (int j = 0; j < b.cols_; ++j) r.set(i, a.cols_ + j, b.at(i, j));
  }
  return r;
}

Matrix Matrix::vconcat(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.cols_) throw FieldError("vconcat column mismatch");
  Matrix r(a.p_, a.rows_ + b.rows_, a.cols_);
  for (int j = 0; j < a.cols_; ++j) {
    for (int i = 0; i < a.rows_; ++i) r.set(i, j, a.at(i, j));
    for (int i = 0; i < b.rows_; ++i) r.set(a.rows_ + i, j, b.at(i, j));
  }
  return r;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (int j = 0; j < cols_; ++j) os << (j ? "," : "") << at(i, j);
    os << "]";
  }
  os << "]";
  return os.str();
}

uint64_t Matrix::encode() const {
  uint64_t code = 0;
  for (auto x : a_) code = code * static_cast<uint64_t>(p_) + x;
  return code;
}

Rref rref(const Matrix& m) {
  Rref out;
  out.reduced = m;
  Matrix& a = out.reduced;
  const int p = m.p(), R = m.rows(), C = m.cols();
  int row = 0;
  for (int col = 0; col < C && row < R; ++col) {
    int piv = -1;
    for (int i = row; i < R; ++i)
      if (a.at(i, col)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != row)
      for (int j = 0; j < C; ++j) {
        int t = a.at(row, j);
        a.set(row, j, a.at(piv, j));
        a.set(piv, j, t);
      }
    int iv = inv_mod(a.at(row, col), p);
    for (int j = col; j < C; ++j) a.set(row, j, a.at(row, j) * iv);
    for (int i = 0; i < R; ++i) {
      if (i == row) continue;
      int f = a.at(i, col);
      if (!f) continue;
      for (int j = col; j < C; ++j) a.set(i, j, a.at(i, j) - f * a.at(row, j));
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.rank = row;
  return out;
}

int rank(const Matrix& m) { return rref(m).rank; }

Matrix kernel(const Matrix& m) {
  Rref r = rref(m);
  const int C = m.cols();
  std::vector<bool> is_piv(C, false);
  for (int c : r.pivots) is_piv[c] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < C; ++c)
    if (!is_piv[c]) free_cols.push_back(c);
  Matrix basis(m.p(), C, static_cast<int>(free_cols.size()));
  for (size_t k = 0; k < free_cols.size(); ++k) {
    int f = free_cols[k];
    basis.set(f, static_cast<int>(k), 1);
    for (int i = 0; i < r.rank; ++i) basis.set(r.pivots[i], static_cast<int>(k), -r.reduced.at(i, f));
  }
  return basis;
}

std::optional<Matrix> try_invert(const Matrix& m) {
  if (!m.square()) throw FieldError("invert of non-square matrix");
  const int n = m.rows();
  Rref r = rref(Matrix::hconcat(m, Matrix::identity(m.p(), n)));
  if (r.rank < n || r.pivots[n - 1] != n - 1) return std::nullopt;
  return r.reduced.block(0, n, n, n);
}

Matrix invert(const Matrix& m) {
  auto r = try_invert(m);
  if (!r) throw SingularMatrix();
  return *r;
}

int determinant(const Matrix& m) {
  if (!m.square()) throw FieldError("determinant of non-square matrix");
  Matrix a = m;
  const int n = m.rows(), p = m.p();
  long long det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i)
      if (a.at(i, c)) {
        piv = i;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      for (int j = 0; j < n; ++j) {
        int t = a.at(c, j);
        a.set(c, j, a.at(piv, j));
        a.set(piv, j, t);
      }
      det = -det;
    }
    det = reduce(det * a.at(c, c), p);
    int iv = inv_mod(a.at(c, c), p);
    for (int i = c + 1; i < n; ++i) {
      int f = a.at(i, c) * iv % p;
      if (!f) continue;
      for (int j = c; j < n; ++j) a.set(i, j, a.at(i, j) - f * a.at(c, j));
    }
  }
  return reduce(det, p);
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw FieldError("solve shape mismatch");
  const int n = a.cols(), k = b.cols();
  Rref r = rref(Matrix::hconcat(a, b));
  for (int c : r.pivots)
    if (c >= n) return std::nullopt;
  Matrix x(a.p(), n, k);
  for (int i = 0; i < r.rank; ++i)
    for (int j = 0; j < k; ++j) x.set(r.pivots[i], j, r.reduced.at(i, n + j));
  return x;
}

Matrix column_space(const Matrix& m) {
  Rref r = rref(m);
  return m.columns(r.pivots);
}

Matrix complement_basis(const Matrix& basis, int n) {
  const int p = basis.p();
  Matrix big = Matrix::hconcat(basis.cols() ? basis : Matrix(p, n, 0), Matrix::identity(p, n));
  Rref r = rref(big);
  std::vector<int> added;
  for (int c : r.pivots)
    if (c >= basis.cols()) added.push_back(c);
  return big.columns(added);
}

Matrix intersect_spaces(const Matrix& a, const Matrix& b) {
  // x in span(a) and span(b): solve a u = b w
  Matrix ab = Matrix::hconcat(a, -b);
  Matrix ker = kernel(ab);
  Matrix u = ker.block(0, 0, a.cols(), ker.cols());
  return column_space(a * u);
}

bool same_span(const Matrix& a, const Matrix& b) {
  int ra = rank(a), rb = rank(b);
  if (ra != rb) return false;
  if (a.cols() == 0 || b.cols() == 0) return ra == 0 && rb == 0;
  return rank(Matrix::hconcat(a, b)) == ra;
}

std::vector<Matrix> solve_sylvester_family(const std::vector<std::pair<Matrix, Matrix>>& pairs) {
  if (pairs.empty()) throw FieldError("empty family: dimensions unknown");
  return solve_sylvester_family(pairs, pairs[0].first.p(), pairs[0].first.rows(), pairs[0].second.rows());
}

std::vector<Matrix> solve_sylvester_family(const std::vector<std::pair<Matrix, Matrix>>& pairs, int p, int dA,
                                           int dB) {
  // Unknown X (dB x dA) flattened row-major: index r*dA + c.
  const int nvar = dA * dB;
  std::vector<Matrix> blocks;
  for (const auto& [A, B] : pairs) {
    if (A.rows() != dA || A.cols() != dA || B.rows() != dB || B.cols() != dB)
      throw FieldError("sylvester family shape mismatch");
    // (X A - B X)_{r,c} = sum_k X_{r,k} A_{k,c} - sum_k B_{r,k} X_{k,c}
    Matrix blk(p, nvar, nvar);
    for (int r = 0; r < dB; ++r)
      for (int c = 0; c < dA; ++c) {
        int row = r * dA + c;
        for (int k = 0; k < dA; ++k) blk.add_to(row, r * dA + k, A.at(k, c));
        for (int k = 0; k < dB; ++k) blk.add_to(row, k * dA + c, -B.at(r, k));
      }
    blocks.push_back(column_space(blk.transpose()).transpose());
  }
  Matrix all(p, 0, nvar);
  for (auto& b : blocks) {
    all = Matrix::vconcat(all, b);
    all = column_space(all.transpose()).transpose();
  }
  Matrix ker = kernel(all);
  std::vector<Matrix> out;
  for (int k = 0; k < ker.cols(); ++k) {
    Matrix x(p, dB, dA);
    for (int r = 0; r < dB; ++r)
      for (int c = 0; c < dA; ++c) x.set(r, c, ker.at(r * dA + c, k));
    out.push_back(x);
  }
  return out;
}

int sparse_rank(int p, const std::vector<std::vector<std::pair<int64_t, int>>>& columns) {
  // Connected components of the column/row incidence graph; rank is additive over them.
  const int n = static_cast<int>(columns.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<int64_t, int> owner;
  for (int c = 0; c < n; ++c)
    for (auto& [r, v] : columns[c]) {
      if (reduce(v, p) == 0) continue;
      auto it = owner.find(r);
      if (it == owner.end())
        owner[r] = c;
      else
        parent[find(c)] = find(it->second);
    }
  std::map<int, std::vector<int>> comps;
  for (int c = 0; c < n; ++c) comps[find(c)].push_back(c);
  int total = 0;
  for (auto& [root, cols] : comps) {
    std::map<int64_t, int> rows;
    for (int c : cols)
      for (auto& [r, v] : columns[c])
        if (reduce(v, p)) rows.emplace(r, 0);
    int idx = 0;
    for (auto& [r, i] : rows) i = idx++;
    Matrix m(p, idx, static_cast<int>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j)
      for (auto& [r, v] : columns[cols[j]])
        if (reduce(v, p)) m.add_to(rows[r], static_cast<int>(j), v);
    total += rank(m);
  }
  return total;
}

}  // namespace modrep::ff
