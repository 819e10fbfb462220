// Dense exact linear algebra over prime fields F_p.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace modrep::ff {

inline constexpr int kMaxPrime = 13;

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public std::runtime_error {
 public:
  SingularMatrix() : std::runtime_error("singular matrix") {}
};

bool is_prime(int p);
void check_prime(int p);

// a^{-1} mod p for a != 0.
int inv_mod(int a, int p);
int pow_mod(long long a, long long e, int p);
inline int reduce(long long a, int p) {
  long long r = a % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

struct Scalar {
  int value = 0;
  int p = 2;
  Scalar() = default;
  Scalar(long long v, int modulus);
  bool operator==(const Scalar&) const = default;
};

class Matrix {
 public:
  Matrix() = default;
  Matrix(int p, int rows, int cols);
  static Matrix identity(int p, int n);
  static Matrix from_rows(int p, const std::vector<std::vector<long long>>& rows);
  static Matrix from_scalars(int rows, int cols, const std::vector<Scalar>& entries);
  static Matrix column_vector(int p, const std::vector<long long>& v);

  int p() const { return p_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  int at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }
  void set(int r, int c, long long v) { a_[static_cast<size_t>(r) * cols_ + c] = static_cast<uint8_t>(reduce(v, p_)); }
  void add_to(int r, int c, long long v) { set(r, c, at(r, c) + v); }
  Scalar scalar(int r, int c) const { return Scalar(at(r, c), p_); }
  const std::vector<uint8_t>& data() const { return a_; }

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator-() const;
  Matrix scaled(long long c) const;
  Matrix& operator+=(const Matrix& o);
  Matrix transpose() const;
  bool operator==(const Matrix& o) const = default;
  bool operator<(const Matrix& o) const;

  bool is_zero() const;
  bool is_identity() const;
  Matrix column(int c) const;
  Matrix row(int r) const;
  Matrix columns(const std::vector<int>& idx) const;
  Matrix rows_subset(const std::vector<int>& idx) const;
  Matrix block(int r0, int c0, int nr, int nc) const;
  static Matrix hconcat(const Matrix& a, const Matrix& b);
  static Matrix vconcat(const Matrix& a, const Matrix& b);

  std::string to_string() const;
  // Base-p integer encoding of the entries (row-major), used as a hash key.
  uint64_t encode() const;

 private:
  int p_ = 2;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<uint8_t> a_;
};

struct Rref {
  Matrix reduced;
  int rank = 0;
  std::vector<int> pivots;
};

Rref rref(const Matrix& m);
int rank(const Matrix& m);
// Columns of the result form a basis of {x : m x = 0}.
Matrix kernel(const Matrix& m);
Matrix invert(const Matrix& m);
std::optional<Matrix> try_invert(const Matrix& m);
int determinant(const Matrix& m);
// Solves a x = b (b may have several columns); nullopt if inconsistent.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);
// Independent columns spanning the column space of m.
Matrix column_space(const Matrix& m);
// Extends the independent columns of basis to a basis of F_p^n; returns only the added columns.
Matrix complement_basis(const Matrix& basis, int n);
// Basis of the intersection of the column spans of a and b.
Matrix intersect_spaces(const Matrix& a, const Matrix& b);
bool same_span(const Matrix& a, const Matrix& b);

// All X (dB x dA) with X A_i = B_i X for every pair (A_i, B_i).
std::vector<Matrix> solve_sylvester_family(const std::vector<std::pair<Matrix, Matrix>>& pairs);
std::vector<Matrix> solve_sylvester_family(const std::vector<std::pair<Matrix, Matrix>>& pairs, int p, int dA,
                                           int dB);

// Rank of a sparse column set; columns given as (row index, value) lists.
int sparse_rank(int p, const std::vector<std::vector<std::pair<int64_t, int>>>& columns);

}  // namespace modrep::ff
