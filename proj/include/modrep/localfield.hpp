// Matrices over F_p((t)): normal forms for cosets of K = GL(n, F_p[[t]]), Cartan and
// Iwasawa decompositions, membership tests and finite coset enumerations.
#pragma once

#include <string>
#include <vector>

#include "modrep/ff.hpp"
#include "modrep/finred.hpp"
#include "modrep/laurent.hpp"

namespace modrep::local {

using finred::RootSet;

class LMatrix {
 public:
  LMatrix() = default;
  LMatrix(int p, int rows, int cols);
  static LMatrix identity(int p, int n);
  // diag(t^{e_1}, ..., t^{e_n})
  static LMatrix diag_power(int p, const std::vector<int>& exps);
  static LMatrix lift(const ff::Matrix& m);
  // Rows of coefficient lists; entry {c_0, c_1, ...} at lowest exponent lo.
  static LMatrix from_polys(int p, int lo, const std::vector<std::vector<std::vector<int>>>& rows);

  int p() const { return p_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const Laurent& at(int r, int c) const { return e_[static_cast<size_t>(r) * cols_ + c]; }
  Laurent& at(int r, int c) { return e_[static_cast<size_t>(r) * cols_ + c]; }
  void set(int r, int c, const Laurent& x) { at(r, c) = x; }

  LMatrix operator*(const LMatrix& o) const;
  LMatrix operator+(const LMatrix& o) const;
  LMatrix operator-(const LMatrix& o) const;
  bool operator==(const LMatrix& o) const;
  LMatrix transpose() const;

  bool exact() const;
  bool is_identity() const;
  // Least valuation of an entry (kExact for the zero matrix).
  int min_valuation() const;
  Laurent det() const;
  int det_val() const;
  // Exact when the determinant is a monomial; otherwise to the current precision budget.
  LMatrix inverse() const;

  std::string to_string() const;
  void encode(std::string& out) const;

 private:
  int p_ = 2, rows_ = 0, cols_ = 0;
  std::vector<Laurent> e_;
};

// Hermite representative of the right coset K g.
struct CosetKey {
  LMatrix rep;
  std::string code;
  bool operator==(const CosetKey& o) const { return code == o.code; }
  bool operator<(const CosetKey& o) const { return code < o.code; }
};
struct CosetKeyHash {
  size_t operator()(const CosetKey& k) const { return std::hash<std::string>{}(k.code); }
};
CosetKey make_key(const LMatrix& rep);

// key.rep = k g for some k in K, with k mod t recorded.
struct Canonical {
  CosetKey key;
  ff::Matrix k_mod_t;
};
Canonical canonical_coset(const LMatrix& g);
Canonical canonical_coset_once(const LMatrix& g);  // single attempt at the current budget

std::vector<int> smith_invariants(const LMatrix& g);

// g = n m k with n in N_J(F), m in M_J(F), k in K.
struct Iwasawa {
  LMatrix n, m, k;
};
Iwasawa iwasawa(const LMatrix& g, RootSet J);

ff::Matrix reduce_mod_t(const LMatrix& k);

int block_count(int n, RootSet J);
// Exponents of the block-scalar element t^{scale * (blocks after block(i))}.
std::vector<int> default_s(int n, RootSet J, int scale = 1);

bool in_K(const LMatrix& g);
bool in_K_plus(const LMatrix& g);
bool in_parahoric(const LMatrix& g, RootSet J);
bool in_parabolic(const LMatrix& g, RootSet J);
bool in_levi(const LMatrix& g, RootSet J);
bool in_KsK(const LMatrix& g, const std::vector<int>& s);
bool in_PsP(const LMatrix& g, const std::vector<int>& s, RootSet J);
bool in_KsP(const LMatrix& g, const std::vector<int>& s, RootSet J);
bool in_M0s(const LMatrix& g, const std::vector<int>& s, RootSet J);

enum class Positivity { Strict, Positive, Neither };
struct PositivityReport {
  Positivity kind = Positivity::Neither;
  bool central = false;
};
PositivityReport positivity(const LMatrix& z, RootSet J);
PositivityReport positivity(const std::vector<int>& exps, RootSet J);
// Throws std::invalid_argument unless s is strictly positive and central in M.
void require_strict(const std::vector<int>& s, RootSet J);

// (s^{-1} Nbar_sub s) \ Nbar_group with sub, group among Nbar_0 and Nbar_{0+}.
enum class NbarQuotient { SubPlusInPlus, SubZeroInPlus, SubZeroInZero, SubPlusInZero };
std::vector<LMatrix> enum_quotient(int p, NbarQuotient kind, const std::vector<int>& s, RootSet J);
long long quotient_index(int p, NbarQuotient kind, const std::vector<int>& s, RootSet J);
// N_0 \ N(F): unipotent matrices whose N entries are principal parts of order <= depth.
// With an ambient root set, only positions inside its Levi blocks are used.
std::vector<LMatrix> enum_N_principal(int p, int n, RootSet J, int depth, RootSet ambient);
std::vector<LMatrix> enum_N_principal(int p, int n, RootSet J, int depth);
// As above with order <= depth[r][c] at position (r, c).
std::vector<LMatrix> enum_N_principal(int p, int n, RootSet J, const std::vector<std::vector<int>>& depth,
                                      RootSet ambient);
// max(0, -minval(g)) + max(0, -minval(g^{-1})): g K_{m} g^{-1} lies in K_{m - depth}.
int conjugation_depth(const LMatrix& g);
// Lifts of representatives of P_J(k) \ G(k), one per right coset.
std::vector<LMatrix> parahoric_cosets(const finred::FiniteGL& g, RootSet J);
// Representatives nbar * r of P_0 \ K modulo the congruence subgroup of level d.
std::vector<LMatrix> pzero_grid(const finred::FiniteGL& g, RootSet J, int d);

}  // namespace modrep::local
