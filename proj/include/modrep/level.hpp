// Compact open subgroups with finite-quotient coefficient spaces, compactly induced
// vectors and Hecke operators between them.
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "modrep/finred.hpp"
#include "modrep/localfield.hpp"

namespace modrep::hecke {

using ff::Matrix;
using finred::RootSet;
using local::CosetKey;
using local::LMatrix;

// Levi: M_J(o) inside M_J(F) (J = all roots gives K, J empty the torus).
// Parahoric: the inverse image of P_J(k) in K.
// Both act on V_{N_J(k)} through their reduction mod t.
enum class LevelKind { Levi, Parahoric };

class Level {
 public:
  Level(LevelKind kind, RootSet J, const finred::GroupRep& rep);

  LevelKind kind() const { return kind_; }
  RootSet J() const { return J_; }
  int n() const { return group_->n(); }
  int p() const { return group_->p(); }
  int dim() const { return dim_; }
  const finred::FiniteGL& group() const { return *group_; }
  const finred::GroupRep& rep() const { return rep_; }
  bool is_max() const { return kind_ == LevelKind::Levi && J_ == finred::full_roots(n()); }
  std::string name() const;
  uint64_t uid() const { return uid_; }

  // V -> W and a section W -> V.
  const Matrix& projection() const { return projection_; }
  const Matrix& section() const { return section_; }
  // Action of a finite group element of the reduction on W.
  const Matrix& action(int elem) const;

  struct Reduced {
    CosetKey key;
    int elem = 0;  // key.rep = h x with h in the compact group, elem = h mod t
  };
  Reduced reduce(const LMatrix& x) const;

  // Generators of the compact group modulo the congruence subgroup of level m, with residues.
  std::vector<std::pair<LMatrix, int>> generators(int m) const;
  std::pair<LMatrix, int> random_element(std::mt19937_64& rng, int m) const;

 private:
  Reduced reduce_uncached(const LMatrix& x) const;

  LevelKind kind_;
  RootSet J_;
  uint64_t uid_;
  finred::GroupPtr group_;
  finred::GroupRep rep_;
  int dim_ = 0;
  Matrix projection_, section_;
  std::vector<Matrix> action_;
  std::vector<int> coset_min_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, Reduced> cache_;
};

using LevelPtr = std::shared_ptr<const Level>;
LevelPtr make_level(LevelKind kind, RootSet J, const finred::GroupRep& rep);

// Finite sum of x^{-1}[1, w]: the key x carries the value w (dim x cols) at x.
struct Induced {
  LevelPtr level;
  int cols = 1;
  std::map<CosetKey, Matrix> terms;

  void add(const CosetKey& key, const Matrix& value);
  bool is_zero() const { return terms.empty(); }
  Induced operator+(const Induced& o) const;
  Induced operator-(const Induced& o) const;
  Induced scaled(long long c) const;
  bool operator==(const Induced& o) const;
  // Value at an arbitrary point of the group.
  Matrix value_at(const LMatrix& g) const;
  std::string to_string() const;
};

Induced zero_vector(const LevelPtr& level, int cols = 1);
// [1, w]: support the compact group, value w at 1.
Induced unit_vector(const LevelPtr& level, const Matrix& w);
// x^{-1} f.
Induced translate_inv(const LMatrix& x, const Induced& f);
// g f.
Induced translate(const LMatrix& g, const Induced& f);

// Hecke operator from src to image.level, given by the image of [1, -]; the value of the
// kernel function at a coset representative g is image.terms[g].
struct HeckeOp {
  LevelPtr src;
  Induced image;
  const LevelPtr& tgt() const { return image.level; }
  bool operator==(const HeckeOp& o) const { return image == o.image; }
  HeckeOp operator+(const HeckeOp& o) const;
  HeckeOp operator-(const HeckeOp& o) const;
  HeckeOp scaled(long long c) const;
  Matrix value_at(const LMatrix& g) const { return image.value_at(g); }
  bool is_zero() const { return image.is_zero(); }
};

HeckeOp zero_operator(const LevelPtr& src, const LevelPtr& tgt);
HeckeOp unit_operator(const LevelPtr& level);
Induced apply(const HeckeOp& op, const Induced& f);
// outer o inner (convolution).
HeckeOp compose(const HeckeOp& outer, const HeckeOp& inner);

// Right cosets H_tgt x in H_tgt d H_src with kernel values L a R in terms of a = value at d.
struct DoubleCoset {
  LMatrix rep;
  std::vector<CosetKey> keys;
  std::vector<int> left, right;                  // elements acting on tgt and src spaces
  std::vector<std::pair<int, int>> relations;    // (src elem, tgt elem): a src(e) = tgt(f) a
};
const DoubleCoset& expand_double_coset(const LevelPtr& src, const LevelPtr& tgt, const LMatrix& d);
// Basis of the admissible values at d.
std::vector<Matrix> admissible_values(const LevelPtr& src, const LevelPtr& tgt, const LMatrix& d);
// Operator supported on H_tgt d H_src with the given value at d; throws Contradiction when
// the value violates bi-equivariance.
HeckeOp make_operator(const LevelPtr& src, const LevelPtr& tgt, const LMatrix& d, const Matrix& value);
std::vector<HeckeOp> double_coset_basis(const LevelPtr& src, const LevelPtr& tgt, const LMatrix& d);

// Samples Phi(h g h') = h Phi(g) h' at random points; throws Contradiction on failure.
void check_biequivariance(const HeckeOp& op, std::mt19937_64& rng, int samples);

using SparseVec = std::map<int64_t, int>;

// Coordinates of induced vectors over a shared index of coset keys.
class Coordinates {
 public:
  SparseVec of(const Induced& f);
  // Inverse of of() for vectors of the given level and width.
  Induced vector(const SparseVec& v, const LevelPtr& level, int cols) const;

 private:
  std::unordered_map<std::string, int64_t> index_;
  std::vector<CosetKey> keys_;
  int64_t block_ = -1;
  int cols_ = 1;
};

// Incremental row echelon form of sparse vectors over F_p, tracking how each stored vector
// is combined from the inserted ones.
class Echelon {
 public:
  explicit Echelon(int p) : p_(p) {}
  // Inserts v as input number size_inserted(); returns false when v is dependent, and then
  // stores in *relation the coefficients c with v = sum c_i (input i).
  bool insert(const SparseVec& v, std::vector<int>* relation = nullptr);
  // Coefficients over the inputs expressing v, or nullopt when v is outside the span.
  std::optional<std::vector<int>> express(const SparseVec& v) const;
  int rank() const { return static_cast<int>(rows_.size()); }
  int inserted() const { return inserted_; }

 private:
  struct Row {
    SparseVec vec;                  // leading entry 1
    std::map<int, int> combo;       // in terms of inputs
  };
  // Reduces v in place; returns the accumulated combination (negated contributions).
  std::map<int, int> reduce(SparseVec& v) const;
  int p_;
  int inserted_ = 0;
  std::map<int64_t, Row> rows_;  // keyed by pivot
};

}  // namespace modrep::hecke
