// The finite group GL(n, F_p), its standard parabolics, and the invariants of its
// irreducible representations in natural characteristic.
#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "modrep/diagnostic.hpp"
#include "modrep/ff.hpp"
#include "modrep/meataxe.hpp"

namespace modrep::finred {

using ff::Matrix;

// Subset of simple roots {alpha_1, ..., alpha_{n-1}}; bit i-1 encodes alpha_i.
using RootSet = uint32_t;

inline constexpr long long kMaxGroupOrder = 10000;

RootSet full_roots(int n);
bool contains(RootSet set, int i);
std::string roots_to_string(RootSet set);
// i -> n - i on simple-root indices.
RootSet opposite_roots(RootSet set, int n);
std::vector<RootSet> all_subsets(int n);
// Levi block of row i (blocks are maximal runs joined by roots in J).
int block_of(RootSet J, int i);

enum class Sub { P, Pbar, M, N, Nbar };

class FiniteGL {
 public:
  FiniteGL(int n, int p);

  int n() const { return n_; }
  int p() const { return p_; }
  int order() const { return static_cast<int>(elements_.size()); }
  int primitive_root() const { return zeta_; }

  const Matrix& element(int i) const { return elements_[i]; }
  int index_of(const Matrix& m) const;
  int identity() const { return identity_; }
  int mul(int a, int b) const { return table_[static_cast<size_t>(a) * elements_.size() + b]; }
  int inv(int a) const { return inverse_[a]; }
  int element_order(int a) const;

  // Standard generators: 1 + E_ij (i != j) and diag(zeta, 1, ..., 1) when p > 2.
  const std::vector<int>& generators() const { return generators_; }
  std::vector<Matrix> generator_matrices() const;

  // Block of row i for the Levi of J (blocks are maximal runs joined by roots in J).
  int block_of(RootSet J, int i) const;
  int block_count(RootSet J) const;
  bool member(Sub kind, RootSet J, int idx) const;
  bool member(Sub kind, RootSet J, const Matrix& m) const;
  // All elements of the subgroup, sorted by index.
  const std::vector<int>& subgroup(Sub kind, RootSet J) const;
  // A generating set of the subgroup.
  std::vector<int> subgroup_generators(Sub kind, RootSet J) const;
  // Torus element diag(1, ..., x, x^{-1}, ..., 1) at positions (i-1, i), 1-based root index i.
  int root_torus_element(int i, int x) const;
  // Permutation matrices; perm[i] = image of e_i.
  int weyl_element(const std::vector<int>& perm) const;
  std::vector<std::vector<int>> weyl_group() const;
  int longest_element() const;

  std::vector<std::vector<int>> conjugacy_classes() const;
  int p_regular_class_count() const;

  // Closure of the marked set under left multiplication by left_gens and right by right_gens.
  std::vector<char> double_coset_closure(const std::vector<int>& left_gens, const std::vector<char>& middle,
                                         const std::vector<int>& right_gens) const;

 private:
  int n_, p_, zeta_ = 1, identity_ = 0;
  std::vector<Matrix> elements_;
  std::unordered_map<uint64_t, int> index_;
  std::vector<int> table_;
  std::vector<int> inverse_;
  std::vector<int> generators_;
  mutable std::mutex cache_mu_;
  mutable std::unordered_map<uint64_t, std::vector<int>> subgroup_cache_;
};

using GroupPtr = std::shared_ptr<const FiniteGL>;
GroupPtr build_gl(int n, int p);

// Representation with an image for every group element.
struct GroupRep {
  GroupPtr group;
  int dim = 0;
  std::vector<Matrix> images;
  const Matrix& operator()(int idx) const { return images[idx]; }
  meataxe::ModuleRep module() const;
  int p() const { return group->p(); }
};

// Extends generator images to the whole group; throws Contradiction when not a homomorphism.
GroupRep extend(GroupPtr g, const meataxe::ModuleRep& m);

meataxe::ModuleRep natural_module(const FiniteGL& g);
meataxe::ModuleRep det_module(const FiniteGL& g, int power);
meataxe::ModuleRep sym_power(const FiniteGL& g, int degree);
meataxe::ModuleRep permutation_module(const FiniteGL& g, RootSet J);

Matrix fixed_space(const GroupRep& rep, const std::vector<int>& elems);

struct Coinvariants {
  int dim = 0;
  Matrix projection;  // dim x rep.dim, surjective
  Matrix section;     // rep.dim x dim with projection * section = identity
};
Coinvariants coinvariants(const GroupRep& rep, const std::vector<int>& elems);

// Elements g with rep(g) v in the line spanned by v.
std::vector<int> line_stabilizer(const GroupRep& rep, const Matrix& v);

struct IrreducibleData {
  GroupRep rep;
  std::vector<int> psi;  // exponents c_i mod p-1 with psi(diag(a)) = prod a_i^{c_i}
  RootSet delta_psi = 0;
  RootSet delta_V = 0;
  Matrix u_fixed_line;
  Matrix ubar_fixed_line;
  std::vector<int> psi_bar;  // character of T on the Ubar-fixed line
  RootSet delta_V_bar = 0;   // Pbar_V = Pbar_{delta_V_bar}
  std::string label() const;
};

IrreducibleData parameters(const GroupRep& rep);
std::vector<IrreducibleData> classify_all(GroupPtr g, uint64_t seed);
const IrreducibleData& special_rep(const std::vector<IrreducibleData>& table, RootSet J);
// Index of the classified representation with these parameters.
int find_by_parameters(const std::vector<IrreducibleData>& table, const std::vector<int>& psi, RootSet delta_V);

GroupRep contragredient(const GroupRep& rep);

struct DualityReport {
  bool over_u = false;  // psi_bar = w0(psi), Pbar_V = w0 P_V w0
  bool dual = false;    // psi_{V*} = w0(psi)^{-1}, Delta_{V*} = -w0(Delta_V)
  std::string witness;
};
DualityReport check_duality(const IrreducibleData& data);

struct CoregularityReport {
  bool direct = false;      // Pbar_V inside Pbar_J
  bool via_images = false;  // support of images of g V^{Nbar} in V_N equals P Pbar
  bool support_matches = false;  // that support equals P Pbar_V Pbar
  int support_size = 0;
};
CoregularityReport coregularity(const IrreducibleData& data, RootSet J);
// Throws Contradiction when the two computations disagree.
bool is_M_coregular(const IrreducibleData& data, RootSet J);
bool is_M_regular(const IrreducibleData& data, RootSet J);

struct DeckSplit {
  Matrix invariants;      // V^{N}
  Matrix complement;      // span (1 - nbar) v
  Coinvariants quotient;  // V -> V_N
  Matrix nbar_invariants; // V^{Nbar}
  Matrix phi;             // V_N -> V^{Nbar}, inverse of the restricted projection
  bool first_sum_direct = false;
  bool second_sum_direct = false;
  bool phi_ok = false;
};
DeckSplit deck_split(const IrreducibleData& data, RootSet J);

struct WeightSupport {
  std::vector<char> nonzero;             // per element: image of g V^{N'} in V_{Nbar} nonzero
  std::vector<std::vector<int>> weyl_nonzero;  // permutations with nonzero image
  bool matches_double_coset = false;     // nonzero set equals Pbar P_V P'
  bool weyl_agrees = false;              // Weyl scan agrees with the full scan
  bool weyl_union_of_cosets = false;     // nonzero Weyl set is a union of (W_J, W_J') cosets
  int count = 0;
};
WeightSupport weight_support(const IrreducibleData& data, RootSet J, RootSet J_prime);

struct RreguReport {
  bool cosets_equal = false;   // Pbar P_V P' = Pbar P'
  bool levi_inside = false;    // M_V inside Pbar P'
  bool weyl_inside = false;    // W_V inside W_J W_J'
  bool roots_condition = false;
  bool consistent = false;     // the last three agree and imply the first
  std::string witness;
};
RreguReport rregu_equivalence(const IrreducibleData& data, RootSet J, RootSet J_prime);

// Action of P_J(k) on V_{N_J(k)}, indexed by group element (empty for elements outside P_J).
std::vector<Matrix> coinvariant_action(const GroupRep& rep, const Coinvariants& q, RootSet J);

}  // namespace modrep::finred
