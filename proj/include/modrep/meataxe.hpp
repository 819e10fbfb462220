// Module chopping and isomorphism testing for finite-group modules over F_p.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modrep/ff.hpp"

namespace modrep::meataxe {

struct ModuleRep {
  int p = 2;
  int dim = 0;
  std::vector<ff::Matrix> generators;
  std::string group_tag;
};

// Throws ff::FieldError when generators are not invertible or have mixed shapes.
void validate(const ModuleRep& m);

// Univariate polynomial over F_p, coefficients from degree 0 upwards.
using Poly = std::vector<int>;

struct Certificate {
  ff::Matrix algebra_element;  // A in the group algebra
  Poly factor;                 // irreducible factor f of the characteristic polynomial of A
  ff::Matrix kernel_vector;    // v in ker f(A) spinning to the whole module
  ff::Matrix dual_vector;      // w in ker f(A)^T spinning to the whole dual module
  bool exhaustive = false;     // every nonzero vector was spun instead
};

struct Verdict {
  bool irreducible = false;
  Certificate certificate;
  ff::Matrix subspace;  // basis (columns) of a proper invariant subspace when reducible
};

struct CompositionSeries {
  std::vector<std::pair<ModuleRep, int>> factors;
  int total_dim() const;
};

inline constexpr int kExhaustiveCap = 6;

// Smallest invariant subspace containing the given columns.
ff::Matrix spin(const std::vector<ff::Matrix>& gens, const ff::Matrix& vectors);
ModuleRep submodule(const ModuleRep& m, const ff::Matrix& basis);
ModuleRep quotient(const ModuleRep& m, const ff::Matrix& basis);
ModuleRep dual(const ModuleRep& m);
ModuleRep tensor(const ModuleRep& a, const ModuleRep& b);
ModuleRep direct_sum(const ModuleRep& a, const ModuleRep& b);

Verdict is_irreducible(const ModuleRep& m, uint64_t rng_seed);
// Oracle: spins every nonzero vector; only for dim <= kExhaustiveCap and p <= 3.
Verdict is_irreducible_exhaustive(const ModuleRep& m);
CompositionSeries chop(const ModuleRep& m, uint64_t rng_seed);
// Intertwiner X with X a_i = b_i X, or nullopt.
std::optional<ff::Matrix> is_isomorphic(const ModuleRep& a, const ModuleRep& b);
bool is_absolutely_irreducible(const ModuleRep& m);
int endomorphism_dimension(const ModuleRep& m);

// Polynomial helpers exposed for testing.
Poly charpoly(const ff::Matrix& a);
ff::Matrix eval_poly(const Poly& f, const ff::Matrix& a);
std::vector<Poly> irreducible_factors_small(const Poly& f, int p, int max_degree);

}  // namespace modrep::meataxe
