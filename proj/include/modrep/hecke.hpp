// The operators T_G, T_P, T_{K,P}, T_M, T_Z and xi for a standard parabolic P = MN and a
// strictly positive central s, and the Satake maps between Levi levels.
#pragma once

#include <map>
#include <vector>

#include "modrep/level.hpp"

namespace modrep::hecke {

struct SatakeContext {
  finred::IrreducibleData data;
  RootSet J = 0;
  std::vector<int> s;
  LevelPtr K, P, M, Z;  // GL(n, o), parahoric, M_0, torus T(o)
  finred::DeckSplit split;
  bool coregular = false;

  LMatrix s_matrix() const { return LMatrix::diag_power(data.rep.p(), s); }
  int n() const { return data.rep.group->n(); }
  int p() const { return data.rep.p(); }
  std::string label() const;
};

// Throws std::invalid_argument unless s is strictly positive and central in M.
SatakeContext make_context(const finred::IrreducibleData& data, RootSet J, std::vector<int> s);

HeckeOp make_T_G(const SatakeContext& ctx);
HeckeOp make_T_P(const SatakeContext& ctx);
HeckeOp make_T_KP(const SatakeContext& ctx);
HeckeOp make_T_M(const SatakeContext& ctx);
HeckeOp make_T_Z(const SatakeContext& ctx);
// xi as the operator from K to the parahoric level with support K and value the projection.
HeckeOp make_xi(const SatakeContext& ctx);

// Exponent vectors nonincreasing inside each block of J with entries in [lo, hi].
std::vector<std::vector<int>> dominant_exponents(int n, RootSet J, int lo, int hi);
// Basis of the operators of a Levi level supported on double cosets t^mu with entries of mu
// in [-depth, depth], with the exponent vector of each.
struct BasisOp {
  std::vector<int> mu;
  HeckeOp op;
};
std::vector<BasisOp> operator_basis(const LevelPtr& level, int depth);
std::vector<BasisOp> operator_basis(const LevelPtr& level, int lo, int hi);

// S' from a Levi level (J1) to a smaller Levi level (J2 inside J1) of the same representation:
// S'(Phi)(m) w = sum over n in (N_0 \ N) of the image of Phi(n m) w, N = N_{J2} inside M_{J1}.
HeckeOp satake_prime(const HeckeOp& phi, const LevelPtr& target);

// Classical S(Phi)(m) = sum over n in N/N_0 of Phi(m n) for Phi at level K of the contragredient,
// as a matrix on (V*)^{N(k)} in the basis given by the transposed projection of `levi`.
Matrix satake_classical_at(const HeckeOp& phi_dual, const Level& levi, const LMatrix& m);
// Values of S(Phi) at the dominant exponents of its support.
std::map<std::vector<int>, Matrix> satake_classical(const HeckeOp& phi_dual, const Level& levi);
// iota(Phi)(g) = Phi(g^{-1})^t, as an operator at level `K` of the original representation.
HeckeOp iota(const HeckeOp& phi_dual, const LevelPtr& K);
// iota_M(S(Phi)) at level `levi` of the original representation.
HeckeOp iota_of_classical(const HeckeOp& phi_dual, const LevelPtr& levi);

// Exponent range [min, max] of the Cartan invariants over the support of an operator.
std::pair<int, int> support_range(const HeckeOp& op);

}  // namespace modrep::hecke
