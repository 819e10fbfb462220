// Functions in Ind_P^G(c-Ind_{M_0}^M V_N) presented as finite sums of translates g f_y, where
// f_y has support P(F) Nbar_{0+} and f_y(p nbar) = m_p y.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modrep/hecke.hpp"

namespace modrep::hecke {

struct ParabolicFunction {
  LevelPtr levi;  // M_0 level carrying the payloads
  std::vector<std::pair<LMatrix, Induced>> terms;

  ParabolicFunction operator+(const ParabolicFunction& o) const;
  ParabolicFunction operator-(const ParabolicFunction& o) const;
  ParabolicFunction scaled(long long c) const;
  // Level d of a congruence subgroup under which every summand is right invariant.
  int depth() const;
};

ParabolicFunction zero_function(const LevelPtr& levi);
// f_y.
ParabolicFunction basic_function(const Induced& y);
// g F.
ParabolicFunction translate(const LMatrix& g, const ParabolicFunction& F);
// zeta on a parahoric-level vector.
ParabolicFunction zeta(const SatakeContext& ctx, const Induced& f);
// Pointwise action of an operator of the Levi level.
ParabolicFunction apply_levi(const HeckeOp& op, const ParabolicFunction& F);

// Levi component of x when x lies in P(F) Nbar_{0+}.
std::optional<LMatrix> levi_component(const LMatrix& x, RootSet J);
Induced eval(const ParabolicFunction& F, const LMatrix& z);

struct ParabolicComparison {
  bool equal = true;
  int depth = 0;
  size_t grid = 0;
  std::string witness;  // first grid point where the functions differ
};
// Compares on P_0 \ K modulo the congruence subgroup of the common depth.
ParabolicComparison equal_parabolic(const ParabolicFunction& a, const ParabolicFunction& b);

}  // namespace modrep::hecke
