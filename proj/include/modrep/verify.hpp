// Verification suites: classification, finite-group statements, operator identities,
// localization of S', the finite comparison stages and randomized properties.
#pragma once

#include <cstdint>
#include <vector>

#include "modrep/parabolic.hpp"
#include "modrep/report.hpp"

namespace modrep::verify {

using hecke::SatakeContext;
using report::Report;

// Second choice of s: the default one raised by 1 on every block but the last.
std::vector<int> shifted_s(int n, finred::RootSet J);
bool is_trivial(const finred::IrreducibleData& d);
std::string exps_to_string(const std::vector<int>& v);

Report verify_classification(const finred::GroupPtr& g, uint64_t seed);
Report verify_finite_statements(const finred::GroupPtr& g, const std::vector<finred::IrreducibleData>& table);
Report gl2_remark_table(int p, int n_power);

Report verify_prop_xi(const SatakeContext& ctx, uint64_t seed);
Report verify_localization(const SatakeContext& ctx, int depth);
Report verify_duality(const SatakeContext& ctx, uint64_t seed);
Report verify_main_stage(const SatakeContext& ctx, int depth);

struct PropertyCounts {
  int triples = 100;
  int pairs = 50;
  int presentations = 50;
  int equivariance = 10;
};
Report verify_properties(const SatakeContext& ctx, uint64_t seed, const PropertyCounts& counts);
Report verify_canonical_invariance(int n, int p, uint64_t seed, int pairs);

}  // namespace modrep::verify
