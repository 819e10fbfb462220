#include "modrep/verify.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace modrep::verify {

using finred::RootSet;
using hecke::BasisOp;
using hecke::Coordinates;
using hecke::Echelon;
using hecke::HeckeOp;
using hecke::Induced;
using hecke::LevelPtr;
using hecke::ParabolicFunction;
using hecke::SparseVec;
using local::CosetKey;
using local::LMatrix;
using ff::Matrix;
using report::Status;

namespace {

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::string roots_label(RootSet J) { return "{" + finred::roots_to_string(J) + "}"; }

Report context_report(const SatakeContext& ctx, const std::string& suite, int depth = -1) {
  Report r;
  r.suite = suite;
  r.config = {{"group", "GL(" + std::to_string(ctx.n()) + "," + std::to_string(ctx.p()) + ")"},
              {"rep", ctx.data.label()},
              {"levi", roots_label(ctx.J)},
              {"s", exps_to_string(ctx.s)},
              {"coregular", ctx.coregular ? "yes" : "no"}};
  if (depth >= 0) r.config.emplace_back("depth", std::to_string(depth));
  return r;
}

// Runs a suite body; a diagnostic escaping it becomes a failed check.
void guarded(Report& r, const std::function<void()>& body) {
  try {
    body();
  } catch (const Contradiction& e) {
    r.assert_that("diagnostic", "no contradiction raised by the computation", false, e.what());
  } catch (const std::exception& e) {
    r.assert_that("error", "computation completes", false, e.what());
  }
}

Matrix basis_column(int p, int dim, int i) {
  Matrix w(p, dim, 1);
  w.set(i, 0, 1);
  return w;
}

std::string describe(const HeckeOp& op, size_t limit = 8) {
  std::ostringstream os;
  os << "{";
  size_t k = 0;
  for (const auto& [key, v] : op.image.terms) {
    if (k++ == limit) {
      os << " ...";
      break;
    }
    os << (k > 1 ? "; " : "") << "(" << join_ints(local::smith_invariants(key.rep)) << ")->" << v.to_string();
  }
  os << "} terms=" << op.image.terms.size();
  return os.str();
}

void add_scaled(SparseVec& acc, const SparseVec& v, int c, int p) {
  if (c == 0) return;
  for (const auto& [idx, val] : v) {
    int nv = ff::reduce(static_cast<long long>(acc[idx]) + static_cast<long long>(c) * val, p);
    if (nv) acc[idx] = nv;
    else acc.erase(idx);
  }
}

SparseVec combine(const std::vector<SparseVec>& vecs, const std::map<int, int>& coeffs, int p) {
  SparseVec acc;
  for (const auto& [i, c] : coeffs) add_scaled(acc, vecs[i], c, p);
  return acc;
}

// Kernel of i -> vecs[i] as coefficient maps over the inputs.
std::vector<std::map<int, int>> kernel_of(const std::vector<SparseVec>& vecs, int p) {
  Echelon e(p);
  std::vector<std::map<int, int>> out;
  for (size_t i = 0; i < vecs.size(); ++i) {
    std::vector<int> rel;
    if (e.insert(vecs[i], &rel)) continue;
    std::map<int, int> k{{static_cast<int>(i), 1}};
    for (size_t j = 0; j < rel.size(); ++j)
      if (rel[j]) k[static_cast<int>(j)] = ff::reduce(-static_cast<long long>(rel[j]), p);
    out.push_back(std::move(k));
  }
  return out;
}

// Coordinates of a parabolic function on a grid; entry (coordinate, grid point) -> c * G + z.
SparseVec grid_coordinates(const ParabolicFunction& F, const std::vector<LMatrix>& grid, Coordinates& coords) {
  SparseVec out;
  const int64_t G = static_cast<int64_t>(grid.size());
  for (size_t z = 0; z < grid.size(); ++z) {
    Induced v = hecke::eval(F, grid[z]);
    if (v.is_zero()) continue;
    for (const auto& [idx, val] : coords.of(v)) out[idx * G + static_cast<int64_t>(z)] = val;
  }
  return out;
}

std::string support_exps(const HeckeOp& op) {
  std::set<std::vector<int>> exps;
  for (const auto& [key, v] : op.image.terms) exps.insert(local::smith_invariants(key.rep));
  std::string out;
  for (const auto& e : exps) out += (out.empty() ? "" : " ") + exps_to_string(e);
  return out;
}

// Exponents of a diagonal key representative.
std::vector<int> diagonal_exps(const LMatrix& rep) {
  std::vector<int> mu(rep.rows());
  for (int i = 0; i < rep.rows(); ++i) mu[i] = rep.at(i, i).lo();
  return mu;
}

}  // namespace

std::string exps_to_string(const std::vector<int>& v) { return "(" + join_ints(v) + ")"; }

std::vector<int> shifted_s(int n, RootSet J) {
  std::vector<int> s = local::default_s(n, J);
  const int last = finred::block_of(J, n - 1);
  for (int i = 0; i < n; ++i)
    if (finred::block_of(J, i) != last) ++s[i];
  return s;
}

bool is_trivial(const finred::IrreducibleData& d) {
  return d.rep.dim == 1 && std::all_of(d.psi.begin(), d.psi.end(), [](int c) { return c == 0; });
}

Report verify_classification(const finred::GroupPtr& g, uint64_t seed) {
  Report r;
  r.suite = "classification";
  r.config = {{"group", "GL(" + std::to_string(g->n()) + "," + std::to_string(g->p()) + ")"},
              {"seed", std::to_string(seed)}};
  guarded(r, [&] {
    auto table = finred::classify_all(g, seed);
    const int n = g->n(), p = g->p();
    const int expected = g->p_regular_class_count();
    r.assert_that("class count", "number of irreducibles equals the number of p-regular classes",
                  static_cast<int>(table.size()) == expected,
                  "found=" + std::to_string(table.size()) + " expected=" + std::to_string(expected));

    std::set<std::pair<std::vector<int>, RootSet>> found, wanted;
    bool delta_psi_ok = true;
    std::string delta_witness;
    for (const auto& d : table) {
      found.insert({d.psi, d.delta_V});
      RootSet dpsi = 0;
      for (int i = 1; i < n; ++i)
        if (ff::reduce(d.psi[i - 1] - d.psi[i], p - 1) == 0) dpsi |= 1u << (i - 1);
      if (dpsi != d.delta_psi && delta_psi_ok) {
        delta_psi_ok = false;
        delta_witness = d.label();
      }
    }
    std::vector<int> psi(n, 0);
    std::function<void(int)> rec = [&](int i) {
      if (i == n) {
        RootSet dpsi = 0;
        for (int k = 1; k < n; ++k)
          if (psi[k - 1] == psi[k]) dpsi |= 1u << (k - 1);
        for (RootSet J : finred::all_subsets(n))
          if ((J & ~dpsi) == 0) wanted.insert({psi, J});
        return;
      }
      for (int c = 0; c < std::max(1, p - 1); ++c) {
        psi[i] = c;
        rec(i + 1);
      }
    };
    rec(0);
    r.assert_that("delta_psi", "Delta_psi = {i : c_i = c_{i+1} mod p-1}", delta_psi_ok, delta_witness);
    r.assert_that("parameters distinct", "V -> (psi_V, Delta_V) is injective", found.size() == table.size(),
                  "distinct=" + std::to_string(found.size()));
    std::string missing;
    for (const auto& w : wanted)
      if (!found.count(w)) missing += exps_to_string(w.first) + roots_label(w.second) + " ";
    r.assert_that("parameters exhaust", "V -> (psi_V, Delta_V) is onto {(psi, J inside Delta_psi)}",
                  found == wanted, missing.empty() ? "" : "missing " + missing);

    for (size_t i = 0; i < table.size(); ++i) {
      const auto& d = table[i];
      std::string regular, coregular;
      for (RootSet J : finred::all_subsets(n)) {
        if (J == finred::full_roots(n)) continue;
        if (finred::is_M_regular(d, J)) regular += roots_label(J);
        if (finred::is_M_coregular(d, J)) coregular += roots_label(J);
      }
      r.checks.push_back({"V[" + std::to_string(i) + "]", "irreducible table row", Status::Info,
                          "dim=" + std::to_string(d.rep.dim) + " psi=" + exps_to_string(d.psi) +
                              " delta_psi=" + roots_label(d.delta_psi) + " delta_V=" + roots_label(d.delta_V) +
                              " regular=" + regular + " coregular=" + coregular});
    }
  });
  return r;
}

Report verify_finite_statements(const finred::GroupPtr& g, const std::vector<finred::IrreducibleData>& table) {
  Report r;
  r.suite = "finite_statements";
  r.config = {{"group", "GL(" + std::to_string(g->n()) + "," + std::to_string(g->p()) + ")"},
              {"representations", std::to_string(table.size())}};
  const int n = g->n();
  struct Tally {
    int checked = 0;
    std::string failures;
    void add(bool ok, const std::string& where) {
      ++checked;
      if (!ok && failures.size() < 400) failures += where + " ";
    }
    std::string witness() const {
      return "checked=" + std::to_string(checked) + (failures.empty() ? "" : " failing: " + failures);
    }
  };
  Tally deck, basic, weight, weyl, weyl_cosets, rregu, overu, dual, coreg, coreg_support, duality_reg;
  guarded(r, [&] {
    for (size_t vi = 0; vi < table.size(); ++vi) {
      const auto& d = table[vi];
      const std::string v = "V[" + std::to_string(vi) + "]";
      auto dr = finred::check_duality(d);
      overu.add(dr.over_u, v);
      dual.add(dr.dual, v);
      auto dual_data = finred::parameters(finred::contragredient(d.rep));
      for (RootSet J : finred::all_subsets(n)) {
        if (J == finred::full_roots(n)) continue;
        const std::string where = v + roots_label(J);
        auto x = finred::deck_split(d, J);
        deck.add(x.first_sum_direct && x.second_sum_direct, where);
        basic.add(x.phi_ok, where);
        for (RootSet Jp : finred::all_subsets(n)) {
          const std::string w2 = where + roots_label(Jp);
          auto ws = finred::weight_support(d, J, Jp);
          weight.add(ws.matches_double_coset, w2);
          weyl.add(ws.weyl_agrees, w2);
          weyl_cosets.add(ws.weyl_union_of_cosets, w2);
          rregu.add(finred::rregu_equivalence(d, J, Jp).consistent, w2);
        }
        auto c = finred::coregularity(d, J);
        coreg.add(c.direct == c.via_images, where);
        coreg_support.add(c.support_matches, where);
        duality_reg.add(finred::is_M_regular(d, J) == finred::is_M_coregular(dual_data, J), where);
      }
    }
  });
  auto put = [&](const std::string& name, const std::string& ref, const Tally& t) {
    r.assert_that(name, ref, t.failures.empty(), t.witness());
  };
  put("deck split", "V = V^N + (1 - nbar)V and V = V^Nbar + (1 - n)V are direct sums", deck);
  put("basic isomorphism", "V^Nbar -> V_N is an isomorphism", basic);
  put("weight support", "g V^N' has nonzero image in V_Nbar iff g lies in Pbar P_V P'", weight);
  put("weight weyl scan", "the Weyl scan agrees with the exhaustive scan", weyl);
  put("weight weyl cosets", "the nonzero Weyl set is a union of (W_J, W_J') double cosets", weyl_cosets);
  put("regularity equivalence", "Pbar P_V P' = Pbar P' iff M_V lies in Pbar P'", rregu);
  put("over U", "psi_bar = w0(psi) and Pbar_V = w0 P_V w0", overu);
  put("dual", "psi_{V*} = w0(psi)^{-1} and Delta_{V*} = -w0(Delta_V)", dual);
  put("coregularity criteria", "Pbar_V inside Pbar_J iff the images of g V^Nbar in V_N vanish off P Pbar", coreg);
  put("coregularity support", "the images of g V^Nbar in V_N are supported on P Pbar_V Pbar", coreg_support);
  put("regular dual coregular", "V is M-regular iff V* is M-coregular", duality_reg);
  return r;
}

Report gl2_remark_table(int p, int n_power) {
  Report r;
  r.suite = "gl2_remark";
  r.config = {{"p", std::to_string(p)}, {"n_power", std::to_string(n_power)}};
  guarded(r, [&] {
    const std::vector<int> target{n_power, 0};
    bool other_ok = true, qr_ok = true;
    int at_s = -1;
    std::string other_witness, qr_witness, listed_witness;
    bool listed_ok = true;
    for (int a = -n_power; a <= n_power; ++a)
      for (int b = -n_power; b <= n_power; ++b) {
        LMatrix t = LMatrix::diag_power(p, {a, b});
        int count = 0, listed = 0;
        for (const LMatrix& nb : local::enum_N_principal(p, 2, 0, std::max(0, b))) {
          LMatrix x = nb * t;
          if (local::in_KsK(x, target)) ++count;
          if (x.min_valuation() >= 0 && x.det_val() == n_power) ++listed;
        }
        const bool is_s = a == n_power && b == 0;
        const bool is_sur = a >= 0 && b >= 0 && a + b == n_power;
        long long q_r = 1;
        for (int i = 0; i < b; ++i) q_r *= p;
        const std::string where = exps_to_string({a, b});
        if (is_s) at_s = count;
        else if (count % p != 0) {
          other_ok = false;
          other_witness += where + ":" + std::to_string(count) + " ";
        }
        if (is_sur && count != q_r) {
          qr_ok = false;
          qr_witness += where + ":" + std::to_string(count) + "!=" + std::to_string(q_r) + " ";
        }
        if (is_sur && listed != q_r) {
          listed_ok = false;
          listed_witness += where + ":" + std::to_string(listed) + " ";
        }
        if (count || listed || is_sur)
          r.checks.push_back({"n(t) at t=" + where, "n_s(t) = #{b in F/o : n_b t in K s K}", Status::Info,
                              "count=" + std::to_string(count) + " integral_det_count=" + std::to_string(listed) +
                                  (is_sur ? " q^r=" + std::to_string(q_r) : "")});
      }
    r.assert_that("n(s,s)", "n_s(s) = 1", at_s == 1, "count=" + std::to_string(at_s));
    r.assert_that("n(s,t) mod p", "n_s(t) = 0 mod p for t != s", other_ok, other_witness);
    r.assert_that("n(s,s_ur)", "n_s(s_{p^{u,r}}) = q^r", qr_ok, qr_witness);
    r.record("integral count", "#{b : n_b s_{p^{u,r}} integral of determinant valuation n} = q^r", listed_ok,
             listed_witness);
  });
  return r;
}

Report verify_prop_xi(const SatakeContext& ctx, uint64_t seed) {
  Report r = context_report(ctx, "prop_xi");
  guarded(r, [&] {
    const int p = ctx.p();
    HeckeOp TG = hecke::make_T_G(ctx), TP = hecke::make_T_P(ctx), TKP = hecke::make_T_KP(ctx),
            TM = hecke::make_T_M(ctx), xi = hecke::make_xi(ctx);
    std::mt19937_64 rng(seed);
    for (const auto& [name, op] : std::vector<std::pair<std::string, const HeckeOp*>>{
             {"T_G", &TG}, {"T_P", &TP}, {"T_KP", &TKP}, {"T_M", &TM}, {"xi", &xi}}) {
      std::string witness;
      bool ok = true;
      try {
        hecke::check_biequivariance(*op, rng, 50);
      } catch (const Contradiction& e) {
        ok = false;
        witness = e.what();
      }
      r.assert_that("well defined " + name, "Phi(h g h') = h Phi(g) h' on 50 sampled points", ok, witness);
    }

    HeckeOp a = hecke::compose(TKP, xi);
    r.assert_that("(a) T_G = T_KP xi", "T_G = T_{K,P} o xi", a == TG, a == TG ? "" : describe(a) + " vs " + describe(TG));

    HeckeOp b = hecke::compose(xi, TKP);
    const bool b_ok = b == TP;
    const std::string b_witness = b_ok ? "" : describe(b) + " vs " + describe(TP);
    if (ctx.coregular) r.assert_that("(b) xi T_KP = T_P", "xi o T_{K,P} = T_P when V is M-coregular", b_ok, b_witness);
    else r.record("(b) xi T_KP = T_P", "xi o T_{K,P} = T_P (V not M-coregular)", b_ok, b_witness);

    bool c_ok = true;
    std::string c_witness;
    for (int i = 0; i < ctx.P->dim(); ++i) {
      Induced v = hecke::unit_vector(ctx.P, basis_column(p, ctx.P->dim(), i));
      auto cmp = hecke::equal_parabolic(hecke::zeta(ctx, hecke::apply(TP, v)),
                                        hecke::apply_levi(TM, hecke::zeta(ctx, v)));
      if (!cmp.equal && c_ok) {
        c_ok = false;
        c_witness = "x=e" + std::to_string(i) + " " + cmp.witness;
      }
      if (c_ok) c_witness = "grid=" + std::to_string(cmp.grid) + " depth=" + std::to_string(cmp.depth);
    }
    r.assert_that("(c) zeta T_P = T_M zeta", "zeta o T_P = T_M o zeta on [1,x]_P", c_ok, c_witness);

    HeckeOp sp = hecke::satake_prime(TG, ctx.M);
    const bool d_ok = sp == TM;
    const std::string d_witness = d_ok ? "" : "S'(T_G)=" + describe(sp);
    const bool gl2_trivial = ctx.n() == 2 && is_trivial(ctx.data);
    if (ctx.coregular) r.assert_that("(d) S'(T_G) = T_M", "S'(T_G) = T_M when V is M-coregular", d_ok, d_witness);
    else if (gl2_trivial) r.assert_that("(d) S'(T_G) = T_M", "S'(T_G) = T_M for trivial V of GL(2)", d_ok, d_witness);
    else r.record("(d) S'(T_G) = T_M", "S'(T_G) = T_M (V not M-coregular)", d_ok, d_witness);

    bool i0_ok = true;
    std::string i0_witness;
    const LMatrix one = LMatrix::identity(p, ctx.n());
    for (int i = 0; i < ctx.K->dim(); ++i) {
      Matrix w = basis_column(p, ctx.K->dim(), i);
      Induced val = hecke::eval(hecke::zeta(ctx, hecke::apply(xi, hecke::unit_vector(ctx.K, w))), one);
      if (!(val == hecke::unit_vector(ctx.M, ctx.M->projection() * w)) && i0_ok) {
        i0_ok = false;
        i0_witness = "v=e" + std::to_string(i) + " value=" + val.to_string();
      }
    }
    r.assert_that("I0 at 1", "(I0 [1,v]_K)(1) = [1, v mod N]_M0", i0_ok, i0_witness);
  });
  return r;
}

Report verify_localization(const SatakeContext& ctx, int depth) {
  Report r = context_report(ctx, "localization", depth);
  guarded(r, [&] {
    const int p = ctx.p(), n = ctx.n();
    int D = depth;
    for (int e : ctx.s) D = std::max(D, std::abs(e));
    r.config.emplace_back("operator_range", "[" + std::to_string(-D) + "," + std::to_string(D) + "]");
    HeckeOp TG = hecke::make_T_G(ctx), TM = hecke::make_T_M(ctx), TZ = hecke::make_T_Z(ctx);

    std::map<std::vector<int>, std::vector<std::pair<HeckeOp, HeckeOp>>> cache;
    auto images_at = [&](const std::vector<int>& lambda) -> const std::vector<std::pair<HeckeOp, HeckeOp>>& {
      auto it = cache.find(lambda);
      if (it != cache.end()) return it->second;
      std::vector<std::pair<HeckeOp, HeckeOp>> out;
      for (HeckeOp& op : hecke::double_coset_basis(ctx.K, ctx.K, LMatrix::diag_power(p, lambda))) {
        HeckeOp img = hecke::satake_prime(op, ctx.M);
        out.emplace_back(std::move(op), std::move(img));
      }
      return cache.emplace(lambda, std::move(out)).first->second;
    };

    std::vector<HeckeOp> basis, images;
    for (const auto& lambda : hecke::dominant_exponents(n, finred::full_roots(n), -D, D))
      for (const auto& [op, img] : images_at(lambda)) {
        basis.push_back(op);
        images.push_back(img);
      }
    Coordinates coords;
    Echelon ech(p);
    for (const HeckeOp& img : images) ech.insert(coords.of(img.image));
    r.assert_that("(a) S' injective", "S' is injective on operators of the given depth",
                  ech.rank() == static_cast<int>(basis.size()),
                  "rank=" + std::to_string(ech.rank()) + " basis=" + std::to_string(basis.size()));

    auto pre = ech.express(coords.of(TM.image));
    r.assert_that("(b) T_M in image", "T_M lies in the image of S'", pre.has_value());
    if (pre) {
      HeckeOp phi = hecke::zero_operator(ctx.K, ctx.K);
      for (size_t i = 0; i < pre->size(); ++i)
        if ((*pre)[i]) phi = phi + basis[i].scaled((*pre)[i]);
      const std::string w = "preimage supports " + support_exps(phi);
      if (ctx.coregular) r.assert_that("(b) preimage is T_G", "S'(T_G) = T_M when V is M-coregular", phi == TG, w);
      else r.record("(b) preimage is T_G", "S'(T_G) = T_M (V not M-coregular)", phi == TG, w);
    }

    auto level_m = hecke::operator_basis(ctx.M, -depth, depth);
    bool central = true;
    std::string central_witness;
    for (const auto& b : level_m) {
      if (!(hecke::compose(TM, b.op) == hecke::compose(b.op, TM)) && central) {
        central = false;
        central_witness = "mu=" + exps_to_string(b.mu);
      }
    }
    r.assert_that("(c) T_M central", "T_M commutes with every basis operator of the Levi level", central,
                  "checked=" + std::to_string(level_m.size()) + " " + central_witness);

    const int kmax = 2 * D + 2;
    int worst_k = 0;
    bool all_found = true;
    std::string missing;
    const int s_sum = [&] {
      int t = 0;
      for (int e : ctx.s) t += e;
      return t;
    }();
    for (const auto& b : level_m) {
      HeckeOp target = b.op;
      bool found = false;
      int mu_sum = 0;
      for (int e : b.mu) mu_sum += e;
      for (int k = 0; k <= kmax && !found; ++k) {
        if (k > 0) target = hecke::compose(target, TM);
        auto [lo, hi] = hecke::support_range(target);
        const int total = mu_sum + k * s_sum;
        Coordinates c2;
        Echelon e2(p);
        for (const auto& lambda : hecke::dominant_exponents(n, finred::full_roots(n), lo, hi)) {
          int sum = 0;
          for (int x : lambda) sum += x;
          if (sum != total) continue;
          for (const auto& [op, img] : images_at(lambda)) e2.insert(c2.of(img.image));
        }
        if (e2.rank() > 0 && e2.express(c2.of(target.image))) {
          found = true;
          worst_k = std::max(worst_k, k);
        }
      }
      if (!found) {
        all_found = false;
        missing += exps_to_string(b.mu) + " ";
      }
    }
    r.assert_that("(d) localization", "every basis operator of the Levi level is S'(Phi) T_M^{-k}", all_found,
                  "checked=" + std::to_string(level_m.size()) + " max_k=" + std::to_string(worst_k) +
                      (missing.empty() ? "" : " missing mu " + missing));

    if (n == 2 && ctx.J == 0) {
      bool positive = true;
      std::string bad;
      for (const HeckeOp& img : images)
        for (const auto& [key, v] : img.image.terms) {
          auto mu = diagonal_exps(key.rep);
          if (local::positivity(mu, 0).kind == local::Positivity::Neither) {
            positive = false;
            bad = exps_to_string(mu);
          }
        }
      r.assert_that("(e) image support positive", "the image of S'_G is supported on Z(F)^+", positive, bad);
      int positive_ops = 0;
      bool spans = true;
      for (const auto& b : hecke::operator_basis(ctx.Z, -D, D)) {
        if (local::positivity(b.mu, 0).kind == local::Positivity::Neither) continue;
        ++positive_ops;
        if (!ech.express(coords.of(b.op.image))) spans = false;
      }
      r.assert_that("(e) image spans positive part", "the image of S'_G contains H(Z(F)^+ , Z_0, V_U) at this depth",
                    spans && ech.rank() == positive_ops,
                    "rank=" + std::to_string(ech.rank()) + " positive=" + std::to_string(positive_ops));
    }

    bool trans = true;
    std::string trans_witness;
    for (size_t i = 0; i < basis.size(); ++i) {
      HeckeOp direct = hecke::satake_prime(basis[i], ctx.Z);
      HeckeOp staged = hecke::satake_prime(images[i], ctx.Z);
      if (!(direct == staged) && trans) {
        trans = false;
        trans_witness = "basis support " + support_exps(basis[i]);
      }
    }
    r.assert_that("transitivity", "S'_G = S'_M o S'", trans,
                  "checked=" + std::to_string(basis.size()) + " " + trans_witness);
    HeckeOp tz = hecke::satake_prime(TM, ctx.Z);
    r.assert_that("S'_M(T_M) = T_Z", "S'_M(T_M) = T_Z", tz == TZ, tz == TZ ? "" : describe(tz));
  });
  return r;
}

Report verify_duality(const SatakeContext& ctx, uint64_t seed) {
  Report r = context_report(ctx, "duality");
  guarded(r, [&] {
    const int p = ctx.p(), n = ctx.n();
    LevelPtr Kd = hecke::make_level(hecke::LevelKind::Levi, finred::full_roots(n), finred::contragredient(ctx.data.rep));
    std::vector<std::pair<std::string, HeckeOp>> ops;
    ops.emplace_back("unit", hecke::unit_operator(Kd));
    int k = 0;
    for (HeckeOp& op : hecke::double_coset_basis(Kd, Kd, ctx.s_matrix()))
      ops.emplace_back("basis at s #" + std::to_string(k++), std::move(op));
    auto pool = hecke::operator_basis(Kd, -1, 1);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> coeff(1, p - 1);
    for (int i = 0; i < 3; ++i) {
      HeckeOp op = pool[pick(rng)].op.scaled(coeff(rng)) + pool[pick(rng)].op.scaled(coeff(rng));
      ops.emplace_back("random #" + std::to_string(i), std::move(op));
    }
    for (const auto& [name, phi] : ops) {
      HeckeOp lhs = hecke::iota_of_classical(phi, ctx.M);
      HeckeOp rhs = hecke::satake_prime(hecke::iota(phi, ctx.K), ctx.M);
      r.assert_that("iota_M S = S' iota: " + name, "iota_M(S(Phi)) = S'(iota(Phi))", lhs == rhs,
                    lhs == rhs ? "support " + support_exps(lhs) : describe(lhs) + " vs " + describe(rhs));
    }
  });
  return r;
}

Report verify_main_stage(const SatakeContext& ctx, int depth) {
  Report r = context_report(ctx, "main_stage", depth);
  guarded(r, [&] {
    const int p = ctx.p(), n = ctx.n();
    const int dK = ctx.K->dim(), dP = ctx.P->dim();
    HeckeOp xi = hecke::make_xi(ctx), TP = hecke::make_T_P(ctx), TKP = hecke::make_T_KP(ctx);

    // K-cosets K t^lambda k with lambda dominant, last entry 0 and first entry at most depth.
    std::vector<CosetKey> k_keys;
    for (const auto& lambda : hecke::dominant_exponents(n, finred::full_roots(n), 0, depth)) {
      if (lambda.back() != 0) continue;
      const auto& dc = hecke::expand_double_coset(ctx.K, ctx.K, LMatrix::diag_power(p, lambda));
      k_keys.insert(k_keys.end(), dc.keys.begin(), dc.keys.end());
    }
    auto k_vector = [&](const CosetKey& key, int j) {
      Induced f = hecke::zero_vector(ctx.K);
      f.add(key, basis_column(p, dK, j));
      return f;
    };
    {
      Coordinates coords;
      Echelon ech(p);
      for (const CosetKey& key : k_keys)
        for (int j = 0; j < dK; ++j) ech.insert(coords.of(hecke::apply(xi, k_vector(key, j))));
      const int total = static_cast<int>(k_keys.size()) * dK;
      r.assert_that("(a) xi injective", "xi is injective", ech.rank() == total,
                    "rank=" + std::to_string(ech.rank()) + " vectors=" + std::to_string(total));
    }

    bool missing_some = false, b_ok = true;
    std::string bc_witness;
    for (int x = 0; x < dP; ++x) {
      Induced unit = hecke::unit_vector(ctx.P, basis_column(p, dP, x));
      Induced target = hecke::apply(TP, unit);
      std::set<CosetKey> touching;
      for (const auto& [c, w] : target.terms) touching.insert(local::canonical_coset(c.rep).key);
      Coordinates coords;
      Echelon ech(p);
      for (const CosetKey& key : touching)
        for (int j = 0; j < dK; ++j) ech.insert(coords.of(hecke::apply(xi, k_vector(key, j))));
      const bool solvable = ech.express(coords.of(target)).has_value();
      if (!solvable) missing_some = true;
      if (ctx.coregular) {
        const bool explicit_ok = hecke::apply(xi, hecke::apply(TKP, unit)) == target;
        if (!(solvable && explicit_ok) && b_ok) {
          b_ok = false;
          bc_witness = "x=e" + std::to_string(x) + " solvable=" + std::to_string(solvable) +
                       " explicit=" + std::to_string(explicit_ok);
        }
      } else if (!solvable && bc_witness.empty()) {
        bc_witness = "x=e" + std::to_string(x) + " K-cosets=" + std::to_string(touching.size());
      }
    }
    if (ctx.coregular)
      r.assert_that("(b) T_P in image of xi", "T_P[1,x]_P = xi(T_{K,P}[1,x]_P) when V is M-coregular", b_ok,
                    b_ok ? "preimage T_KP[1,x]_P for all x" : bc_witness);
    else
      r.assert_that("(c) T_P outside image of xi", "some T_P[1,x]_P has no xi-preimage when V is not M-coregular",
                    missing_some, bc_witness);

    // Parahoric-level vectors inside the K-cosets above.
    std::set<CosetKey> p_key_set;
    const auto cosets = local::parahoric_cosets(ctx.K->group(), ctx.J);
    for (const CosetKey& key : k_keys)
      for (const LMatrix& rt : cosets) p_key_set.insert(ctx.P->reduce(rt * key.rep).key);
    std::vector<Induced> xs;
    for (const CosetKey& key : p_key_set)
      for (int i = 0; i < dP; ++i) {
        Induced f = hecke::zero_vector(ctx.P);
        f.add(key, basis_column(p, dP, i));
        xs.push_back(std::move(f));
      }
    std::vector<ParabolicFunction> zs;
    int zdepth = 1;
    for (const Induced& f : xs) {
      zs.push_back(hecke::zeta(ctx, f));
      zdepth = std::max(zdepth, zs.back().depth());
    }
    auto grid = local::pzero_grid(ctx.K->group(), ctx.J, zdepth);
    Coordinates mcoords;
    std::vector<SparseVec> zvec;
    for (const auto& F : zs) zvec.push_back(grid_coordinates(F, grid, mcoords));
    auto ker_zeta = kernel_of(zvec, p);

    Coordinates pcoords;
    std::vector<std::vector<SparseVec>> powers(4);  // powers[k][i] = coordinates of T_P^k x_i
    for (const Induced& f : xs) {
      Induced cur = f;
      for (int k = 1; k <= 3; ++k) {
        cur = hecke::apply(TP, cur);
        powers[k].push_back(pcoords.of(cur));
      }
    }
    int needed = 0;
    bool torsion = true;
    for (const auto& v : ker_zeta) {
      int k = 1;
      while (k <= 3 && !combine(powers[k], v, p).empty()) ++k;
      if (k > 3) torsion = false;
      else needed = std::max(needed, k);
    }
    auto ker_t3 = kernel_of(powers[3], p);
    bool killed = true;
    for (const auto& v : ker_t3)
      if (!combine(zvec, v, p).empty()) killed = false;
    const std::string dims = "vectors=" + std::to_string(xs.size()) + " dim ker zeta=" + std::to_string(ker_zeta.size()) +
                             " dim ker T_P^3=" + std::to_string(ker_t3.size()) + " n=" + std::to_string(needed) +
                             " grid=" + std::to_string(grid.size());
    r.assert_that("(d) ker zeta is T_P-torsion", "ker zeta lies in ker T_P^n with n <= 3", torsion, dims);
    r.assert_that("(d) T_P-torsion in ker zeta", "ker T_P^3 lies in ker zeta", killed, dims);

    // Vectors supported in P z K with z M-dominant and positive.
    std::set<CosetKey> y_keys;
    for (const auto& mu : hecke::dominant_exponents(n, ctx.J, 0, depth)) {
      if (mu.back() != 0 || local::positivity(mu, ctx.J).kind == local::Positivity::Neither) continue;
      const auto& dc = hecke::expand_double_coset(ctx.K, ctx.P, LMatrix::diag_power(p, mu));
      y_keys.insert(dc.keys.begin(), dc.keys.end());
    }
    std::vector<ParabolicFunction> ys;
    int ydepth = 1;
    for (const CosetKey& key : y_keys)
      for (int i = 0; i < dP; ++i) {
        Induced f = hecke::zero_vector(ctx.P);
        f.add(key, basis_column(p, dP, i));
        ys.push_back(hecke::zeta(ctx, f));
        ydepth = std::max(ydepth, ys.back().depth());
      }
    auto ygrid = local::pzero_grid(ctx.K->group(), ctx.J, ydepth);
    Coordinates ycoords;
    Echelon yech(p);
    for (const auto& F : ys) yech.insert(grid_coordinates(F, ygrid, ycoords));
    r.assert_that("(e) zeta injective on P Z+ K", "zeta is injective on vectors supported in P Z(F)^{+M} K",
                  yech.rank() == static_cast<int>(ys.size()),
                  "rank=" + std::to_string(yech.rank()) + " vectors=" + std::to_string(ys.size()));
  });
  return r;
}

Report verify_properties(const SatakeContext& ctx, uint64_t seed, const PropertyCounts& counts) {
  Report r = context_report(ctx, "properties");
  r.config.emplace_back("seed", std::to_string(seed));
  guarded(r, [&] {
    const int p = ctx.p(), n = ctx.n();
    std::mt19937_64 rng(seed);
    auto pool = hecke::operator_basis(ctx.K, 0, 1);
    std::vector<HeckeOp> pool_images;
    for (const auto& b : pool) pool_images.push_back(hecke::satake_prime(b.op, ctx.M));
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> coeff(1, p - 1);
    // Random combination with its S' image (S' is linear).
    auto random_op = [&]() {
      HeckeOp op = hecke::zero_operator(ctx.K, ctx.K), img = hecke::zero_operator(ctx.M, ctx.M);
      const int terms = 1 + static_cast<int>(rng() % 2);
      for (int t = 0; t < terms; ++t) {
        size_t i = pick(rng);
        int c = coeff(rng);
        op = op + pool[i].op.scaled(c);
        img = img + pool_images[i].scaled(c);
      }
      return std::make_pair(op, img);
    };

    HeckeOp unit = hecke::unit_operator(ctx.K);
    bool assoc = true, unital = true;
    std::string assoc_witness;
    for (int i = 0; i < counts.triples; ++i) {
      auto A = random_op().first, B = random_op().first, C = random_op().first;
      if (!(hecke::compose(hecke::compose(A, B), C) == hecke::compose(A, hecke::compose(B, C))) && assoc) {
        assoc = false;
        assoc_witness = "triple " + std::to_string(i) + ": " + describe(A, 3) + " " + describe(B, 3) + " " + describe(C, 3);
      }
      if (!(hecke::compose(unit, A) == A && hecke::compose(A, unit) == A)) unital = false;
    }
    r.assert_that("associativity", "(A*B)*C = A*(B*C)", assoc, "triples=" + std::to_string(counts.triples) + " " + assoc_witness);
    r.assert_that("unit", "1*A = A = A*1", unital, "triples=" + std::to_string(counts.triples));

    bool mult = true;
    std::string mult_witness;
    for (int i = 0; i < counts.pairs; ++i) {
      auto [A, SA] = random_op();
      auto [B, SB] = random_op();
      HeckeOp lhs = hecke::satake_prime(hecke::compose(A, B), ctx.M);
      if (!(lhs == hecke::compose(SA, SB)) && mult) {
        mult = false;
        mult_witness = "pair " + std::to_string(i) + ": " + describe(A, 3) + " " + describe(B, 3);
      }
    }
    r.assert_that("S' multiplicative", "S'(A*B) = S'(A)*S'(B)", mult, "pairs=" + std::to_string(counts.pairs) + " " + mult_witness);

    HeckeOp xi = hecke::make_xi(ctx), TP = hecke::make_T_P(ctx), TM = hecke::make_T_M(ctx);
    std::vector<CosetKey> k_keys, p_keys;
    for (const auto& lambda : hecke::dominant_exponents(n, finred::full_roots(n), 0, 1)) {
      const auto& dk = hecke::expand_double_coset(ctx.K, ctx.K, LMatrix::diag_power(p, lambda));
      k_keys.insert(k_keys.end(), dk.keys.begin(), dk.keys.end());
      const auto& dp = hecke::expand_double_coset(ctx.K, ctx.P, LMatrix::diag_power(p, lambda));
      p_keys.insert(p_keys.end(), dp.keys.begin(), dp.keys.end());
    }
    auto random_column = [&](int dim) {
      Matrix w(p, dim, 1);
      do {
        for (int i = 0; i < dim; ++i) w.set(i, 0, static_cast<long long>(rng() % p));
      } while (w.is_zero());
      return w;
    };
    auto random_vector = [&](const LevelPtr& level, const std::vector<CosetKey>& keys) {
      Induced f = hecke::zero_vector(level);
      while (f.is_zero()) {
        const int terms = 1 + static_cast<int>(rng() % 3);
        for (int t = 0; t < terms; ++t) f.add(keys[rng() % keys.size()], random_column(level->dim()));
      }
      return f;
    };

    bool equivariant = true;
    std::string eq_witness;
    for (int i = 0; i < counts.equivariance; ++i) {
      auto [phi, sphi] = random_op();
      Induced f = random_vector(ctx.K, k_keys);
      auto cmp = hecke::equal_parabolic(hecke::zeta(ctx, hecke::apply(xi, hecke::apply(phi, f))),
                                        hecke::apply_levi(sphi, hecke::zeta(ctx, hecke::apply(xi, f))));
      if (!cmp.equal && equivariant) {
        equivariant = false;
        eq_witness = "sample " + std::to_string(i) + " " + cmp.witness;
      }
    }
    r.assert_that("I0 equivariance", "I0(Phi f) = S'(Phi) I0(f)", equivariant,
                  "samples=" + std::to_string(counts.equivariance) + " " + eq_witness);

    bool separates = true, identifies = true;
    std::string sep_witness, id_witness;
    const auto& grp = ctx.K->group();
    for (int i = 0; i < counts.presentations; ++i) {
      ParabolicFunction F = hecke::zeta(ctx, random_vector(ctx.P, p_keys));
      std::vector<int> mu(n);
      for (int& e : mu) e = static_cast<int>(rng() % 3) - 1;
      LMatrix g = LMatrix::lift(grp.element(static_cast<int>(rng() % grp.order()))) * LMatrix::diag_power(p, mu);
      ParabolicFunction other =
          F + hecke::translate(g, hecke::basic_function(hecke::unit_vector(ctx.M, random_column(ctx.M->dim()))));
      auto cmp = hecke::equal_parabolic(F, other);
      if (cmp.equal && separates) {
        separates = false;
        sep_witness = "sample " + std::to_string(i) + " g=" + g.to_string();
      }
      Induced y = random_vector(ctx.P, p_keys);
      ParabolicFunction same = F + hecke::zeta(ctx, hecke::apply(TP, y)) - hecke::apply_levi(TM, hecke::zeta(ctx, y));
      auto cmp2 = hecke::equal_parabolic(F, same);
      if (!cmp2.equal && identifies) {
        identifies = false;
        id_witness = "sample " + std::to_string(i) + " " + cmp2.witness;
      }
    }
    r.assert_that("grid separates", "F != F + g f_y is detected on the certified grid", separates,
                  "samples=" + std::to_string(counts.presentations) + " " + sep_witness);
    r.assert_that("grid identifies", "F = F + zeta(T_P y) - T_M zeta(y) is recognized", identifies,
                  "samples=" + std::to_string(counts.presentations) + " " + id_witness);
  });
  return r;
}

Report verify_canonical_invariance(int n, int p, uint64_t seed, int pairs) {
  Report r;
  r.suite = "canonical_invariance";
  r.config = {{"group", "GL(" + std::to_string(n) + "," + std::to_string(p) + ")"},
              {"seed", std::to_string(seed)},
              {"pairs", std::to_string(pairs)}};
  guarded(r, [&] {
    auto g = finred::build_gl(n, p);
    auto trivial = finred::extend(g, finred::det_module(*g, 0));
    LevelPtr K = hecke::make_level(hecke::LevelKind::Levi, finred::full_roots(n), trivial);
    LevelPtr I = hecke::make_level(hecke::LevelKind::Parahoric, 0, trivial);
    auto unipotents = local::enum_N_principal(p, n, 0, 2);
    std::mt19937_64 rng(seed);
    bool key_ok = true, residue_ok = true, iwahori_ok = true;
    std::string witness;
    for (int i = 0; i < pairs; ++i) {
      std::vector<int> mu(n);
      for (int& e : mu) e = static_cast<int>(rng() % 5) - 2;
      LMatrix x = LMatrix::lift(g->element(static_cast<int>(rng() % g->order()))) * LMatrix::diag_power(p, mu) *
                  unipotents[rng() % unipotents.size()] * LMatrix::lift(g->element(static_cast<int>(rng() % g->order())));
      LMatrix k = K->random_element(rng, 3).first;
      auto c1 = local::canonical_coset(x), c2 = local::canonical_coset(k * x);
      if (!(c1.key == c2.key) && key_ok) {
        key_ok = false;
        witness = "x=" + x.to_string() + " k=" + k.to_string();
      }
      LMatrix h = local::with_precision_retry([&] { return c1.key.rep * x.inverse(); });
      if (!(local::in_K(h) && local::reduce_mod_t(h) == c1.k_mod_t)) residue_ok = false;
      LMatrix b = I->random_element(rng, 3).first;
      if (!(I->reduce(b * x).key == I->reduce(x).key)) iwahori_ok = false;
    }
    r.assert_that("K-coset key invariant", "canonical(k g) = canonical(g) for k in K", key_ok, witness);
    r.assert_that("K-coset residue", "key = k g with k in K and k mod t recorded", residue_ok);
    r.assert_that("Iwahori key invariant", "the Iwahori coset key is invariant under left multiplication", iwahori_ok);
  });
  return r;
}

}  // namespace modrep::verify
